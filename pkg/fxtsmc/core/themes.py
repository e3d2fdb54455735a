"""Console colour palettes for tables and panels."""

from __future__ import annotations

from typing import Dict

# Each theme: primary, accent, success, warning, error, muted
_BUILTIN_THEMES: Dict[str, Dict[str, str]] = {
    "lab": {
        "name":    "Lab",
        "primary": "#5FAFD7",
        "accent":  "#D7AF5F",
        "success": "#5FD787",
        "warning": "#FFD75F",
        "error":   "#FF5F5F",
        "muted":   "#808080",
    },
    "nord": {
        "name":    "Nord",
        "primary": "#88C0D0",
        "accent":  "#B48EAD",
        "success": "#A3BE8C",
        "warning": "#EBCB8B",
        "error":   "#BF616A",
        "muted":   "#4C566A",
    },
    "mono": {
        "name":    "Monochrome",
        "primary": "white",
        "accent":  "bright_white",
        "success": "white",
        "warning": "bright_white",
        "error":   "bright_white",
        "muted":   "grey50",
    },
}


def get_theme_data(theme_name: str) -> Dict[str, str]:
    """Return the colour dict for `theme_name`, falling back to 'lab'."""
    return _BUILTIN_THEMES.get(theme_name, _BUILTIN_THEMES["lab"])


def theme_names() -> list[str]:
    return list(_BUILTIN_THEMES.keys())
