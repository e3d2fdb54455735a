"""fxtsmc: fixed-time integral sliding-mode control with GP drift learning."""

__version__ = "1.0.0"
__author__ = "Commander"
