"""Shared layers: settings, scenario files, numerics, errors, logging."""
