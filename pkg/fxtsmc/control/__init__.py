"""Control module: integral sliding variable, control laws, settling-time bounds."""
