"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent user input (graphs, labels, configuration)."""


class NumericalError(RuntimeError):
    """Numerical failure during propagation or weight learning."""
