"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Inconsistent or invalid user configuration (params, ports, grids)."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or produced unusable output."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class UnstableSystemError(NumericalError):
    """Raised when an operation requires a stable system and got an unstable one."""

    def __init__(self, message, report=None):
        super().__init__(message, {"report": report})
        self.report = report
