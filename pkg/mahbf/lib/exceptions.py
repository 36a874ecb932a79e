class WorkbenchException(Exception):
    pass


class ConfigError(WorkbenchException):
    pass


class ContractViolation(WorkbenchException, ValueError):
    """Raised when an operation is called with incompatible shapes or arguments."""


class SingularSystemError(WorkbenchException):
    """Ill-conditioned or non-finite linear system."""


class RankDeficiencyError(WorkbenchException):
    pass


class DegenerateGeometryError(WorkbenchException):
    """The effective channel is (numerically) rank deficient."""


class DivergenceError(WorkbenchException):
    """Non-finite loss, gradient or parameter encountered during training."""


class OutputError(WorkbenchException):
    """The output directory cannot be created or written."""
