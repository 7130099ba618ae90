from typing import Any

class VertexError(Exception):
    """Base class for all custom exceptions in the toolkit."""
    def __init__(self, message: str, exit_code: int = 2, **kwargs: Any):
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code
        self.kwargs = kwargs

class WindowError(VertexError):
    """Raised when a p-window is empty, too small, or cannot be reached."""
    def __init__(self, message: str, exit_code: int = 2, **kwargs: Any):
        super().__init__(message, exit_code, **kwargs)

class NonInvertibleError(VertexError):
    """Raised when a series without a nonzero leading coefficient is inverted."""
    def __init__(self, message: str = "non-invertible", exit_code: int = 2, **kwargs: Any):
        super().__init__(message, exit_code, **kwargs)

class NonUnitFactorError(VertexError):
    """Raised when an Euler product factor has no ascending inverse."""
    def __init__(self, message: str = "non-unit factor", exit_code: int = 2, **kwargs: Any):
        super().__init__(message, exit_code, **kwargs)

class OrderMismatchError(VertexError):
    """Raised when two q-series of different orders are combined."""
    def __init__(self, message: str, exit_code: int = 2, **kwargs: Any):
        super().__init__(message, exit_code, **kwargs)

class ChargeError(VertexError):
    """Raised when a charge-zero state is required but not given."""
    def __init__(self, message: str, exit_code: int = 2, **kwargs: Any):
        super().__init__(message, exit_code, **kwargs)

class CutoffError(VertexError):
    """Raised when an energy cutoff is unset or too small."""
    def __init__(self, message: str, exit_code: int = 2, **kwargs: Any):
        super().__init__(message, exit_code, **kwargs)

class AWindowError(VertexError):
    """Raised when a coefficient leaves the [-R, R] window of the parameter a."""
    def __init__(self, message: str, exit_code: int = 2, **kwargs: Any):
        super().__init__(message, exit_code, **kwargs)

class PartitionFormatError(VertexError):
    """Raised when a partition or leg-triple string is malformed."""
    def __init__(self, message: str, exit_code: int = 2, **kwargs: Any):
        super().__init__(message, exit_code, **kwargs)

class StabilityError(VertexError):
    """Raised when a truncation parameter turns out to change a windowed result."""
    def __init__(self, message: str, exit_code: int = 1, **kwargs: Any):
        super().__init__(message, exit_code, **kwargs)

class CaseError(VertexError):
    """Raised when a DT case and its genus argument do not fit together."""
    def __init__(self, message: str, exit_code: int = 2, **kwargs: Any):
        super().__init__(message, exit_code, **kwargs)
