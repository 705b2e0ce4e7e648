from functools import wraps

from pydantic import ValidationError

from app.helper.base_response import response_error
from app.helper.logger import json_logger

# CLI exit codes
EXIT_OK = 0
EXIT_GATE_FAILURE = 1
EXIT_USAGE = 2


class LabError(Exception):
    """Base laboratory error with HTTP status code and CLI exit code."""

    def __init__(
        self,
        error: str,
        message: str = "Laboratory error",
        status_code: int = 500,
        exit_code: int = EXIT_GATE_FAILURE,
    ):
        self.error = error
        self.message = message
        self.status_code = status_code
        self.exit_code = exit_code
        super().__init__(self.error)


class UsageError(LabError):
    """Caller supplied something the laboratory cannot interpret (400, exit 2)."""

    def __init__(self, error: str, message: str = "Bad request"):
        super().__init__(error=error, message=message, status_code=400, exit_code=EXIT_USAGE)


class NumericalError(LabError):
    """A mathematical precondition or postcondition failed (422, exit 1)."""

    def __init__(self, error: str, message: str = "Numerical failure"):
        super().__init__(error=error, message=message, status_code=422)


class InvalidDimensionError(UsageError):
    def __init__(self, dim):
        super().__init__(error=f"Dimension must be a positive integer, got {dim!r}", message="Invalid dimension")
        self.dim = dim


class DimensionMismatchError(UsageError):
    def __init__(self, left: int, right: int):
        super().__init__(error=f"Dimension mismatch: {left} vs {right}", message="Dimension mismatch")
        self.left = left
        self.right = right


class NonFiniteEntriesError(UsageError):
    """Matrix entries contain NaN or infinity."""

    def __init__(self, name: str | None = None):
        label = f"'{name}' " if name else ""
        super().__init__(error=f"Element {label}has non-finite entries", message="Non-finite element")
        self.name = name


class NonHermitianError(UsageError):
    """Element offered as an observable is not self-adjoint."""

    def __init__(self, defect: float, name: str | None = None):
        label = f"'{name}' " if name else ""
        super().__init__(
            error=f"Element {label}is not Hermitian: ‖R − R*‖_F = {defect:.3e}",
            message="Non-hermitian element",
        )
        self.defect = defect
        self.name = name


class IncompatibleGeneratorsError(UsageError):
    """Two generators of a would-be context do not commute."""

    def __init__(self, first: str, second: str, norm: float):
        super().__init__(
            error=f"Generators '{first}' and '{second}' do not commute: ‖[A,B]‖_F = {norm:.3e}",
            message="Incompatible generators",
        )
        self.pair = (first, second)
        self.norm = norm


class NotInContextError(UsageError):
    def __init__(self, observable: str, context: str):
        super().__init__(
            error=f"Observable '{observable}' is not in context {context}",
            message="Observable not in context",
        )


class CharacterMismatchError(UsageError):
    def __init__(self, context: str):
        super().__init__(
            error=f"Character does not belong to context {context}",
            message="Character/context mismatch",
        )


class IndexOutOfRangeError(UsageError):
    def __init__(self, index: int, dim: int):
        super().__init__(
            error=f"Character index {index} outside 0..{dim - 1}",
            message="Index out of range",
        )


class InvalidSampleSizeError(UsageError):
    def __init__(self, n, minimum: int = 1):
        super().__init__(
            error=f"Sample size must be >= {minimum}, got {n!r}",
            message="Invalid sample size",
        )


class EmptySampleError(UsageError):
    def __init__(self):
        super().__init__(error="Sample list is empty", message="Empty sample")


class UnknownNameError(UsageError):
    """Unknown model, observable, state or angle preset."""

    def __init__(self, kind: str, name: str, known=None):
        hint = f" (known: {', '.join(sorted(known))})" if known else ""
        super().__init__(error=f"Unknown {kind} '{name}'{hint}", message=f"Unknown {kind}")
        self.status_code = 404


class ModelFormatError(UsageError):
    def __init__(self, error: str):
        super().__init__(error=error, message="Invalid model file")


class InconsistentExtensionError(NumericalError):
    """No character of the next context agrees with the recorded coordinates."""

    def __init__(self, context: str, detail: str = ""):
        super().__init__(
            error=f"No admissible character of {context}{': ' + detail if detail else ''}",
            message="Inconsistent extension",
        )


class SpectralConsistencyError(NumericalError):
    def __init__(self, observable: str, defect: float):
        super().__init__(
            error=f"σ(Q;𝔔) differs from σ(Q;𝔄) for '{observable}' by {defect:.3e}",
            message="Spectral consistency violated",
        )


class ContextConstructionError(NumericalError):
    def __init__(self, error: str):
        super().__init__(error=error, message="Context construction failed")


class GnsNumericalError(NumericalError):
    def __init__(self, eigenvalue: float):
        super().__init__(
            error=f"Gram matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e}",
            message="GNS construction failed",
        )
        self.eigenvalue = eigenvalue


def handle_errors(f):
    """
    Decorator that catches exceptions and returns standardized error responses.

    Handles:
        - ValidationError (Pydantic) → 400
        - LabError (usage → 400/404, numerical → 422)
        - Exception (unexpected) → 500
    """

    @wraps(f)
    def decorated(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ValidationError as e:
            error_details = [
                {
                    "field": ".".join(str(x) for x in error["loc"]),
                    "msg": error["msg"],
                    "type": error["type"],
                }
                for error in e.errors()
            ]
            return response_error(message="Validation Error", status_code=400, error=error_details)
        except LabError as e:
            json_logger.warning(f"{e.message}: {e.error}")
            return response_error(message=e.message, error=e.error, status_code=e.status_code)
        except Exception as e:
            json_logger.error(f"Unexpected error: {str(e)}", exc_info=True)
            return response_error(message="Internal server error", status_code=500)

    return decorated
