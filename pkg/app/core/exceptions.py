"""
Custom exceptions for the surgery calculator.
Provides structured error handling, CLI exit codes and HTTP status codes.
"""

from typing import Optional, Dict, Any
from fastapi import HTTPException, status


EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_VERIFICATION_FAILED = 3


class FloerServiceException(Exception):
    """Base exception for surgery calculator errors."""

    def __init__(self, message: str, error_code: str = None, details: Dict[str, Any] = None):
        self.message = message
        self.error_code = error_code or "FLOER_ERROR"
        self.details = details or {}
        super().__init__(self.message)


class AlexanderSyntaxError(FloerServiceException):
    """Raised when an Alexander polynomial expression cannot be parsed."""

    def __init__(self, text: str, position: int, expected: str):
        super().__init__(
            message=f"Syntax error at position {position}: expected {expected}",
            error_code="ALEXANDER_SYNTAX",
            details={"text": text, "position": position, "expected": expected}
        )


class AsymmetricPolynomialError(FloerServiceException):
    """Raised when a polynomial fails a_k = a_{-k}."""

    def __init__(self, exponent: int, coefficient: int, mirror_coefficient: int):
        super().__init__(
            message=(
                f"Polynomial is not symmetric: coefficient {coefficient} at t^{exponent} "
                f"but {mirror_coefficient} at t^{-exponent}"
            ),
            error_code="ASYMMETRIC_POLYNOMIAL",
            details={"exponent": exponent, "coefficient": coefficient, "mirror_coefficient": mirror_coefficient}
        )


class NormalizationError(FloerServiceException):
    """Raised when a polynomial does not evaluate to 1 at t = 1."""

    def __init__(self, value: int):
        super().__init__(
            message=f"Alexander polynomial must satisfy Δ(1) = 1, got {value}",
            error_code="ALEXANDER_NORMALIZATION",
            details={"value": value}
        )


class InvalidTorusKnotError(FloerServiceException):
    """Raised for non-coprime or out-of-range torus knot parameters."""

    def __init__(self, a: int, b: int, reason: str):
        super().__init__(
            message=f"Invalid torus knot T({a},{b}): {reason}",
            error_code="INVALID_TORUS_KNOT",
            details={"a": a, "b": b, "reason": reason}
        )


class InvalidKnotSpecError(FloerServiceException):
    """Raised when a knot specification string cannot be resolved."""

    def __init__(self, spec: str, reason: str):
        super().__init__(
            message=f"Invalid knot spec '{spec}': {reason}",
            error_code="INVALID_KNOT_SPEC",
            details={"spec": spec, "reason": reason}
        )


class ComplexValidationError(FloerServiceException):
    """Raised when a bifiltered complex violates its schema or invariants."""

    def __init__(self, reason: str, message: str, details: Dict[str, Any] = None):
        super().__init__(
            message=f"Invalid complex ({reason}): {message}",
            error_code="INVALID_COMPLEX",
            details={"reason": reason, **(details or {})}
        )
        self.reason = reason


class InadmissiblePolynomialError(FloerServiceException):
    """Raised when Δ is not an L-space knot candidate."""

    def __init__(self, polynomial: str, reason: str):
        super().__init__(
            message=f"Polynomial {polynomial} is not admissible: {reason}",
            error_code="INADMISSIBLE_POLYNOMIAL",
            details={"polynomial": polynomial, "reason": reason}
        )


class TrivialKnotError(FloerServiceException):
    """Raised when an operation needs a non-trivial knot."""

    def __init__(self, operation: str):
        super().__init__(
            message=f"'{operation}' requires a non-trivial knot (genus 0 given)",
            error_code="TRIVIAL_KNOT",
            details={"operation": operation}
        )


class UnsupportedSlopeError(FloerServiceException):
    """Raised for slopes outside an operation's hypotheses (including p = 0)."""

    def __init__(self, p: int, reason: str):
        super().__init__(
            message=f"p = {p} unsupported: {reason}",
            error_code="UNSUPPORTED_SLOPE",
            details={"p": p, "reason": reason}
        )


class SlopeOutOfRangeError(FloerServiceException):
    """Raised when a slope fails 1 < |p| <= 2g - 1."""

    def __init__(self, p: int, genus: int):
        super().__init__(
            message=f"Slope {p} outside the range 1 < |p| <= {2 * genus - 1} for genus {genus}",
            error_code="SLOPE_OUT_OF_RANGE",
            details={"p": p, "genus": genus}
        )


class UnsupportedFlavorError(FloerServiceException):
    """Raised when the plus flavor is requested on a general complex."""

    def __init__(self, flavor: str, reason: str):
        super().__init__(
            message=f"Flavor '{flavor}' unsupported: {reason}",
            error_code="UNSUPPORTED_FLAVOR",
            details={"flavor": flavor, "reason": reason}
        )


class CyclicDiagramError(FloerServiceException):
    """Raised when a tower map's node graph is not a path."""

    def __init__(self, message: str, details: Dict[str, Any] = None):
        super().__init__(
            message=message,
            error_code="CYCLIC_DIAGRAM",
            details=details or {}
        )


class GradingInconsistencyError(FloerServiceException):
    """Raised when grading offsets disagree along an edge."""

    def __init__(self, message: str, details: Dict[str, Any] = None):
        super().__init__(
            message=message,
            error_code="GRADING_INCONSISTENT",
            details=details or {}
        )


class CorruptComplexError(FloerServiceException):
    """Raised when consecutive differentials do not compose to zero."""

    def __init__(self, grading: int):
        super().__init__(
            message=f"Differential squares to a non-zero map out of grading {grading}",
            error_code="CORRUPT_COMPLEX",
            details={"grading": grading}
        )


class InvalidSummandOrderError(FloerServiceException):
    """Raised when r is not a proper divisor of |p|."""

    def __init__(self, r: int, p: int):
        super().__init__(
            message=f"r = {r} must satisfy 1 <= r < |p| and r | p for p = {p}",
            error_code="INVALID_SUMMAND_ORDER",
            details={"r": r, "p": p}
        )


class InvalidRequestError(FloerServiceException):
    """Raised when a request or argument is invalid."""

    def __init__(self, message: str, details: Dict[str, Any] = None):
        super().__init__(
            message=message,
            error_code="INVALID_REQUEST",
            details=details or {}
        )


class EngineDisagreementError(FloerServiceException):
    """Raised when two engines disagree on the same input."""

    def __init__(self, knot: str, p: int, residue: Optional[int], left: str, right: str):
        super().__init__(
            message=f"Engines disagree on {knot}, p = {p}, class [{residue}]: {left} != {right}",
            error_code="ENGINE_DISAGREEMENT",
            details={"knot": knot, "p": p, "residue": residue, "left": left, "right": right}
        )


_VERIFICATION_CODES = {"ENGINE_DISAGREEMENT", "GRADING_INCONSISTENT"}


def exit_code_for(exc: FloerServiceException) -> int:
    """Map a service exception onto the CLI exit-code contract."""
    if exc.error_code in _VERIFICATION_CODES:
        return EXIT_VERIFICATION_FAILED
    return EXIT_INPUT_ERROR


def create_http_exception(exc: FloerServiceException) -> HTTPException:
    """Convert a FloerServiceException to an HTTPException."""

    # Map error codes to HTTP status codes
    status_code_mapping = {
        "ALEXANDER_SYNTAX": status.HTTP_400_BAD_REQUEST,
        "ASYMMETRIC_POLYNOMIAL": status.HTTP_400_BAD_REQUEST,
        "ALEXANDER_NORMALIZATION": status.HTTP_400_BAD_REQUEST,
        "INVALID_TORUS_KNOT": status.HTTP_400_BAD_REQUEST,
        "INVALID_KNOT_SPEC": status.HTTP_400_BAD_REQUEST,
        "INVALID_COMPLEX": status.HTTP_400_BAD_REQUEST,
        "INVALID_REQUEST": status.HTTP_400_BAD_REQUEST,
        "INVALID_SUMMAND_ORDER": status.HTTP_400_BAD_REQUEST,
        "CORRUPT_COMPLEX": status.HTTP_400_BAD_REQUEST,
        "CYCLIC_DIAGRAM": status.HTTP_400_BAD_REQUEST,
        "INADMISSIBLE_POLYNOMIAL": status.HTTP_422_UNPROCESSABLE_ENTITY,
        "TRIVIAL_KNOT": status.HTTP_422_UNPROCESSABLE_ENTITY,
        "UNSUPPORTED_SLOPE": status.HTTP_422_UNPROCESSABLE_ENTITY,
        "SLOPE_OUT_OF_RANGE": status.HTTP_422_UNPROCESSABLE_ENTITY,
        "UNSUPPORTED_FLAVOR": status.HTTP_422_UNPROCESSABLE_ENTITY,
        "ENGINE_DISAGREEMENT": status.HTTP_500_INTERNAL_SERVER_ERROR,
        "GRADING_INCONSISTENT": status.HTTP_500_INTERNAL_SERVER_ERROR,
    }

    http_status = status_code_mapping.get(exc.error_code, status.HTTP_500_INTERNAL_SERVER_ERROR)

    return HTTPException(
        status_code=http_status,
        detail={
            "error_code": exc.error_code,
            "message": exc.message,
            "details": exc.details
        }
    )
