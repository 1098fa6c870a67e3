import json
import math
from typing import Any, Dict

import numpy as np


class GridParityError(ValueError):
    pass


class InvalidDataError(ValueError):
    pass


class DomainError(ValueError):
    pass


class ProfileBlowupError(ValueError):
    """Raised when a shooting profile leaves the computable window |q| <= blowup.

    `sign` is the sign of the diverging profile, which the Lambda scan uses in
    place of the missing endpoint value.
    """

    def __init__(self, message: str, sign: float, radius: float):
        super().__init__(message)
        self.sign = sign
        self.radius = radius


class ResonantModeError(ValueError):
    def __init__(self, message: str, count: int = 1):
        super().__init__(message)
        self.count = count


class NoBracketError(ValueError):
    pass


class NoSteadyStateError(ValueError):
    pass


class MultipleRootsError(ValueError):
    pass


class BeyondFoldError(ValueError):
    pass


class PositivityViolationError(ValueError):
    pass


class ExtendBranchError(ValueError):
    pass


class ExceptionalBetaError(ValueError):
    pass


class ValidityCapError(ValueError):
    pass


def validate_radius(R: float) -> None:
    if not (math.isfinite(R) and R > 0):
        raise ValueError(f"R must be a positive finite number, got {R}")


def validate_beta(beta: float) -> None:
    if not (math.isfinite(beta) and beta > 0):
        raise DomainError(f"domain: beta must be > 0, got {beta}")


def validate_grid_size(N: int) -> None:
    if int(N) != N or N < 64:
        raise ValueError(f"N must be an integer >= 64, got {N}")


def validate_tolerance(tol: float, lower: float = 1e-14, upper: float = 1e-4) -> None:
    if not (lower < tol < upper):
        raise ValueError(f"tol must lie in ({lower:g}, {upper:g}), got {tol}")


def validate_finite(values: np.ndarray, what: str = "values") -> None:
    if not np.all(np.isfinite(values)):
        bad = int(np.count_nonzero(~np.isfinite(values)))
        raise InvalidDataError(f"invalid data: {bad} non-finite sample(s) in {what}")


def serialize_report(report: Dict[str, Any]) -> str:
    """Deterministic JSON text for reports; numpy values and complex numbers included."""
    def default_handler(obj: Any) -> Any:
        if isinstance(obj, (complex, np.complexfloating)):
            return [float(obj.real), float(obj.imag)]
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.bool_):
            return bool(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        raise TypeError(f"Object of type {type(obj)} is not JSON serializable")
    return json.dumps(report, default=default_handler, indent=2, sort_keys=True)


def deserialize_report(json_str: str) -> Dict[str, Any]:
    return json.loads(json_str)
