"""Privacy parameters and noise calibration for the Gaussian/Laplace mechanisms."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError


@dataclass(frozen=True)
class PrivacyParams:
    """An (epsilon, delta) differential-privacy budget."""

    epsilon: float
    delta: float

    def __post_init__(self):
        if not (self.epsilon > 0):
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if not (0 < self.delta < 1):
            raise ParameterError(f"delta must lie in (0, 1), got {self.delta}")


@dataclass(frozen=True)
class RowBound:
    """A certified upper bound B on the l2 norm of every data row."""

    B: float

    def __post_init__(self):
        if not (self.B > 0):
            raise ParameterError(f"row bound must be positive, got {self.B}")


def gaussian_sigma(sensitivity: float, pp: PrivacyParams) -> float:
    """Gaussian-mechanism noise level sigma = Delta/eps * sqrt(2 ln(1.25/delta))."""
    if sensitivity < 0:
        raise ParameterError("sensitivity must be nonnegative")
    return sensitivity / pp.epsilon * math.sqrt(2.0 * math.log(1.25 / pp.delta))


def countsketch_sensitivity(bound: RowBound) -> float:
    """l2 sensitivity of a fixed CountSketch: one changed row moves one bucket by <= 2B."""
    return 2.0 * bound.B


def l1_sketch_sensitivity(bound: RowBound, h_m: int, s: int = 1, conservative: bool = True) -> float:
    """l2 sensitivity of the multi-level l1 sketch.

    A changed row perturbs at most ``s`` buckets at level 0 plus one bucket
    at each of the ``h_m`` sampled levels, giving ``2B * sqrt(s + h_m)``
    (``conservative=True``, the default). With ``conservative=False`` the
    level-0 copies are not counted and the value is ``2B * sqrt(h_m)``,
    which reproduces the constant used by the multi-level noise calibration.
    Callers that release sketches record which mode they used in the release
    metadata.
    """
    if h_m < 1:
        raise ParameterError("h_m must be at least 1")
    if s < 1:
        raise ParameterError("s must be at least 1")
    if conservative:
        return 2.0 * bound.B * math.sqrt(s + h_m)
    return 2.0 * bound.B * math.sqrt(h_m)
