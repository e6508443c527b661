"""Analytic regularization-coefficient bounds and their Monte Carlo verifiers.

Every "log" in these bounds is the natural log; the underlying tail
arguments are stated in ln throughout (sketching literature sometimes means
log2, so this is worth saying once, prominently).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .mechanisms import PrivacyParams, RowBound

_MIN_TRIALS = 100
_BATCH = 1000  # trials per sampling batch, bounds peak memory


@dataclass(frozen=True)
class BoundReport:
    """Outcome of checking one tail bound by sampling.

    The verdict allows two binomial standard deviations of slack above the
    nominal exceedance probability so claims that hold with large margins do
    not fail on sampling noise.
    """

    bound_name: str
    analytic_value: float
    trials: int
    exceedances: int
    threshold_prob: float

    @property
    def exceedance_rate(self) -> float:
        return self.exceedances / self.trials

    @property
    def verdict(self) -> str:
        slack = 2.0 * math.sqrt(self.threshold_prob / self.trials)
        return "pass" if self.exceedance_rate <= self.threshold_prob + slack else "fail"


def ridge_coeff_bound_l2(bound: RowBound, pp: PrivacyParams, r: int, beta_aug) -> float:
    """l2 regularization bound ``13 B/eps * sqrt(r ln r ln(1.25/delta)) * ||beta_aug||_2``.

    The constant 13 is the evaluated form of ``sqrt(64 ln 16)`` from the
    Gaussian-tail argument behind the bound.
    """
    _check_r(r)
    beta = np.asarray(beta_aug, dtype=float).reshape(-1)
    return (
        13.0 * bound.B / pp.epsilon
        * math.sqrt(r * math.log(r) * math.log(1.25 / pp.delta))
        * float(np.linalg.norm(beta))
    )


def l1_coeff_bound_simple(bound: RowBound, pp: PrivacyParams, r: int, beta_aug) -> float:
    """l1 regularization bound ``2 B r ln r sqrt(2 ln(1.25/delta))/eps * ||beta_aug||_1``.

    The sqrt(2) is kept: it belongs to the Gaussian noise level and dropping
    it would under-state the bound.
    """
    _check_r(r)
    beta = np.asarray(beta_aug, dtype=float).reshape(-1)
    return (
        2.0 * bound.B * r * math.log(r) * math.sqrt(2.0 * math.log(1.25 / pp.delta))
        / pp.epsilon * float(np.abs(beta).sum())
    )


def l1_coeff_bound_multilevel(bound: RowBound, pp: PrivacyParams, r: int, h_m: int, beta_aug) -> float:
    """Multi-level l1 bound ``2 B r ln r sqrt(2 h_m ln(1.25/delta))/eps * ||beta_aug||_1``."""
    _check_r(r)
    if h_m < 1:
        raise ParameterError("h_m must be at least 1")
    return l1_coeff_bound_simple(bound, pp, r, beta_aug) * math.sqrt(h_m)


def _check_r(r: int) -> None:
    if r < 2:
        raise ParameterError("bounds need r >= 2 so that ln r > 0")


@dataclass(frozen=True)
class GaussianNoiseSpec:
    """Distribution of the noise statistic: ``rows`` i.i.d. N(0, sigma^2 I) noise
    rows multiplied into a fixed ``beta_aug``."""

    rows: int
    sigma: float
    beta_aug: np.ndarray

    def __post_init__(self):
        if self.rows < 1:
            raise ParameterError("need at least one noise row")
        if self.sigma < 0:
            raise ParameterError("sigma must be nonnegative")
        object.__setattr__(self, "beta_aug", np.asarray(self.beta_aug, dtype=float).reshape(-1))


def verify_tail_bound(
    spec: GaussianNoiseSpec,
    statistic: str,
    bound_value: float,
    threshold_prob: float,
    trials: int,
    seed,
    bound_name: str = "tail-bound",
) -> BoundReport:
    """Sample ``||eta beta_aug||`` repeatedly and count exceedances of the bound.

    ``statistic`` is ``"l1"`` or ``"l2"``. Each trial draws a fresh noise
    matrix ``eta`` of shape ``(rows, len(beta_aug))`` and evaluates the
    chosen norm of ``eta @ beta_aug``.
    """
    if statistic not in ("l1", "l2"):
        raise ParameterError("statistic must be 'l1' or 'l2'")
    if trials < _MIN_TRIALS:
        raise ParameterError(f"need at least {_MIN_TRIALS} trials, got {trials}")
    if not (0 < threshold_prob < 1):
        raise ParameterError("threshold_prob must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    dim = spec.beta_aug.shape[0]
    exceed = 0
    done = 0
    while done < trials:
        batch = min(_BATCH, trials - done)
        eta = spec.sigma * rng.standard_normal((batch, spec.rows, dim))
        v = eta @ spec.beta_aug
        stats = np.abs(v).sum(axis=1) if statistic == "l1" else np.linalg.norm(v, axis=1)
        exceed += int((stats >= bound_value).sum())
        done += batch
    return BoundReport(
        bound_name=bound_name,
        analytic_value=float(bound_value),
        trials=trials,
        exceedances=exceed,
        threshold_prob=threshold_prob,
    )
