"""Named Monte Carlo verification suites behind ``dpsketch verify``.

Tail-bound suites interpret ``trials`` as the number of noise draws;
distortion and approximation suites interpret it as the number of sketch
seeds. Every suite returns BoundReports whose verdicts allow binomial slack,
so a suite passes exactly when the claimed probability holds empirically.
"""

from __future__ import annotations

import math

import numpy as np

from .bounds import (
    BoundReport,
    GaussianNoiseSpec,
    l1_coeff_bound_multilevel,
    l1_coeff_bound_simple,
    ridge_coeff_bound_l2,
    verify_tail_bound,
)
from .countsketch import countsketch_apply, draw_countsketch_plan, noise_row_count
from .dataset import synthetic_regression
from .jl import jl_project
from .l1 import l1_tail_bound
from .mechanisms import PrivacyParams, RowBound, gaussian_sigma
from .solvers import SketchProblem, approximation_ratio, solve_l2_sketch

# Shared probe direction for the tail suites; unit l2 norm, fixed across runs.
_DIRECTION = np.array([1.0, 2.0, -1.0, 0.5, -3.0])
_DIRECTION = _DIRECTION / np.linalg.norm(_DIRECTION)

_PP = PrivacyParams(1.0, 0.05)
_B = RowBound(1.0)


def suite_lemma1(trials: int = 10_000, seed: int = 0) -> "list[BoundReport]":
    """l1 norm of r i.i.d. N(0, sigma^2) draws stays below r*sigma w.p. >= 3/4."""
    reports = []
    for i, (r, sigma) in enumerate([(10, 1.0), (50, 1.0), (50, 3.0)]):
        spec = GaussianNoiseSpec(rows=r, sigma=sigma, beta_aug=np.array([1.0]))
        reports.append(
            verify_tail_bound(
                spec, "l1", l1_tail_bound(r, sigma), 0.25, trials, seed + i,
                bound_name=f"lemma1[r={r},sigma={sigma:g}]",
            )
        )
    return reports


def suite_thm1(trials: int = 10_000, seed: int = 0) -> "list[BoundReport]":
    """l2 tail of the CountSketch noise block, for the stated and the implemented
    noise-row counts (the implementation deliberately over-noises)."""
    sigma = gaussian_sigma(2.0 * _B.B, _PP)
    reports = []
    i = 0
    for r in (16, 64):
        bound_value = ridge_coeff_bound_l2(_B, _PP, r, _DIRECTION)
        for label, p in (("stated", math.ceil(r * math.log(r))), ("implemented", noise_row_count(r))):
            spec = GaussianNoiseSpec(rows=p, sigma=sigma, beta_aug=_DIRECTION)
            reports.append(
                verify_tail_bound(
                    spec, "l2", bound_value, 0.25, trials, seed + i,
                    bound_name=f"thm1[r={r},p={label}:{p}]",
                )
            )
            i += 1
    return reports


def suite_lemma2(trials: int = 10_000, seed: int = 0) -> "list[BoundReport]":
    """l1 tail of the single-level noise block against the simple bound."""
    sigma = gaussian_sigma(2.0 * _B.B, _PP)
    reports = []
    for i, r in enumerate((16, 64)):
        p = math.ceil(r * math.log(r))
        spec = GaussianNoiseSpec(rows=p, sigma=sigma, beta_aug=_DIRECTION)
        reports.append(
            verify_tail_bound(
                spec, "l1", l1_coeff_bound_simple(_B, _PP, r, _DIRECTION), 0.25, trials, seed + i,
                bound_name=f"lemma2[r={r},p={p}]",
            )
        )
    return reports


def suite_thm2(trials: int = 10_000, seed: int = 0, h_m: int = 4) -> "list[BoundReport]":
    """Multi-level analogue: noise at the sqrt(h_m) sensitivity calibration
    against the sqrt(h_m)-scaled bound."""
    sigma = gaussian_sigma(2.0 * _B.B * math.sqrt(h_m), _PP)
    reports = []
    for i, r in enumerate((16, 64)):
        p = math.ceil(r * math.log(r))
        spec = GaussianNoiseSpec(rows=p, sigma=sigma, beta_aug=_DIRECTION)
        reports.append(
            verify_tail_bound(
                spec, "l1", l1_coeff_bound_multilevel(_B, _PP, r, h_m, _DIRECTION),
                0.25, trials, seed + i,
                bound_name=f"thm2[r={r},h_m={h_m},p={p}]",
            )
        )
    return reports


def suite_jl_distortion(trials: int = 200, seed: int = 0) -> "list[BoundReport]":
    """Scaled projection norms ||Sv||^2 / r stay within [0.65, 1.35] for >= 95%
    of (seed, vector) pairs; 20 unit vectors in R^200, r = 1000."""
    r, dim, n_vectors = 1000, 200, 20
    rng = np.random.default_rng(seed)
    vectors = rng.standard_normal((dim, n_vectors))
    vectors /= np.linalg.norm(vectors, axis=0)
    outside = 0
    for i in range(trials):
        s = np.random.default_rng(np.random.SeedSequence([seed, i])).standard_normal((r, dim))
        scaled = (np.linalg.norm(s @ vectors, axis=0) ** 2) / r
        outside += int(((scaled < 0.65) | (scaled > 1.35)).sum())
    return [
        BoundReport(
            bound_name=f"jl-distortion[r={r},dim={dim}]",
            analytic_value=0.35,
            trials=trials * n_vectors,
            exceedances=outside,
            threshold_prob=0.05,
        )
    ]


def suite_cs_embedding(trials: int = 100, seed: int = 0) -> "list[BoundReport]":
    """CountSketch subspace-embedding check: ||SAv|| / ||Av|| in [0.5, 1.5]
    for >= 90% of directions across plans; n = 5000, d = 5, r = 2500."""
    n, d1, r, n_vectors = 5000, 6, 2500, 100
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, d1))
    vs = rng.standard_normal((d1, n_vectors))
    base = np.linalg.norm(a @ vs, axis=0)
    outside = 0
    for i in range(trials):
        plan = draw_countsketch_plan(n, r, np.random.SeedSequence([seed, i]))
        ratios = np.linalg.norm(countsketch_apply(plan, a) @ vs, axis=0) / base
        outside += int(((ratios < 0.5) | (ratios > 1.5)).sum())
    return [
        BoundReport(
            bound_name=f"cs-embedding[n={n},r={r}]",
            analytic_value=0.5,
            trials=trials * n_vectors,
            exceedances=outside,
            threshold_prob=0.10,
        )
    ]


def suite_approx_ratio(trials: int = 100, seed: int = 0) -> "list[BoundReport]":
    """Non-private JL sketch-and-solve: median l2 approximation ratio <= 1.5
    at r = ceil(50 d ln d), d = 5."""
    n, d = 5000, 5
    r = math.ceil(50 * d * math.log(d))
    data = synthetic_regression(n, d, seed=seed, noise=0.1, beta_scale=1.0)
    over = 0
    for i in range(trials):
        sketch = jl_project(data.A, r, np.random.SeedSequence([seed, i]))
        sol = solve_l2_sketch(SketchProblem(sketch))
        report = approximation_ratio(data, sol, "l2")
        if report.kind != "ratio" or report.value > 1.5:
            over += 1
    return [
        BoundReport(
            bound_name=f"approx-ratio[l2,r={r}]",
            analytic_value=1.5,
            trials=trials,
            exceedances=over,
            threshold_prob=0.5,
        )
    ]


SUITES = {
    "jl-distortion": suite_jl_distortion,
    "cs-embedding": suite_cs_embedding,
    "thm1": suite_thm1,
    "lemma1": suite_lemma1,
    "lemma2": suite_lemma2,
    "thm2": suite_thm2,
    "approx-ratio": suite_approx_ratio,
}
