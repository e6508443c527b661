"""Differentially private sketches for l1/l2 regression.

Release a private sketch of a regression dataset (JL, CountSketch, or a
multi-level weighted l1 sketch), solve the regression on the sketch, and
verify every noise-calibration formula and tail bound by Monte Carlo.
"""

from .bounds import (
    BoundReport,
    GaussianNoiseSpec,
    l1_coeff_bound_multilevel,
    l1_coeff_bound_simple,
    ridge_coeff_bound_l2,
    verify_tail_bound,
)
from .countsketch import (
    CountSketchPlan,
    NoisePlan,
    countsketch_apply,
    draw_countsketch_plan,
    noise_row_count,
    private_countsketch_l2,
)
from .dataset import (
    DataMatrix,
    DatasetFile,
    IngestResult,
    from_xy,
    ingest,
    max_row_norm,
    synthetic_regression,
)
from .errors import (
    CertificationError,
    DecompositionError,
    DpSketchError,
    ParameterError,
    SingularSystemError,
    SketchFileError,
)
from .jl import (
    JlConfig,
    JlReleaseMeta,
    jl_project,
    noisy_rank_test,
    private_jl_sketch,
    spectral_augment,
    suggested_jl_rows,
    threshold_w_squared,
)
from .l1 import (
    L1SketchConfig,
    WeightedSketch,
    illustration_sketch_private,
    l1_tail_bound,
    level_count,
    private_l1_sketch,
    suggested_l1_rows,
)
from .linalg import (
    SvdResult,
    min_singular_value,
    qr_least_squares,
    sample_gaussian_matrix,
    sample_laplace,
    svd,
)
from .mechanisms import (
    PrivacyParams,
    RowBound,
    countsketch_sensitivity,
    gaussian_sigma,
    l1_sketch_sensitivity,
)
from .sketchfile import SketchFile, read_sketch, write_sketch
from .solvers import (
    RatioReport,
    RegressionSolution,
    SketchProblem,
    approximation_ratio,
    exact_l1_solution,
    exact_l2_solution,
    lad_vertex_oracle,
    solve_l1_weighted,
    solve_l2_sketch,
)
from .suites import SUITES

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
