"""confmodel: configuration-model multigraphs, collision statistics, and the
Poisson surrogate prediction of the probability of simplicity."""

from __future__ import annotations

__version__ = "0.1.0"

from .degrees import (
    BipartiteDegreePair,
    DegreeFamily,
    DegreeSequence,
    make_heavy_block,
    make_heavy_pair,
    make_ones,
    make_regular,
    make_split,
    validate,
    validate_bipartite,
)
from .errors import (
    AssumptionViolatedError,
    ConfModelError,
    EmptySequenceError,
    ExhaustedError,
    NegativeDegreeError,
    OddSumError,
    OrderTooHighError,
    SameVertexError,
    SideMismatchError,
    TooLargeError,
    TooSmallError,
)
from .exact import (
    ExactSummary,
    enumerate_bipartite_exact,
    enumerate_exact,
    expected_collision_total,
    expected_loops,
    expected_loops_factorial,
    expected_parallel_pairs,
)
from .sampler import (
    CollisionStats,
    Pairing,
    collision_counts,
    collision_counts_bipartite,
    collision_stats,
    rejection_sample_simple,
    sample_bipartite_pairing,
    sample_pairing,
)
from .surrogate import (
    SurrogateModel,
    build,
    h_m,
    moments_from_factorial,
    poisson_factorial_moment,
    prob_simple_asymptotic,
    sample_zhat,
    sample_zhat_batch,
    zhat_moment,
)

__all__ = [
    "__version__",
    "BipartiteDegreePair",
    "DegreeFamily",
    "DegreeSequence",
    "make_heavy_block",
    "make_heavy_pair",
    "make_ones",
    "make_regular",
    "make_split",
    "validate",
    "validate_bipartite",
    "ConfModelError",
    "AssumptionViolatedError",
    "EmptySequenceError",
    "ExhaustedError",
    "NegativeDegreeError",
    "OddSumError",
    "OrderTooHighError",
    "SameVertexError",
    "SideMismatchError",
    "TooLargeError",
    "TooSmallError",
    "ExactSummary",
    "enumerate_bipartite_exact",
    "enumerate_exact",
    "expected_collision_total",
    "expected_loops",
    "expected_loops_factorial",
    "expected_parallel_pairs",
    "CollisionStats",
    "Pairing",
    "collision_counts",
    "collision_counts_bipartite",
    "collision_stats",
    "rejection_sample_simple",
    "sample_bipartite_pairing",
    "sample_pairing",
    "SurrogateModel",
    "build",
    "h_m",
    "moments_from_factorial",
    "poisson_factorial_moment",
    "prob_simple_asymptotic",
    "sample_zhat",
    "sample_zhat_batch",
    "zhat_moment",
]
