"""Poisson surrogate for the collision count: rates, simplicity probability, moments.

Vertex i carries a loop rate d_i(d_i-1)/(2N) and each unordered vertex pair
a parallel-edge rate sqrt(d_i(d_i-1) d_j(d_j-1))/N, where N is the half-edge
total. The surrogate collision count is the sum of independent Poisson loop
counts plus C(X, 2) over independent Poisson parallel-edge counts X. Both
rates depend only on degree values, so everything here is computed over
degree groups: cost scales with the number of distinct degrees, not with
the vertex count.

Moments of the surrogate are exact up to floating point: per-term moments
(Poisson raw moments for loops; factorial-moment series for the pair terms)
are converted to cumulants, cumulants add across the independent terms with
group multiplicities, and the total converts back to raw moments.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .degrees import BipartiteDegreePair, DegreeSequence
from .errors import OrderTooHighError
from .sampler import as_generator

__all__ = [
    "SurrogateModel",
    "DEFAULT_MAX_ORDER",
    "build",
    "loop_rate",
    "pair_rate",
    "excess_rate",
    "prob_simple_asymptotic",
    "h_m",
    "poisson_factorial_moment",
    "moments_from_factorial",
    "stirling2",
    "poisson_raw_moments",
    "moments_to_cumulants",
    "cumulants_to_moments",
    "zhat_moment",
    "sample_zhat",
    "sample_zhat_batch",
    "model_summary",
]

DEFAULT_MAX_ORDER = 6


def loop_rate(d: int, total: int) -> float:
    """Loop rate of a degree-d vertex: d(d-1) / (2 * total)."""
    return d * (d - 1) / (2 * total)


def pair_rate(di: int, dj: int, total: int) -> float:
    """Parallel-edge rate of a degree pair: sqrt(di(di-1) dj(dj-1)) / total."""
    return math.sqrt(di * (di - 1) * dj * (dj - 1)) / total


@dataclass(frozen=True)
class SurrogateModel:
    """Grouped rate tables for the surrogate collision count.

    ``loop_groups`` and ``pair_groups`` hold (rate, multiplicity) entries;
    zero-rate vertices (degree <= 1) are dropped, which is lossless. For
    bipartite inputs there are no loop groups and the pair groups run over
    all left-right vertex pairs.
    """

    total: int
    bipartite: bool
    degree_groups: tuple[tuple[int, int], ...]
    loop_groups: tuple[tuple[float, int], ...]
    pair_groups: tuple[tuple[float, int], ...]
    sum_loop_rate: float
    sum_pair_rate: float
    sum_pair_rate_sq: float


def build(seq: DegreeSequence | BipartiteDegreePair) -> SurrogateModel:
    """Group degrees by value and tabulate loop and pair rates."""
    if isinstance(seq, BipartiteDegreePair):
        return _build_bipartite(seq)
    N = seq.total
    counts = Counter(d for d in seq.degrees if d >= 2)
    values = sorted(counts)
    loop_groups = tuple((loop_rate(d, N), counts[d]) for d in values)
    pair_groups = []
    for a_idx, a in enumerate(values):
        for b in values[a_idx:]:
            mult = (
                counts[a] * (counts[a] - 1) // 2 if a == b else counts[a] * counts[b]
            )
            if mult:
                pair_groups.append((pair_rate(a, b, N), mult))
    return SurrogateModel(
        total=N,
        bipartite=False,
        degree_groups=tuple(sorted(counts.items())),
        loop_groups=loop_groups,
        pair_groups=tuple(pair_groups),
        sum_loop_rate=seq.sum_d2 / (2 * N) if N else 0.0,
        sum_pair_rate=sum(lam * mult for lam, mult in pair_groups),
        sum_pair_rate_sq=sum(lam * lam * mult for lam, mult in pair_groups),
    )


def _build_bipartite(bp: BipartiteDegreePair) -> SurrogateModel:
    N = bp.total
    s_counts = Counter(d for d in bp.s if d >= 2)
    t_counts = Counter(d for d in bp.t if d >= 2)
    pair_groups = []
    for a in sorted(s_counts):
        for b in sorted(t_counts):
            pair_groups.append((pair_rate(a, b, N), s_counts[a] * t_counts[b]))
    groups = tuple(sorted((Counter(bp.s) + Counter(bp.t)).items()))
    return SurrogateModel(
        total=N,
        bipartite=True,
        degree_groups=groups,
        loop_groups=(),
        pair_groups=tuple(pair_groups),
        sum_loop_rate=0.0,
        sum_pair_rate=sum(lam * mult for lam, mult in pair_groups),
        sum_pair_rate_sq=sum(lam * lam * mult for lam, mult in pair_groups),
    )


def excess_rate(lam: float) -> float:
    """lam - log(1 + lam), evaluated without cancellation for small lam.

    Below 0.1 the direct difference loses digits, so the alternating series
    sum_{k>=2} (-1)^k lam^k / k is summed until the terms fall under machine
    precision relative to the partial sum.
    """
    if lam < 0:
        raise ValueError(f"rate must be nonnegative, got {lam}")
    if lam >= 0.1:
        return lam - math.log1p(lam)
    acc = 0.0
    term = lam * lam / 2.0
    k = 2
    while True:
        acc += term
        k += 1
        term *= -lam * (k - 1) / k
        if abs(term) < 1e-17 * acc:
            return acc


def prob_simple_asymptotic(model: SurrogateModel) -> float:
    """Probability that the surrogate collision count is zero.

    Equals exp(-sum of loop rates - sum over pairs of (rate - log(1+rate))),
    the product over independent terms of P(loop count 0) and P(pair count
    <= 1). Grouped evaluation, exact for the surrogate at any size.
    """
    exponent = -model.sum_loop_rate
    exponent -= sum(mult * excess_rate(lam) for lam, mult in model.pair_groups)
    return math.exp(exponent)


# ---------------------------------------------------------------------------
# Moment machinery
# ---------------------------------------------------------------------------


def h_m(m: int, lam: float) -> float:
    """m-th factorial moment of C(X, 2) with X Poisson(lam).

    For m = 1 this is exactly lam^2 / 2. For m >= 2 the value is the series
    sum_{j>=3} falling(C(j,2), m) * lam^j / j! * exp(-lam), truncated once
    the terms fall below machine precision relative to the partial sum; the
    leading term is at j = 3, so the function has a triple root at 0.
    """
    if m < 1:
        raise ValueError(f"order must be >= 1, got {m}")
    if lam < 0:
        raise ValueError(f"rate must be nonnegative, got {lam}")
    if m == 1:
        return 0.5 * lam * lam
    if lam == 0.0:
        return 0.0
    acc = 0.0
    pw = lam * lam * lam / 6.0  # lam^j / j! at j = 3
    j = 3
    while True:
        c = j * (j - 1) // 2
        ff = 1.0
        for k in range(m):
            ff *= c - k
        term = ff * pw
        acc += term
        j += 1
        pw *= lam / j
        if j > lam + 3 and term < 1e-17 * acc:
            break
    return acc * math.exp(-lam)


def poisson_factorial_moment(k: int, lam: float) -> float:
    """k-th factorial moment of Poisson(lam): lam**k."""
    if k < 0:
        raise ValueError("order must be nonnegative")
    return float(lam) ** k if k else 1.0


@lru_cache(maxsize=None)
def _stirling_row(m: int) -> tuple[int, ...]:
    """Stirling numbers of the second kind S(m, k) for k = 0..m."""
    if m == 0:
        return (1,)
    prev = _stirling_row(m - 1)
    row = [0] * (m + 1)
    for k in range(1, m + 1):
        row[k] = k * (prev[k] if k < m else 0) + prev[k - 1]
    return tuple(row)


def stirling2(m: int, k: int) -> int:
    if k < 0 or k > m:
        return 0
    return _stirling_row(m)[k]


def moments_from_factorial(factorial_moments) -> list:
    """Raw moments from factorial moments: E X^m = sum_k S(m,k) E(X)_k.

    Integer inputs give exact integer outputs (the Stirling table is exact).
    """
    fm = list(factorial_moments)
    return [
        sum(stirling2(m, k) * fm[k - 1] for k in range(1, m + 1))
        for m in range(1, len(fm) + 1)
    ]


def poisson_raw_moments(lam: float, order: int) -> list[float]:
    """Raw moments 1..order of Poisson(lam) (Touchard polynomials)."""
    return moments_from_factorial([lam**k for k in range(1, order + 1)])


def moments_to_cumulants(moments) -> list[float]:
    """Cumulants 1..m from raw moments 1..m via the standard recursion."""
    ms = list(moments)
    kappa: list[float] = []
    for r in range(1, len(ms) + 1):
        val = ms[r - 1]
        for k in range(1, r):
            val -= math.comb(r - 1, k - 1) * kappa[k - 1] * ms[r - k - 1]
        kappa.append(val)
    return kappa


def cumulants_to_moments(cumulants) -> list[float]:
    """Raw moments 1..m from cumulants 1..m (inverse recursion)."""
    ks = list(cumulants)
    ms: list[float] = []
    for r in range(1, len(ks) + 1):
        val = 0.0
        for k in range(1, r + 1):
            prev = ms[r - k - 1] if r - k >= 1 else 1.0
            val += math.comb(r - 1, k - 1) * ks[k - 1] * prev
        ms.append(val)
    return ms


def zhat_moment(model: SurrogateModel, order: int, max_order: int = DEFAULT_MAX_ORDER) -> float:
    """Raw moment of the surrogate collision count, exact in floating point.

    Cumulants are additive over the independent loop and pair terms, and a
    Poisson variable has every cumulant equal to its rate, so the loop part
    contributes the summed loop rate to each cumulant. Pair terms contribute
    per degree group via the factorial-moment series. Cost is independent
    of the vertex count beyond the number of distinct degree values.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    if order == 0:
        return 1.0
    if order > max_order:
        raise OrderTooHighError(f"order {order} exceeds max_order {max_order}")
    kappa = [model.sum_loop_rate] * order
    for lam, mult in model.pair_groups:
        if lam == 0.0:
            continue
        y_fact = [h_m(k, lam) for k in range(1, order + 1)]
        y_raw = moments_from_factorial(y_fact)
        y_cum = moments_to_cumulants(y_raw)
        for r in range(order):
            kappa[r] += mult * y_cum[r]
    return cumulants_to_moments(kappa)[order - 1]


# ---------------------------------------------------------------------------
# Direct sampling of the surrogate
# ---------------------------------------------------------------------------


def _pair_exceed_prob(lam: float) -> float:
    """P(Poisson(lam) >= 2) = 1 - exp(-lam) (1 + lam)."""
    return -math.expm1(-lam) - lam * math.exp(-lam)


def _conditioned_cdf(lam: float) -> np.ndarray:
    """CDF of Poisson(lam) conditioned on being >= 2, starting at value 2."""
    probs = []
    term = lam * lam / 2.0  # lam^k / k! at k = 2 (e^-lam folded into norm)
    k = 2
    acc = 0.0
    while True:
        probs.append(term)
        acc += term
        k += 1
        term *= lam / k
        if k > lam + 4 and term < 1e-18 * acc:
            break
    cdf = np.cumsum(probs)
    return cdf / cdf[-1]


def sample_zhat_batch(model: SurrogateModel, n_rep: int, rng_seed=None) -> np.ndarray:
    """Draw ``n_rep`` independent surrogate collision counts.

    The loop part is Poisson with the summed loop rate (a sum of independent
    Poissons). For each pair group of K terms sharing a rate, the number of
    terms with count >= 2 is Binomial(K, P(>=2)); each such term then draws
    its conditioned count by inverse CDF and contributes C(count, 2).
    """
    rng = as_generator(rng_seed)
    z = (
        rng.poisson(model.sum_loop_rate, n_rep).astype(np.int64)
        if model.sum_loop_rate > 0
        else np.zeros(n_rep, np.int64)
    )
    for lam, mult in model.pair_groups:
        if lam == 0.0:
            continue
        counts = rng.binomial(mult, _pair_exceed_prob(lam), n_rep)
        tot = int(counts.sum())
        if tot == 0:
            continue
        cdf = _conditioned_cdf(lam)
        vals = 2 + np.searchsorted(cdf, rng.random(tot), side="right")
        contrib = vals * (vals - 1) // 2
        owner = np.repeat(np.arange(n_rep), counts)
        z += np.bincount(owner, weights=contrib, minlength=n_rep).astype(np.int64)
    return z


def sample_zhat(model: SurrogateModel, rng_seed=None) -> int:
    """One draw of the surrogate collision count."""
    return int(sample_zhat_batch(model, 1, rng_seed)[0])


def model_summary(model: SurrogateModel, n_moments: int = 4) -> dict:
    """JSON-ready summary: totals, rate sums, simplicity probability, moments."""
    return {
        "total_half_edges": model.total,
        "bipartite": model.bipartite,
        "sum_loop_rate": model.sum_loop_rate,
        "sum_pair_rate": model.sum_pair_rate,
        "sum_pair_rate_sq": model.sum_pair_rate_sq,
        "prob_simple": prob_simple_asymptotic(model),
        "moments": [zhat_moment(model, m) for m in range(1, n_moments + 1)],
    }
