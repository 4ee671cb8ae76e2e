"""Ground truth at tiny sizes: full pairing enumeration and closed-form moments.

Enumeration walks every perfect matching of the half-edges exactly once
(there are (total-1)!! of them), so the resulting collision-count
distribution is exact, with probabilities kept as rationals. The closed
forms below give exact finite-size expectations for loop and parallel-pair
counts at any size; enumeration cross-checks them at small sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .degrees import BipartiteDegreePair, DegreeSequence
from .errors import SameVertexError, TooLargeError

__all__ = [
    "ExactSummary",
    "double_factorial_odd",
    "enumerate_exact",
    "enumerate_bipartite_exact",
    "enumerate_moment_table",
    "expected_loops",
    "expected_loops_factorial",
    "expected_parallel_pairs",
    "expected_collision_total",
    "expected_collision_total_bipartite",
]

DEFAULT_MAX_TOTAL = 16
DEFAULT_MAX_TOTAL_BIPARTITE = 10


@dataclass(frozen=True)
class ExactSummary:
    """Exact collision-count distribution from exhaustive enumeration."""

    num_matchings: int
    prob_simple: Fraction
    z_pmf: dict[int, Fraction]
    moments: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "num_matchings": self.num_matchings,
            "prob_simple": float(self.prob_simple),
            "prob_simple_exact": str(self.prob_simple),
            "z_pmf": [[z, float(p)] for z, p in sorted(self.z_pmf.items())],
            "moments": list(self.moments),
        }


def double_factorial_odd(m: int) -> int:
    """(m)!! for odd m >= -1; the number of perfect matchings of m+1 points."""
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def _owners(ds: DegreeSequence) -> list[int]:
    out: list[int] = []
    for v, d in enumerate(ds.degrees):
        out.extend([v] * d)
    return out


def _hist_to_summary(z_hist: dict[int, int], total_weight: int, n_moments: int) -> ExactSummary:
    pmf = {z: Fraction(c, total_weight) for z, c in sorted(z_hist.items())}
    moments = tuple(
        float(sum(c * z**m for z, c in z_hist.items()) / Fraction(total_weight))
        for m in range(1, n_moments + 1)
    )
    return ExactSummary(
        num_matchings=total_weight,
        prob_simple=pmf.get(0, Fraction(0)),
        z_pmf=pmf,
        moments=moments,
    )


def enumerate_exact(
    ds: DegreeSequence, max_total: int = DEFAULT_MAX_TOTAL, n_moments: int = 4
) -> ExactSummary:
    """Visit all (total-1)!! pairings and tally the collision count of each.

    The collision count is loops plus unordered pairs of parallel edges;
    zero exactly when the multigraph is simple. Refuses totals above
    ``max_total`` (the default, 16, means about two million matchings).
    """
    if ds.total > max_total:
        raise TooLargeError(f"total {ds.total} exceeds enumeration cap {max_total}")
    owners = _owners(ds)
    z_hist: dict[int, int] = {}
    mult: dict[tuple[int, int], int] = {}

    free = list(range(ds.total))

    def recurse(loops: int, ypairs: int) -> None:
        if not free:
            z = loops + ypairs
            z_hist[z] = z_hist.get(z, 0) + 1
            return
        a = free[0]
        rest = free[1:]
        for k in range(len(rest)):
            b = rest[k]
            free[:] = rest[:k] + rest[k + 1 :]
            i, j = owners[a], owners[b]
            if i == j:
                recurse(loops + 1, ypairs)
            else:
                key = (i, j) if i < j else (j, i)
                c = mult.get(key, 0)
                mult[key] = c + 1
                recurse(loops, ypairs + c)
                if c:
                    mult[key] = c
                else:
                    del mult[key]
        free[:] = [a] + rest

    recurse(0, 0)
    total_weight = sum(z_hist.values())
    expected = double_factorial_odd(ds.total - 1) if ds.total else 1
    assert total_weight == expected, "enumeration missed matchings"
    return _hist_to_summary(z_hist, total_weight, n_moments)


def enumerate_bipartite_exact(
    bp: BipartiteDegreePair,
    max_total: int = DEFAULT_MAX_TOTAL_BIPARTITE,
    n_moments: int = 4,
) -> ExactSummary:
    """Exact collision-count distribution over all left-to-right pairings.

    Walks distinct right-owner arrangements, weighting each by the number of
    half-edge bijections that induce it; the weights sum to total!.
    """
    if bp.total > max_total:
        raise TooLargeError(f"total {bp.total} exceeds bipartite enumeration cap {max_total}")
    left = []
    for v, d in enumerate(bp.s):
        left.extend([v] * d)
    remaining = list(bp.t)
    z_hist: dict[int, int] = {}
    mult: dict[tuple[int, int], int] = {}

    def recurse(slot: int, weight: int, ypairs: int) -> None:
        if slot == bp.total:
            z_hist[ypairs] = z_hist.get(ypairs, 0) + weight
            return
        i = left[slot]
        for j, r in enumerate(remaining):
            if r == 0:
                continue
            remaining[j] = r - 1
            key = (i, j)
            c = mult.get(key, 0)
            mult[key] = c + 1
            recurse(slot + 1, weight * r, ypairs + c)
            if c:
                mult[key] = c
            else:
                del mult[key]
            remaining[j] = r

    recurse(0, 1, 0)
    total_weight = sum(z_hist.values())
    assert total_weight == factorial(bp.total), "bipartite enumeration missed pairings"
    return _hist_to_summary(z_hist, total_weight, n_moments)


def enumerate_moment_table(
    ds: DegreeSequence, max_total: int = 12
) -> tuple[list[float], list[float], dict[tuple[int, int], float]]:
    """Enumeration-derived per-vertex and per-pair expectations.

    Returns ``(loop_mean, loop_second_factorial, pair_mean)`` where the lists
    are indexed by vertex and the dict maps ordered vertex pairs (i < j) to
    the expected number of parallel-edge pairs between them. Used to
    cross-check the closed forms.
    """
    if ds.total > max_total:
        raise TooLargeError(f"total {ds.total} exceeds cap {max_total}")
    owners = _owners(ds)
    n = ds.n
    loop1 = [0] * n
    loop2 = [0] * n
    ysum: dict[tuple[int, int], int] = {}
    count = 0
    loops_at = [0] * n
    mult: dict[tuple[int, int], int] = {}
    free = list(range(ds.total))

    def harvest() -> None:
        nonlocal count
        count += 1
        for v in range(n):
            x = loops_at[v]
            if x:
                loop1[v] += x
                loop2[v] += x * (x - 1)
        for key, c in mult.items():
            if c >= 2:
                ysum[key] = ysum.get(key, 0) + c * (c - 1) // 2

    def recurse() -> None:
        if not free:
            harvest()
            return
        a = free[0]
        rest = free[1:]
        for k in range(len(rest)):
            b = rest[k]
            free[:] = rest[:k] + rest[k + 1 :]
            i, j = owners[a], owners[b]
            if i == j:
                loops_at[i] += 1
                recurse()
                loops_at[i] -= 1
            else:
                key = (i, j) if i < j else (j, i)
                mult[key] = mult.get(key, 0) + 1
                recurse()
                if mult[key] == 1:
                    del mult[key]
                else:
                    mult[key] -= 1
        free[:] = [a] + rest

    recurse()
    loop_mean = [v / count for v in loop1]
    loop_second = [v / count for v in loop2]
    pair_mean = {key: v / count for key, v in sorted(ysum.items())}
    return loop_mean, loop_second, pair_mean


# ---------------------------------------------------------------------------
# Closed-form finite-size expectations
# ---------------------------------------------------------------------------


def expected_loops(ds: DegreeSequence, i: int) -> float:
    """Exact expected number of loops at vertex i: C(d_i, 2) / (total - 1)."""
    d = ds.degrees[i]
    if d < 2:
        return 0.0
    return d * (d - 1) / 2 / (ds.total - 1)


def expected_loops_factorial(ds: DegreeSequence, i: int, ell: int) -> float:
    """Exact ell-th factorial moment of the loop count at vertex i.

    Choosing an ordered run of ell disjoint loops at i uses 2*ell distinct
    half-edges, which can be picked in (d_i falling 2*ell) / 2^ell ways, and
    each set of ell fixed disjoint pairs is matched with probability
    1 / ((total-1)(total-3)...(total-2*ell+1)).
    """
    if ell < 0:
        raise ValueError("order must be nonnegative")
    if ell == 0:
        return 1.0
    d = ds.degrees[i]
    if d < 2 * ell or ds.total < 2 * ell:
        return 0.0
    num = 1
    for k in range(2 * ell):
        num *= d - k
    den = 2**ell
    for k in range(1, ell + 1):
        den *= ds.total - 2 * k + 1
    return num / den


def expected_parallel_pairs(ds: DegreeSequence, i: int, j: int) -> float:
    """Exact expected number of unordered parallel-edge pairs between i and j."""
    if i == j:
        raise SameVertexError(f"vertex pair requires distinct endpoints, got {i},{j}")
    di, dj = ds.degrees[i], ds.degrees[j]
    if di < 2 or dj < 2:
        return 0.0
    return di * dj * (di - 1) * (dj - 1) / (2 * (ds.total - 1) * (ds.total - 3))


def expected_collision_total(ds: DegreeSequence) -> float:
    """Exact expected collision count, by linearity over loops and pairs.

    Uses the grouped identity sum_{i<j} w_i w_j = ((sum w)^2 - sum w^2)/2
    with w_i = d_i (d_i - 1), so the cost is linear in the vertex count.
    """
    N = ds.total
    w_sum = 0
    w_sq = 0
    for d in ds.degrees:
        w = d * (d - 1)
        w_sum += w
        w_sq += w * w
    loop_part = (w_sum / 2) / (N - 1) if N >= 2 else 0.0
    pair_part = (w_sum * w_sum - w_sq) / (4 * (N - 1) * (N - 3)) if N >= 4 else 0.0
    return loop_part + pair_part


def expected_collision_total_bipartite(bp: BipartiteDegreePair) -> float:
    """Exact expected collision count for the bipartite pairing.

    Each unordered pair of disjoint cross pairs between a left vertex of
    degree s and a right vertex of degree t is matched with probability
    1/(N(N-1)), giving E pairs = s(s-1)t(t-1) / (2 N (N-1)); sum over all
    vertex pairs factorizes into side sums.
    """
    N = bp.total
    if N < 2:
        return 0.0
    ws = sum(a * (a - 1) for a in bp.s)
    wt = sum(b * (b - 1) for b in bp.t)
    return ws * wt / (2 * N * (N - 1))
