"""Uniform half-edge pairings (general and bipartite) and collision statistics.

The single-draw sampler builds an explicit pairing object: it repeatedly
joins the lowest-indexed unmatched half-edge to a uniformly chosen other
unmatched half-edge via a swap-based free list, which is O(total) and
yields every perfect matching with probability 1/(total-1)!!. Large Monte
Carlo runs go through the batch kernels in :mod:`confmodel._mc`, which
sample the same distribution but only return collision counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import numpy as np

from . import _mc
from .degrees import BipartiteDegreePair, DegreeSequence
from .errors import ExhaustedError

__all__ = [
    "Pairing",
    "CollisionStats",
    "as_generator",
    "sample_pairing",
    "sample_bipartite_pairing",
    "collision_stats",
    "rejection_sample_simple",
    "pairing_edges",
    "write_edge_list",
    "collision_counts",
    "collision_counts_bipartite",
]


def as_generator(seed) -> np.random.Generator:
    """Coerce a seed-like value into a PCG64 generator (128-bit state)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class Pairing:
    """A fixed-point-free involution on half-edge slots plus slot ownership.

    For bipartite pairings, slots 0..total-1 are the left half-edges and
    slots total..2*total-1 the right ones; right vertices are labeled with
    an offset of ``n_left`` so every vertex id is unique.
    """

    match: np.ndarray
    owner: np.ndarray
    n_vertices: int
    n_left: int | None = None  # set only for bipartite pairings

    def __post_init__(self) -> None:
        m = self.match
        if m.size and not (
            np.all(m[m] == np.arange(m.size)) and np.all(m != np.arange(m.size))
        ):
            raise ValueError("match must be an involution without fixed points")

    @property
    def n_half_edges(self) -> int:
        return int(self.match.size)


@dataclass(frozen=True)
class CollisionStats:
    """Loop and parallel-edge tallies for one pairing.

    ``z`` is the number of loops plus the number of unordered pairs of
    parallel edges; the multigraph is simple exactly when ``z == 0``.
    """

    loop_counts: dict[int, int]
    edge_multiplicities: dict[tuple[int, int], int]
    y_total: int
    z: int
    simple: bool


def _owner_array(ds: DegreeSequence) -> np.ndarray:
    return np.repeat(np.arange(ds.n, dtype=np.int64), np.asarray(ds.degrees, dtype=np.int64))


def sample_pairing(ds: DegreeSequence, rng_seed=None) -> Pairing:
    """Draw one uniform perfect matching of the half-edges."""
    rng = as_generator(rng_seed)
    N = ds.total
    match = np.full(N, -1, dtype=np.int64)
    free = list(range(N))
    pos = list(range(N))

    def remove(h: int) -> None:
        k = pos[h]
        last = free[-1]
        free[k] = last
        pos[last] = k
        free.pop()

    for h in range(N):
        if match[h] >= 0:
            continue
        remove(h)
        partner = free[int(rng.integers(len(free)))]
        remove(partner)
        match[h] = partner
        match[partner] = h
    return Pairing(match=match, owner=_owner_array(ds), n_vertices=ds.n)


def sample_bipartite_pairing(bp: BipartiteDegreePair, rng_seed=None) -> Pairing:
    """Draw one uniform bijection between left and right half-edges."""
    rng = as_generator(rng_seed)
    N = bp.total
    perm = rng.permutation(N)
    match = np.empty(2 * N, dtype=np.int64)
    match[:N] = N + perm
    match[N + perm] = np.arange(N)
    left = np.repeat(np.arange(bp.n_left, dtype=np.int64), np.asarray(bp.s, dtype=np.int64))
    right = np.repeat(
        bp.n_left + np.arange(bp.n_right, dtype=np.int64), np.asarray(bp.t, dtype=np.int64)
    )
    owner = np.concatenate([left, right])
    return Pairing(match=match, owner=owner, n_vertices=bp.n_left + bp.n_right, n_left=bp.n_left)


def collision_stats(pairing: Pairing) -> CollisionStats:
    """Count loops and per-pair edge multiplicities for one pairing."""
    loops: dict[int, int] = {}
    mult: dict[tuple[int, int], int] = {}
    match = pairing.match
    owner = pairing.owner
    for h in range(match.size):
        p = int(match[h])
        if p < h:
            continue
        i, j = int(owner[h]), int(owner[p])
        if i == j:
            loops[i] = loops.get(i, 0) + 1
        else:
            key = (i, j) if i < j else (j, i)
            mult[key] = mult.get(key, 0) + 1
    y_total = sum(c * (c - 1) // 2 for c in mult.values())
    z = sum(loops.values()) + y_total
    return CollisionStats(
        loop_counts=loops,
        edge_multiplicities=mult,
        y_total=y_total,
        z=z,
        simple=(z == 0),
    )


def rejection_sample_simple(
    ds: DegreeSequence, rng_seed=None, max_tries: int | None = None
) -> tuple[Pairing, int]:
    """Resample pairings until the multigraph is simple.

    Conditioning on simplicity makes the induced simple graph uniform over
    all simple graphs with these degrees, since each corresponds to exactly
    prod(d_i!) pairings. The default retry budget is ten times the
    reciprocal of the closed-form simplicity prediction, with a floor of
    1000. Raises :class:`ExhaustedError` when the budget runs out.
    """
    if max_tries is None:
        from .surrogate import build, prob_simple_asymptotic

        predicted = prob_simple_asymptotic(build(ds))
        max_tries = max(1000, 10 * math.ceil(1.0 / predicted))
    rng = as_generator(rng_seed)
    for attempt in range(1, max_tries + 1):
        pairing = sample_pairing(ds, rng)
        if collision_stats(pairing).simple:
            return pairing, attempt
    raise ExhaustedError(max_tries)


def pairing_edges(pairing: Pairing) -> np.ndarray:
    """Edge list as an (edges, 2) array of vertex ids; loops appear as (u, u)."""
    match = pairing.match
    h = np.arange(match.size)
    sel = h < match
    u = pairing.owner[h[sel]]
    v = pairing.owner[match[sel]]
    return np.column_stack([u, v])


def write_edge_list(pairing: Pairing, dest: str | Path | TextIO) -> None:
    """Write the multigraph as CSV ``u,v`` lines, multiplicities preserved."""
    edges = pairing_edges(pairing)
    if hasattr(dest, "write"):
        for u, v in edges:
            dest.write(f"{u},{v}\n")
        return
    with Path(dest).open("w") as fh:
        for u, v in edges:
            fh.write(f"{u},{v}\n")


# ---------------------------------------------------------------------------
# Batch collision counts (Monte Carlo workhorse)
# ---------------------------------------------------------------------------


def collision_counts(
    ds: DegreeSequence, seed: int, n_rep: int, base_index: int = 0
) -> np.ndarray:
    """Collision counts of ``n_rep`` independent uniform pairings.

    Replicate ``r`` is drawn from a dedicated xoshiro256** stream indexed
    ``base_index + r``; see :mod:`confmodel._mc` for the derivation.
    """
    return _mc.collision_counts_batch(_owner_array(ds), ds.n, seed, n_rep, base_index)


def collision_counts_bipartite(
    bp: BipartiteDegreePair, seed: int, n_rep: int, base_index: int = 0
) -> np.ndarray:
    """Bipartite analogue of :func:`collision_counts` (no loops can occur)."""
    left = np.repeat(np.arange(bp.n_left, dtype=np.int64), np.asarray(bp.s, dtype=np.int64))
    right = np.repeat(np.arange(bp.n_right, dtype=np.int64), np.asarray(bp.t, dtype=np.int64))
    return _mc.collision_counts_batch_bipartite(
        left, right, bp.n_right, seed, n_rep, base_index
    )
