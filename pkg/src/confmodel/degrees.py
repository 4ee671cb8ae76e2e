"""Degree sequences: validation, summary statistics, and named generator families.

A degree sequence assigns each vertex a number of half-edges. The pairing
model only requires the total number of half-edges to be even; no
graphical-realizability check is performed (degree-0 vertices are fine,
they never participate in a pairing).
"""

from __future__ import annotations

import csv
import heapq
import json
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    EmptySequenceError,
    NegativeDegreeError,
    OddSumError,
    SideMismatchError,
    TooSmallError,
)

__all__ = [
    "DegreeSequence",
    "BipartiteDegreePair",
    "DegreeFamily",
    "validate",
    "validate_bipartite",
    "make_regular",
    "make_ones",
    "make_heavy_pair",
    "make_heavy_block",
    "make_split",
    "make_bipartite_ones",
    "make_bipartite_regular",
    "make_bipartite_counterexample",
    "parse_generator_spec",
    "parse_degree_source",
    "parse_bipartite_source",
    "family_from_spec",
    "load_degree_file",
    "save_degree_file",
]


@dataclass(frozen=True)
class DegreeSequence:
    """Immutable list of vertex degrees with cached summary statistics.

    Attributes
    ----------
    degrees : tuple of int
        Per-vertex degree, in vertex order.
    n : number of vertices.
    total : total number of half-edges (must be even).
    sum_d2 : sum of d*(d-1) over vertices, the collision-rate numerator.
    d_max : largest degree.
    """

    degrees: tuple[int, ...]
    n: int = field(init=False)
    total: int = field(init=False)
    sum_d2: int = field(init=False)
    d_max: int = field(init=False)

    def __post_init__(self) -> None:
        degrees = tuple(int(d) for d in self.degrees)
        if len(degrees) == 0:
            raise EmptySequenceError("degree sequence is empty")
        for d in degrees:
            if d < 0:
                raise NegativeDegreeError(f"negative degree {d}")
        total = sum(degrees)
        if total % 2 != 0:
            raise OddSumError(f"degree total {total} is odd; no pairing exists")
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "n", len(degrees))
        object.__setattr__(self, "total", total)
        object.__setattr__(self, "sum_d2", sum(d * (d - 1) for d in degrees))
        object.__setattr__(self, "d_max", max(degrees))

    @property
    def sum_squares(self) -> int:
        """Sum of squared degrees."""
        return self.sum_d2 + self.total

    def density_ratio(self) -> float:
        """sum(d_i^2) / total, the quantity whose boundedness controls simplicity."""
        return self.sum_squares / self.total if self.total else 0.0

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.degrees)


@dataclass(frozen=True)
class BipartiteDegreePair:
    """Left and right degree sequences with a common half-edge total."""

    s: tuple[int, ...]
    t: tuple[int, ...]
    total: int = field(init=False)

    def __post_init__(self) -> None:
        s = tuple(int(x) for x in self.s)
        t = tuple(int(x) for x in self.t)
        if len(s) == 0 or len(t) == 0:
            raise EmptySequenceError("bipartite degree sequences must be nonempty")
        for d in s + t:
            if d < 0:
                raise NegativeDegreeError(f"negative degree {d}")
        if sum(s) != sum(t):
            raise SideMismatchError(f"side totals differ: {sum(s)} vs {sum(t)}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "total", sum(s))

    @property
    def n_left(self) -> int:
        return len(self.s)

    @property
    def n_right(self) -> int:
        return len(self.t)


def validate(degrees: Iterable[int]) -> DegreeSequence:
    """Validate a raw degree list and return it with caches filled."""
    return DegreeSequence(tuple(degrees))


def validate_bipartite(s: Iterable[int], t: Iterable[int]) -> BipartiteDegreePair:
    """Validate a left/right degree pair with equal totals."""
    return BipartiteDegreePair(tuple(s), tuple(t))


# ---------------------------------------------------------------------------
# Named generator families
# ---------------------------------------------------------------------------


def make_regular(n: int, d: int) -> DegreeSequence:
    """n vertices of equal degree d. Requires n*d even."""
    if n <= 0:
        raise EmptySequenceError("need at least one vertex")
    if d < 0:
        raise NegativeDegreeError(f"negative degree {d}")
    if (n * d) % 2 != 0:
        raise OddSumError(f"n*d = {n * d} is odd")
    return DegreeSequence((d,) * n)


def make_ones(n: int) -> DegreeSequence:
    """A perfect matching's degree sequence: n vertices of degree 1 (n even)."""
    return make_regular(n, 1)


def make_heavy_pair(total: int) -> DegreeSequence:
    """Two vertices of degree ~sqrt(total), the rest degree 1.

    The two heavy vertices put the pairwise collision rate near its upper
    range while sum(d_i^2) stays O(total): the canonical borderline family.
    """
    if total % 2 != 0:
        raise OddSumError(f"total {total} is odd")
    if total < 4:
        raise TooSmallError(f"total {total} < 4 leaves no room for two heavy vertices")
    d = math.isqrt(total)
    while d > 1 and (total - 2 * d) < 0:
        d -= 1
    rest = total - 2 * d
    return DegreeSequence((d, d) + (1,) * rest)


def make_heavy_block(total: int, gamma: float = 0.6, block: int = 2) -> DegreeSequence:
    """`block` vertices of degree ceil(total**gamma), padded with degree-1 vertices.

    For gamma > 1/2 this family has sum(d_i^2)/total -> infinity, so the
    pairing is asymptotically never simple.
    """
    if total % 2 != 0:
        raise OddSumError(f"total {total} is odd")
    d = math.ceil(total**gamma)
    rest = total - block * d
    if rest < 0:
        raise TooSmallError(f"block of {block} degree-{d} vertices exceeds total {total}")
    degs = (d,) * block + (1,) * rest
    return DegreeSequence(degs)


def make_split(base: DegreeSequence, bound_factor: float) -> DegreeSequence:
    """Reduce sum(d_i^2) below bound_factor * total by peeling half-edges.

    Repeatedly move one half-edge from a currently-maximal-degree vertex to a
    fresh degree-1 vertex until sum(d_i^2) <= bound_factor * total. The
    half-edge total is preserved and the maximum degree never increases.
    Ties are broken toward the lowest vertex index, so the output is
    deterministic. Returns the input unchanged if it already satisfies the
    bound.
    """
    if bound_factor <= 1:
        raise ValueError(f"bound_factor must exceed 1, got {bound_factor}")
    total = base.total
    budget = bound_factor * total
    sum_sq = base.sum_squares
    if sum_sq <= budget:
        return base
    degs = list(base.degrees)
    heap = [(-d, i) for i, d in enumerate(degs) if d >= 2]
    heapq.heapify(heap)
    appended = 0
    while sum_sq > budget and heap:
        neg_d, i = heapq.heappop(heap)
        d = -neg_d
        degs[i] = d - 1
        appended += 1
        # d^2 -> (d-1)^2 + 1
        sum_sq -= 2 * d - 2
        if d - 1 >= 2:
            heapq.heappush(heap, (-(d - 1), i))
    return DegreeSequence(tuple(degs) + (1,) * appended)


def make_bipartite_ones(total: int) -> BipartiteDegreePair:
    """All degree-1 on both sides: a uniformly random bijection, always simple."""
    if total < 1:
        raise TooSmallError("need at least one edge")
    return BipartiteDegreePair((1,) * total, (1,) * total)


def make_bipartite_regular(total: int, s_deg: int = 2, t_deg: int = 2) -> BipartiteDegreePair:
    """Both sides regular: total/s_deg left vertices of degree s_deg, same on the right."""
    if s_deg <= 0 or t_deg <= 0:
        raise TooSmallError("regular bipartite degrees must be positive")
    if total % s_deg or total % t_deg:
        raise SideMismatchError(f"total {total} not divisible by degrees {s_deg},{t_deg}")
    return BipartiteDegreePair((s_deg,) * (total // s_deg), (t_deg,) * (total // t_deg))


def make_bipartite_counterexample(total: int) -> BipartiteDegreePair:
    """One near-total-degree left vertex against a single degree-2 right vertex.

    s = [total - m, 1 x m] with m = ceil(sqrt(total)); t = [2, 1 x (total-2)].
    The pairwise-rate condition is satisfied, yet the degree-2 right vertex
    sends both edges to the huge left vertex with probability 1 - o(1), so
    the pairing is almost never simple.
    """
    m = math.isqrt(total)
    if m * m < total:
        m += 1
    if total - m < 1 or total < 3:
        raise TooSmallError(f"total {total} too small for the counterexample shape")
    s = (total - m,) + (1,) * m
    t = (2,) + (1,) * (total - 2)
    return BipartiteDegreePair(s, t)


# ---------------------------------------------------------------------------
# Generator mini-language and degree-source parsing
# ---------------------------------------------------------------------------

_GENERATORS: dict[str, Callable[..., DegreeSequence]] = {
    "regular": lambda n, d: make_regular(int(n), int(d)),
    "ones": lambda n: make_ones(int(n)),
    "heavy_pair": lambda N: make_heavy_pair(int(N)),
    "heavy_block": lambda N, gamma=0.6, k=2: make_heavy_block(int(N), float(gamma), int(k)),
}

_BIPARTITE_GENERATORS: dict[str, Callable[..., BipartiteDegreePair]] = {
    "bi_ones": lambda N: make_bipartite_ones(int(N)),
    "bi_regular": lambda N, s=2, t=2: make_bipartite_regular(int(N), int(s), int(t)),
    "bi_counterexample": lambda N: make_bipartite_counterexample(int(N)),
}


def parse_generator_spec(spec: str) -> tuple[str, dict[str, float]]:
    """Split ``name:key=val,key=val`` into a name and a parameter dict."""
    name, _, rest = spec.partition(":")
    name = name.strip()
    params: dict[str, float] = {}
    if rest.strip():
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if not _ or not key.strip():
                raise ValueError(f"malformed generator parameter {item!r} in {spec!r}")
            params[key.strip()] = float(val)
    return name, params


def parse_degree_source(source: str) -> DegreeSequence:
    """Build a degree sequence from an inline JSON list, a generator spec, or a file path."""
    text = source.strip()
    if text.startswith("["):
        return validate(json.loads(text))
    name = text.partition(":")[0]
    if name in _GENERATORS:
        _, params = parse_generator_spec(text)
        return _GENERATORS[name](**params)
    path = Path(text)
    if path.exists():
        return load_degree_file(path)
    raise ValueError(f"unknown degree source {source!r}")


def parse_bipartite_source(source: str) -> BipartiteDegreePair:
    """Build a bipartite degree pair from a named generator spec."""
    name = source.strip().partition(":")[0]
    if name in _BIPARTITE_GENERATORS:
        _, params = parse_generator_spec(source.strip())
        return _BIPARTITE_GENERATORS[name](**params)
    raise ValueError(f"unknown bipartite generator {source!r}")


@dataclass(frozen=True)
class DegreeFamily:
    """A size-parameterized degree-sequence family for scaling studies."""

    label: str
    build: Callable[[int], DegreeSequence]
    bounded: bool  # whether sum(d_i^2)/total stays bounded along the family


def family_from_spec(spec: str) -> DegreeFamily:
    """Parse a family spec such as ``regular:d=3`` into a size->sequence builder.

    The free size parameter is the vertex count for ``regular``/``ones`` and
    the half-edge total for ``heavy_pair``/``heavy_block``.
    """
    name, params = parse_generator_spec(spec)
    if name == "regular":
        d = int(params.get("d", 3))
        return DegreeFamily(spec, lambda size: make_regular(size, d), bounded=True)
    if name == "ones":
        return DegreeFamily(spec, make_ones, bounded=True)
    if name == "heavy_pair":
        return DegreeFamily(spec, make_heavy_pair, bounded=True)
    if name == "heavy_block":
        gamma = float(params.get("gamma", 0.6))
        k = int(params.get("k", 2))
        return DegreeFamily(
            spec, lambda size: make_heavy_block(size, gamma, k), bounded=gamma <= 0.5
        )
    raise ValueError(f"unknown degree family {spec!r}")


# ---------------------------------------------------------------------------
# File I/O: JSON array or one-degree-per-line CSV
# ---------------------------------------------------------------------------


def load_degree_file(path: str | Path) -> DegreeSequence:
    path = Path(path)
    if path.suffix.lower() == ".json":
        return validate(json.loads(path.read_text()))
    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    return validate(int(row[0]) for row in rows)


def save_degree_file(ds: DegreeSequence, path: str | Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(list(ds.degrees)) + "\n")
    else:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            for d in ds.degrees:
                writer.writerow([d])
