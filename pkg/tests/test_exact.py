from fractions import Fraction

import pytest

from confmodel import degrees, exact
from confmodel.errors import SameVertexError, TooLargeError


def test_single_edge():
    summary = exact.enumerate_exact(degrees.validate([1, 1]))
    assert summary.num_matchings == 1
    assert summary.prob_simple == 1


def test_forced_loop():
    summary = exact.enumerate_exact(degrees.validate([2]))
    assert summary.num_matchings == 1
    assert summary.z_pmf == {1: Fraction(1)}


def test_two_deg2_vertices():
    summary = exact.enumerate_exact(degrees.validate([2, 2]))
    assert summary.num_matchings == 3
    assert summary.z_pmf == {1: Fraction(2, 3), 2: Fraction(1, 3)}
    assert summary.prob_simple == 0


def test_triangle_sequence():
    summary = exact.enumerate_exact(degrees.validate([2, 2, 2]))
    assert summary.num_matchings == 15
    assert summary.prob_simple == Fraction(8, 15)
    assert summary.moments[0] == pytest.approx(1.0, abs=1e-12)


def test_matching_counts_are_double_factorials():
    for degs in [(4,), (2, 1, 1), (3, 3), (2, 2, 2, 2), (3, 3, 2)]:
        ds = degrees.validate(degs)
        summary = exact.enumerate_exact(ds)
        assert summary.num_matchings == exact.double_factorial_odd(ds.total - 1)


def test_enumeration_cap():
    with pytest.raises(TooLargeError):
        exact.enumerate_exact(degrees.make_regular(6, 3))  # total 18 > 16


def test_expected_loops_values():
    ds = degrees.validate([2, 2, 2])
    assert exact.expected_loops(ds, 0) == pytest.approx(1 / 5)
    assert exact.expected_loops(degrees.validate([1, 1]), 0) == 0.0
    assert exact.expected_loops(degrees.validate([4, 2, 2]), 0) == pytest.approx(6 / 7)


def test_expected_loops_factorial_values():
    ds = degrees.validate([4, 2, 2])
    assert exact.expected_loops_factorial(ds, 0, 1) == pytest.approx(
        exact.expected_loops(ds, 0)
    )
    assert exact.expected_loops_factorial(ds, 0, 2) == pytest.approx(24 / 140)
    assert exact.expected_loops_factorial(ds, 1, 2) == 0.0  # degree 2 < 4


def test_expected_parallel_pairs_values():
    assert exact.expected_parallel_pairs(degrees.validate([2, 2, 2]), 0, 1) == pytest.approx(
        2 / 15
    )
    assert exact.expected_parallel_pairs(degrees.validate([3, 3, 2]), 0, 1) == pytest.approx(
        36 / 70
    )
    assert exact.expected_parallel_pairs(degrees.validate([1, 3, 2]), 0, 1) == 0.0
    with pytest.raises(SameVertexError):
        exact.expected_parallel_pairs(degrees.validate([2, 2]), 1, 1)


@pytest.mark.parametrize(
    "degs",
    [(2, 2, 2), (4, 2, 2), (3, 3, 2), (3, 3, 3, 3), (4, 4, 4), (5, 3, 2, 2), (2, 2, 1, 1)],
)
def test_closed_forms_match_enumeration(degs):
    ds = degrees.validate(degs)
    loop1, loop2, pair_mean = exact.enumerate_moment_table(ds)
    for i in range(ds.n):
        assert exact.expected_loops(ds, i) == pytest.approx(loop1[i], abs=1e-12)
        assert exact.expected_loops_factorial(ds, i, 2) == pytest.approx(
            loop2[i], abs=1e-12
        )
        for j in range(i + 1, ds.n):
            assert exact.expected_parallel_pairs(ds, i, j) == pytest.approx(
                pair_mean.get((i, j), 0.0), abs=1e-12
            )


@pytest.mark.parametrize(
    "degs",
    [(2, 2, 2), (4, 2, 2), (3, 3, 2), (3, 3, 3, 3), (2, 2, 2, 2, 2), (6, 2, 2, 1, 1)],
)
def test_mean_linearity(degs):
    # enumerated E[collisions] equals the sum of loop and pair closed forms
    ds = degrees.validate(degs)
    summary = exact.enumerate_exact(ds)
    assert summary.moments[0] == pytest.approx(
        exact.expected_collision_total(ds), rel=1e-12, abs=1e-12
    )


def test_bipartite_forced_double_edge():
    bp = degrees.validate_bipartite([2], [2])
    summary = exact.enumerate_bipartite_exact(bp)
    assert summary.z_pmf == {1: Fraction(1)}


def test_bipartite_always_simple():
    bp = degrees.validate_bipartite([2], [1, 1])
    summary = exact.enumerate_bipartite_exact(bp)
    assert summary.prob_simple == 1


def test_bipartite_mean_matches_closed_form():
    for s, t in [((2, 2), (2, 2)), ((3, 1), (2, 1, 1)), ((3, 2, 1), (2, 2, 2))]:
        bp = degrees.validate_bipartite(s, t)
        summary = exact.enumerate_bipartite_exact(bp)
        assert summary.moments[0] == pytest.approx(
            exact.expected_collision_total_bipartite(bp), rel=1e-12, abs=1e-12
        )


def test_bipartite_cap():
    with pytest.raises(TooLargeError):
        exact.enumerate_bipartite_exact(degrees.make_bipartite_ones(12))


def test_summary_serialization():
    d = exact.enumerate_exact(degrees.validate([2, 2])).to_dict()
    assert d["prob_simple_exact"] == "0"
    assert d["z_pmf"] == [[1, 2 / 3], [2, 1 / 3]]
