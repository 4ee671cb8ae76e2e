import math

import numpy as np
import pytest
from scipy import stats

from confmodel import degrees, exact, sampler
from confmodel.errors import ExhaustedError


def canonical_matching(pairing: sampler.Pairing) -> tuple:
    match = pairing.match
    return tuple(
        sorted((h, int(match[h])) for h in range(match.size) if h < match[h])
    )


def test_unique_matching_cases():
    p = sampler.sample_pairing(degrees.validate([1, 1]), 0)
    assert canonical_matching(p) == ((0, 1),)
    stats_ = sampler.collision_stats(p)
    assert stats_.z == 0 and stats_.simple

    p2 = sampler.sample_pairing(degrees.validate([2]), 0)
    s2 = sampler.collision_stats(p2)
    assert s2.loop_counts == {0: 1}
    assert s2.z == 1 and not s2.simple


def test_pairing_structure():
    ds = degrees.validate([3, 2, 1, 0, 2])
    p = sampler.sample_pairing(ds, 123)
    assert p.match.size == ds.total
    # owners reproduce the degree sequence
    counts = np.bincount(p.owner, minlength=ds.n)
    assert tuple(counts) == ds.degrees
    # edge endpoints reproduce the degree sequence too
    edges = sampler.pairing_edges(p)
    deg = np.zeros(ds.n, dtype=int)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    assert tuple(deg) == ds.degrees


def test_collision_stats_two_deg2():
    ds = degrees.validate([2, 2])
    seen = {}
    for seed in range(60):
        s = sampler.collision_stats(sampler.sample_pairing(ds, seed))
        seen[s.z] = seen.get(s.z, 0) + 1
        if s.z == 1:
            assert s.edge_multiplicities == {(0, 1): 2}
            assert s.y_total == 1
        else:
            assert s.z == 2 and s.loop_counts == {0: 1, 1: 1}
    assert set(seen) == {1, 2}


def test_sequential_sampler_uniform_over_matchings():
    # spec-scale check: 150k draws over the 15 matchings of [2,2,2]
    ds = degrees.validate([2, 2, 2])
    rng = np.random.Generator(np.random.PCG64(7))
    n_draws = 150_000
    counts: dict[tuple, int] = {}
    for _ in range(n_draws):
        key = canonical_matching(sampler.sample_pairing(ds, rng))
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 15
    expected = n_draws / 15
    se = math.sqrt(n_draws * (1 / 15) * (14 / 15))
    for c in counts.values():
        assert abs(c - expected) <= 4 * se
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < stats.chi2.ppf(0.999, df=14)


def test_sequential_sampler_z_matches_enumeration():
    ds = degrees.validate([4, 2, 2])
    summary = exact.enumerate_exact(ds)
    rng = np.random.Generator(np.random.PCG64(21))
    n_draws = 60_000
    hist: dict[int, int] = {}
    for _ in range(n_draws):
        z = sampler.collision_stats(sampler.sample_pairing(ds, rng)).z
        hist[z] = hist.get(z, 0) + 1
    support = sorted(summary.z_pmf)
    observed = [hist.get(z, 0) for z in support]
    expected = [float(summary.z_pmf[z]) * n_draws for z in support]
    chi2, p_value = stats.chisquare(observed, expected)
    assert p_value > 0.001


def test_batch_kernel_z_matches_enumeration():
    ds = degrees.validate([3, 3, 2])
    summary = exact.enumerate_exact(ds)
    z = sampler.collision_counts(ds, 2024, 1_000_000)
    support = sorted(summary.z_pmf)
    observed = [int((z == s).sum()) for s in support]
    assert sum(observed) == z.size  # no values outside exact support
    expected = [float(summary.z_pmf[s]) * z.size for s in support]
    chi2, p_value = stats.chisquare(observed, expected)
    assert p_value > 0.001


def test_pair_indicator_frequency():
    # matching probability of two fixed half-edges is 1/(total - 1)
    ds = degrees.validate([3, 2, 1])
    rng = np.random.Generator(np.random.PCG64(5))
    n_draws = 100_000
    hits = sum(
        1 for _ in range(n_draws) if sampler.sample_pairing(ds, rng).match[0] == 5
    )
    p = 1 / (ds.total - 1)
    se = math.sqrt(p * (1 - p) / n_draws)
    assert abs(hits / n_draws - p) <= 4 * se


def test_batch_kernel_deterministic_and_splittable():
    ds = degrees.make_regular(50, 3)
    a = sampler.collision_counts(ds, 9, 200)
    b = sampler.collision_counts(ds, 9, 200)
    assert np.array_equal(a, b)
    first = sampler.collision_counts(ds, 9, 120)
    second = sampler.collision_counts(ds, 9, 80, base_index=120)
    assert np.array_equal(a, np.concatenate([first, second]))
    assert not np.array_equal(a, sampler.collision_counts(ds, 10, 200))


def test_batch_kernel_thread_invariance():
    import numba

    ds = degrees.make_regular(100, 3)
    old = numba.get_num_threads()
    try:
        numba.set_num_threads(1)
        one = sampler.collision_counts(ds, 77, 500)
        numba.set_num_threads(max(2, old))
        two = sampler.collision_counts(ds, 77, 500)
    finally:
        numba.set_num_threads(old)
    assert np.array_equal(one, two)


def test_rejection_sampling_trivial_cases():
    _, tries = sampler.rejection_sample_simple(degrees.validate([1, 1]), 3)
    assert tries == 1
    with pytest.raises(ExhaustedError):
        sampler.rejection_sample_simple(degrees.validate([2]), 3, max_tries=64)


def test_rejection_sampling_try_count():
    ds = degrees.validate([2, 2, 2])
    rng = np.random.Generator(np.random.PCG64(11))
    runs = 4000
    total_tries = 0
    for _ in range(runs):
        pairing, tries = sampler.rejection_sample_simple(ds, rng)
        total_tries += tries
        assert sampler.collision_stats(pairing).simple
    mean = total_tries / runs
    p = 8 / 15
    se = math.sqrt((1 - p) / p**2 / runs)
    assert abs(mean - 15 / 8) <= 3 * se


def test_bipartite_unique_and_forced():
    p = sampler.sample_bipartite_pairing(degrees.validate_bipartite([1], [1]), 0)
    assert sampler.collision_stats(p).simple
    for seed in range(10):
        bp = degrees.validate_bipartite([2], [2])
        s = sampler.collision_stats(sampler.sample_bipartite_pairing(bp, seed))
        assert s.z == 1 and not s.simple
    for seed in range(10):
        bp = degrees.validate_bipartite([2], [1, 1])
        s = sampler.collision_stats(sampler.sample_bipartite_pairing(bp, seed))
        assert s.simple


def test_bipartite_owner_offsets():
    bp = degrees.validate_bipartite([2, 1], [1, 1, 1])
    p = sampler.sample_bipartite_pairing(bp, 4)
    assert p.n_left == 2
    edges = sampler.pairing_edges(p)
    assert edges.shape == (3, 2)
    assert set(edges[:, 0]) <= {0, 1}
    assert set(edges[:, 1]) <= {2, 3, 4}


def test_bipartite_batch_matches_enumeration():
    bp = degrees.validate_bipartite([3, 1], [2, 1, 1])
    summary = exact.enumerate_bipartite_exact(bp)
    z = sampler.collision_counts_bipartite(bp, 31, 400_000)
    support = sorted(summary.z_pmf)
    observed = [int((z == s).sum()) for s in support]
    assert sum(observed) == z.size
    expected = [float(summary.z_pmf[s]) * z.size for s in support]
    chi2, p_value = stats.chisquare(observed, expected)
    assert p_value > 0.001


def test_edge_list_output(tmp_path):
    p = sampler.sample_pairing(degrees.validate([2]), 0)
    path = tmp_path / "edges.csv"
    sampler.write_edge_list(p, path)
    assert path.read_text() == "0,0\n"
