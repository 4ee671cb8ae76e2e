"""Acceptance suite: one test per criterion, printing a pass/fail line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
complete. Configurations and tolerances are pinned here; several criteria
draw 10^6 or more replicates and the full module takes a few minutes.

Criterion 4a (first-moment gap scaled by sqrt(N) staying within a factor 3
across a 100x size range) is expected to fail for the 3-regular family, and
the failure is mathematical, not a code defect. Both sides of the gap are
closed forms: the pairing side is sum_i C(d_i,2)/(N-1) plus
sum_{i<j} d_i d_j (d_i-1)(d_j-1) / (2(N-1)(N-3)), the surrogate side is the
same sums with 1/(N-1) -> 1/N and 1/((N-1)(N-3)) -> 1/N^2. For fixed degree
d = 3 the difference is (1/(N-1) - 1/N)-type terms summed over n vertices
and ~n^2/2 pairs, which works out to exactly Theta(1/N) (about 5/N here; the
test prints gap*N to show it is flat). A 1/N gap times sqrt(N) decays like
1/sqrt(N) and therefore spans a factor sqrt(100) = 10 over a 100x size
range, so no implementation can keep it within a factor 3. The sqrt(N)
scaling is the right one only for degree sequences whose maximum degree
grows like sqrt(N) (the heavy-pair family); for bounded degrees the sharper
max-degree/N rate applies.
"""

import math
import time

import numpy as np

from confmodel import degrees, experiments as xp, surrogate as sg
from confmodel import cli
from confmodel.sampler import collision_counts


def _line(tag: str, ok: bool, detail: str) -> None:
    print(f"\nCRITERION {tag}: {'PASS' if ok else 'FAIL'} - {detail}", flush=True)


def test_criterion_1_oracle_equivalence():
    start = time.monotonic()
    report = xp.oracle_study(max_total=10, replicates=10**6, seed=101)
    elapsed = time.monotonic() - start
    n_sequences = sum(1 for k in report.verdicts if k.startswith("mc_vs_exact"))
    failures = [k for k, v in report.verdicts.items() if not v.passed]
    ok = not failures and n_sequences >= 30 and elapsed < 300
    _line(
        "1",
        ok,
        f"{n_sequences} sequences, MC(1e6) within 4 se of enumeration and closed "
        f"forms to 1e-10; {elapsed:.0f}s",
    )
    assert n_sequences >= 30
    assert not failures, f"failing checks: {failures}"
    assert elapsed < 300, f"runtime {elapsed:.0f}s exceeds 5 minutes"


def test_criterion_2_closed_form_consistency():
    model = sg.build(degrees.validate([2, 2, 2]))
    value = sg.prob_simple_asymptotic(model)
    target = (64 / 27) * math.exp(-1.5)
    gap_to_exact = abs(value - 8 / 15)
    ok = abs(value - target) <= 1e-10
    _line(
        "2",
        ok,
        f"prediction {value:.10f} vs (64/27)e^-1.5 (diff {abs(value - target):.2e}); "
        f"gap to exact 8/15 = {gap_to_exact:.5f} (reported, not asserted)",
    )
    assert abs(value - target) <= 1e-10


def test_criterion_3_prediction_at_scale():
    start = time.monotonic()
    replicates = 10**5
    results = []
    for k, n in enumerate((100, 1000, 10000)):
        ds = degrees.make_regular(n, 3)
        pred = sg.prob_simple_asymptotic(sg.build(ds))
        z = collision_counts(ds, xp.derive_seed(103, xp.TAG_Z, k), replicates)
        p_hat = float(np.mean(z == 0))
        se = math.sqrt(p_hat * (1 - p_hat) / replicates)
        bound = max(4 * se, 10 / n)
        results.append((n, p_hat, pred, bound, abs(p_hat - pred) <= bound))
    pred_large = sg.prob_simple_asymptotic(sg.build(degrees.make_regular(10000, 3)))
    limit_ok = abs(pred_large - math.exp(-2)) <= 0.002
    elapsed = time.monotonic() - start
    ok = all(r[4] for r in results) and limit_ok and elapsed < 600
    detail = "; ".join(
        f"n={n}: |{p:.5f}-{q:.5f}|<={b:.5f} {'ok' if good else 'FAIL'}"
        for n, p, q, b, good in results
    )
    _line("3", ok, f"{detail}; pred(1e4) within {abs(pred_large - math.exp(-2)):.1e} "
                   f"of e^-2; {elapsed:.0f}s")
    for n, p_hat, pred, bound, good in results:
        assert good, f"n={n}: |{p_hat} - {pred}| > {bound}"
    assert limit_ok
    assert elapsed < 600, f"runtime {elapsed:.0f}s exceeds 10 minutes"


def test_criterion_4a_first_moment_gap_sqrtN_factor():
    # Closed forms on both sides; sizes are vertex counts n (N = 3n).
    report = xp.moment_gap_study(
        degrees.family_from_spec("regular:d=3"),
        orders=[1],
        sizes=[300, 1000, 3000, 10**4, 3 * 10**4],
        replicates=1,
        seed=104,
    )
    verdict = report.verdicts["m1_sqrtN_within_factor"]
    scaled_by_N = [
        est.value for key, est in report.estimates.items() if key.startswith("gap_N[")
    ]
    flat_factor = max(scaled_by_N) / min(scaled_by_N)
    _line(
        "4a",
        verdict.passed,
        f"gap(N,1)*sqrt(N) max/min = {verdict.observed:.2f} (required <= 3.0); "
        f"gap(N,1)*N max/min = {flat_factor:.4f}, i.e. the true decay rate is 1/N "
        f"(criterion unattainable as stated for bounded degrees; see module docstring)",
    )
    assert verdict.passed, (
        f"gap(N,1)*sqrt(N) varies by factor {verdict.observed:.2f} > 3.0 across the "
        f"range; the exact first-moment gap for a fixed-degree family decays like "
        f"1/N (gap*N spans only {flat_factor:.4f}), so the sqrt(N)-scaled factor-3 "
        f"bound cannot hold over a 100x size range (see module docstring)"
    )


def test_criterion_4b_higher_moment_slopes():
    report = xp.moment_gap_study(
        degrees.family_from_spec("regular:d=3"),
        orders=[2, 3],
        sizes=[30, 100, 300, 1000],
        replicates=10**6,
        seed=104,
        slope_bound=-0.3,
    )
    v2, v3 = report.verdicts["slope[m=2]"], report.verdicts["slope[m=3]"]
    ok = v2.passed and v3.passed
    _line(
        "4b",
        ok,
        f"log-log slopes m=2: {v2.observed:.3f} ({v2.note}); "
        f"m=3: {v3.observed:.3f} ({v3.note}); required <= -0.3 with CI excluding 0",
    )
    assert v2.passed, f"m=2 slope {v2.observed:.3f}, {v2.note}"
    assert v3.passed, f"m=3 slope {v3.observed:.3f}, {v3.note}"


def test_criterion_5_tv_decreasing():
    report = xp.tv_study(
        degrees.family_from_spec("regular:d=3"),
        sizes=[30, 100, 300, 1000],
        replicates=10**6,
        seed=105,
    )
    values = [
        (key, est.value) for key, est in report.estimates.items() if key.startswith("tv[")
    ]
    verdict = report.verdicts["tv_decreasing"]
    _line(
        "5",
        verdict.passed,
        "tv " + " -> ".join(f"{v:.5f}" for _, v in values) + " over n=30,100,300,1000",
    )
    assert verdict.passed


def test_criterion_6_dichotomy():
    report = xp.dichotomy_sweep(
        [
            (degrees.family_from_spec("regular:d=3"), [100, 1000, 10000]),
            (degrees.family_from_spec("heavy_block:gamma=0.6,k=2"), [1000, 10000]),
        ],
        replicates=10**5,
        seed=106,
        bounded_floor=0.12,
        unbounded_ceiling=0.01,
    )
    vb = report.verdicts["bounded_floor[regular:d=3]"]
    vu = report.verdicts["unbounded_ceiling[heavy_block:gamma=0.6,k=2]"]
    ok = vb.passed and vu.passed
    _line(
        "6",
        ok,
        f"3-regular min p_hat {vb.observed:.4f} >= 0.12; "
        f"heavy-block p_hat at N=1e4 {vu.observed:.5f} <= 0.01",
    )
    assert vb.passed
    assert vu.passed


def test_criterion_7_bipartite():
    counter = xp.bipartite_conditions(
        degrees.make_bipartite_counterexample(10**4),
        m_max=3,
        replicates=2 * 10**4,
        seed=107,
    )
    p_counter = counter.estimates["p_simple"].value
    r1 = counter.references["pair_rate_sq_sum"]
    counter_ok = p_counter < 0.05 and r1 < 10

    tworeg = xp.bipartite_conditions(
        degrees.make_bipartite_regular(2000, 2, 2),
        m_max=2,
        replicates=10**5,
        seed=108,
    )
    match = tworeg.verdicts["prediction_match"]
    ok = counter_ok and match.passed
    _line(
        "7",
        ok,
        f"counterexample N=1e4: p_hat={p_counter:.4f} (<0.05) with rate ratio "
        f"{r1:.2f} (<10); all-2 N=2000: |p_hat - prediction| = {match.observed:.5f} "
        f"<= {match.threshold:.5f}",
    )
    assert counter_ok, f"p_hat={p_counter}, r1={r1}"
    assert match.passed, f"|p_hat - pred| = {match.observed} > {match.threshold}"


def test_criterion_8_moment_machinery():
    # h_1 closed form over [0, 5]
    grid = np.linspace(0.0, 5.0, 101)
    h1_worst = max(abs(sg.h_m(1, float(l)) - l * l / 2) for l in grid)
    h1_ok = h1_worst <= 1e-14

    # triple-root scaling of h_m near zero
    lam = 1e-4
    ratios = [sg.h_m(m, lam) / lam**3 for m in (2, 3)]
    root_ok = all(0.5 < r < 2.0 for r in ratios)

    bell = sg.moments_from_factorial([1, 1, 1, 1, 1])
    bell_ok = bell == [1, 2, 5, 15, 52]

    families = {
        "[2,2,2]": degrees.validate([2, 2, 2]),
        "regular(1000,3)": degrees.make_regular(1000, 3),
        "heavy_pair(10000)": degrees.make_heavy_pair(10**4),
    }
    mc_ok = True
    mc_details = []
    for idx, (label, ds) in enumerate(families.items()):
        model = sg.build(ds)
        z = sg.sample_zhat_batch(model, 10**7, np.random.SeedSequence([108, idx])).astype(
            np.float64
        )
        for m in (1, 2, 3, 4):
            zm = z**m
            se = float(zm.std() / math.sqrt(zm.size))
            diff = abs(float(zm.mean()) - sg.zhat_moment(model, m))
            good = diff <= 4 * se
            mc_ok = mc_ok and good
            if not good:
                mc_details.append(f"{label} m={m}: diff {diff:.4g} > 4se {4 * se:.4g}")
    ok = h1_ok and root_ok and bell_ok and mc_ok
    _line(
        "8",
        ok,
        f"h1 worst abs err {h1_worst:.1e} (<=1e-14); h_m/lam^3 at 1e-4 = "
        f"{ratios[0]:.3f},{ratios[1]:.3f}; Bell {bell}; surrogate moments vs 1e7-draw "
        f"MC within 4 se for m<=4 on 3 families"
        + ("" if mc_ok else f"; failures: {mc_details}"),
    )
    assert h1_ok
    assert root_ok
    assert bell_ok
    assert mc_ok, mc_details


def test_criterion_9_determinism(tmp_path):
    commands = [
        ["verify", "oracle", "--max-n", "6", "-r", "20000"],
        [
            "verify",
            "moment-gap",
            "--family",
            "regular:d=3",
            "--sizes",
            "10,30,100,300",
            "-m",
            "1,2",
            "-r",
            "20000",
        ],
        ["verify", "split", "--degrees", "[4,1,1,1,1]", "-r", "20000"],
    ]
    ok = True
    for idx, tail in enumerate(commands):
        paths = [tmp_path / f"run{idx}_{rep}.json" for rep in (0, 1)]
        for path in paths:
            code = cli.main(["--seed", "909", "--no-timestamp", "--out", str(path)] + tail)
            assert code in (0, 1)
        ok = ok and paths[0].read_bytes() == paths[1].read_bytes()
    _line("9", ok, f"{len(commands)} verify commands rerun byte-identically "
                   f"with fixed seed and --no-timestamp")
    assert ok
