"""Acceptance gate: one test per release criterion, tolerances pinned.

Each test prints a single `criterion NN: PASS` line with the measured
numbers when it succeeds (run with -s to see them); a failure reads as the
criterion number in the pytest report. Monte Carlo criteria (09, 10) use a
fixed master seed; their expected values were pinned by a pilot run and are
asserted exactly, on top of the inequality the criterion actually states.

Criterion 11 carries one corpus entry whose documented classification
contradicts the brute-force derivation; it is kept as a strict xfail next
to a companion test asserting the derived truth.
"""

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from squareperc import (
    DivergenceKind,
    ExplorationConfig,
    ExplorationVariant,
    GnpParams,
    Graph,
    OffspringLaw,
    SeedSpec,
    Variant,
    VertexPair,
    binomial_tail,
    check_superset,
    classify_divergence,
    count_induced_squares,
    dwass_progeny_pmf,
    extinction_probability,
    is_cfs,
    lambda_critical,
    many_squares_check,
    offspring_mean,
    offspring_pmf,
    pair_from_index,
    pair_index,
    run_trial,
    sample_gnp,
    simulate_gw_batch,
    square_components,
    suggest_cap,
    sweep,
    wilson_interval,
)

from conftest import complete_bipartite, cycle, path
from oracles import brute_count_induced_squares, brute_partition, brute_supports, graph_edges

MASTER = 1729  # master seed for the pinned Monte Carlo criteria


def _pass(cid: int, detail: str) -> None:
    print(f"criterion {cid:02d}: PASS -- {detail}")


def graph_from_mask(n: int, mask: int) -> Graph:
    m = n * (n - 1) // 2
    edges = [tuple(pair_from_index(i, n)) for i in range(m) if mask >> i & 1]
    return Graph.from_edges(n, edges)


def test_criterion_01_lambda_critical():
    lam = lambda_critical()
    assert abs(lam - math.sqrt(math.sqrt(6.0) - 2.0)) <= 1e-12
    residual = 0.5 * lam**4 + 2.0 * lam**2 - 1.0
    assert abs(residual) <= 1e-12
    _pass(1, f"lambda_c={lam!r}, residual={residual:.3e}")


def test_criterion_02_offspring_mean_critical():
    mean = offspring_mean(10**6, lambda_critical() / 10**3)
    assert abs(mean - 1.0) <= 1e-3
    _pass(2, f"offspring mean at criticality = {mean!r}")


def test_criterion_03_square_graph_oracle_equivalence():
    t0 = time.perf_counter()
    ps = (0.3, 0.5, 0.7)
    checked = 0
    for i in range(200):
        n = 4 + i % 9
        p = ps[i % 3]
        g = sample_gnp(GnpParams(n=n, p=p), SeedSpec(master_seed=90210, trial_index=i))
        edges = graph_edges(g)
        for variant, induced in ((Variant.INDUCED, True), (Variant.RELAXED, False)):
            lab = square_components(g, variant)
            expected = {
                frozenset(pair_index(u, v, n) for u, v in comp)
                for comp in brute_partition(edges, n, induced)
            }
            assert lab.partition() == expected
            checked += 1
        assert count_induced_squares(g) == brute_count_induced_squares(edges, n)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    _pass(3, f"{checked} partitions equal brute force in {elapsed:.1f}s")


def test_criterion_04_dwass_exactness():
    t0 = time.perf_counter()
    law = OffspringLaw(np.array([0.5, 0.0, 0.5]))
    k_max = 60
    pmf = dwass_progeny_pmf(law, k_max)
    assert abs(pmf[0] - 0.5) <= 1e-12
    assert abs(pmf[1] - 0.0) <= 1e-12
    assert abs(pmf[2] - 0.125) <= 1e-12

    runs = 10**5
    results = simulate_gw_batch(law, runs, max_progeny=10**5, seed=SeedSpec(2718, 0))
    emp = np.zeros(k_max)
    tail_emp = 0
    for r in results:
        w = r.total_progeny
        if not r.truncated and w <= k_max:
            emp[w - 1] += 1
        else:
            tail_emp += 1
    emp /= runs
    tail_exact = 1.0 - float(pmf.sum())
    tv = 0.5 * (float(np.abs(pmf - emp).sum()) + abs(tail_exact - tail_emp / runs))
    elapsed = time.perf_counter() - t0
    assert tv < 0.01
    assert elapsed < 30.0
    _pass(4, f"P(W=1,2,3) exact, TV={tv:.4f} over {runs} runs in {elapsed:.1f}s")


def test_criterion_05_extinction_fixed_points():
    quarter = OffspringLaw(np.array([0.25, 0.0, 0.75]))
    theta = extinction_probability(quarter)
    assert abs(theta - 1.0 / 3.0) <= 1e-10

    sub = offspring_pmf(10**4, 0.5 / 100, suggest_cap(10**4, 0.5 / 100))
    theta_sub = extinction_probability(sub)
    assert theta_sub >= 1.0 - 1e-6

    sup = offspring_pmf(10**4, 1.0 / 100, suggest_cap(10**4, 1.0 / 100))
    theta_sup = extinction_probability(sup)
    assert theta_sup < 1.0
    assert abs(sup.pgf(theta_sup) - theta_sup) < 1e-10
    _pass(5, f"theta(1/4,3/4)={theta!r}, subcritical={theta_sub}, supercritical={theta_sup:.6f}")


def test_criterion_06_subcritical_generation_tail():
    t0 = time.perf_counter()
    law = OffspringLaw(np.array([0.6, 0.0, 0.4]))  # mean 0.8
    assert law.mean() == pytest.approx(0.8, abs=0)
    runs = 10**5
    results = simulate_gw_batch(law, runs, max_progeny=10**6, seed=SeedSpec(806, 0))
    assert not any(r.truncated for r in results)
    gens = np.array([r.generations for r in results])
    worst_margin = math.inf
    for k in range(1, 11):
        surv = float((gens >= k).sum()) / runs
        bound = 0.8**k
        limit = bound + 3.0 * math.sqrt(bound * (1.0 - bound) / runs)
        assert surv <= limit, f"generation {k}: {surv} > {limit}"
        worst_margin = min(worst_margin, limit - surv)
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    _pass(6, f"survival <= 0.8^k + 3SE for k=1..10 (min margin {worst_margin:.4f}) in {elapsed:.1f}s")


def test_criterion_07_binomial_tail_lemma():
    n = 10**4
    q = (0.6 / 100) ** 2
    tails = {}
    for k in (1, 10, 100):
        t = 9.0 * math.log(n) + 9.0 * math.log(k)
        tails[k] = binomial_tail(n, q, t)
        assert tails[k] <= 1e-20 * k**-6
        assert tails[k] > 0.0  # log-space sum must not underflow to a fake zero
    _pass(7, "tail bounds hold: " + ", ".join(f"k={k}: {v:.2e}" for k, v in tails.items()))


def test_criterion_08_exploration_superset():
    t0 = time.perf_counter()
    cfg = ExplorationConfig(variant=ExplorationVariant.SUBCRITICAL)
    checks = 0

    # exhaustive tier: every graph and every start pair for n <= 5
    for n in range(2, 6):
        m = n * (n - 1) // 2
        starts = [VertexPair(u, v) for u in range(n) for v in range(u + 1, n)]
        for mask in range(1 << m):
            g = graph_from_mask(n, mask)
            for start in starts:
                assert check_superset(g, start, cfg)
                checks += 1

    # sampled canonical tier for n = 6, 7: seeded masks, all start pairs
    rng = np.random.default_rng(31337)
    for n in (6, 7):
        m = n * (n - 1) // 2
        starts = [VertexPair(u, v) for u in range(n) for v in range(u + 1, n)]
        for mask in rng.integers(0, 1 << m, size=256, dtype=np.int64):
            g = graph_from_mask(n, int(mask))
            for start in starts:
                assert check_superset(g, start, cfg)
                checks += 1

    # sparse-regime tier at simulation scale
    params = GnpParams.from_lambda(60, 0.45)
    n_pairs = 60 * 59 // 2
    for trial in range(500):
        g = sample_gnp(params, SeedSpec(master_seed=60045, trial_index=trial))
        start = pair_from_index(trial % n_pairs, 60)
        assert check_superset(g, start, cfg)
        checks += 1

    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    _pass(8, f"{checks} explorations verified (every extinction stop contained the true component) in {elapsed:.1f}s")


def test_criterion_09_phase_transition_separation():
    sub = [run_trial(2000, 0.45, MASTER, t) for t in range(200)]
    sup = [run_trial(2000, 1.5, MASTER, t) for t in range(200)]
    k_sub = sum(r.full_support for r in sub)
    k_sup = sum(r.full_support for r in sup)
    frac_sub, frac_sup = k_sub / 200.0, k_sup / 200.0
    lo_sub, hi_sub = wilson_interval(k_sub, 200)
    lo_sup, hi_sup = wilson_interval(k_sup, 200)
    small = sum(r.largest_support <= 200 for r in sub)

    # the criterion's inequalities
    assert frac_sub <= 0.10
    assert frac_sup >= 0.90
    assert hi_sub < lo_sup  # disjoint 95% Wilson intervals
    assert small >= 190  # largest_support <= n/10 in >= 95% of subcritical trials

    # golden values frozen from the pilot run at this master seed
    assert k_sub == 0
    assert k_sup == 200
    assert small == 200
    assert max(r.largest_support for r in sub) == 38
    assert min(r.largest_support for r in sub) == 12
    assert hi_sub == pytest.approx(0.018845326377266575, rel=1e-12)
    assert lo_sup == pytest.approx(0.9811546736227335, rel=1e-12)
    _pass(
        9,
        f"frac(0.45)={frac_sub}, frac(1.5)={frac_sup}, "
        f"CI gap [{hi_sub:.4f}, {lo_sup:.4f}], small-support {small}/200",
    )


def test_criterion_10_many_squares_lower_bound():
    report = many_squares_check(3000, 1.0, trials=20, master_seed=MASTER)
    ratios = [t["ratio"] for t in report["trials"]]
    hits = sum(r >= 0.5 for r in ratios)
    assert hits >= 18  # >= 90% of trials meet the halved analytic bound

    # golden values frozen from the pilot run at this master seed
    assert hits == 20
    assert report["theta_e"] == pytest.approx(0.44332215844236433, rel=1e-12)
    assert report["analytic_lower_bound"] == pytest.approx(602396.9808147869, rel=1e-9)
    assert ratios[0] == pytest.approx(1.4289165241760302, rel=1e-9)
    _pass(10, f"{hits}/20 trials >= half the bound, min ratio {min(ratios):.3f}")


DOMINO = Graph.from_edges(6, [(0, 1), (2, 3), (4, 5), (0, 2), (2, 4), (1, 3), (3, 5)])


def test_criterion_11_divergence_golden_corpus():
    c4 = cycle(4)
    assert is_cfs(c4)
    c4_class = classify_divergence(c4)
    assert c4_class.kind is DivergenceKind.LINEAR
    assert c4_class.witness["join_side_a"] == [0, 2]
    assert c4_class.witness["join_side_b"] == [1, 3]

    c5 = cycle(5)
    assert not is_cfs(c5)
    assert classify_divergence(c5).kind is DivergenceKind.AT_LEAST_CUBIC

    p4 = path(4)
    assert not is_cfs(p4)
    assert classify_divergence(p4).kind is DivergenceKind.AT_LEAST_CUBIC

    k23 = complete_bipartite(2, 3)
    assert is_cfs(k23)
    assert classify_divergence(k23).kind is DivergenceKind.LINEAR

    k5 = Graph.from_edges(5, [(u, v) for u in range(5) for v in range(u + 1, 5)])
    assert is_cfs(k5)  # complete graphs count as constructed-from-squares
    assert classify_divergence(k5).kind is DivergenceKind.FINITE_OR_NEAR_FINITE

    # brute-force derivation of the support facts behind the CFS answers
    assert brute_supports(graph_edges(c4), 4, induced=True) == [(2, 4)]
    assert max(s for _, s in brute_supports(graph_edges(c5), 5, induced=True)) < 5
    _pass(11, "C4/C5/P4/K23/K5 classifications match the brute-force derivation")


@pytest.mark.xfail(
    strict=True,
    reason=(
        "documented corpus entry conflicts with the brute-force derivation: "
        "the shared-edge domino's square-graph has two components whose supports "
        "have size 4 < 6, so the graph is not constructed from squares"
    ),
)
def test_criterion_11_two_squares_sharing_an_edge_documented_claim():
    assert is_cfs(DOMINO)
    assert classify_divergence(DOMINO).kind is DivergenceKind.QUADRATIC


def test_criterion_11_two_squares_sharing_an_edge_derived_truth():
    supports = brute_supports(graph_edges(DOMINO), 6, induced=True)
    assert max(s for _, s in supports if s > 2) == 4  # no full-support component
    assert not is_cfs(DOMINO)
    assert classify_divergence(DOMINO).kind is DivergenceKind.AT_LEAST_CUBIC
    _pass(11, "domino derived truth: not CFS, at-least-cubic divergence")


def test_criterion_12_sweep_determinism(tmp_path):
    args = [
        sys.executable, "-m", "squareperc.cli", "sweep",
        "--n", "64,96", "--lambda", "0.4,0.9,1.4", "--trials", "8", "--seed", "99",
    ]
    out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
    subprocess.run(args + ["--out", str(out_a)], check=True, capture_output=True)
    subprocess.run(args + ["--out", str(out_b)], check=True, capture_output=True)
    assert out_a.read_bytes() == out_b.read_bytes()

    # worker parallelism completes trials out of order; output must not move
    grid = [0.4, 0.9, 1.4]
    serial = sweep([64, 96], grid, trials=8, master_seed=99, jobs=1)
    pooled = sweep([64, 96], grid, trials=8, master_seed=99, jobs=2)
    assert [r.to_csv_line() for r in serial] == [r.to_csv_line() for r in pooled]
    lines = out_a.read_text().splitlines()[1:]
    assert lines == [r.to_csv_line() for r in serial]
    _pass(12, f"byte-identical CSV across reruns and jobs=1 vs jobs=2 ({len(lines)} rows)")


def test_criterion_13_plotter_renders(tmp_path):
    pytest.importorskip("squareperc_plotter")
    data = Path(__file__).resolve().parent.parent / "plotter" / "tests" / "data"
    if not data.is_dir():
        pytest.skip("plotter fixtures not present")
    from squareperc_plotter import PlotSpec, render_phase, render_progeny

    phase = render_phase(PlotSpec(str(data / "golden_sweep.csv"), str(tmp_path / "p.svg"), kind="phase"))
    assert phase["bytes"] > 0

    progeny = render_progeny(
        PlotSpec(
            str(data / "dwass_half.json"), str(tmp_path / "w.svg"),
            kind="progeny", sim_path=str(data / "sim_half.json"),
        )
    )
    assert progeny["bytes"] > 0
    markers = dict(progeny["markers"])
    assert markers[1] == 0.5
    assert markers[3] == 0.125

    header, row = (data / "golden_sweep.csv").read_text().splitlines()[:2]
    cols = header.split(",")
    drop = cols.index("wilson_ci_low")
    bad = tmp_path / "bad.csv"
    bad.write_text(
        ",".join(c for i, c in enumerate(cols) if i != drop) + "\n"
        + ",".join(c for i, c in enumerate(row.split(",")) if i != drop) + "\n"
    )
    proc = subprocess.run(
        [sys.executable, "-m", "squareperc_plotter.cli", "phase",
         "--in", str(bad), "--out", str(tmp_path / "x.svg")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert "wilson_ci_low" in proc.stderr
    _pass(13, "plotter renders both fixture figures; schema violation names the column")
