"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and repeated in the pytest terminal summary
(see ``conftest.py``), so ``pytest tests/test_acceptance.py`` shows all ten
verdicts without ``-s``.
"""

import math
import random
import statistics
import time
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from citedisrupt.cli import main
from citedisrupt.disruption import DisruptionScore, annual_mean_cd, cd_all, cd_index
from citedisrupt.graph import build_graph
from citedisrupt.lexical import LexCorpus, SimonConfig, annual_lexical_stats, dilution_curve, simon_generate
from citedisrupt.series import AnnualSeries, SeriesPoint
from citedisrupt.synthetic import SimConfig, dilution_experiment, generate
from citedisrupt.weighted import (
    CitationWeight,
    WeightMode,
    annual_totals,
    citation_weights,
    fit_exponential,
    weighted_annual_mcd,
)
from oracle import FIVE_EDGES, FIVE_NODES, brute_cd, random_clean_graph

RESULTS: list[str] = []


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2} ({title}): {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _fixtures():
    """Named graphs used by the weighting criteria."""
    out = [("five-paper", build_graph(FIVE_NODES, FIVE_EDGES)[0])]
    fwd_nodes = {1: 2000, 2: 1995, 3: 2001, 4: 2002, 5: 2003, 6: 2009}
    fwd_edges = [(1, 2), (3, 1), (4, 1), (4, 2), (5, 2), (6, 1)]
    out.append(("forward", build_graph(fwd_nodes, fwd_edges)[0]))
    rng = random.Random(2024)
    for k in range(30):
        nodes, edges = random_clean_graph(rng, max_nodes=50, max_edges=300, span=12)
        out.append((f"random-{k}", build_graph(nodes, edges)[0]))
    out.append(("simulated", generate(SimConfig(n0=30, growth=0.05, years=12, seed=5))))
    return out


def test_criterion_01_oracle_equivalence():
    rng = random.Random(1)
    graphs = [random_clean_graph(rng, max_nodes=50, max_edges=300, span=12) for _ in range(200)]
    mismatches = 0
    checked = 0
    elapsed = 0.0
    for nodes, edges in graphs:
        g, report_ = build_graph(nodes, edges)
        assert report_.edges_dropped == 0
        t0 = time.perf_counter()
        scores = {p: cd_index(g, p) for p in nodes}
        elapsed += time.perf_counter() - t0
        for p, s in scores.items():
            n, total = brute_cd(nodes, edges, p)
            expected = None if n == 0 else Fraction(total, n)
            checked += 1
            if (s.n_t, s.sum, s.value) != (n, total, expected):
                mismatches += 1
    ok = mismatches == 0 and elapsed < 10
    report(1, "oracle equivalence", ok, f"{checked} papers in 200 graphs, {mismatches} mismatches, {elapsed:.2f}s < 10s")


def test_criterion_02_offset_example():
    g, _ = build_graph({1: 2000, 2: 2000}, [])
    scores = {1: DisruptionScore(1, 1, -1), 2: DisruptionScore(2, 1, 1)}
    weights = {1: CitationWeight(1, Fraction(2), WeightMode.RAW_COUNT), 2: CitationWeight(2, Fraction(1000), WeightMode.RAW_COUNT)}
    value = weighted_annual_mcd(scores, weights, g)[2000].value
    unweighted = annual_mean_cd(scores, g)[2000].value
    ok = value == Fraction(998, 1002) and abs(float(value) - 998 / 1002) < 1e-12 and unweighted == 0
    report(2, "weighted offset example", ok, f"mCD={float(value):.15f} (exact {value}), unweighted mean={unweighted}")


def test_criterion_03_uniform_collapse():
    failures = []
    for name, g in _fixtures():
        scores = cd_all(g)
        unweighted = annual_mean_cd(scores, g)
        for c in (Fraction(1), Fraction(7, 3)):
            for mode in WeightMode:
                uniform = {p: CitationWeight(p, c, mode) for p in g.papers}
                if weighted_annual_mcd(scores, uniform, g) != unweighted:
                    failures.append(f"{name}/{mode.value}/{c}")
    report(3, "uniform-weight collapse", not failures, f"{len(_fixtures())} fixtures x 3 modes x 2 weights, failures={failures}")


def test_criterion_04_range_and_scale():
    out_of_range = []
    changed = []
    years_checked = 0
    for name, g in _fixtures():
        scores = cd_all(g)
        for mode in WeightMode:
            weights = citation_weights(g, mode)
            base = weighted_annual_mcd(scores, weights, g)
            out_of_range += [f"{name}/{p.year}" for p in base if p.value is not None and not -1 <= p.value <= 1]
            for year, papers in g.papers_by_year().items():
                scaled = dict(weights)
                for p in papers:
                    scaled[p] = CitationWeight(p, weights[p].c_it * 17, mode)
                years_checked += 1
                if weighted_annual_mcd(scores, scaled, g) != base:
                    changed.append(f"{name}/{mode.value}/{year}")
    ok = not out_of_range and not changed
    report(
        4,
        "range and scale invariance",
        ok,
        f"{years_checked} year rescalings by 17, out-of-range={out_of_range}, changed={changed}",
    )


def test_criterion_05_growth_fit():
    series = AnnualSeries(SeriesPoint(t, Fraction(100 * 1.05 ** (t - 1950)), 1) for t in range(1950, 1981))
    fit = fit_exponential(series)
    ok = len(series) == 31 and abs(fit.rate - 0.05) < 1e-9 and fit.r_squared >= 1 - 1e-12
    report(5, "growth-fit recovery", ok, f"rate={fit.rate:.12f} (|err|={abs(fit.rate - 0.05):.1e}), r2={fit.r_squared!r}")


def test_criterion_06_simulator_cohorts():
    t0 = time.perf_counter()
    g = generate(SimConfig(n0=100, growth=0.05, years=40))
    n_series, _ = annual_totals(g)
    fit = fit_exponential(n_series)
    elapsed = time.perf_counter() - t0
    sizes = [int(p.value) for p in n_series]
    expected = [round(100 * 1.05**t) for t in range(40)]
    ok = sizes == expected and abs(fit.rate - 0.05) <= 0.005 and elapsed < 30
    report(
        6,
        "simulator cohort counts",
        ok,
        f"{len(g)} papers, cohorts exact={sizes == expected}, rate={fit.rate:.5f}, {elapsed:.2f}s < 30s",
    )


def test_criterion_07_dilution_mechanism():
    base = SimConfig()
    lower = 0
    worst_band = 0.0
    out_of_band = []
    gaps = []
    for seed in range(1, 21):
        cd_g, mcd_g = dilution_experiment(replace(base, growth=0.08, seed=seed))
        cd_0, mcd_0 = dilution_experiment(replace(base, growth=0.0, seed=seed))
        mean_g = statistics.fmean(float(p.value) for p in list(cd_g)[-5:])
        mean_0 = statistics.fmean(float(p.value) for p in list(cd_0)[-5:])
        gaps.append(mean_0 - mean_g)
        if mean_g < mean_0:
            lower += 1
        for label, series in (("g=0.08", mcd_g), ("g=0", mcd_0)):
            for p in series:
                if p.value is None:
                    continue
                worst_band = max(worst_band, abs(float(p.value)))
                if not -0.25 <= p.value <= 0.25:
                    out_of_band.append(f"seed{seed}/{label}/{p.year}")
    ok = lower >= 18 and not out_of_band
    report(
        7,
        "dilution mechanism",
        ok,
        f"growth lowers late-cohort mean CD in {lower}/20 seeds (median gap {statistics.median(gaps):.4f}), "
        f"max |mCD|={worst_band:.4f}, out-of-band={out_of_band}",
    )


def test_criterion_08_simon_vocabulary():
    t0 = time.perf_counter()
    alpha, n = 0.1, 100_000
    vocab = len(set(simon_generate(SimonConfig(alpha, n, 7)).tolist()))
    expected = 1 + alpha * (n - 1)
    bound = 3 * math.sqrt(n * alpha * (1 - alpha))
    small, large = [], []
    for seed in range(1, 21):
        r_small, r_large = dilution_curve(SimonConfig(alpha, n, seed), [1_000, 100_000])
        small.append(float(r_small.ttr))
        large.append(float(r_large.ttr))
    elapsed = time.perf_counter() - t0
    ok = abs(vocab - expected) <= bound and statistics.fmean(large) < statistics.fmean(small) and elapsed < 10
    report(
        8,
        "Simon-model vocabulary",
        ok,
        f"vocab={vocab} vs {expected:.1f} +/- {bound:.1f}, mean ttr 1e3={statistics.fmean(small):.4f} "
        f"> 1e5={statistics.fmean(large):.4f}, {elapsed:.2f}s < 10s",
    )


def test_criterion_09_lexical_fixture():
    [rec] = annual_lexical_stats(LexCorpus.from_texts({2000: "the cat sat the mat"}))
    got = (rec.total_tokens, rec.vocabulary, rec.hapax, rec.hapax_fraction)
    ok = got == (5, 4, 3, Fraction(3, 5))
    report(9, "lexical hand count", ok, f"total={got[0]} vocab={got[1]} hapax={got[2]} hapax_fraction={got[3]}")


def _golden_runs(fixtures: Path, out: Path, threads: int) -> dict[str, bytes]:
    five = ["--nodes", str(fixtures / "five_nodes.csv"), "--edges", str(fixtures / "five_edges.csv")]
    t = ["--threads", str(threads)]
    jobs = {
        "five_cd.csv": ["cd", *five, *t, "--out", str(out / "five_cd.csv"), "--annual", str(out / "five_cd_annual.csv")],
        "five_mcd.csv": [
            "mcd", *five, *t, "--horizon", "2003",
            "--out", str(out / "five_mcd.csv"), "--weights-out", str(out / "five_weights.csv"),
        ],
        "dirty_report.csv": [
            "ingest", "--nodes", str(fixtures / "dirty_nodes.csv"), "--edges", str(fixtures / "dirty_edges.csv"),
            "--report", str(out / "dirty_report.csv"), "--out-prefix", str(out / "dirty"),
        ],
        "lex_stats.csv": ["lexstats", "--input", str(fixtures / "lex_counts.csv"), "--out", str(out / "lex_stats.csv")],
        "sim": [
            "simulate", "--n0", "30", "--years", "12", "--growth", "0.08", "--seed", "4", *t,
            "--out-prefix", str(out / "sim"),
        ],
    }
    for args in jobs.values():
        assert main(args) == 0, args
    names = ["five_cd.csv", "five_cd_annual.csv", "five_mcd.csv", "five_weights.csv", "dirty_report.csv",
             "dirty_edges.csv", "lex_stats.csv", "sim_nodes.csv", "sim_edges.csv", "sim_cd.csv", "sim_mcd.csv"]
    return {name: (out / name).read_bytes() for name in names}


def test_criterion_10_determinism(fixtures_dir, tmp_path):
    runs = []
    for k, threads in enumerate([1, 1, 1, 8]):
        out = tmp_path / f"run{k}"
        out.mkdir()
        runs.append(_golden_runs(fixtures_dir, out, threads))
    identical = all(r == runs[0] for r in runs[1:])
    golden = {
        "five_cd.csv": "five_cd.csv",
        "five_cd_annual.csv": "five_cd_annual.csv",
        "five_mcd.csv": "five_mcd.csv",
        "five_weights.csv": "five_weights.csv",
        "dirty_report.csv": "dirty_report.csv",
        "dirty_edges.csv": "dirty_clean_edges.csv",
        "lex_stats.csv": "lex_stats.csv",
    }
    mismatched = [k for k, f in golden.items() if runs[0][k] != (fixtures_dir / f).read_bytes()]
    ok = identical and not mismatched
    report(
        10,
        "determinism",
        ok,
        f"{len(runs[0])} output files byte-identical across 3 runs and --threads 8: {identical}, "
        f"golden mismatches={mismatched}",
    )
