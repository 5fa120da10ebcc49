"""Synthetic citation networks with exponentially growing cohorts.

Each simulated year adds ``round(n0 * (1 + growth) ** t)`` papers. A new paper
picks its references from strictly earlier years: the first by preferential
attachment, each further one either copied from the reference lists of the
targets already chosen (probability ``p_copy``) or drawn by preferential
attachment again. Copying is what creates consolidating citations (a paper
citing a work together with that work's own references). Afterwards, for each
chosen target in turn, with probability ``p_disrupt`` the target's own
references are removed from the list, making the paper a purely disruptive
citer of that target.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .disruption import DEFAULT_WINDOW, annual_mean_cd, cd_all
from .graph import CitationGraph, build_graph
from .series import AnnualSeries
from .weighted import WeightMode, citation_weights, weighted_annual_mcd

__all__ = [
    "SYMMETRIC",
    "SimConfig",
    "SimReport",
    "cohort_sizes",
    "dilution_experiment",
    "generate",
    "simulate",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimConfig:
    n0: int = 50
    growth: float = 0.0
    years: int = 30
    refs_per_paper: int = 10
    attach_bias: float = 1.0
    p_disrupt: float = 0.8
    p_copy: float = 0.0
    seed: int = 1
    start_year: int = 1950

    def __post_init__(self) -> None:
        if self.n0 < 1:
            raise ValueError(f"n0 must be >= 1, got {self.n0}")
        if self.years < 2:
            raise ValueError(f"years must be >= 2, got {self.years}")
        if self.refs_per_paper < 0:
            raise ValueError(f"refs_per_paper must be >= 0, got {self.refs_per_paper}")
        if not self.growth > -1:
            raise ValueError(f"growth must be > -1, got {self.growth}")
        if not self.attach_bias >= 0:
            raise ValueError(f"attach_bias must be >= 0, got {self.attach_bias}")
        for name in ("p_disrupt", "p_copy"):
            p = getattr(self, name)
            if not 0 <= p <= 1:
                raise ValueError(f"{name} must be in [0, 1], got {p}")


# Copying and pruning balanced: consolidating and disruptive citations arise
# at comparable rates, so without growth neither series should drift.
SYMMETRIC = SimConfig(refs_per_paper=3, p_disrupt=0.5, p_copy=0.5)


@dataclass(frozen=True)
class SimReport:
    n_papers: int
    n_edges: int
    clamped_papers: int
    """Papers that received fewer than ``refs_per_paper`` candidates because
    too few earlier papers existed."""


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def cohort_sizes(config: SimConfig) -> list[int]:
    return [_round_half_up(config.n0 * (1 + config.growth) ** t) for t in range(config.years)]


def _pick_references(
    rng: np.random.Generator,
    k: int,
    cumw: np.ndarray,
    refs: list[list[int]],
    p_copy: float,
) -> list[int]:
    """Draw ``k`` distinct 0-based indices from the pool described by ``cumw``."""
    chosen: list[int] = []
    taken: set[int] = set()
    total = cumw[-1]
    while len(chosen) < k:
        if chosen and rng.random() < p_copy:
            candidates = sorted({r for c in chosen for r in refs[c]} - taken)
            if candidates:
                pick = candidates[int(rng.integers(len(candidates)))]
                chosen.append(pick)
                taken.add(pick)
                continue
        while True:
            pick = int(np.searchsorted(cumw, rng.random() * total, side="right"))
            pick = min(pick, len(cumw) - 1)
            if pick not in taken:
                break
        chosen.append(pick)
        taken.add(pick)
    return chosen


def _prune(rng: np.random.Generator, chosen: list[int], refs: list[list[int]], p_disrupt: float) -> list[int]:
    kept = list(chosen)
    for target in chosen:
        # One draw per target keeps the RNG stream independent of earlier pruning.
        disrupt = rng.random() < p_disrupt
        if disrupt and target in kept:
            own = set(refs[target])
            kept = [c for c in kept if c not in own]
    return kept


def simulate(config: SimConfig) -> tuple[CitationGraph, SimReport]:
    """Generate a network and report how many papers had their reference list clamped."""
    rng = np.random.default_rng(config.seed)
    sizes = cohort_sizes(config)
    total = sum(sizes)
    years: list[int] = []
    refs: list[list[int]] = []
    indeg = np.zeros(total, dtype=np.int64)
    clamped = 0

    dense_pool = config.attach_bias == 0
    for t, size in enumerate(sizes):
        n_prior = len(years)
        k = min(config.refs_per_paper, n_prior)
        for _ in range(size):
            if k < config.refs_per_paper:
                clamped += 1
            if k == 0:
                chosen: list[int] = []
            else:
                if dense_pool:
                    cumw = np.arange(1, n_prior + 1, dtype=np.float64)
                else:
                    w = (indeg[:n_prior] + 1.0) ** config.attach_bias
                    cumw = np.cumsum(w)
                chosen = _pick_references(rng, k, cumw, refs, config.p_copy)
                chosen = _prune(rng, chosen, refs, config.p_disrupt)
                for c in chosen:
                    indeg[c] += 1
            refs.append(sorted(chosen))
        years.extend([config.start_year + t] * size)

    if clamped:
        log.info("reference lists clamped for %d papers (too few earlier papers)", clamped)

    nodes = {i + 1: y for i, y in enumerate(years)}
    edges = [(i + 1, r + 1) for i, rs in enumerate(refs) for r in rs]
    graph, ingest = build_graph(nodes, edges)
    if ingest.edges_dropped:
        raise AssertionError(f"generator produced invalid edges: {ingest.format_line()}")
    return graph, SimReport(len(graph), len(edges), clamped)


def generate(config: SimConfig) -> CitationGraph:
    """Deterministic synthetic citation graph for ``config`` (see module docstring)."""
    return simulate(config)[0]


# Cohort 0 has no references and cohort 1 cites only reference-less papers,
# so both are skipped as warm-up.
BURN_IN_COHORTS = 2


def complete_cohort_range(g: CitationGraph, window: int) -> tuple[int, int]:
    """First and last publication year that is past warm-up and has its whole forward window simulated."""
    years = g.years()
    return years[0] + BURN_IN_COHORTS, years[-1] - window


def dilution_experiment(
    config: SimConfig,
    window: int = DEFAULT_WINDOW,
    threads: int | None = 1,
) -> tuple[AnnualSeries, AnnualSeries]:
    """Unweighted and citation-weighted annual CD series of one simulated network.

    Weights use the default per-year-average mode with the horizon at the last
    simulated year. Both series keep only cohorts past the two warm-up years
    whose full forward window was simulated.
    """
    if window >= config.years:
        raise ValueError(f"window ({window}) must be smaller than years ({config.years})")
    if config.years <= window + 2:
        raise ValueError(f"years ({config.years}) must exceed window + 2 ({window + 2})")
    g = generate(config)
    scores = cd_all(g, window, threads=threads)
    weights = citation_weights(g, WeightMode.PER_YEAR_AVERAGE)
    first, last = complete_cohort_range(g, window)
    cd = annual_mean_cd(scores, g).between(first, last)
    mcd = weighted_annual_mcd(scores, weights, g).between(first, last)
    return cd, mcd
