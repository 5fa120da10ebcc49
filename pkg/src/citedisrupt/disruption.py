"""Per-paper CD index and its unweighted annual mean."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .graph import CitationGraph
from .series import AnnualSeries, SeriesPoint

__all__ = [
    "DEFAULT_WINDOW",
    "DisruptionScore",
    "ForwardEvent",
    "annual_mean_cd",
    "cd_all",
    "cd_index",
    "forward_events",
]

DEFAULT_WINDOW = 5


class ForwardEvent(NamedTuple):
    """One future paper ``j``: ``f`` if it cites the focal, ``b`` if it cites a predecessor."""

    j: int
    f: int
    b: int

    @property
    def term(self) -> int:
        return -2 * self.f * self.b + self.f


@dataclass(frozen=True)
class DisruptionScore:
    paper: int
    n_t: int
    sum: int

    def __post_init__(self) -> None:
        if self.n_t < 0 or abs(self.sum) > self.n_t:
            raise ValueError(f"inconsistent score for paper {self.paper}: sum={self.sum}, n_t={self.n_t}")

    @property
    def defined(self) -> bool:
        return self.n_t > 0

    @property
    def value(self) -> Fraction | None:
        """Exact score in [-1, 1], or ``None`` when no forward events exist."""
        if self.n_t == 0:
            return None
        return Fraction(self.sum, self.n_t)


def forward_events(
    g: CitationGraph, paper: int, window: int = DEFAULT_WINDOW, include_same_year: bool = False
) -> list[ForwardEvent]:
    citers = g.citers_of(paper)
    refs = g.references_of(paper)
    events = []
    for j in sorted(g.forward_set(paper, window, include_same_year)):
        f = 1 if j in citers else 0
        b = 1 if not refs.isdisjoint(g.references_of(j)) else 0
        events.append(ForwardEvent(j, f, b))
    return events


def cd_index(
    g: CitationGraph, paper: int, window: int = DEFAULT_WINDOW, include_same_year: bool = False
) -> DisruptionScore:
    """CD score of one focal paper over its forward window.

    Terms are +1 (cites focal only), -1 (cites focal and a predecessor) and 0
    (cites a predecessor only). The sum stays an integer; ``value`` divides
    once at the end.
    """
    forward = g.forward_set(paper, window, include_same_year)
    citers = g.citers_of(paper)
    refs = g.references_of(paper)
    total = 0
    for j in forward:
        if j in citers:
            total += -1 if not refs.isdisjoint(g.references_of(j)) else 1
    return DisruptionScore(paper, len(forward), total)


# Worker-process state for cd_all; set once per worker by _init_worker.
_WORKER_GRAPH: CitationGraph | None = None


def _init_worker(g: CitationGraph) -> None:
    global _WORKER_GRAPH
    _WORKER_GRAPH = g


def _score_chunk(args: tuple[tuple[int, ...], int, bool]) -> list[DisruptionScore]:
    papers, window, include_same_year = args
    g = _WORKER_GRAPH
    assert g is not None
    return [cd_index(g, p, window, include_same_year) for p in papers]


def _chunks(papers: tuple[int, ...], n: int) -> list[tuple[int, ...]]:
    size = max(1, -(-len(papers) // n))
    return [papers[i : i + size] for i in range(0, len(papers), size)]


def cd_all(
    g: CitationGraph,
    window: int = DEFAULT_WINDOW,
    include_same_year: bool = False,
    threads: int | None = 1,
) -> dict[int, DisruptionScore]:
    """Score every paper, optionally across ``threads`` worker processes.

    The result is keyed in ascending paper id regardless of ``threads``.
    ``threads=None`` uses one worker per CPU.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    n = threads if threads is not None else (os.cpu_count() or 1)
    papers = g.papers
    if n <= 1 or len(papers) < 2:
        return {p: cd_index(g, p, window, include_same_year) for p in papers}

    # Several chunks per worker so uneven forward sets still balance.
    jobs = [(c, window, include_same_year) for c in _chunks(papers, n * 4)]
    with ProcessPoolExecutor(max_workers=n, initializer=_init_worker, initargs=(g,)) as pool:
        results = list(pool.map(_score_chunk, jobs))
    scores = {s.paper: s for chunk in results for s in chunk}
    return dict(sorted(scores.items()))


def annual_mean_cd(scores: dict[int, DisruptionScore], g: CitationGraph) -> AnnualSeries:
    """Equal-weight mean of defined scores per publication year.

    Every publication year in ``g`` appears; years without a defined score
    carry a missing value and count 0.
    """
    points = []
    for year, papers in g.papers_by_year().items():
        values = [scores[p].value for p in papers if p in scores and scores[p].defined]
        if values:
            points.append(SeriesPoint(year, sum(values, Fraction(0)) / len(values), len(values)))
        else:
            points.append(SeriesPoint(year, None, 0))
    return AnnualSeries(points)
