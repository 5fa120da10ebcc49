"""Citation weights, the citation-weighted annual CD index, and growth fits."""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .disruption import DEFAULT_WINDOW, DisruptionScore
from .graph import CitationGraph
from .series import AnnualSeries, SeriesPoint

__all__ = [
    "CitationWeight",
    "GrowthFit",
    "ModeMismatchError",
    "WeightMode",
    "annual_totals",
    "citation_weight",
    "citation_weights",
    "fit_exponential",
    "weighted_annual_mcd",
]


class WeightMode(str, Enum):
    PER_YEAR_AVERAGE = "per-year-average"
    RAW_COUNT = "raw-count"
    WINDOW_COUNT = "window-count"


class ModeMismatchError(ValueError):
    """Raised when weights computed under different modes are aggregated together."""


@dataclass(frozen=True)
class CitationWeight:
    paper: int
    c_it: Fraction
    mode: WeightMode

    def __post_init__(self) -> None:
        if self.c_it < 0:
            raise ValueError(f"negative weight for paper {self.paper}")


def citation_weight(
    g: CitationGraph,
    paper: int,
    horizon_year: int,
    mode: WeightMode | str = WeightMode.PER_YEAR_AVERAGE,
    window: int = DEFAULT_WINDOW,
    include_same_year: bool = False,
) -> CitationWeight:
    """Weight of one paper under ``mode``.

    ``per-year-average`` divides the citation count by the years elapsed up to
    ``horizon_year`` (at least 1). ``window-count`` counts only citers inside
    the CD forward window, which is what ``window`` and ``include_same_year``
    are for.
    """
    mode = WeightMode(mode)
    year = g.year(paper)
    if horizon_year < year:
        raise ValueError(f"horizon {horizon_year} precedes publication year {year} of paper {paper}")
    citers = g.citers_of(paper)
    if mode is WeightMode.RAW_COUNT:
        c = Fraction(len(citers))
    elif mode is WeightMode.PER_YEAR_AVERAGE:
        c = Fraction(len(citers), max(1, horizon_year - year))
    else:
        c = Fraction(sum(1 for j in citers if g.in_window(paper, j, window, include_same_year)))
    return CitationWeight(paper, c, mode)


def citation_weights(
    g: CitationGraph,
    mode: WeightMode | str = WeightMode.PER_YEAR_AVERAGE,
    horizon_year: int | None = None,
    window: int = DEFAULT_WINDOW,
    include_same_year: bool = False,
) -> dict[int, CitationWeight]:
    """Weights for every paper; the horizon defaults to the latest publication year."""
    if horizon_year is None:
        years = g.years()
        horizon_year = years[-1] if years else 0
    return {p: citation_weight(g, p, horizon_year, mode, window, include_same_year) for p in g.papers}


def weighted_annual_mcd(
    scores: Mapping[int, DisruptionScore],
    weights: Mapping[int, CitationWeight],
    g: CitationGraph,
) -> AnnualSeries:
    """Per year, the weight-averaged CD score of papers with a defined score.

    The denominator is the total weight of exactly those papers, so every value
    is a convex combination of scores. Papers of weight zero do not count as
    contributors; a year whose total weight is zero is missing.
    """
    modes = {w.mode for w in weights.values()}
    if len(modes) > 1:
        raise ModeMismatchError(f"weights mix modes: {sorted(m.value for m in modes)}")

    points = []
    for year, papers in g.papers_by_year().items():
        num = Fraction(0)
        den = Fraction(0)
        count = 0
        for p in papers:
            s = scores.get(p)
            if s is None or not s.defined:
                continue
            c = weights[p].c_it
            if c == 0:
                continue
            num += c * s.value
            den += c
            count += 1
        points.append(SeriesPoint(year, num / den, count) if count else SeriesPoint(year, None, 0))
    return AnnualSeries(points)


def annual_totals(g: CitationGraph) -> tuple[AnnualSeries, AnnualSeries]:
    """Papers per publication year and citations received by each year's cohort.

    Both series carry the cohort size as their count.
    """
    n_points, c_points = [], []
    for year, papers in g.papers_by_year().items():
        cited = sum(len(g.citers_of(p)) for p in papers)
        n_points.append(SeriesPoint(year, Fraction(len(papers)), len(papers)))
        c_points.append(SeriesPoint(year, Fraction(cited), len(papers)))
    return AnnualSeries(n_points), AnnualSeries(c_points)


@dataclass(frozen=True)
class GrowthFit:
    """Log-linear fit ``ln y = log_intercept + log_slope * year``.

    ``rate`` is the fractional growth per year, ``exp(log_slope) - 1``.
    ``degenerate`` marks a fit with zero variance in ``ln y``, where
    ``r_squared`` is 1 by convention.
    """

    rate: float
    log_slope: float
    log_intercept: float
    r_squared: float
    years_used: int
    excluded_years: tuple[int, ...] = ()
    degenerate: bool = False


def fit_exponential(
    series: AnnualSeries, from_year: int | None = None, to_year: int | None = None
) -> GrowthFit:
    """Ordinary least squares on ``(year, ln value)`` over the chosen range.

    Years whose value is missing or not positive are left out and listed in
    ``excluded_years``.
    """
    xs: list[float] = []
    ys: list[float] = []
    excluded = []
    for p in series.between(from_year, to_year):
        if p.value is None or p.value <= 0:
            excluded.append(p.year)
            continue
        xs.append(float(p.year))
        ys.append(math.log(p.value))
    if len(xs) < 2:
        raise ValueError(f"need at least 2 positive values to fit, got {len(xs)}")

    n = len(xs)
    degenerate = len(set(ys)) == 1
    x_mean = math.fsum(xs) / n
    y_mean = ys[0] if degenerate else math.fsum(ys) / n
    dx = [x - x_mean for x in xs]
    dy = [y - y_mean for y in ys]
    sxx = math.fsum(d * d for d in dx)
    if sxx == 0:
        raise ValueError("need at least 2 distinct years to fit")
    slope = math.fsum(a * b for a, b in zip(dx, dy)) / sxx
    intercept = y_mean - slope * x_mean
    ss_tot = math.fsum(d * d for d in dy)
    ss_res = math.fsum((b - slope * a) ** 2 for a, b in zip(dx, dy))
    r2 = 1.0 if degenerate else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return GrowthFit(
        rate=math.expm1(slope),
        log_slope=slope,
        log_intercept=intercept,
        r_squared=r2,
        years_used=n,
        excluded_years=tuple(excluded),
        degenerate=degenerate,
    )
