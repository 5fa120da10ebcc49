"""Year-indexed numeric series with per-year support counts."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

__all__ = ["AnnualSeries", "SeriesPoint"]


class SeriesPoint(NamedTuple):
    year: int
    value: Fraction | None
    count: int


@dataclass(frozen=True)
class AnnualSeries:
    """Ordered ``year -> (value, count)`` with ``value is None`` exactly when ``count == 0``."""

    points: tuple[SeriesPoint, ...]

    def __init__(self, points: Iterable[SeriesPoint | tuple[int, Fraction | None, int]] = ()) -> None:
        pts = tuple(SeriesPoint(*p) for p in points)
        for prev, cur in zip(pts, pts[1:]):
            if cur.year <= prev.year:
                raise ValueError(f"years must be strictly increasing ({prev.year} then {cur.year})")
        for p in pts:
            if p.count < 0:
                raise ValueError(f"negative count in year {p.year}")
            if (p.count == 0) != (p.value is None):
                raise ValueError(f"year {p.year}: count 0 must coincide with a missing value")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[SeriesPoint]:
        return iter(self.points)

    def __getitem__(self, year: int) -> SeriesPoint:
        for p in self.points:
            if p.year == year:
                return p
        raise KeyError(year)

    @property
    def years(self) -> list[int]:
        return [p.year for p in self.points]

    def value(self, year: int) -> Fraction | None:
        return self[year].value

    def as_dict(self) -> dict[int, Fraction | None]:
        return {p.year: p.value for p in self.points}

    def between(self, from_year: int | None = None, to_year: int | None = None) -> AnnualSeries:
        """Sub-series restricted to ``from_year <= year <= to_year`` (either bound optional)."""
        return AnnualSeries(
            p
            for p in self.points
            if (from_year is None or p.year >= from_year) and (to_year is None or p.year <= to_year)
        )
