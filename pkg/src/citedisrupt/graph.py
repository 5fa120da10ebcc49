"""Immutable citation graph with forward and backward adjacency.

Edges point from the citing paper to the cited paper. The graph is built once
through :func:`build_graph` (or :func:`load_graph` for CSV input) and never
mutated afterwards, so every query is a pure read.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import asdict, dataclass, field
from pathlib import Path

__all__ = [
    "CitationGraph",
    "GraphFormatError",
    "IngestConfig",
    "IngestReport",
    "UnknownPaperError",
    "build_graph",
    "load_graph",
]

NODES_HEADER = ["paper_id", "year"]
EDGES_HEADER = ["citing_id", "cited_id"]

_MAX_ID = 2**64 - 1


class GraphFormatError(ValueError):
    """Raised for malformed node or edge input."""


class UnknownPaperError(KeyError):
    """Raised when a query names a paper that is not in the graph."""


@dataclass(frozen=True)
class IngestConfig:
    """Options controlling which rows survive ingestion.

    ``min_year``/``max_year`` bound node years. A node outside the bounds is an
    error unless ``drop_out_of_bounds`` is set, in which case it is dropped and
    counted (edges touching it then become dangling).
    """

    min_year: int | None = None
    max_year: int | None = None
    drop_out_of_bounds: bool = False
    drop_time_violations: bool = True


@dataclass
class IngestReport:
    nodes_read: int = 0
    edges_read: int = 0
    year_out_of_bounds_dropped: int = 0
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0
    time_violations_dropped: int = 0
    dangling_edges_dropped: int = 0

    @property
    def edges_dropped(self) -> int:
        return (
            self.self_loops_dropped
            + self.duplicates_dropped
            + self.time_violations_dropped
            + self.dangling_edges_dropped
        )

    def as_dict(self) -> dict[str, int]:
        return asdict(self)

    def format_line(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.as_dict().items())


@dataclass(frozen=True, eq=False)
class CitationGraph:
    """Directed citation graph; ``refs`` are out-neighbours, ``citers`` in-neighbours.

    Construct with :func:`build_graph`, which enforces the invariants (no
    self-loops, no duplicate edges, consistent adjacency).
    """

    _years: Mapping[int, int]
    _refs: Mapping[int, frozenset[int]]
    _citers: Mapping[int, frozenset[int]]
    _order: tuple[int, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self._order)

    def __contains__(self, paper: object) -> bool:
        return paper in self._years

    def __iter__(self) -> Iterator[int]:
        return iter(self._order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CitationGraph):
            return NotImplemented
        return self._years == other._years and self._refs == other._refs

    __hash__ = None  # type: ignore[assignment]

    @property
    def papers(self) -> tuple[int, ...]:
        """Paper ids in ascending order."""
        return self._order

    @property
    def n_edges(self) -> int:
        return sum(len(r) for r in self._refs.values())

    def year(self, paper: int) -> int:
        try:
            return self._years[paper]
        except KeyError:
            raise UnknownPaperError(paper) from None

    def years(self) -> list[int]:
        """Distinct publication years, ascending."""
        return sorted(set(self._years.values()))

    def papers_by_year(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for p in self._order:
            out.setdefault(self._years[p], []).append(p)
        return dict(sorted(out.items()))

    def references_of(self, paper: int) -> frozenset[int]:
        try:
            return self._refs[paper]
        except KeyError:
            raise UnknownPaperError(paper) from None

    def citers_of(self, paper: int) -> frozenset[int]:
        try:
            return self._citers[paper]
        except KeyError:
            raise UnknownPaperError(paper) from None

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield ``(citing, cited)`` pairs sorted by citing then cited id."""
        for p in self._order:
            for r in sorted(self._refs[p]):
                yield p, r

    def in_window(self, focal: int, other: int, window: int, include_same_year: bool = False) -> bool:
        y0 = self.year(focal)
        y = self._years[other]
        lo_ok = y >= y0 if include_same_year else y > y0
        return lo_ok and y <= y0 + window

    def forward_set(self, paper: int, window: int, include_same_year: bool = False) -> set[int]:
        """Papers in the forward window citing ``paper`` or any of its references.

        The window is ``year(paper) < year(j) <= year(paper) + window``; with
        ``include_same_year`` the lower bound becomes inclusive. The focal
        paper itself is never a member.
        """
        if window < 1:
            raise ValueError(f"window must be >= 1, got {window}")
        y0 = self.year(paper)
        lo = y0 if include_same_year else y0 + 1
        hi = y0 + window
        years = self._years
        out = {j for j in self._citers[paper] if lo <= years[j] <= hi}
        for r in self._refs[paper]:
            out.update(j for j in self._citers[r] if lo <= years[j] <= hi)
        out.discard(paper)
        return out


def build_graph(
    nodes: Mapping[int, int] | Iterable[tuple[int, int]],
    edges: Iterable[tuple[int, int]],
    config: IngestConfig | None = None,
) -> tuple[CitationGraph, IngestReport]:
    """Validate nodes and edges in memory and build a :class:`CitationGraph`.

    Each dropped edge is counted under exactly one reason, checked in the order
    dangling, self-loop, time violation, duplicate.
    """
    config = config or IngestConfig()
    report = IngestReport()
    items = nodes.items() if isinstance(nodes, Mapping) else nodes
    years: dict[int, int] = {}
    for pid, year in items:
        report.nodes_read += 1
        if pid in years:
            raise GraphFormatError(f"duplicate paper id {pid}")
        if not _year_ok(year, config):
            if config.drop_out_of_bounds:
                report.year_out_of_bounds_dropped += 1
                continue
            raise GraphFormatError(f"paper {pid}: year {year} outside configured bounds")
        years[pid] = year

    refs: dict[int, set[int]] = {p: set() for p in years}
    for citing, cited in edges:
        report.edges_read += 1
        if citing not in years or cited not in years:
            report.dangling_edges_dropped += 1
        elif citing == cited:
            report.self_loops_dropped += 1
        elif config.drop_time_violations and years[citing] < years[cited]:
            report.time_violations_dropped += 1
        elif cited in refs[citing]:
            report.duplicates_dropped += 1
        else:
            refs[citing].add(cited)

    citers: dict[int, set[int]] = {p: set() for p in years}
    for citing, rs in refs.items():
        for cited in rs:
            citers[cited].add(citing)

    graph = CitationGraph(
        _years=years,
        _refs={p: frozenset(s) for p, s in refs.items()},
        _citers={p: frozenset(s) for p, s in citers.items()},
        _order=tuple(sorted(years)),
    )
    return graph, report


def _year_ok(year: int, config: IngestConfig) -> bool:
    if config.min_year is not None and year < config.min_year:
        return False
    if config.max_year is not None and year > config.max_year:
        return False
    return True


def _parse_int(text: str, what: str, path: Path, lineno: int) -> int:
    try:
        value = int(text.strip())
    except ValueError:
        raise GraphFormatError(f"{path}:{lineno}: unparseable {what} {text!r}") from None
    return value


def _parse_id(text: str, path: Path, lineno: int) -> int:
    value = _parse_int(text, "paper id", path, lineno)
    if not 0 <= value <= _MAX_ID:
        raise GraphFormatError(f"{path}:{lineno}: paper id {value} is not an unsigned 64-bit integer")
    return value


def _read_rows(path: Path, header: list[str]) -> Iterator[tuple[int, list[str]]]:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or [c.strip() for c in first] != header:
            raise GraphFormatError(f"{path}:1: expected header {','.join(header)!r}, got {first!r}")
        for row in reader:
            lineno = reader.line_num
            if not row or row == [""]:
                continue
            if len(row) != len(header):
                raise GraphFormatError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            yield lineno, row


def _iter_nodes(path: Path) -> Iterator[tuple[int, int]]:
    for lineno, (pid, year) in _read_rows(path, NODES_HEADER):
        yield _parse_id(pid, path, lineno), _parse_int(year, "year", path, lineno)


def _iter_edges(path: Path) -> Iterator[tuple[int, int]]:
    for lineno, (citing, cited) in _read_rows(path, EDGES_HEADER):
        yield _parse_id(citing, path, lineno), _parse_id(cited, path, lineno)


def load_graph(
    nodes_path: str | Path,
    edges_path: str | Path,
    config: IngestConfig | None = None,
) -> tuple[CitationGraph, IngestReport]:
    """Read ``paper_id,year`` and ``citing_id,cited_id`` CSV files.

    Nodes are streamed first, then edges. Malformed headers or rows raise
    :class:`GraphFormatError` citing the offending line.
    """
    nodes_path, edges_path = Path(nodes_path), Path(edges_path)
    for p in (nodes_path, edges_path):
        if not p.is_file():
            raise FileNotFoundError(f"no such file: {p}")
    return build_graph(_iter_nodes(nodes_path), _iter_edges(edges_path), config)
