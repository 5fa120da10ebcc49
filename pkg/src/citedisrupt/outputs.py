"""CSV writers for scores, series, weights and lexical tables.

Floats are printed with 12 significant digits and missing values as empty
fields, so repeated runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from pathlib import Path

from .disruption import DisruptionScore
from .graph import CitationGraph, IngestReport
from .lexical import LexRecord
from .series import AnnualSeries
from .weighted import CitationWeight, GrowthFit


def fmt(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (Fraction, float)):
        x = float(value)
        if x == 0:
            return "0"  # no "-0"
        return f"{x:.12g}"
    return str(value)


def render(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_all_atomic(files: Mapping[Path, str]) -> None:
    """Stage every file first so a failure leaves all existing outputs untouched."""
    staged: list[tuple[str, Path]] = []
    try:
        for path, text in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
            staged.append((tmp, path))
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    except BaseException:
        for tmp, _ in staged:
            Path(tmp).unlink(missing_ok=True)
        raise
    for tmp, path in staged:
        os.replace(tmp, path)


def nodes_csv(g: CitationGraph) -> str:
    return render(["paper_id", "year"], ((p, g.year(p)) for p in g.papers))


def edges_csv(g: CitationGraph) -> str:
    return render(["citing_id", "cited_id"], g.edges())


def scores_csv(scores: Mapping[int, DisruptionScore], g: CitationGraph) -> str:
    return render(
        ["paper_id", "year", "n_t", "cd"],
        ((p, g.year(p), s.n_t, s.value) for p, s in sorted(scores.items())),
    )


def series_csv(series: AnnualSeries) -> str:
    return render(["year", "value", "count"], ((p.year, p.value, p.count) for p in series))


def weights_csv(weights: Mapping[int, CitationWeight]) -> str:
    return render(["paper_id", "c_it", "mode"], ((p, w.c_it, w.mode.value) for p, w in sorted(weights.items())))


def totals_csv(n_series: AnnualSeries, c_series: AnnualSeries) -> str:
    return render(
        ["year", "papers", "citations"],
        ((n.year, int(n.value), int(c.value)) for n, c in zip(n_series, c_series)),
    )


FIT_HEADER = ["series", "rate", "log_slope", "log_intercept", "r_squared", "years_used", "excluded_years", "degenerate"]


def fit_row(name: str, fit: GrowthFit) -> list[object]:
    return [
        name,
        fit.rate,
        fit.log_slope,
        fit.log_intercept,
        fit.r_squared,
        fit.years_used,
        " ".join(str(y) for y in fit.excluded_years),
        fit.degenerate,
    ]


def report_csv(report: IngestReport) -> str:
    d = report.as_dict()
    return render(list(d), [list(d.values())])


LEX_HEADER = ["total_tokens", "vocabulary", "hapax", "hapax_fraction", "ttr"]


def lex_csv(records: Sequence[LexRecord], key: str = "year") -> str:
    return render(
        [key, *LEX_HEADER],
        ((r.key, r.total_tokens, r.vocabulary, r.hapax, r.hapax_fraction, r.ttr) for r in records),
    )
