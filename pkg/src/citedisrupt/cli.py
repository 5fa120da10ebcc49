"""Command-line entry point: ``citedisrupt <subcommand> [--flags]``.

Every flag can also be supplied through ``--config FILE`` as ``key=value``
lines (key is the flag name without dashes, ``-`` or ``_`` both accepted);
flags on the command line win over the file.

Exit codes: 0 success, 1 usage error, 2 input/format error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import outputs
from .disruption import DEFAULT_WINDOW, annual_mean_cd, cd_all
from .graph import GraphFormatError, IngestConfig, load_graph
from .lexical import LexCorpus, SimonConfig, annual_lexical_stats, dilution_curve
from .series import AnnualSeries, SeriesPoint
from .synthetic import SimConfig, complete_cohort_range, simulate
from .weighted import WeightMode, annual_totals, citation_weights, fit_exponential, weighted_annual_mcd

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in {"1", "true", "yes", "on"}:
        return True
    if t in {"0", "false", "no", "off"}:
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


@dataclass(frozen=True)
class Opt:
    name: str
    type: Callable[[str], Any]
    default: Any
    help: str
    flag: bool = False
    choices: Sequence[str] | None = None

    @property
    def dest(self) -> str:
        return self.name.replace("-", "_")


_SIM = SimConfig()
_SIMON = SimonConfig()

GRAPH_OPTS = [
    Opt("nodes", Path, None, "nodes CSV (paper_id,year)"),
    Opt("edges", Path, None, "edges CSV (citing_id,cited_id)"),
    Opt("min-year", int, None, "reject papers published before this year"),
    Opt("max-year", int, None, "reject papers published after this year"),
    Opt("drop-out-of-bounds", _bool, False, "drop (and count) out-of-bounds papers instead of failing", flag=True),
    Opt("keep-time-violations", _bool, False, "retain edges whose citing paper is older than the cited", flag=True),
    Opt("report", Path, None, "write the ingest report as a one-row CSV"),
]
WINDOW_OPTS = [
    Opt("window", int, DEFAULT_WINDOW, "forward window in years"),
    Opt("include-same-year", _bool, False, "count same-year papers as forward events", flag=True),
    Opt("threads", int, 1, "worker processes for CD computation (output identical for any value)"),
]
WEIGHT_OPTS = [
    Opt("weight-mode", str, WeightMode.PER_YEAR_AVERAGE.value, "citation weight", choices=[m.value for m in WeightMode]),
    Opt("horizon", int, None, "horizon year for per-year-average weights (default: latest year in the graph)"),
]
SIM_OPTS = [
    Opt("n0", int, _SIM.n0, "papers in the first year"),
    Opt("growth", float, _SIM.growth, "fractional annual growth of cohort size"),
    Opt("years", int, _SIM.years, "number of simulated years"),
    Opt("refs", int, _SIM.refs_per_paper, "references per new paper"),
    Opt("attach-bias", float, _SIM.attach_bias, "preferential attachment exponent (0 = uniform)"),
    Opt("p-disrupt", float, _SIM.p_disrupt, "probability a citer drops a target's own references"),
    Opt("p-copy", float, _SIM.p_copy, "probability a further reference is copied from a chosen target's references"),
    Opt("seed", int, _SIM.seed, "random seed"),
    Opt("start-year", int, _SIM.start_year, "calendar year of the first cohort"),
]

COMMANDS: dict[str, tuple[str, list[Opt]]] = {
    "ingest": (
        "validate a citation graph and report dropped rows",
        GRAPH_OPTS + [Opt("out-prefix", str, None, "write cleaned PREFIX_nodes.csv and PREFIX_edges.csv")],
    ),
    "cd": (
        "per-paper CD scores and their unweighted annual mean",
        GRAPH_OPTS
        + WINDOW_OPTS
        + [
            Opt("out", Path, None, "per-paper scores CSV (paper_id,year,n_t,cd)"),
            Opt("annual", Path, None, "annual mean CSV (year,value,count)"),
        ],
    ),
    "mcd": (
        "citation-weighted annual CD index",
        GRAPH_OPTS
        + WINDOW_OPTS
        + WEIGHT_OPTS
        + [
            Opt("out", Path, None, "weighted annual series CSV (year,value,count)"),
            Opt("weights-out", Path, None, "per-paper weights CSV (paper_id,c_it,mode)"),
        ],
    ),
    "growth": (
        "annual paper/citation totals and log-linear growth fits",
        GRAPH_OPTS
        + [
            Opt("series", Path, None, "fit a year,value,count CSV instead of a graph"),
            Opt("from-year", int, None, "first year included in the fit"),
            Opt("to-year", int, None, "last year included in the fit"),
            Opt("out", Path, None, "annual totals CSV (year,papers,citations); graph input only"),
            Opt("fit-out", Path, None, "growth fit CSV"),
        ],
    ),
    "simulate": (
        "generate a synthetic citation network and score it",
        SIM_OPTS
        + WINDOW_OPTS
        + [Opt("out-prefix", str, None, "output prefix for PREFIX_{nodes,edges,cd,mcd}.csv")],
    ),
    "lexstats": (
        "per-year token, vocabulary and hapax statistics",
        [
            Opt("input", Path, None, "token,year,count CSV or a directory of YYYY.txt files"),
            Opt("out", Path, None, "output CSV"),
        ],
    ),
    "lexsim": (
        "Simon-model corpus and its dilution curve",
        [
            Opt("alpha", float, _SIMON.alpha, "probability of a new word"),
            Opt("n", int, _SIMON.n_tokens, "stream length"),
            Opt("seed", int, _SIMON.seed, "random seed"),
            Opt("checkpoints", _int_list, None, "comma-separated stream lengths (default: n)"),
            Opt("out", Path, None, "output CSV"),
        ],
    ),
}

REQUIRED = {
    "ingest": ["nodes", "edges"],
    "cd": ["nodes", "edges", "out"],
    "mcd": ["nodes", "edges", "out"],
    "growth": ["fit_out"],
    "simulate": ["out_prefix"],
    "lexstats": ["input", "out"],
    "lexsim": ["out"],
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


class _Once(argparse.Action):
    """Store a value, rejecting a second occurrence with a different value."""

    def __call__(self, parser, namespace, values, option_string=None):
        if hasattr(namespace, self.dest) and getattr(namespace, self.dest) != values:
            raise UsageError(f"conflicting values for {option_string}: {getattr(namespace, self.dest)!r} and {values!r}")
        setattr(namespace, self.dest, values)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="citedisrupt", description="Disruption-index analytics for citation graphs.")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", parser_class=_Parser)
    for name, (desc, opts) in COMMANDS.items():
        p = sub.add_parser(name, help=desc, description=desc, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", type=Path, help="flat key=value file with defaults for any flag")
        for o in opts:
            hint = f"{o.help} (default: {o.default})" if o.default is not None else o.help
            if o.flag:
                p.add_argument(f"--{o.name}", action="store_const", const=True, help=hint)
            else:
                p.add_argument(f"--{o.name}", type=o.type, choices=o.choices, action=_Once, help=hint)
    return parser


def _read_config(path: Path, opts: list[Opt]) -> dict[str, Any]:
    by_key = {o.dest: o for o in opts}
    out: dict[str, Any] = {}
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise InputError(f"cannot read config {path}: {e}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        dest = key.strip().replace("-", "_")
        if dest not in by_key:
            raise UsageError(f"{path}:{lineno}: unknown key {key.strip()!r}")
        o = by_key[dest]
        try:
            v = o.type(value.strip())
        except ValueError as e:
            raise UsageError(f"{path}:{lineno}: bad value for {key.strip()}: {e}") from None
        if o.choices is not None and v not in o.choices:
            raise UsageError(f"{path}:{lineno}: {key.strip()} must be one of {', '.join(o.choices)}")
        out[dest] = v
    return out


def resolve(argv: Sequence[str]) -> tuple[str, dict[str, Any]]:
    """Parse ``argv`` into a subcommand and its fully defaulted settings."""
    ns = build_parser().parse_args(argv)
    if ns.command is None:
        raise UsageError("citedisrupt: a subcommand is required (see --help)")
    opts = COMMANDS[ns.command][1]
    settings = {o.dest: o.default for o in opts}
    given = vars(ns)
    config = given.pop("config", None)
    if config is not None:
        settings.update(_read_config(config, opts))
    settings.update({k: v for k, v in given.items() if k != "command"})
    missing = [k for k in REQUIRED[ns.command] if settings.get(k) is None]
    if missing:
        raise UsageError(f"{ns.command}: missing required " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return ns.command, settings


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _years_text(years: Sequence[int]) -> str:
    return f"years {years[0]}-{years[-1]}" if years else "no years"


def _load(s: dict[str, Any]):
    cfg = IngestConfig(
        min_year=s["min_year"],
        max_year=s["max_year"],
        drop_out_of_bounds=bool(s["drop_out_of_bounds"]),
        drop_time_violations=not s["keep_time_violations"],
    )
    g, report = load_graph(s["nodes"], s["edges"], cfg)
    _say(report.format_line())
    files = {}
    if s["report"] is not None:
        files[Path(s["report"])] = outputs.report_csv(report)
    return g, report, files


def _check_window(s: dict[str, Any]) -> None:
    if s["window"] < 1:
        raise UsageError(f"--window must be >= 1, got {s['window']}")
    if s["threads"] < 1:
        raise UsageError(f"--threads must be >= 1, got {s['threads']}")


def cmd_ingest(s: dict[str, Any]) -> str:
    g, _, files = _load(s)
    if s["out_prefix"]:
        files[Path(f"{s['out_prefix']}_nodes.csv")] = outputs.nodes_csv(g)
        files[Path(f"{s['out_prefix']}_edges.csv")] = outputs.edges_csv(g)
    outputs.write_all_atomic(files)
    return f"ingest: {len(g)} papers, {g.n_edges} edges, {_years_text(g.years())}"


def cmd_cd(s: dict[str, Any]) -> str:
    _check_window(s)
    g, _, files = _load(s)
    scores = cd_all(g, s["window"], s["include_same_year"], threads=s["threads"])
    files[Path(s["out"])] = outputs.scores_csv(scores, g)
    if s["annual"] is not None:
        files[Path(s["annual"])] = outputs.series_csv(annual_mean_cd(scores, g))
    outputs.write_all_atomic(files)
    return f"cd: wrote {len(scores)} rows to {s['out']}, {_years_text(g.years())}"


def cmd_mcd(s: dict[str, Any]) -> str:
    _check_window(s)
    g, _, files = _load(s)
    scores = cd_all(g, s["window"], s["include_same_year"], threads=s["threads"])
    weights = citation_weights(g, s["weight_mode"], s["horizon"], s["window"], s["include_same_year"])
    series = weighted_annual_mcd(scores, weights, g)
    files[Path(s["out"])] = outputs.series_csv(series)
    if s["weights_out"] is not None:
        files[Path(s["weights_out"])] = outputs.weights_csv(weights)
    outputs.write_all_atomic(files)
    return f"mcd: wrote {len(series)} rows to {s['out']}, {_years_text(series.years)}"


def _read_series(path: Path) -> AnnualSeries:
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    points = []
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["year", "value", "count"]:
            raise InputError(f"{path}:1: expected header 'year,value,count', got {header!r}")
        for row in reader:
            if not row:
                continue
            try:
                year, value, count = row
                points.append(SeriesPoint(int(year), Fraction(value) if value.strip() else None, int(count)))
            except ValueError:
                raise InputError(f"{path}:{reader.line_num}: unparseable row {row!r}") from None
    try:
        return AnnualSeries(points)
    except ValueError as e:
        raise InputError(f"{path}: {e}") from None


def cmd_growth(s: dict[str, Any]) -> str:
    files: dict[Path, str] = {}
    if s["series"] is not None:
        if s["nodes"] is not None or s["edges"] is not None:
            raise UsageError("growth: --series conflicts with --nodes/--edges")
        if s["out"] is not None:
            raise UsageError("growth: --out needs graph input")
        named = [("series", _read_series(Path(s["series"])))]
    else:
        if s["nodes"] is None or s["edges"] is None:
            raise UsageError("growth: needs --nodes and --edges, or --series")
        g, _, files = _load(s)
        n_series, c_series = annual_totals(g)
        if s["out"] is not None:
            files[Path(s["out"])] = outputs.totals_csv(n_series, c_series)
        named = [("papers", n_series), ("citations", c_series)]
    rows = []
    for name, series in named:
        try:
            fit = fit_exponential(series, s["from_year"], s["to_year"])
        except ValueError as e:
            raise InputError(f"growth: cannot fit {name}: {e}") from None
        _say(f"{name}: rate={outputs.fmt(fit.rate)} r_squared={outputs.fmt(fit.r_squared)} years_used={fit.years_used}")
        rows.append(outputs.fit_row(name, fit))
    files[Path(s["fit_out"])] = outputs.render(outputs.FIT_HEADER, rows)
    outputs.write_all_atomic(files)
    return f"growth: wrote {len(rows)} fits to {s['fit_out']}"


def cmd_simulate(s: dict[str, Any]) -> str:
    _check_window(s)
    try:
        config = SimConfig(
            n0=s["n0"],
            growth=s["growth"],
            years=s["years"],
            refs_per_paper=s["refs"],
            attach_bias=s["attach_bias"],
            p_disrupt=s["p_disrupt"],
            p_copy=s["p_copy"],
            seed=s["seed"],
            start_year=s["start_year"],
        )
    except ValueError as e:
        raise UsageError(f"simulate: {e}") from None
    if s["window"] >= config.years:
        raise UsageError(f"simulate: --window ({s['window']}) must be smaller than --years ({config.years})")
    g, sim = simulate(config)
    if sim.clamped_papers:
        _say(f"clamped_papers={sim.clamped_papers}")
    scores = cd_all(g, s["window"], s["include_same_year"], threads=s["threads"])
    weights = citation_weights(g, WeightMode.PER_YEAR_AVERAGE)
    first, last = complete_cohort_range(g, s["window"])
    mcd = weighted_annual_mcd(scores, weights, g).between(first, last)
    prefix = s["out_prefix"]
    outputs.write_all_atomic(
        {
            Path(f"{prefix}_nodes.csv"): outputs.nodes_csv(g),
            Path(f"{prefix}_edges.csv"): outputs.edges_csv(g),
            Path(f"{prefix}_cd.csv"): outputs.scores_csv(scores, g),
            Path(f"{prefix}_mcd.csv"): outputs.series_csv(mcd),
        }
    )
    return f"simulate: {len(g)} papers, {g.n_edges} edges, mcd {_years_text(mcd.years)}"


def cmd_lexstats(s: dict[str, Any]) -> str:
    try:
        corpus = LexCorpus.load(s["input"])
    except (ValueError, UnicodeDecodeError) as e:
        raise InputError(str(e)) from None
    records = annual_lexical_stats(corpus)
    outputs.write_all_atomic({Path(s["out"]): outputs.lex_csv(records)})
    return f"lexstats: wrote {len(records)} rows to {s['out']}, {_years_text([r.key for r in records])}"


def cmd_lexsim(s: dict[str, Any]) -> str:
    try:
        config = SimonConfig(alpha=s["alpha"], n_tokens=s["n"], seed=s["seed"])
        checkpoints = s["checkpoints"] or [config.n_tokens]
        records = dilution_curve(config, checkpoints)
    except ValueError as e:
        raise UsageError(f"lexsim: {e}") from None
    outputs.write_all_atomic({Path(s["out"]): outputs.lex_csv(records, key="checkpoint")})
    return f"lexsim: wrote {len(records)} rows to {s['out']}"


HANDLERS = {
    "ingest": cmd_ingest,
    "cd": cmd_cd,
    "mcd": cmd_mcd,
    "growth": cmd_growth,
    "simulate": cmd_simulate,
    "lexstats": cmd_lexstats,
    "lexsim": cmd_lexsim,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        command, settings = resolve(argv)
        _say(HANDLERS[command](settings))
    except SystemExit as e:  # --help
        return int(e.code or 0)
    except UsageError as e:
        _say(f"error: {e}")
        return EXIT_USAGE
    except (InputError, GraphFormatError, FileNotFoundError, UnicodeDecodeError) as e:
        _say(f"error: {e}")
        return EXIT_INPUT
    except OSError as e:
        _say(f"error: {e}")
        return EXIT_INPUT
    except Exception as e:  # noqa: BLE001
        _say(f"internal error: {type(e).__name__}: {e}")
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
