"""Year-bucketed lexical statistics and the Simon word-choice model."""

from __future__ import annotations

import csv
import re
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

__all__ = [
    "LexCorpus",
    "LexRecord",
    "SimonConfig",
    "annual_lexical_stats",
    "dilution_curve",
    "lexical_record",
    "simon_generate",
    "tokenize",
]

# Letters and digits, with apostrophes allowed only between them.
_TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*")
_YEAR_FILE_RE = re.compile(r"^(\d{4})\.txt$")


def tokenize(text: str | bytes) -> list[str]:
    """Lowercase ``text`` and split it into runs of letters, digits and internal apostrophes.

    >>> tokenize("don't STOP don't")
    ["don't", 'stop', "don't"]
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")  # raises UnicodeDecodeError on invalid input
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class LexCorpus:
    """Per-year token counts."""

    years: Mapping[int, Counter[str]]

    def __post_init__(self) -> None:
        for year, counts in self.years.items():
            for tok, n in counts.items():
                if not tok:
                    raise ValueError(f"year {year}: empty token")
                if n < 1:
                    raise ValueError(f"year {year}: token {tok!r} has count {n}")

    @classmethod
    def from_texts(cls, texts: Mapping[int, str]) -> LexCorpus:
        return cls({y: Counter(tokenize(t)) for y, t in sorted(texts.items())})

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[str, int, int]]) -> LexCorpus:
        """Build from ``(token, year, count)`` rows; repeated (token, year) pairs are summed."""
        years: dict[int, Counter[str]] = {}
        for token, year, count in rows:
            tok = token.strip().lower()
            if not tok:
                raise ValueError(f"year {year}: empty token")
            if count < 1:
                raise ValueError(f"year {year}: token {tok!r} has count {count}")
            years.setdefault(year, Counter())[tok] += count
        return cls(dict(sorted(years.items())))

    @classmethod
    def from_counts_csv(cls, path: str | Path) -> LexCorpus:
        path = Path(path)
        with path.open(newline="", encoding="utf-8-sig") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["token", "year", "count"]:
                raise ValueError(f"{path}:1: expected header 'token,year,count', got {header!r}")
            rows = []
            for row in reader:
                if not row:
                    continue
                if len(row) != 3:
                    raise ValueError(f"{path}:{reader.line_num}: expected 3 fields, got {len(row)}")
                try:
                    rows.append((row[0], int(row[1]), int(row[2])))
                except ValueError:
                    raise ValueError(f"{path}:{reader.line_num}: unparseable row {row!r}") from None
        return cls.from_rows(rows)

    @classmethod
    def from_text_dir(cls, directory: str | Path) -> LexCorpus:
        """Read every ``YYYY.txt`` file in ``directory`` as that year's text."""
        directory = Path(directory)
        texts = {}
        for f in sorted(directory.iterdir()):
            m = _YEAR_FILE_RE.match(f.name)
            if m:
                texts[int(m.group(1))] = f.read_bytes().decode("utf-8")
        if not texts:
            raise ValueError(f"no YYYY.txt files in {directory}")
        return cls.from_texts(texts)

    @classmethod
    def load(cls, path: str | Path) -> LexCorpus:
        path = Path(path)
        if path.is_dir():
            return cls.from_text_dir(path)
        if not path.is_file():
            raise FileNotFoundError(f"no such file or directory: {path}")
        return cls.from_counts_csv(path)


@dataclass(frozen=True)
class LexRecord:
    key: int
    """Year, or stream length for a dilution curve."""
    total_tokens: int
    vocabulary: int
    hapax: int

    @property
    def hapax_fraction(self) -> Fraction:
        return Fraction(self.hapax, self.total_tokens) if self.total_tokens else Fraction(0)

    @property
    def ttr(self) -> Fraction | None:
        return Fraction(self.vocabulary, self.total_tokens) if self.total_tokens else None


def lexical_record(key: int, counts: Mapping[object, int]) -> LexRecord:
    return LexRecord(
        key=key,
        total_tokens=sum(counts.values()),
        vocabulary=len(counts),
        hapax=sum(1 for n in counts.values() if n == 1),
    )


def annual_lexical_stats(corpus: LexCorpus) -> list[LexRecord]:
    """One record per year; hapax status is judged within each year separately."""
    if not corpus.years:
        raise ValueError("corpus is empty")
    return [lexical_record(year, counts) for year, counts in sorted(corpus.years.items())]


@dataclass(frozen=True)
class SimonConfig:
    alpha: float = 0.1
    n_tokens: int = 100_000
    seed: int = 7

    def __post_init__(self) -> None:
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.n_tokens < 1:
            raise ValueError(f"n_tokens must be >= 1, got {self.n_tokens}")


def simon_generate(config: SimonConfig) -> np.ndarray:
    """Token stream of integer word types from Simon's rich-get-richer process.

    The first token is a new type. Every later token is a new type with
    probability ``alpha`` and otherwise a copy of a uniformly chosen earlier
    token, so a type is reused in proportion to its frequency so far.
    """
    n = config.n_tokens
    rng = np.random.default_rng(config.seed)
    innovate = rng.random(n) < config.alpha
    innovate[0] = True
    # Position t copies a uniform index in [0, t).
    back = (rng.random(n) * np.arange(n)).astype(np.int64)
    stream = np.empty(n, dtype=np.int64)
    next_type = 0
    for t in range(n):
        if innovate[t]:
            stream[t] = next_type
            next_type += 1
        else:
            stream[t] = stream[back[t]]
    return stream


def dilution_curve(config: SimonConfig, checkpoints: Sequence[int]) -> list[LexRecord]:
    """Lexical statistics of prefixes of one generated stream at each checkpoint length."""
    cps = list(checkpoints)
    if not cps:
        raise ValueError("no checkpoints given")
    if any(c < 1 for c in cps) or any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValueError(f"checkpoints must be positive and strictly increasing: {cps}")
    if cps[-1] > config.n_tokens:
        raise ValueError(f"checkpoint {cps[-1]} exceeds stream length {config.n_tokens}")

    stream = simon_generate(config)
    counts: Counter[int] = Counter()
    hapax = 0
    out = []
    pos = 0
    for cp in cps:
        for tok in stream[pos:cp].tolist():
            c = counts[tok]
            if c == 0:
                hapax += 1
            elif c == 1:
                hapax -= 1
            counts[tok] = c + 1
        pos = cp
        out.append(LexRecord(cp, cp, len(counts), hapax))
    return out
