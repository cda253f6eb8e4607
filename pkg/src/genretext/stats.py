"""Frequency tables over coded corpora, Welch's t-test, KWIC, comparisons.

Counting uses the local mean: a row's denominator is the number of units for
which the tabulated system is applicable at all, so mood-inapplicable
non-finite units never dilute a mood row. Rows with a zero denominator are
rendered with an explicit empty marker, distinguishing inapplicability from
an observed 0%.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

from .corpus import CodedCorpus
from .errors import (
    ShapeMismatchError,
    TooFewObservationsError,
    UnknownSystemError,
)
from .genre import GENRES
from .systems import SystemNetwork, applicable_systems
from .task_model import ELEMENT_KINDS
from .textutil import tokenize

EMPTY_MARKER = "—"

BY_ELEMENT = "element"
BY_GENRE = "genre"


@dataclass
class FrequencyTable:
    system: str
    partition: str
    rows: tuple[str, ...]
    features: tuple[str, ...]
    cells: dict[tuple[str, str], float] = field(default_factory=dict)
    denominators: dict[str, int] = field(default_factory=dict)

    def is_empty_row(self, row: str) -> bool:
        if self.denominators:
            return self.denominators.get(row, 0) == 0
        return all((row, f) not in self.cells for f in self.features)

    def cell(self, row: str, feature: str) -> float | None:
        return self.cells.get((row, feature))


def _genre_rows(corpus: CodedCorpus) -> tuple[str, ...]:
    present = set(corpus.genres())
    ordered = [g for g in GENRES if g in present]
    ordered += [g for g in corpus.genres() if g not in ordered]
    return tuple(ordered)


def local_mean_table(
    corpus: CodedCorpus,
    system: str,
    partition: str,
    network: SystemNetwork,
) -> FrequencyTable:
    """Per-row feature percentages over the row's applicable-unit denominator."""
    if not corpus.units:
        raise TooFewObservationsError("corpus is empty")
    sys_ = network.system(system)  # raises UnknownSystemError
    if partition == BY_ELEMENT:
        rows: tuple[str, ...] = ELEMENT_KINDS
        row_of = lambda u: u.element  # noqa: E731
    elif partition == BY_GENRE:
        rows = _genre_rows(corpus)
        row_of = lambda u: u.genre  # noqa: E731
    else:
        raise ValueError(f"unknown partition {partition!r}")

    table = FrequencyTable(system, partition, rows, sys_.features)
    counts: dict[str, dict[str, int]] = {r: {f: 0 for f in sys_.features} for r in rows}
    denoms: dict[str, int] = {r: 0 for r in rows}
    for unit in corpus.units:
        row = row_of(unit)
        if row not in counts:
            continue
        if system not in applicable_systems(network, unit.bundle):
            continue
        denoms[row] += 1
        selected = unit.bundle.selections.get(system)
        if selected in counts[row]:
            counts[row][selected] += 1
    for row in rows:
        table.denominators[row] = denoms[row]
        if denoms[row] == 0:
            continue
        for feature in sys_.features:
            table.cells[(row, feature)] = counts[row][feature] / denoms[row] * 100.0
    return table


def cross_tab(corpus: CodedCorpus) -> FrequencyTable:
    """Element-kind mix per genre: one row per genre, one column per kind."""
    if not corpus.units:
        raise TooFewObservationsError("corpus is empty")
    rows = _genre_rows(corpus)
    table = FrequencyTable("element-kind", BY_GENRE, rows, ELEMENT_KINDS)
    counts = {r: {k: 0 for k in ELEMENT_KINDS} for r in rows}
    denoms = {r: 0 for r in rows}
    for unit in corpus.units:
        denoms[unit.genre] += 1
        counts[unit.genre][unit.element] += 1
    for row in rows:
        table.denominators[row] = denoms[row]
        if denoms[row] == 0:
            continue
        for kind in ELEMENT_KINDS:
            table.cells[(row, kind)] = counts[row][kind] / denoms[row] * 100.0
    return table


# ---------------------------------------------------------------------------
# Welch's two-sample t-test with tabulated critical values

_CRITICAL: dict[str, dict[str, float]] | None = None


def _critical_table() -> dict[str, dict[str, float]]:
    global _CRITICAL
    if _CRITICAL is None:
        text = resources.files("genretext").joinpath("data/t-critical.json").read_text("utf-8")
        _CRITICAL = json.loads(text)
    return _CRITICAL


def critical_value(alpha: float, df: float) -> float:
    table = _critical_table()
    key = f"{alpha:g}"
    if key not in table:
        raise ValueError(f"alpha {alpha} not tabulated (use one of {sorted(table)})")
    column = table[key]
    idx = int(df)
    if idx < 1:
        idx = 1
    if str(idx) in column:
        return column[str(idx)]
    return column["inf"]


def _mean(xs: list[float]) -> float:
    return sum(xs) / len(xs)


def _var(xs: list[float], mean: float) -> float:
    return sum((x - mean) ** 2 for x in xs) / (len(xs) - 1)


def t_test(sample_a: list[float], sample_b: list[float], alpha: float = 0.05) -> dict:
    """Welch's unequal-variance two-sample t statistic and significance.

    Both samples with zero variance and different means degenerate to an
    infinite statistic, reported as the +inf sentinel.
    """
    if len(sample_a) < 2 or len(sample_b) < 2:
        raise TooFewObservationsError("each sample needs at least two values")
    na, nb = len(sample_a), len(sample_b)
    ma, mb = _mean(sample_a), _mean(sample_b)
    va, vb = _var(sample_a, ma), _var(sample_b, mb)
    if va == 0.0 and vb == 0.0:
        df = float(na + nb - 2)
        if ma == mb:
            return {"t": 0.0, "df": df, "significant": False}
        return {"t": math.inf, "df": df, "significant": True}
    sa, sb = va / na, vb / nb
    t = (ma - mb) / math.sqrt(sa + sb)
    # scale-invariant Welch-Satterthwaite form, robust to tiny variances
    r = sa / (sa + sb)
    df = 1.0 / (r**2 / (na - 1) + (1.0 - r) ** 2 / (nb - 1))
    significant = abs(t) > critical_value(alpha, df)
    return {"t": t, "df": df, "significant": significant}


# ---------------------------------------------------------------------------
# KWIC concordancing

def kwic(texts: list[str], pattern: str, window: int) -> list[str]:
    """Aligned concordance lines for a token pattern over unit strings.

    Matching is case-insensitive on token boundaries; output is ordered by
    unit then match offset, left context right-aligned to the widest left.
    """
    if window < 0:
        raise ValueError("window must be >= 0")
    needle = [t.casefold() for t in tokenize(pattern)]
    if not needle:
        return []
    hits: list[tuple[str, str, str]] = []
    for text in texts:
        tokens = tokenize(text)
        folded = [t.casefold() for t in tokens]
        for j in range(len(tokens) - len(needle) + 1):
            if folded[j : j + len(needle)] == needle:
                left = " ".join(tokens[max(0, j - window) : j])
                kw = " ".join(tokens[j : j + len(needle)])
                right = " ".join(tokens[j + len(needle) : j + len(needle) + window])
                hits.append((left, kw, right))
    if not hits:
        return []
    lw = max(len(h[0]) for h in hits)
    kw_w = max(len(h[1]) for h in hits)
    lines = []
    for left, kw, right in hits:
        if lw:
            lines.append(f"{left:>{lw}}  {kw:<{kw_w}}  {right}".rstrip())
        else:
            lines.append(f"{kw:<{kw_w}}  {right}".rstrip())
    return lines


# ---------------------------------------------------------------------------
# Table comparison and serialization

def compare_tables(
    observed: FrequencyTable, reference: FrequencyTable, tolerance: float
) -> dict:
    """Per-cell comparison report; empty rows are compared only for emptiness."""
    if observed.rows != reference.rows or observed.features != reference.features:
        raise ShapeMismatchError(
            f"shape mismatch: {observed.rows}/{observed.features} vs "
            f"{reference.rows}/{reference.features}"
        )
    deltas: dict[tuple[str, str], float] = {}
    worst: tuple[str, str] | None = None
    worst_delta = -1.0
    ok = True
    for row in observed.rows:
        oe, re_ = observed.is_empty_row(row), reference.is_empty_row(row)
        if oe or re_:
            if oe != re_:
                ok = False
                for feature in observed.features:
                    deltas[(row, feature)] = math.inf
                if worst is None or math.inf > worst_delta:
                    worst, worst_delta = (row, observed.features[0]), math.inf
            continue
        for feature in observed.features:
            delta = abs(observed.cells[(row, feature)] - reference.cells[(row, feature)])
            deltas[(row, feature)] = delta
            if delta > worst_delta:
                worst, worst_delta = (row, feature), delta
            if delta > tolerance:
                ok = False
    return {
        "pass": ok,
        "worst_cell": worst,
        "worst_delta": worst_delta if worst is not None else 0.0,
        "deltas": deltas,
        "tolerance": tolerance,
    }


def render_tsv(table: FrequencyTable, include_n: bool = True) -> str:
    """Rows x features, percentages to one decimal, empty rows as markers."""
    header = [table.partition, *table.features]
    if include_n:
        header.append("n")
    lines = ["\t".join(header)]
    for row in table.rows:
        if table.is_empty_row(row):
            cells = [EMPTY_MARKER] * len(table.features)
            denom = "0"
        else:
            cells = [f"{table.cells[(row, f)]:.1f}" for f in table.features]
            denom = str(table.denominators.get(row, ""))
        line = [row, *cells]
        if include_n:
            line.append(denom)
        lines.append("\t".join(line))
    return "\n".join(lines) + "\n"


def parse_tsv(text: str) -> FrequencyTable:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ShapeMismatchError("empty table file")
    header = lines[0].split("\t")
    has_n = header[-1] == "n"
    features = tuple(header[1 : -1 if has_n else len(header)])
    partition = header[0]
    rows = []
    table = FrequencyTable("", partition, (), features)
    for line in lines[1:]:
        parts = line.split("\t")
        row = parts[0]
        rows.append(row)
        values = parts[1 : 1 + len(features)]
        if has_n:
            table.denominators[row] = int(parts[1 + len(features)])
        if all(v == EMPTY_MARKER for v in values):
            table.denominators.setdefault(row, 0)
            continue
        for feature, v in zip(features, values):
            table.cells[(row, feature)] = float(v)
    table.rows = tuple(rows)
    return table


def render_pretty(table: FrequencyTable) -> str:
    """Aligned plain-text rendering in the layout of the reference figures."""
    widths = [max(len(table.partition), max((len(r) for r in table.rows), default=0))]
    for f in table.features:
        widths.append(max(len(f), 6))
    header = table.partition.ljust(widths[0]) + "  " + "  ".join(
        f.rjust(w) for f, w in zip(table.features, widths[1:])
    ) + "      n"
    lines = [header]
    for row in table.rows:
        if table.is_empty_row(row):
            cells = [EMPTY_MARKER.rjust(w) for w in widths[1:]]
            denom = "0"
        else:
            cells = [
                f"{table.cells[(row, f)]:.1f}".rjust(w)
                for f, w in zip(table.features, widths[1:])
            ]
            denom = str(table.denominators.get(row, ""))
        lines.append(row.ljust(widths[0]) + "  " + "  ".join(cells) + denom.rjust(7))
    return "\n".join(lines) + "\n"


def reference_table(name: str) -> FrequencyTable:
    """A bundled reference table, e.g. 'fig3' -> data/reference/paper-fig3.tsv."""
    text = (
        resources.files("genretext")
        .joinpath(f"data/reference/paper-{name}.tsv")
        .read_text("utf-8")
    )
    return parse_tsv(text)
