"""Tabular and DOT output for affine stars, plus the reference-table check."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from weighted_stars.enumerate import EnumQuery, count_affine, enumerate_affine
from weighted_stars.star import (AffineSolution, StarShape, coxeter_labels, dimension,
                                 NotAffineError)
from weighted_stars.tables_data import COUNTS, TABLE_QUERIES, TABLES

__all__ = [
    "CLASSICAL_ALIASES",
    "FORMATS",
    "TableRow",
    "VerificationReport",
    "classical_alias",
    "emit_dot",
    "parse_csv",
    "render_table",
    "rows_from_solutions",
    "verify_paper_tables",
]

FORMATS = ("text", "csv", "json", "tex")
HEADER = ("No.", "Type", "D", "s", "h", "labels")

# (p, arms) -> affine Dynkin diagram with the same matrix
CLASSICAL_ALIASES = {
    (2, (1, 1, 1, 1)): "D4",
    (1, (2, 2, 2)): "E6",
    (1, (1, 3, 3)): "E7",
    (1, (1, 2, 5)): "E8",
}

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def classical_alias(sol: AffineSolution) -> str | None:
    return CLASSICAL_ALIASES.get((sol.p, sol.arms))


@dataclass(frozen=True)
class TableRow:
    index: int
    p: int
    arms: tuple[int, ...]
    D: int
    s: int
    h: int
    x: tuple[int, ...]
    alias: str | None = None

    @classmethod
    def from_solution(cls, index: int, sol: AffineSolution) -> TableRow:
        return cls(index, sol.p, sol.arms, sol.D, sol.s, sol.h, sol.x, classical_alias(sol))

    def type_string(self, style: str = "ascii") -> str:
        arms = ",".join(map(str, self.arms))
        if style == "tex":
            body = rf"\mathcal B^{{({self.p})}}({arms})"
            if self.alias:
                body = rf"{self.alias[0]}_{self.alias[1:]}^{{(1)}}\simeq {body}"
            return f"${body}$"
        if style == "unicode":
            body = f"𝓑^({self.p})({arms})"
            if self.alias:
                body = f"{self.alias[0]}{self.alias[1:].translate(_SUBSCRIPTS)}^(1) ≃ {body}"
            return body
        body = f"B^({self.p})({arms})"
        if self.alias:
            body = f"{self.alias}^(1) ~ {body}"
        return body

    @property
    def label_string(self) -> str:
        return f"({','.join(map(str, self.x))})[{self.s}]"


def rows_from_solutions(solutions: Iterable[AffineSolution]) -> list[TableRow]:
    return [TableRow.from_solution(i, sol) for i, sol in enumerate(solutions, start=1)]


def _render_text(rows: Sequence[TableRow]) -> str:
    cells = [HEADER] + [
        (str(r.index), r.type_string("unicode"), str(r.D), str(r.s), str(r.h), r.label_string)
        for r in rows
    ]
    widths = [max(len(c[i]) for c in cells) for i in range(len(HEADER))]
    lines = []
    for c in cells:
        parts = [c[i].rjust(widths[i]) if i in (0, 2, 3, 4) else c[i].ljust(widths[i])
                 for i in range(len(HEADER))]
        lines.append("  ".join(parts).rstrip())
    return "\n".join(lines) + "\n"


def _render_csv(rows: Sequence[TableRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow([r.index, r.type_string(), r.D, r.s, r.h, r.label_string])
    return buf.getvalue()


def _render_json(rows: Sequence[TableRow]) -> str:
    data = [
        {
            "no": r.index,
            "type": r.type_string(),
            "p": r.p,
            "arms": [str(a) for a in r.arms],
            "D": str(r.D),
            "s": str(r.s),
            "h": str(r.h),
            "x": [str(v) for v in r.x],
            "labels": r.label_string,
        }
        for r in rows
    ]
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"


def _render_tex(rows: Sequence[TableRow]) -> str:
    lines = [
        r"\begin{longtable}{@{}r l r r r l@{}}",
        r"\toprule",
        r"No. & Type & $D$ & $s$ & $h$ & $(x_i)[s]$\\",
        r"\midrule",
    ]
    for r in rows:
        lines.append(f"{r.index} & {r.type_string('tex')} & {r.D} & {r.s} & {r.h} "
                     f"& ${r.label_string}$ \\\\")
    lines += [r"\bottomrule", r"\end{longtable}"]
    return "\n".join(lines) + "\n"


_RENDERERS = {"text": _render_text, "csv": _render_csv, "json": _render_json, "tex": _render_tex}


def render_table(solutions: Iterable[AffineSolution], format: str = "text") -> str:
    try:
        renderer = _RENDERERS[format]
    except KeyError:
        raise ValueError(f"unknown format {format!r}; choose from {', '.join(FORMATS)}") from None
    return renderer(rows_from_solutions(solutions))


def parse_csv(text: str) -> list[dict]:
    """Read CSV output back into ``D``, ``s``, ``h`` ints and the ``x`` tuple."""
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for rec in reader:
        xs, s = rec["labels"].rstrip("]").split(")[")
        if int(s) != int(rec["s"]):
            raise ValueError(f"row {rec['No.']}: label string disagrees with s")
        out.append({
            "index": int(rec["No."]),
            "type": rec["Type"],
            "D": int(rec["D"]),
            "s": int(rec["s"]),
            "h": int(rec["h"]),
            "x": tuple(int(v) for v in xs.lstrip("(").split(",")),
        })
    return out


def emit_dot(shape: StarShape, with_labels: bool = False) -> str:
    """Undirected DOT graph of the star; node labels are diagonal weights.

    With ``with_labels`` each node also gets its Coxeter label as ``xlabel``.
    Nodes are ``arm{i}_{j}`` (arm ``i`` from 1, position ``j`` from the root)
    and ``center``.
    """
    labels = None
    if with_labels:
        try:
            labels = coxeter_labels(shape)
        except NotAffineError as exc:
            raise ValueError(f"cannot print Coxeter labels: {exc}") from None

    def attrs(weight: int, label: int | None) -> str:
        if label is None:
            return f'[label="{weight}"]'
        return f'[label="{weight}", xlabel="{label}"]'

    lines = [f'graph "{shape}" {{', "  node [shape=circle];"]
    lines.append(f"  center {attrs(shape.k, labels.center if labels else None)};")
    for i, r in enumerate(shape.arms, start=1):
        arm = labels.arm_labels[i - 1] if labels else None
        for j in range(1, r + 1):
            lines.append(f"  arm{i}_{j} {attrs(2, arm[j - 1] if arm else None)};")
    for i, r in enumerate(shape.arms, start=1):
        chain = [f"arm{i}_{j}" for j in range(1, r + 1)] + ["center"]
        for a, b in zip(chain, chain[1:]):
            lines.append(f"  {a} -- {b};")
    lines.append("}")
    assert sum(1 for ln in lines if " -- " in ln) == dimension(shape) - 1
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TableCheck:
    name: str
    expected_rows: int
    actual_rows: int
    total: int
    mismatch: str | None

    @property
    def passed(self) -> bool:
        return self.mismatch is None


@dataclass(frozen=True)
class CountCheck:
    m: int
    p: int
    expected: int
    actual: int

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass(frozen=True)
class VerificationReport:
    tables: tuple[TableCheck, ...]
    counts: tuple[CountCheck, ...]

    @property
    def ok(self) -> bool:
        return all(t.passed for t in self.tables) and all(c.passed for c in self.counts)

    def lines(self) -> list[str]:
        out = []
        for t in self.tables:
            status = "PASS" if t.passed else "FAIL"
            line = f"{status} table {t.name}: {t.actual_rows}/{t.expected_rows} rows (total {t.total})"
            if t.mismatch:
                line += f": {t.mismatch}"
            out.append(line)
        for c in self.counts:
            status = "PASS" if c.passed else "FAIL"
            out.append(f"{status} count m={c.m} p={c.p}: expected {c.expected}, got {c.actual}")
        return out


_FIELDS = ("index", "p", "arms", "D", "s", "h", "x", "alias")


def _check_table(name: str) -> TableCheck:
    m, p, d_max = TABLE_QUERIES[name]
    result = enumerate_affine(EnumQuery(m, p, d_max=d_max))
    actual = rows_from_solutions(result.solutions)
    expected = [TableRow(*row) for row in TABLES[name]]
    mismatch = None
    for a, e in zip(actual, expected):
        for f in _FIELDS:
            if getattr(a, f) != getattr(e, f):
                mismatch = f"row {e.index} field {f}: expected {getattr(e, f)!r}, got {getattr(a, f)!r}"
                break
        if mismatch:
            break
    if mismatch is None and len(actual) != len(expected):
        mismatch = f"expected {len(expected)} rows, got {len(actual)}"
    if mismatch is None and result.total != COUNTS[(m, p)]:
        mismatch = f"untruncated total {result.total} != {COUNTS[(m, p)]}"
    return TableCheck(name, len(expected), len(actual), result.total, mismatch)


def verify_paper_tables() -> VerificationReport:
    """Regenerate every reference table and the counts and diff them."""
    tables = tuple(_check_table(name) for name in TABLES)
    counts = tuple(CountCheck(m, p, n, count_affine(m, p)) for (m, p), n in COUNTS.items())
    return VerificationReport(tables, counts)
