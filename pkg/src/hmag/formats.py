"""Readers for the three input formats.

* ``metric-json``: ``{"points": [...], "distances": [[...], ...]}``; entries
  are ints, JSON decimals or strings such as ``"3/2"`` and ``"1.5"``.
* ``dist-csv``: a header row of labels followed by the matrix rows; a
  leading label column is allowed if the header starts with an empty cell.
* ``graph-edges``: one ``u v`` pair per line; a lone ``u`` declares an
  isolated vertex; ``#`` starts a comment.

Decimal literals are always read as exact rationals.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from hmag.errors import InfiniteDistance, InputError, ParseError
from hmag.exact import parse_rat
from hmag.space import FinMetric, graph_to_metric, validate

FORMATS = ("metric-json", "dist-csv", "graph-edges")

__all__ = ["FORMATS", "guess_format", "load_space", "parse_dist_csv", "parse_graph_edges", "parse_metric_json"]


def _cell(value, where=None, path=None) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"invalid distance {value!r}", where, path)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        if value.strip().lower().lstrip("+") in {"inf", "infinity"}:
            raise InfiniteDistance("infinite distances are not supported")
        try:
            return parse_rat(value)
        except ValueError as exc:
            raise ParseError(str(exc), where, path) from None
    raise ParseError(f"invalid distance {value!r}", where, path)


def parse_metric_json(text: str, path=None) -> FinMetric:
    try:
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, path) from None
    if not isinstance(data, dict) or "distances" not in data:
        raise ParseError('expected an object with a "distances" matrix', None, path)
    rows = data["distances"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError('"distances" must be a list of rows', None, path)
    labels = data.get("points")
    dist = []
    for i, r in enumerate(rows):
        try:
            dist.append([_cell(v) for v in r])
        except ParseError as exc:
            raise ParseError(f"row {i}: {exc}", None, path) from None
    return validate(dist, labels)


def parse_dist_csv(text: str, path=None) -> FinMetric:
    rows = [(k + 1, r) for k, r in enumerate(csv.reader(io.StringIO(text)))]
    rows = [(k, [c.strip() for c in r]) for k, r in rows if any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty CSV", None, path)
    _, header = rows[0]
    label_col = header[0] == ""
    labels = header[1:] if label_col else header
    n = len(labels)
    if len(rows) - 1 != n:
        raise ParseError(f"expected {n} matrix rows after the header, found {len(rows) - 1}", rows[-1][0], path)
    dist = []
    for (line, r), lab in zip(rows[1:], labels):
        if label_col:
            if len(r) != n + 1:
                raise ParseError(f"expected {n + 1} cells, found {len(r)}", line, path)
            if r[0] != lab:
                raise ParseError(f"row label {r[0]!r} does not match column {lab!r}", line, path)
            r = r[1:]
        elif len(r) != n:
            raise ParseError(f"expected {n} cells, found {len(r)}", line, path)
        dist.append([_cell(c, line, path) for c in r])
    return validate(dist, labels)


def parse_graph_edges(text: str, path=None) -> FinMetric:
    edges, vertices = [], []
    for line_no, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        toks = body.replace(",", " ").split()
        if len(toks) == 1:
            vertices.append(toks[0])
        elif len(toks) == 2:
            if toks[0] == toks[1]:
                raise ParseError(f"self-loop at {toks[0]!r}", line_no, path)
            edges.append((toks[0], toks[1]))
        else:
            raise ParseError(f"expected 'u v', got {body!r}", line_no, path)
    if not edges and not vertices:
        raise ParseError("no vertices or edges", None, path)
    return graph_to_metric(edges, vertices)


_PARSERS = {
    "metric-json": parse_metric_json,
    "dist-csv": parse_dist_csv,
    "graph-edges": parse_graph_edges,
}


def guess_format(path: str) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "metric-json"
    if suffix == ".csv":
        return "dist-csv"
    return "graph-edges"


def load_space(path: str, fmt: str | None = None) -> FinMetric:
    """Read a space from ``path`` (``-`` for stdin)."""
    if fmt is None:
        fmt = "graph-edges" if path == "-" else guess_format(path)
    if fmt not in _PARSERS:
        raise InputError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return _PARSERS[fmt](text, path)
