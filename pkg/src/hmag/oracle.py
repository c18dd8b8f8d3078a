"""Closed-form predictions for H_0, H_1 and H_2, used to check SNF results.

H_0 and H_1 hold for every space with positive off-diagonal distances;
one-way zero distances add end faces to the boundary and void them. The
H_2 count is only valid for geodetic spaces without 4-cuts. Outside their
hypotheses the oracles return ``NOT_APPLICABLE`` instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from hmag.exact import as_rat, format_rat
from hmag.space import FinMetric, _adjacent, _btw, has_no_4cuts, is_geodetic

__all__ = ["NOT_APPLICABLE", "OracleReport", "h0_oracle", "h1_oracle", "h2_oracle", "oracle_report"]


class _NotApplicable:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NOT_APPLICABLE"

    def __bool__(self):
        return False


NOT_APPLICABLE = _NotApplicable()


def h0_oracle(X: FinMetric, grading):
    if X.has_zero_steps:
        return NOT_APPLICABLE
    return X.n if as_rat(grading) == 0 else 0


def _scaled(X: FinMetric, grading):
    s = as_rat(grading) * X.scale
    return int(s) if s.denominator == 1 else None


def h1_oracle(X: FinMetric, grading):
    """Ordered adjacent pairs ``(x0, x1)`` with ``d(x0, x1) == grading``."""
    if X.has_zero_steps:
        return NOT_APPLICABLE
    k = _scaled(X, grading)
    if k is None:
        return 0
    dd = X.idist
    return sum(
        1
        for i in range(X.n)
        for j in range(X.n)
        if i != j and dd[i][j] == k and _adjacent(X, i, j)
    )


def _h2_count(X: FinMetric, k: int) -> int:
    dd = X.idist
    n = X.n
    adj = [[i != j and _adjacent(X, i, j) for j in range(n)] for i in range(n)]
    count = 0
    for y in range(n):
        for x in range(n):
            if not adj[x][y]:
                continue
            for z in range(n):
                # x == z is allowed: only consecutive points must differ
                if adj[y][z] and dd[x][y] + dd[y][z] == k and not _btw(dd, x, y, z):
                    count += 1
    return count


def h2_oracle(X: FinMetric, grading):
    """Triples ``<x, y, z>`` with adjacent consecutive pairs and ``y`` not between.

    Returns ``NOT_APPLICABLE`` unless ``X`` is geodetic with no 4-cuts.
    """
    if X.has_zero_steps or not (is_geodetic(X) and has_no_4cuts(X)):
        return NOT_APPLICABLE
    k = _scaled(X, grading)
    return 0 if k is None else _h2_count(X, k)


@dataclass
class OracleReport:
    geodetic: bool
    no_4cuts: bool
    predictions: dict = field(default_factory=dict)

    def predicted(self, n: int, grading):
        return self.predictions.get((n, as_rat(grading)), NOT_APPLICABLE)

    def to_json(self) -> dict:
        return {
            "geodetic": self.geodetic,
            "no_4cuts": self.no_4cuts,
            "predictions": [
                {
                    "degree": n,
                    "grading": format_rat(l),
                    "rank": None if v is NOT_APPLICABLE else v,
                }
                for (n, l), v in sorted(self.predictions.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            ],
        }


def oracle_report(X: FinMetric, gradings) -> OracleReport:
    geo = bool(is_geodetic(X))
    cuts = bool(has_no_4cuts(X))
    rep = OracleReport(geo, cuts)
    for l in gradings:
        l = Fraction(l)
        rep.predictions[(0, l)] = h0_oracle(X, l)
        rep.predictions[(1, l)] = h1_oracle(X, l)
        if geo and cuts and not X.has_zero_steps:
            k = _scaled(X, l)
            rep.predictions[(2, l)] = 0 if k is None else _h2_count(X, k)
        else:
            rep.predictions[(2, l)] = NOT_APPLICABLE
    return rep
