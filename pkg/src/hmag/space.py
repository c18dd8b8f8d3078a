"""Finite quasi-pseudo-metric spaces and their betweenness predicates."""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from hmag.errors import (
    DisconnectedGraph,
    InfiniteDistance,
    InputError,
    NegativeDistance,
    NonzeroSelfDistance,
    SamePoint,
    TriangleViolation,
)
from hmag.exact import as_rat, format_rat

log = logging.getLogger(__name__)

__all__ = [
    "FinMetric",
    "Verdict",
    "adjacent",
    "adjacent_pairs",
    "between",
    "graph_to_metric",
    "has_no_4cuts",
    "is_geodetic",
    "is_menger_convex",
    "scale_space",
    "skeletonize",
    "strictly_between",
    "validate",
]


def _to_rat(value) -> Fraction:
    if isinstance(value, float) and math.isinf(value):
        raise InfiniteDistance("infinite distances are not supported")
    if isinstance(value, str) and value.strip().lower().lstrip("+") in {"inf", "infinity"}:
        raise InfiniteDistance("infinite distances are not supported")
    return as_rat(value)


@dataclass(frozen=True)
class FinMetric:
    """A validated finite quasi-pseudo-metric space.

    ``dist[i][j]`` is the exact distance from point ``i`` to point ``j``.
    Construction checks zero self-distances, nonnegativity and the triangle
    inequality; ``symmetric`` and ``skeletal`` are derived.

    ``scale`` is the lcm of all distance denominators and ``idist`` holds
    the distances multiplied by it, so hot loops compare plain ints.
    """

    labels: tuple
    dist: tuple
    symmetric: bool = field(init=False)
    skeletal: bool = field(init=False)
    scale: int = field(init=False, repr=False)
    idist: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        n = len(labels)
        if n == 0:
            raise InputError("a metric space needs at least one point")
        if len(set(labels)) != n:
            dup = sorted({x for x in labels if labels.count(x) > 1})
            raise InputError(f"duplicate point labels: {dup}")
        rows = [list(r) for r in self.dist]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InputError(f"distance matrix must be {n}x{n}")
        d = tuple(tuple(_to_rat(v) for v in r) for r in rows)
        for i in range(n):
            if d[i][i] != 0:
                raise NonzeroSelfDistance(
                    f"d({labels[i]},{labels[i]}) = {format_rat(d[i][i])}, expected 0"
                )
            for j in range(n):
                if d[i][j] < 0:
                    raise NegativeDistance(
                        f"d({labels[i]},{labels[j]}) = {format_rat(d[i][j])} is negative"
                    )
        D = 1
        for r in d:
            for v in r:
                D = math.lcm(D, v.denominator)
        idist = tuple(tuple(int(v * D) for v in r) for r in d)
        for i in range(n):
            di = idist[i]
            for j in range(n):
                dij = di[j]
                dj = idist[j]
                for k in range(n):
                    if di[k] > dij + dj[k]:
                        raise TriangleViolation(
                            f"d({labels[i]},{labels[k]}) = {format_rat(d[i][k])} > "
                            f"d({labels[i]},{labels[j]}) + d({labels[j]},{labels[k]}) = "
                            f"{format_rat(d[i][j] + d[j][k])}",
                            (labels[i], labels[j], labels[k]),
                        )
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "scale", D)
        object.__setattr__(self, "idist", idist)
        object.__setattr__(
            self,
            "symmetric",
            all(idist[i][j] == idist[j][i] for i in range(n) for j in range(i)),
        )
        object.__setattr__(
            self,
            "skeletal",
            all(idist[i][j] + idist[j][i] > 0 for i in range(n) for j in range(i)),
        )

    def __len__(self):
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, point) -> int:
        """Accept a point index (int) or a label (str)."""
        if isinstance(point, int) and not isinstance(point, bool):
            if not 0 <= point < self.n:
                raise IndexError(f"point index {point} out of range")
            return point
        try:
            return self.labels.index(str(point))
        except ValueError:
            raise KeyError(f"no point labelled {point!r}") from None

    def d(self, x, y) -> Fraction:
        return self.dist[self.index(x)][self.index(y)]

    @property
    def epsilon(self) -> Fraction | None:
        """Smallest positive distance, or ``None`` when there is none."""
        pos = [v for r in self.idist for v in r if v > 0]
        return Fraction(min(pos), self.scale) if pos else None

    @property
    def has_zero_steps(self) -> bool:
        """True if some ``d(x, y) == 0`` with ``x != y`` (quasi or pseudo)."""
        n = self.n
        return any(self.idist[i][j] == 0 for i in range(n) for j in range(n) if i != j)

    def to_json(self) -> dict:
        return {
            "points": list(self.labels),
            "distances": [[format_rat(v) for v in r] for r in self.dist],
        }


def validate(dist: Sequence[Sequence], labels: Sequence | None = None) -> FinMetric:
    """Build a :class:`FinMetric`, rejecting invalid distance data."""
    rows = [list(r) for r in dist]
    if labels is None:
        labels = [str(i) for i in range(len(rows))]
    return FinMetric(tuple(labels), tuple(tuple(r) for r in rows))


def graph_to_metric(edges: Iterable, vertices: Iterable | None = None) -> FinMetric:
    """Shortest-path metric of a connected undirected simple graph.

    Vertices are ordered by first appearance (``vertices`` first, then edge
    endpoints). Isolated vertices can only be declared via ``vertices``.
    """
    order: list[str] = []
    seen: set[str] = set()

    def add(v):
        v = str(v)
        if v not in seen:
            seen.add(v)
            order.append(v)
        return v

    for v in vertices or ():
        add(v)
    adj: dict[str, set[str]] = {}
    for e in edges:
        u, v = e
        u, v = add(u), add(v)
        if u == v:
            raise InputError(f"self-loop at {u!r}: graphs must be simple")
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    if not order:
        raise InputError("empty graph")
    idx = {v: i for i, v in enumerate(order)}
    n = len(order)
    dist = [[0] * n for _ in range(n)]
    for s in order:
        seen_d = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj.get(u, ()):
                if w not in seen_d:
                    seen_d[w] = seen_d[u] + 1
                    queue.append(w)
        if len(seen_d) != n:
            missing = [v for v in order if v not in seen_d]
            raise DisconnectedGraph(
                f"graph is disconnected: no path from {s!r} to {missing[0]!r}"
            )
        for w, k in seen_d.items():
            dist[idx[s]][idx[w]] = k
    return FinMetric(tuple(order), tuple(tuple(r) for r in dist))


def scale_space(X: FinMetric, factor) -> FinMetric:
    t = as_rat(factor)
    if t <= 0:
        raise ValueError("scale factor must be positive")
    return FinMetric(X.labels, tuple(tuple(v * t for v in r) for r in X.dist))


def skeletonize(X: FinMetric) -> tuple[FinMetric, dict[str, str]]:
    """Identify points at distance zero in both directions.

    Each class is represented by its lexicographically smallest label; the
    returned map sends every label to its representative. Skeletal input is
    returned unchanged.
    """
    if X.skeletal:
        return X, {x: x for x in X.labels}
    n = X.n
    cls = list(range(n))
    for i in range(n):
        for j in range(i):
            if X.idist[i][j] == 0 and X.idist[j][i] == 0:
                # isomorphism is an equivalence relation, so j's class is final
                cls[i] = cls[j]
                break
    members: dict[int, list[int]] = {}
    for i, c in enumerate(cls):
        members.setdefault(c, []).append(i)
    reps = {c: min(ms, key=lambda i: X.labels[i]) for c, ms in members.items()}
    keep = sorted(reps.values())
    Y = FinMetric(
        tuple(X.labels[i] for i in keep),
        tuple(tuple(X.dist[i][j] for j in keep) for i in keep),
    )
    mapping = {X.labels[i]: X.labels[reps[cls[i]]] for i in range(n)}
    return Y, mapping


def ensure_skeletal(X: FinMetric) -> FinMetric:
    if X.skeletal:
        return X
    Y, _ = skeletonize(X)
    log.info("skeletonized %d points to %d (zero-distance classes merged)", X.n, Y.n)
    return Y


# -- betweenness predicates --------------------------------------------------------


class Verdict(NamedTuple):
    """Truth value of a global predicate plus a counterexample when false."""

    holds: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.holds


def _btw(dd, x, y, z) -> bool:
    return dd[x][y] + dd[y][z] == dd[x][z]


def between(X: FinMetric, x, y, z) -> bool:
    """``d(x, y) + d(y, z) == d(x, z)``."""
    return _btw(X.idist, X.index(x), X.index(y), X.index(z))


def strictly_between(X: FinMetric, x, y, z) -> bool:
    """Between, with ``x != y`` and ``y != z`` (``x == z`` is not excluded)."""
    i, j, k = X.index(x), X.index(y), X.index(z)
    return i != j and j != k and _btw(X.idist, i, j, k)


def _adjacent(X: FinMetric, i: int, k: int) -> bool:
    dd = X.idist
    return not any(j != i and j != k and _btw(dd, i, j, k) for j in range(X.n))


def adjacent(X: FinMetric, x, y) -> bool:
    """True iff no point of ``X`` is strictly between ``x`` and ``y``."""
    i, k = X.index(x), X.index(y)
    if i == k:
        raise SamePoint(f"adjacency needs two distinct points, got {X.labels[i]!r} twice")
    return _adjacent(X, i, k)


def adjacent_pairs(X: FinMetric) -> list[tuple[str, str]]:
    """Ordered pairs of distinct adjacent points, in index order."""
    return [
        (X.labels[i], X.labels[k])
        for i in range(X.n)
        for k in range(X.n)
        if i != k and _adjacent(X, i, k)
    ]


def is_menger_convex(X: FinMetric) -> bool:
    """No two distinct points are adjacent; for finite skeletal ``X`` only n <= 1."""
    return not adjacent_pairs(X)


def has_no_4cuts(X: FinMetric) -> Verdict:
    """Check that ``x-y1-y2`` and ``y1-y2-z`` betweenness compose to ``x-y1-y2-z``.

    On failure the witness is the label quadruple ``(x, y1, y2, z)``.
    """
    dd = X.idist
    n = X.n
    pts = range(n)
    for y1 in pts:
        for y2 in pts:
            if y1 == y2:
                continue
            d12 = dd[y1][y2]
            xs = [x for x in pts if dd[x][y1] + d12 == dd[x][y2]]
            zs = [z for z in pts if d12 + dd[y2][z] == dd[y1][z]]
            for x in xs:
                for z in zs:
                    if dd[x][z] != dd[x][y1] + d12 + dd[y2][z]:
                        lab = X.labels
                        return Verdict(False, (lab[x], lab[y1], lab[y2], lab[z]))
    return Verdict(True)


def is_geodetic(X: FinMetric) -> Verdict:
    """Every pair of distinct points is uniquely non-adjacent.

    For distinct ``x, z`` and any ``y1, y2`` between them, the two must be
    ordered along ``x .. z`` one way or the other. On failure the witness is
    ``(x, z, y1, y2)``.
    """
    dd = X.idist
    n = X.n
    for x in range(n):
        for z in range(n):
            if x == z:
                continue
            mids = [y for y in range(n) if _btw(dd, x, y, z)]
            for a, y1 in enumerate(mids):
                for y2 in mids[a + 1 :]:
                    fwd = _btw(dd, x, y1, y2) and _btw(dd, y1, y2, z)
                    bwd = _btw(dd, x, y2, y1) and _btw(dd, y2, y1, z)
                    if not (fwd or bwd):
                        lab = X.labels
                        return Verdict(False, (lab[x], lab[z], lab[y1], lab[y2]))
    return Verdict(True)
