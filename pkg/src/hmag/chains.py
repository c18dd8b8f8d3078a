"""The normalized magnitude chain complex of a finite quasi-metric space.

Generators in degree ``n`` and grading ``l`` are tuples ``(x0, ..., xn)`` of
point indices with ``x_i != x_{i+1}`` and total length ``l``. The face map
``d_i`` deletes ``x_i`` when that leaves the total length unchanged and is
zero otherwise; the boundary is ``sum (-1)**i d_i``. For metric spaces the
end faces always vanish, but a quasi-metric can have one-way zero distances
and then ``d_0`` or ``d_n`` may survive, so all ``n + 1`` faces are checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from hmag.errors import BudgetExceeded, IncompleteComplex, MissingBasis, NotSkeletal
from hmag.exact import as_rat, format_rat
from hmag.space import FinMetric

__all__ = [
    "BoundaryMatrix",
    "ChainBasis",
    "DEFAULT_BUDGET",
    "boundary_family",
    "boundary_matrix",
    "dump_chains",
    "enumerate_generators",
]

DEFAULT_BUDGET = 10**7


@dataclass
class ChainBasis:
    """Ordered generators for every ``(n, l)`` with ``l <= max_grading``.

    ``degree_cap`` is set when enumeration stopped at a fixed degree; chain
    groups above it were not built.
    """

    space: FinMetric
    max_grading: Fraction
    generators: dict
    degree_cap: int | None = None
    _index: dict = field(default_factory=dict, repr=False)

    @property
    def gradings(self) -> list[Fraction]:
        return sorted({l for (_, l) in self.generators})

    def keys(self):
        return sorted(self.generators, key=lambda k: (k[1], k[0]))

    def get(self, n: int, grading) -> list[tuple]:
        return self.generators.get((n, as_rat(grading)), [])

    def count(self, n: int, grading) -> int:
        return len(self.get(n, grading))

    def top_degree(self, grading) -> int:
        l = as_rat(grading)
        return max((n for (n, ll) in self.generators if ll == l), default=-1)

    def total(self) -> int:
        return sum(len(v) for v in self.generators.values())

    def covers(self, n: int, grading) -> bool:
        """Whether ``C_n`` at this grading was fully enumerated."""
        if as_rat(grading) > self.max_grading or n < 0:
            return False
        return self.degree_cap is None or n <= self.degree_cap

    def index(self, n: int, grading) -> dict:
        key = (n, as_rat(grading))
        if key not in self._index:
            self._index[key] = {g: i for i, g in enumerate(self.generators.get(key, []))}
        return self._index[key]

    def labelled(self, n: int, grading) -> list[list[str]]:
        lab = self.space.labels
        return [[lab[i] for i in g] for g in self.get(n, grading)]


def enumerate_generators(
    X: FinMetric,
    max_grading,
    budget: int = DEFAULT_BUDGET,
    max_degree: int | None = None,
) -> ChainBasis:
    """All generators of total length at most ``max_grading``.

    Tuples are grown one point at a time and dropped as soon as their length
    exceeds the bound, so degree ``n`` only survives while ``n * eps <= L``.
    Within each ``(n, l)`` the tuples come out in lexicographic order.
    """
    if not X.skeletal:
        raise NotSkeletal("chain generators need a skeletal space; skeletonize first")
    L = as_rat(max_grading)
    if L < 0:
        raise ValueError("max grading must be nonnegative")
    D = X.scale
    Lk = math.floor(L * D)
    dd = X.idist
    npts = X.n
    # nearest neighbours first would break lexicographic order; keep index order
    steps = [[(y, dd[x][y]) for y in range(npts) if y != x] for x in range(npts)]
    grading_of: dict[int, Fraction] = {}
    generators: dict = {}
    total = 0
    level = [((x,), 0) for x in range(npts)]
    n = 0
    while level:
        for tup, s in level:
            l = grading_of.get(s)
            if l is None:
                l = grading_of[s] = Fraction(s, D)
            generators.setdefault((n, l), []).append(tup)
        total += len(level)
        if total > budget:
            raise BudgetExceeded(
                f"more than {budget} generators up to grading {format_rat(L)}; "
                "lower the maximum grading or raise the budget"
            )
        if max_degree is not None and n >= max_degree:
            break
        nxt = []
        for tup, s in level:
            for y, step in steps[tup[-1]]:
                if s + step <= Lk:
                    nxt.append((tup + (y,), s + step))
        level = nxt
        n += 1
    return ChainBasis(X, L, generators, max_degree)


@dataclass(frozen=True)
class BoundaryMatrix:
    """Sparse integer matrix of ``d_n : C_n -> C_{n-1}`` at one grading.

    Columns follow ``basis.get(n, l)`` and rows ``basis.get(n - 1, l)``;
    ``entries`` maps ``(row, col)`` to a nonzero integer.
    """

    degree: int
    grading: Fraction
    shape: tuple
    entries: dict

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def to_dense(self) -> list[list[int]]:
        rows, cols = self.shape
        out = [[0] * cols for _ in range(rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def columns(self) -> list[dict]:
        cols = [dict() for _ in range(self.shape[1])]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def compose(self, other: "BoundaryMatrix") -> dict:
        """Sparse product ``self @ other``."""
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch in boundary composition")
        by_row: dict[int, list] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                out[(r, c)] = out.get((r, c), 0) + v * w
        return {k: v for k, v in out.items() if v}


def boundary_matrix(X: FinMetric, basis: ChainBasis, n: int, grading) -> BoundaryMatrix:
    l = as_rat(grading)
    if n < 0 or not basis.covers(n, l):
        raise MissingBasis(f"basis does not cover degree {n} at grading {format_rat(l)}")
    cols = basis.get(n, l)
    if n == 0:
        return BoundaryMatrix(0, l, (0, len(cols)), {})
    rows_index = basis.index(n - 1, l)
    dd = X.idist
    entries: dict = {}
    for c, g in enumerate(cols):
        for i in range(n + 1):
            if i == 0:
                keep = dd[g[0]][g[1]] == 0
            elif i == n:
                keep = dd[g[n - 1]][g[n]] == 0
            else:
                a, b, e = g[i - 1], g[i], g[i + 1]
                keep = dd[a][b] + dd[b][e] == dd[a][e]
            if not keep:
                continue
            face = g[:i] + g[i + 1 :]
            r = rows_index.get(face)
            if r is None:
                raise IncompleteComplex(
                    f"face {face} of {g} is missing from the degree {n - 1} basis"
                )
            v = entries.get((r, c), 0) + (-1 if i % 2 else 1)
            if v:
                entries[(r, c)] = v
            else:
                del entries[(r, c)]
    return BoundaryMatrix(n, l, (len(rows_index), len(cols)), entries)


def boundary_family(X: FinMetric, basis: ChainBasis) -> dict:
    """Boundary matrices for every enumerated ``(n, l)`` with ``n >= 1``."""
    return {
        (n, l): boundary_matrix(X, basis, n, l)
        for (n, l) in basis.keys()
        if n >= 1
    }


def dump_chains(basis: ChainBasis, family: dict | None = None) -> dict:
    """JSON debug export: tuples as label arrays, matrices as COO triplets."""
    X = basis.space
    if family is None:
        family = boundary_family(X, basis)
    groups = []
    for n, l in basis.keys():
        item = {
            "degree": n,
            "grading": format_rat(l),
            "generators": basis.labelled(n, l),
        }
        bm = family.get((n, l))
        if bm is not None:
            item["boundary"] = {
                "shape": list(bm.shape),
                "entries": [[r, c, v] for (r, c), v in sorted(bm.entries.items())],
            }
        groups.append(item)
    return {
        "points": list(X.labels),
        "max_grading": format_rat(basis.max_grading),
        "chains": groups,
    }
