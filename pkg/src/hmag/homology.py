"""Integer Smith normal form and magnitude homology groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from hmag.chains import (
    DEFAULT_BUDGET,
    BoundaryMatrix,
    ChainBasis,
    boundary_matrix,
    enumerate_generators,
)
from hmag.errors import IncompleteComplex
from hmag.exact import as_rat, format_rat
from hmag.space import FinMetric, ensure_skeletal

__all__ = [
    "HomologySummary",
    "SNFResult",
    "fraction_free_rank",
    "homology_at",
    "magnitude_homology",
    "snf",
]


@dataclass(frozen=True)
class SNFResult:
    """Invariant factors ``d_1 | d_2 | ... | d_r`` of an integer matrix.

    With transforms, ``U @ A @ V`` equals the ``shape``-sized matrix with the
    factors on its diagonal, and ``U``, ``V`` are unimodular.
    """

    factors: tuple
    shape: tuple
    U: list | None = None
    V: list | None = None

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> tuple:
        return tuple(d for d in self.factors if d > 1)

    def diagonal(self) -> list[list[int]]:
        m, n = self.shape
        out = [[0] * n for _ in range(m)]
        for i, d in enumerate(self.factors):
            out[i][i] = d
        return out


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _matmul(A, B):
    if not A or not B:
        return [[0] * (len(B[0]) if B else 0) for _ in range(len(A))]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def _dense_snf(A: list[list[int]], want_transforms: bool):
    """Classical elimination, pivoting on the smallest nonzero absolute value."""
    m = len(A)
    n = len(A[0]) if m else 0
    A = [list(r) for r in A]
    U = _identity(m) if want_transforms else None
    V = _identity(n) if want_transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        rs, rd = A[src], A[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += f * rs[k]
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += f * us[k]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for row in A:
            if row[src]:
                row[dst] += f * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += f * row[src]

    factors = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = A[t][t]
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        changed = True
            if changed:
                # a remainder smaller than the pivot is left; move it in
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = next(
                (
                    i
                    for i in range(t + 1, m)
                    if any(A[i][j] % p for j in range(t + 1, n))
                ),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            if U is not None:
                U[t] = [-v for v in U[t]]
        factors.append(A[t][t])
    return factors, A, U, V


def _sparse_unit_reduce(entries: dict, shape: tuple):
    """Eliminate unit pivots; return (#units, leftover dense block).

    Unimodular elimination on a +-1 pivot contributes a factor 1 and removes
    its row and column, leaving the other invariant factors unchanged.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (r, c), v in entries.items():
        rows.setdefault(r, {})[c] = v
        cols.setdefault(c, set()).add(r)
    units = 0
    progress = True
    while progress and cols:
        progress = False
        for c in sorted(cols, key=lambda c: len(cols[c])):
            rs = cols.get(c)
            if not rs:
                continue
            piv = None
            for r in rs:
                if abs(rows[r][c]) == 1 and (piv is None or len(rows[r]) < len(rows[piv])):
                    piv = r
            if piv is None:
                continue
            prow = rows[piv]
            p = prow[c]
            for r in list(rs):
                if r == piv:
                    continue
                row = rows[r]
                f = row[c] * p  # p = +-1, so this is row[c] / p
                for k, v in prow.items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        if k not in row:
                            cols.setdefault(k, set()).add(r)
                        row[k] = nv
                    else:
                        if k in row:
                            del row[k]
                            cols[k].discard(r)
                if not row:
                    del rows[r]
            for k in prow:
                cols[k].discard(piv)
                if not cols[k]:
                    del cols[k]
            del rows[piv]
            cols.pop(c, None)
            units += 1
            progress = True
    live_rows = sorted(r for r in rows if rows[r])
    live_cols = sorted(cols)
    cidx = {c: j for j, c in enumerate(live_cols)}
    block = [[0] * len(live_cols) for _ in live_rows]
    for i, r in enumerate(live_rows):
        for c, v in rows[r].items():
            block[i][cidx[c]] = v
    return units, block


def _as_entries(A):
    if isinstance(A, BoundaryMatrix):
        return A.entries, A.shape
    rows = [list(map(int, r)) for r in A]
    m = len(rows)
    n = len(rows[0]) if m else 0
    ent = {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v}
    return ent, (m, n)


def snf(A, want_transforms: bool = False) -> SNFResult:
    """Smith normal form of an integer matrix (dense nested lists or BoundaryMatrix).

    Without transforms, unit pivots are first eliminated sparsely and only
    the remaining block is reduced densely. With transforms the whole matrix
    is reduced densely and ``U @ A @ V == D`` is verified before returning.
    """
    entries, shape = _as_entries(A)
    if want_transforms:
        dense = [[0] * shape[1] for _ in range(shape[0])]
        for (r, c), v in entries.items():
            dense[r][c] = v
        factors, _, U, V = _dense_snf(dense, True)
        res = SNFResult(tuple(factors), shape, U, V)
        if _matmul(_matmul(U, dense), V) != res.diagonal():
            raise AssertionError("Smith normal form transforms failed verification")
        return res
    units, block = _sparse_unit_reduce(entries, shape)
    rest, *_ = _dense_snf(block, False) if block and block[0] else ([],)
    return SNFResult((1,) * units + tuple(sorted(rest)), shape)


def fraction_free_rank(A) -> int:
    """Rank by Bareiss elimination; independent of :func:`snf`."""
    M = [list(map(int, r)) for r in A]
    m = len(M)
    n = len(M[0]) if m else 0
    rank = 0
    prev = 1
    for c in range(n):
        p = next((r for r in range(rank, m) if M[r][c]), None)
        if p is None:
            continue
        M[rank], M[p] = M[p], M[rank]
        piv = M[rank][c]
        for r in range(rank + 1, m):
            for k in range(c + 1, n):
                M[r][k] = (piv * M[r][k] - M[r][c] * M[rank][k]) // prev
            M[r][c] = 0
        prev = piv
        rank += 1
        if rank == m:
            break
    return rank


# -- homology ----------------------------------------------------------------------


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple = ()

    def __str__(self):
        if not self.torsion:
            return str(self.rank)
        return f"{self.rank}+" + "+".join(f"Z/{d}" for d in self.torsion)


@dataclass
class HomologySummary:
    """Ranks and torsion of ``H_n`` at each grading, with chain group sizes."""

    labels: tuple
    max_grading: Fraction
    max_degree: int | None
    groups: dict = field(default_factory=dict)
    chain_ranks: dict = field(default_factory=dict)

    @property
    def gradings(self) -> list[Fraction]:
        return sorted({l for (_, l) in self.chain_ranks})

    @property
    def degrees(self) -> list[int]:
        return sorted({n for (n, _) in self.groups})

    def group(self, n: int, grading) -> HomologyGroup:
        return self.groups.get((n, as_rat(grading)), HomologyGroup(0))

    def rank(self, n: int, grading) -> int:
        return self.group(n, grading).rank

    def torsion(self, n: int, grading) -> tuple:
        return self.group(n, grading).torsion

    def has_torsion(self) -> bool:
        return any(g.torsion for g in self.groups.values())

    def euler(self, grading) -> int:
        l = as_rat(grading)
        return sum((-1) ** n * g.rank for (n, ll), g in self.groups.items() if ll == l)

    def chain_euler(self, grading) -> int:
        l = as_rat(grading)
        return sum((-1) ** n * c for (n, ll), c in self.chain_ranks.items() if ll == l)

    def table(self) -> dict:
        """``{(n, l): (rank, torsion)}`` for every nonzero group."""
        return {
            k: (g.rank, g.torsion)
            for k, g in sorted(self.groups.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            if g.rank or g.torsion
        }

    def to_json(self) -> dict:
        return {
            "points": list(self.labels),
            "max_grading": format_rat(self.max_grading),
            "max_degree": self.max_degree,
            "groups": [
                {
                    "degree": n,
                    "grading": format_rat(l),
                    "rank": r,
                    "torsion": list(t),
                }
                for (n, l), (r, t) in self.table().items()
            ],
            "has_torsion": self.has_torsion(),
        }

    def to_text(self) -> str:
        """Grid with one row per degree and one column per grading."""
        ls = self.gradings
        ns = self.degrees or [0]
        head = ["n \\ l"] + [format_rat(l) for l in ls]
        body = []
        for n in range(max(ns) + 1):
            body.append([str(n)] + [str(self.group(n, l)) for l in ls])
        widths = [max(len(r[k]) for r in [head] + body) for k in range(len(head))]
        lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in [head] + body]
        if self.has_torsion():
            lines.append("TORSION FOUND")
        return "\n".join(lines)


def _boundary_invariants(X, basis, family, n, l):
    key = (n, l)
    if family is not None and key in family:
        bm = family[key]
    else:
        bm = boundary_matrix(X, basis, n, l)
        if family is not None:
            family[key] = bm
    return snf(bm)


def homology_at(
    X: FinMetric, basis: ChainBasis, family: dict | None, n: int, grading
) -> tuple[int, tuple]:
    """Rank and torsion of ``ker d_n / im d_{n+1}`` at one grading."""
    l = as_rat(grading)
    if not basis.covers(n + 1, l):
        raise IncompleteComplex(
            f"H_{n} at grading {format_rat(l)} needs C_{n + 1}, which was not enumerated"
        )
    dim = basis.count(n, l)
    r_out = _boundary_invariants(X, basis, family, n, l).rank if n >= 1 and dim else 0
    up = _boundary_invariants(X, basis, family, n + 1, l) if basis.count(n + 1, l) else None
    r_in = up.rank if up else 0
    return dim - r_out - r_in, (up.torsion if up else ())


def magnitude_homology(
    X: FinMetric,
    max_grading,
    max_degree: int | None = None,
    budget: int = DEFAULT_BUDGET,
    basis: ChainBasis | None = None,
) -> HomologySummary:
    """All groups ``H_n`` at gradings up to ``max_grading``.

    Degrees are complete up to ``max_grading / eps`` unless capped by
    ``max_degree``. Pseudo-metric input is skeletonized first.
    """
    X = ensure_skeletal(X)
    L = as_rat(max_grading)
    if basis is None:
        cap = None if max_degree is None else max_degree + 1
        basis = enumerate_generators(X, L, budget=budget, max_degree=cap)
    invariants: dict = {}
    for n, l in basis.keys():
        if n >= 1 and basis.covers(n, l):
            invariants[(n, l)] = snf(boundary_matrix(X, basis, n, l))
    summary = HomologySummary(X.labels, L, max_degree)
    for n, l in basis.keys():
        if max_degree is not None and n > max_degree:
            continue
        dim = basis.count(n, l)
        summary.chain_ranks[(n, l)] = dim
        out = invariants.get((n, l))
        up = invariants.get((n + 1, l))
        r = dim - (out.rank if out else 0) - (up.rank if up else 0)
        summary.groups[(n, l)] = HomologyGroup(r, up.torsion if up else ())
    return summary
