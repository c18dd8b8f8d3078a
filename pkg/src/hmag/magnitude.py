"""Magnitude of finite quasi-metric spaces over generalized rational functions.

The zeta matrix ``Z[x][y] = q**d(x, y)`` is inverted exactly by Gaussian
elimination over :class:`~hmag.exact.RatFun`. Two independent routes
cross-check the result: the alternating weight sums of ``(Z - 1)**n`` (a
convergent series in the infinitesimal ``q``), and the rational generating
function ``s(adj(1 - (Z - 1) u)) / det(1 - (Z - 1) u)`` evaluated at
``u = -1``, which is computed fraction-free over ``Z[t, u]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from hmag.errors import NotSkeletal, SingularEvaluation, SingularZeta
from hmag.exact import GenPoly, RatFun, ScaledPoly, format_rat, series_expand
from hmag.space import FinMetric, ensure_skeletal

__all__ = [
    "DivergentSeries",
    "MagnitudeResult",
    "ZetaMatrix",
    "det_leading_term",
    "divergent_series",
    "divergent_series_magnitude",
    "inverse_zeta",
    "leading_principal_minors",
    "magnitude",
    "magnitude_at",
    "magnitude_series",
    "partial_euler",
    "partial_euler_exact_below",
    "weight_sum",
    "weight_sums",
    "zeta_matrix",
]

COND_LIMIT = 1e12


@dataclass(frozen=True)
class ZetaMatrix:
    """Zeta matrix of a skeletal space; entry ``(x, y)`` is ``t**exponents[x][y]``."""

    scale: int
    exponents: tuple

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def entries(self) -> list[list[ScaledPoly]]:
        return [
            [ScaledPoly((0,) * k + (1,), self.scale) for k in row] for row in self.exponents
        ]

    def as_ratfun(self) -> list[list[RatFun]]:
        return [
            [RatFun((0,) * k + (1,), (1,), self.scale) for k in row]
            for row in self.exponents
        ]


def zeta_matrix(X: FinMetric) -> ZetaMatrix:
    if not X.skeletal:
        raise NotSkeletal("zeta matrix needs a skeletal space; call skeletonize() first")
    return ZetaMatrix(X.scale, X.idist)


# -- exact linear algebra over RatFun ----------------------------------------------


def _gauss_jordan(A: list[list[RatFun]], rhs: list[list[RatFun]]) -> list[list[RatFun]]:
    """Solve ``A @ X = rhs`` (rhs given as rows) over the rational-function field.

    Pivot: first nonzero entry in the current column.
    """
    n = len(A)
    M = [list(A[i]) + list(rhs[i]) for i in range(n)]
    width = len(M[0]) if M else 0
    for c in range(n):
        p = next((r for r in range(c, n) if not M[r][c].is_zero()), None)
        if p is None:
            raise SingularZeta(f"zero pivot column {c} in zeta matrix elimination")
        if p != c:
            M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [v * inv if not v.is_zero() else v for v in M[c]]
        for r in range(n):
            if r == c or M[r][c].is_zero():
                continue
            f = M[r][c]
            row_c = M[c]
            M[r] = [
                M[r][j] - f * row_c[j] if not row_c[j].is_zero() else M[r][j]
                for j in range(width)
            ]
    return [row[n:] for row in M]


def inverse_zeta(X: FinMetric) -> list[list[RatFun]]:
    """Exact inverse of the zeta matrix of a skeletal space."""
    Z = zeta_matrix(X).as_ratfun()
    n = len(Z)
    eye = [[RatFun.constant(1 if i == j else 0) for j in range(n)] for i in range(n)]
    return _gauss_jordan(Z, eye)


@dataclass(frozen=True)
class MagnitudeResult:
    """Magnitude with the weighting (``Z w = 1``) and coweighting (``v Z = 1``)."""

    labels: tuple
    value: RatFun
    weighting: tuple
    coweighting: tuple

    def to_json(self) -> dict:
        return {
            "points": list(self.labels),
            "magnitude": self.value.to_json(),
            "weighting": [w.to_json() for w in self.weighting],
            "coweighting": [v.to_json() for v in self.coweighting],
        }


def magnitude(X: FinMetric) -> MagnitudeResult:
    """Sum of the entries of ``Z_X**-1``, plus weighting and coweighting.

    Non-skeletal input is replaced by its skeleton first, which has the same
    magnitude; the weighting is then indexed by the skeleton's points.
    """
    X = ensure_skeletal(X)
    Z = zeta_matrix(X).as_ratfun()
    n = len(Z)
    one = RatFun.constant(1)
    sol = _gauss_jordan(Z, [[one] for _ in range(n)])
    w = tuple(r[0] for r in sol)
    Zt = [[Z[j][i] for j in range(n)] for i in range(n)]
    sol_t = _gauss_jordan(Zt, [[one] for _ in range(n)])
    v = tuple(r[0] for r in sol_t)
    total = RatFun()
    for wi in w:
        total = total + wi
    return MagnitudeResult(X.labels, total, w, v)


def magnitude_series(X: FinMetric, max_grading) -> list[tuple[Fraction, Fraction]]:
    """Nonzero power-series coefficients of the magnitude up to ``q**max_grading``."""
    L = Fraction(max_grading)
    if L < 0:
        raise ValueError("max grading must be nonnegative")
    f = magnitude(X).value
    D = f.scale
    order = math.floor(L * D)
    coeffs = series_expand(f, order)
    return [(Fraction(k, D), c) for k, c in enumerate(coeffs) if c]


# -- weight sums -----------------------------------------------------------------


def _weight_sum_iter(X: FinMetric, N: int):
    """Yield ``s((Z - 1)**n)`` for n = 0..N as {scaled exponent: count} dicts."""
    if not X.skeletal:
        raise NotSkeletal("weight sums need a skeletal space")
    n = X.n
    dd = X.idist
    vec = [{0: 1} for _ in range(n)]
    for k in range(N + 1):
        total: dict[int, int] = {}
        for v in vec:
            for e, c in v.items():
                total[e] = total.get(e, 0) + c
        yield total
        if k == N:
            return
        new = []
        for x in range(n):
            acc: dict[int, int] = {}
            for y in range(n):
                if y == x:
                    continue
                s = dd[x][y]
                for e, c in vec[y].items():
                    acc[e + s] = acc.get(e + s, 0) + c
            new.append(acc)
        vec = new


def _to_genpoly(counts: dict, scale: int) -> GenPoly:
    return GenPoly({Fraction(e, scale): c for e, c in counts.items()})


def weight_sums(X: FinMetric, N: int) -> list[GenPoly]:
    return [_to_genpoly(c, X.scale) for c in _weight_sum_iter(X, N)]


def weight_sum(X: FinMetric, n: int) -> GenPoly:
    """Entry sum of ``(Z - 1)**n``.

    Equivalently, the sum of ``q**(total length)`` over all ``(n+1)``-tuples
    whose consecutive points are distinct.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return weight_sums(X, n)[-1]


def partial_euler(X: FinMetric, N: int) -> GenPoly:
    """``sum_{n <= N} (-1)**n * weight_sum(X, n)``."""
    total: dict[int, int] = {}
    for k, ws in enumerate(_weight_sum_iter(X, N)):
        sgn = -1 if k % 2 else 1
        for e, c in ws.items():
            total[e] = total.get(e, 0) + sgn * c
    return _to_genpoly(total, X.scale)


def _longest_zero_path(X: FinMetric) -> int:
    n = X.n
    dd = X.idist
    memo: dict[int, int] = {}

    def depth(i):
        if i not in memo:
            memo[i] = 1 + max(
                (depth(j) for j in range(n) if j != i and dd[i][j] == 0), default=-1
            )
        return memo[i]

    return max(depth(i) for i in range(n))


def partial_euler_exact_below(X: FinMetric, N: int) -> Fraction | None:
    """Grading below which ``partial_euler(X, N)`` equals the magnitude series.

    Every term ``n > N`` has valuation at least ``eps * floor((N+1)/(z+1))``,
    ``z`` being the longest run of zero-length steps (0 for metric spaces).
    ``None`` means the partial sum is already exact (single point).
    """
    eps = X.epsilon
    if eps is None:
        return None
    z = _longest_zero_path(X)
    return eps * ((N + 1) // (z + 1))


# -- divergent-series route ----------------------------------------------------------
# Bivariate integer polynomials as {(u_degree, t_degree): coefficient}.


def _bmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def _bsub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) - c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _bdiv_exact(a: dict, b: dict) -> dict:
    """Exact quotient ``a / b`` in Z[u, t]; raises if ``b`` does not divide ``a``."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    lb = max(b)
    cb = b[lb]
    r = dict(a)
    q: dict = {}
    while r:
        lr = max(r)
        m = (lr[0] - lb[0], lr[1] - lb[1])
        c, rem = divmod(r[lr], cb)
        if rem or m[0] < 0 or m[1] < 0:
            raise ArithmeticError("inexact polynomial division in Bareiss elimination")
        q[m] = c
        for (i, j), v in b.items():
            k = (i + m[0], j + m[1])
            nv = r.get(k, 0) - c * v
            if nv:
                r[k] = nv
            else:
                r.pop(k, None)
    return q


def _bareiss_det(M: list[list[dict]]) -> dict:
    """Fraction-free determinant over Z[u, t]."""
    n = len(M)
    M = [list(r) for r in M]
    sign = 1
    prev = {(0, 0): 1}
    for k in range(n - 1):
        if not M[k][k]:
            p = next((r for r in range(k + 1, n) if M[r][k]), None)
            if p is None:
                return {}
            M[k], M[p] = M[p], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = _bdiv_exact(
                    _bsub(_bmul(M[k][k], M[i][j]), _bmul(M[i][k], M[k][j])), prev
                )
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return {k: -c for k, c in det.items()} if sign < 0 else det


def _u_slices(p: dict, scale: int) -> list[ScaledPoly]:
    if not p:
        return []
    top_u = max(i for i, _ in p)
    out = []
    for i in range(top_u + 1):
        ts = {j: c for (ii, j), c in p.items() if ii == i}
        coeffs = [0] * (max(ts) + 1 if ts else 0)
        for j, c in ts.items():
            coeffs[j] = c
        out.append(ScaledPoly(tuple(coeffs), scale))
    return out


def _at_u(p: dict, u: int) -> tuple:
    acc: dict[int, int] = {}
    for (i, j), c in p.items():
        acc[j] = acc.get(j, 0) + c * u**i
    top = max((j for j, c in acc.items() if c), default=-1)
    return tuple(acc.get(j, 0) for j in range(top + 1))


@dataclass(frozen=True)
class DivergentSeries:
    """``sum_n u**n s((Z - 1)**n) = adj_sum(u) / det(u)`` as polynomials in ``u``.

    ``det[k]`` and ``adj_sum[k]`` are the ``u**k`` coefficients, each a
    polynomial in ``t = q**(1/scale)``.
    """

    scale: int
    det: tuple
    adj_sum: tuple
    _det_raw: dict
    _adj_raw: dict

    def at(self, u: int) -> RatFun:
        return RatFun(_at_u(self._adj_raw, u), _at_u(self._det_raw, u), self.scale)

    def magnitude(self) -> RatFun:
        return self.at(-1)


def divergent_series(X: FinMetric) -> DivergentSeries:
    X = ensure_skeletal(X)
    dd = X.idist
    n = X.n
    # 1 - (Z - 1) u: diagonal 1, off-diagonal -t**d u
    M = [
        [{(0, 0): 1} if i == j else {(1, dd[i][j]): -1} for j in range(n)]
        for i in range(n)
    ]
    det = _bareiss_det(M)
    # 1' adj(M) 1 = det(M + 1 1') - det(M)
    MJ = [[_bsub(M[i][j], {(0, 0): -1}) for j in range(n)] for i in range(n)]
    adj_sum = _bsub(_bareiss_det(MJ), det)
    return DivergentSeries(
        X.scale,
        tuple(_u_slices(det, X.scale)),
        tuple(_u_slices(adj_sum, X.scale)),
        det,
        adj_sum,
    )


def divergent_series_magnitude(X: FinMetric) -> RatFun:
    """Magnitude from the rational generating function evaluated at ``u = -1``."""
    return divergent_series(X).magnitude()


def _zeta_det(X: FinMetric, size: int | None = None) -> ScaledPoly:
    dd = X.idist
    k = X.n if size is None else size
    M = [[{(0, dd[i][j]): 1} for j in range(k)] for i in range(k)]
    det = _bareiss_det(M)
    return ScaledPoly(_at_u(det, 1), X.scale)


def det_leading_term(X: FinMetric) -> ScaledPoly:
    """``det(Z_X)``; raises AssertionError unless its constant term is exactly 1."""
    if not X.skeletal:
        raise NotSkeletal("determinant check needs a skeletal space")
    det = _zeta_det(X)
    if not det.coeffs or det.coeffs[0] != 1:
        raise AssertionError(
            f"det(Z) = {det} does not have constant term 1; arithmetic is broken"
        )
    return det


def leading_principal_minors(X: FinMetric) -> list[ScaledPoly]:
    return [_zeta_det(X, k) for k in range(1, X.n + 1)]


# -- floating point --------------------------------------------------------------


def magnitude_at(X: FinMetric, tval: float) -> float:
    """Magnitude of ``tval * X`` computed in floating point by LU solve."""
    tval = float(tval)
    if not tval > 0:
        raise ValueError("scale parameter must be positive")
    X = ensure_skeletal(X)
    d = np.array([[float(v) for v in r] for r in X.dist])
    Z = np.exp(-tval * d)
    cond = np.linalg.cond(Z)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularEvaluation(
            f"zeta matrix is numerically singular at t = {tval} (cond {cond:.3g})"
        )
    w = np.linalg.solve(Z, np.ones(X.n))
    return float(w.sum())


def format_series(series) -> list[list[str]]:
    return [[format_rat(l), format_rat(c)] for l, c in series]
