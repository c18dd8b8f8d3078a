"""Exact arithmetic for magnitude computations.

Three layers live here:

* rationals, which are plain :class:`fractions.Fraction` values plus
  parsing/formatting helpers;
* :class:`GenPoly`, finite sums ``sum a_i q**l_i`` with nonnegative rational
  exponents, ordered by treating ``q`` as a positive infinitesimal;
* :class:`ScaledPoly` and :class:`RatFun`, which put every exponent over a
  common denominator ``D`` so that ``t = q**(1/D)`` is an ordinary polynomial
  variable and generalized rational functions become univariate rational
  functions over the rationals.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from hmag.errors import SingularEvaluation, ZeroConstantDenominator

__all__ = [
    "GenPoly",
    "RatFun",
    "ScaledPoly",
    "as_rat",
    "evaluate_at",
    "format_rat",
    "gp_arith",
    "gp_sign",
    "parse_rat",
    "scale_exponents",
    "series_expand",
    "unscale",
]

SINGULAR_TOL = 1e-12

_ZERO = Fraction(0)
_ONE = Fraction(1)


# -- rationals ---------------------------------------------------------------


def parse_rat(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"n"`` or a decimal literal such as ``"1.5"`` exactly."""
    if not isinstance(text, str):
        raise TypeError(f"expected a string, got {type(text).__name__}")
    s = text.strip()
    if s.lower() in {"inf", "+inf", "infinity", "+infinity", "-inf", "nan"}:
        raise ValueError(f"not a finite rational: {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def as_rat(value) -> Fraction:
    """Coerce ints, Fractions, strings and floats (by their repr) to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"not a finite rational: {value!r}")
        return Fraction(repr(value))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rat(r) -> str:
    r = as_rat(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def _format_exponent(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e.numerator}/{e.denominator})"


def _format_terms(terms, var="q") -> str:
    """Render ``[(exp, coef), ...]`` as e.g. ``2 - 3*q^(1/2) + q^2``."""
    if not terms:
        return "0"
    out = []
    for k, (e, c) in enumerate(terms):
        neg = c < 0
        mag = -c if neg else c
        if e == 0:
            body = format_rat(mag)
        else:
            mono = var if e == 1 else f"{var}^{_format_exponent(e)}"
            body = mono if mag == 1 else f"{format_rat(mag)}*{mono}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# -- generalized polynomials ---------------------------------------------------


@functools.total_ordering
class GenPoly:
    """A generalized polynomial ``sum a_i q**l_i`` with rational ``l_i >= 0``.

    Instances are immutable and canonical: terms are sorted by exponent and
    no zero coefficient is stored, so ``==`` is mathematical equality.
    Comparison uses the ordering in which ``q`` is a positive infinitesimal:
    the sign of a polynomial is the sign of its lowest-order coefficient.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict[Fraction, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = as_rat(e)
            if e < 0:
                raise ValueError(f"negative exponent {e} in generalized polynomial")
            acc[e] = acc.get(e, _ZERO) + as_rat(c)
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0))

    @classmethod
    def _raw(cls, acc: dict) -> "GenPoly":
        obj = object.__new__(cls)
        obj._terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0))
        return obj

    @classmethod
    def monomial(cls, exponent=0, coefficient=1) -> "GenPoly":
        return cls([(exponent, coefficient)])

    @classmethod
    def constant(cls, c) -> "GenPoly":
        return cls([(0, c)])

    @property
    def terms(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exponent) -> Fraction:
        e = as_rat(exponent)
        for ee, c in self._terms:
            if ee == e:
                return c
        return _ZERO

    def valuation(self) -> Fraction | None:
        """Smallest exponent with a nonzero coefficient (``None`` for zero)."""
        return self._terms[0][0] if self._terms else None

    def sign(self) -> int:
        if not self._terms:
            return 0
        return 1 if self._terms[0][1] > 0 else -1

    def evaluate(self, q0: float) -> float:
        return math.fsum(float(c) * q0 ** float(e) for e, c in self._terms)

    def truncate(self, max_exponent) -> "GenPoly":
        """Drop every term with exponent above ``max_exponent``."""
        m = as_rat(max_exponent)
        return GenPoly._raw({e: c for e, c in self._terms if e <= m})

    def scale_exponents(self, factor) -> "GenPoly":
        a = as_rat(factor)
        if a <= 0:
            raise ValueError("exponent scale factor must be positive")
        return GenPoly._raw({e * a: c for e, c in self._terms})

    # arithmetic

    @staticmethod
    def _coerce(other) -> "GenPoly | None":
        if isinstance(other, GenPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GenPoly._raw({_ZERO: Fraction(other)})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in o._terms:
            acc[e] = acc.get(e, _ZERO) + c
        return GenPoly._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        return GenPoly._raw({e: -c for e, c in self._terms})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        acc: dict[Fraction, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in o._terms:
                e = e1 + e2
                acc[e] = acc.get(e, _ZERO) + c1 * c2
        return GenPoly._raw(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = GenPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        return hash(("GenPoly", self._terms))

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"GenPoly({_format_terms(self._terms)!r})"

    def __str__(self):
        return _format_terms(self._terms)

    # serialization

    def to_json(self) -> list[list[str]]:
        return [[format_rat(e), format_rat(c)] for e, c in self._terms]

    @classmethod
    def from_json(cls, data) -> "GenPoly":
        return cls([(parse_rat(e), parse_rat(c)) for e, c in data])


def gp_arith(a: GenPoly, b: GenPoly, kind: str) -> GenPoly:
    """Exact ``add``, ``sub`` or ``mul`` of two generalized polynomials."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


def gp_sign(a: GenPoly) -> int:
    """-1, 0 or +1: the sign of the coefficient at the smallest exponent."""
    return a.sign()


# -- dense univariate polynomials over Q ---------------------------------------
# Coefficient tuples, lowest degree first, no trailing zeros.


def _trim(c: Sequence) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def _psub(a, b):
    n = max(len(a), len(b))
    return _trim(
        (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)
    )


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return _trim(out)


def _pscale(a, s):
    if s == 0:
        return ()
    return tuple(x * s for x in a)


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [_ZERO] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    db = len(b) - 1
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + db] / lead
        if c:
            q[k] = c
            for j, y in enumerate(b):
                r[k + j] -= c * y
    return _trim(q), _trim(r[:db] if db else [])


def _pmonic(a):
    return tuple(x / a[-1] for x in a) if a else ()


def _pgcd(a, b):
    a, b = _pmonic(a), _pmonic(b)
    while b:
        a, b = b, _pmonic(_pdivmod(a, b)[1])
    return a


def _peval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _spread(a, k: int):
    """Substitute ``t -> t**k``."""
    if k == 1 or not a:
        return tuple(a)
    out = [_ZERO] * ((len(a) - 1) * k + 1)
    for i, c in enumerate(a):
        out[i * k] = c
    return tuple(out)


def _support_gcd(a) -> int:
    g = 0
    for i, c in enumerate(a):
        if c:
            g = math.gcd(g, i)
    return g


def _low_index(a) -> int:
    for i, c in enumerate(a):
        if c:
            return i
    raise ValueError("zero polynomial has no low-order term")


# -- scaled polynomials ----------------------------------------------------------


@dataclass(frozen=True)
class ScaledPoly:
    """Ordinary polynomial in ``t = q**(1/scale)``, coefficients lowest first."""

    coeffs: tuple = ()
    scale: int = 1

    def __post_init__(self):
        if not isinstance(self.scale, int) or self.scale <= 0:
            raise ValueError("scale must be a positive integer")
        object.__setattr__(self, "coeffs", _trim(as_rat(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        return _peval(self.coeffs, t)

    def to_genpoly(self) -> GenPoly:
        return unscale(self)

    def __str__(self):
        terms = [(Fraction(i), c) for i, c in enumerate(self.coeffs) if c]
        return _format_terms(terms, var="t")


def scale_exponents(polys: Iterable[GenPoly]) -> tuple[int, list[ScaledPoly]]:
    """Put all exponents over the least common denominator ``D``.

    Returns ``D`` and, for each input, the polynomial in ``t = q**(1/D)``
    whose ``t``-degree ``k`` term comes from exponent ``k / D``.
    """
    polys = list(polys)
    D = 1
    for p in polys:
        for e, _ in p.terms:
            D = math.lcm(D, e.denominator)
    out = []
    for p in polys:
        if p.is_zero():
            out.append(ScaledPoly((), D))
            continue
        top = int(p.terms[-1][0] * D)
        coeffs = [_ZERO] * (top + 1)
        for e, c in p.terms:
            coeffs[int(e * D)] = c
        out.append(ScaledPoly(tuple(coeffs), D))
    return D, out


def unscale(sp: ScaledPoly) -> GenPoly:
    return GenPoly._raw({Fraction(i, sp.scale): c for i, c in enumerate(sp.coeffs) if c})


# -- generalized rational functions ----------------------------------------------


def _canonical(num, den, scale):
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num:
        return (), (_ONE,), 1
    if len(den) > 1 or len(num) > 1:
        g = _pgcd(num, den)
        if len(g) > 1:
            num = _pdivmod(num, g)[0]
            den = _pdivmod(den, g)[0]
    lead = den[_low_index(den)]
    if lead != 1:
        num = tuple(c / lead for c in num)
        den = tuple(c / lead for c in den)
    k = math.gcd(scale, math.gcd(_support_gcd(num), _support_gcd(den)))
    if k > 1:
        num, den, scale = num[::k], den[::k], scale // k
    return num, den, scale


class RatFun:
    """A generalized rational function in canonical form.

    Stored as ``num(t) / den(t)`` with ``t = q**(1/scale)``. The pair is
    coprime, the lowest-order nonzero coefficient of ``den`` is 1 and
    ``scale`` is as small as possible, so ``==`` is mathematical equality.
    Arithmetic between values of different scales works over the lcm.
    """

    __slots__ = ("_num", "_den", "_scale")

    def __init__(self, num: Sequence = (), den: Sequence = (1,), scale: int = 1):
        if not isinstance(scale, int) or scale <= 0:
            raise ValueError("scale must be a positive integer")
        num = _trim(as_rat(c) for c in num)
        den = _trim(as_rat(c) for c in den)
        self._num, self._den, self._scale = _canonical(num, den, scale)

    @classmethod
    def _make(cls, num, den, scale) -> "RatFun":
        obj = object.__new__(cls)
        obj._num, obj._den, obj._scale = _canonical(num, den, scale)
        return obj

    @classmethod
    def from_genpoly(cls, gp: GenPoly) -> "RatFun":
        D, (sp,) = scale_exponents([gp])
        return cls._make(sp.coeffs, (_ONE,), D)

    @classmethod
    def from_scaled(cls, num: ScaledPoly, den: ScaledPoly | None = None) -> "RatFun":
        if den is None:
            return cls._make(num.coeffs, (_ONE,), num.scale)
        D = math.lcm(num.scale, den.scale)
        return cls._make(
            _spread(num.coeffs, D // num.scale), _spread(den.coeffs, D // den.scale), D
        )

    @classmethod
    def constant(cls, c) -> "RatFun":
        return cls((as_rat(c),))

    @property
    def numerator(self) -> ScaledPoly:
        return ScaledPoly(self._num, self._scale)

    @property
    def denominator(self) -> ScaledPoly:
        return ScaledPoly(self._den, self._scale)

    @property
    def scale(self) -> int:
        return self._scale

    def is_zero(self) -> bool:
        return not self._num

    def is_genpoly(self) -> bool:
        return self._den == (_ONE,)

    def to_genpoly(self) -> GenPoly:
        if not self.is_genpoly():
            raise ValueError(f"{self} is not a generalized polynomial")
        return unscale(self.numerator)

    def sign(self) -> int:
        """Sign in the ordering where ``q`` is a positive infinitesimal."""
        if not self._num:
            return 0
        s = self._num[_low_index(self._num)] * self._den[_low_index(self._den)]
        return 1 if s > 0 else -1

    def scale_exponents(self, factor) -> "RatFun":
        """Multiply every exponent of ``q`` by the positive rational ``factor``."""
        a = as_rat(factor)
        if a <= 0:
            raise ValueError("exponent scale factor must be positive")
        return RatFun._make(
            _spread(self._num, a.numerator),
            _spread(self._den, a.numerator),
            self._scale * a.denominator,
        )

    # arithmetic

    @staticmethod
    def _coerce(other) -> "RatFun | None":
        if isinstance(other, RatFun):
            return other
        if isinstance(other, GenPoly):
            return RatFun.from_genpoly(other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RatFun._make((Fraction(other),), (_ONE,), 1) if other else _RZERO
        return None

    def _aligned(self, other: "RatFun"):
        D = math.lcm(self._scale, other._scale)
        a, b = D // self._scale, D // other._scale
        return (
            _spread(self._num, a),
            _spread(self._den, a),
            _spread(other._num, b),
            _spread(other._den, b),
            D,
        )

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._num:
            return self
        if not self._num:
            return o
        n1, d1, n2, d2, D = self._aligned(o)
        if d1 == d2:
            return RatFun._make(_padd(n1, n2), d1, D)
        return RatFun._make(_padd(_pmul(n1, d2), _pmul(n2, d1)), _pmul(d1, d2), D)

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(RatFun)
        obj._num = tuple(-c for c in self._num)
        obj._den, obj._scale = self._den, self._scale
        return obj

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self._num or not o._num:
            return _RZERO
        n1, d1, n2, d2, D = self._aligned(o)
        return RatFun._make(_pmul(n1, n2), _pmul(d1, d2), D)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._num:
            raise ZeroDivisionError("division by the zero rational function")
        n1, d1, n2, d2, D = self._aligned(o)
        return RatFun._make(_pmul(n1, d2), _pmul(d1, n2), D)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self._num, self._den, self._scale) == (o._num, o._den, o._scale)

    def __hash__(self):
        return hash(("RatFun", self._num, self._den, self._scale))

    def __bool__(self):
        return bool(self._num)

    def __repr__(self):
        return f"RatFun({str(self)!r})"

    def __str__(self):
        num = unscale(self.numerator)
        if self.is_genpoly():
            return str(num)
        den = unscale(self.denominator)
        n = str(num)
        if len(num.terms) > 1:
            n = f"({n})"
        return f"{n}/({den})"

    def to_json(self) -> dict:
        return {
            "scale": self._scale,
            "numerator": [format_rat(c) for c in self._num],
            "denominator": [format_rat(c) for c in self._den],
            "text": str(self),
        }

    @classmethod
    def from_json(cls, data) -> "RatFun":
        return cls(
            [parse_rat(c) for c in data["numerator"]],
            [parse_rat(c) for c in data["denominator"]],
            int(data["scale"]),
        )


_RZERO = RatFun()


def series_expand(f: RatFun, order: int) -> list[Fraction]:
    """Power-series coefficients of ``f`` in ``t`` for ``t**0 .. t**order``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    num, den = f.numerator.coeffs, f.denominator.coeffs
    if den[0] == 0:
        raise ZeroConstantDenominator(
            f"{f} has a pole at q = 0; no power-series expansion"
        )
    d0 = den[0]
    out: list[Fraction] = []
    for k in range(order + 1):
        acc = num[k] if k < len(num) else _ZERO
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc / d0)
    return out


def evaluate_at(f, q0: float) -> float:
    """Substitute a real ``q0`` in (0, 1) into a RatFun or GenPoly.

    ``t0 = q0**(1/D)`` is rounded once to a double; numerator and denominator
    are then evaluated exactly at that binary rational so cancellation
    between large coefficients costs no further precision.
    """
    q0 = float(q0)
    if not 0.0 < q0 < 1.0:
        raise ValueError(f"q0 must lie in (0, 1), got {q0}")
    if isinstance(f, GenPoly):
        return f.evaluate(q0)
    if not isinstance(f, RatFun):
        raise TypeError(f"cannot evaluate {type(f).__name__}")
    t0 = Fraction(q0 if f.scale == 1 else q0 ** (1.0 / f.scale))
    den = f.denominator(t0)
    if abs(den) < SINGULAR_TOL:
        raise SingularEvaluation(f"denominator of {f} vanishes at q = {q0}")
    return float(f.numerator(t0) / den)
