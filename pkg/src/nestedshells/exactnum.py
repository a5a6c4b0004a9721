"""Exact arithmetic over Q(tau), tau the golden ratio, and cyclotomic integers.

Rationals are :class:`fractions.Fraction`.  ``QTau(a, b)`` is ``a + b*tau``
with ``tau**2 == tau + 1``.  ``CycInt`` stores a coefficient vector over the
powers ``xi_n**0 .. xi_n**(n-1)`` without a canonical basis; equality reduces
modulo the n-th cyclotomic polynomial.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import cache, total_ordering
from numbers import Rational
from typing import Union

import numpy as np

from .errors import NotCoprime

Scalar = Union[int, Fraction]

SQRT5 = math.sqrt(5.0)
TAU_FLOAT = (1.0 + SQRT5) / 2.0


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"expected a rational number, got {type(x).__name__}")


def _sign_p_plus_q_sqrt5(p: Fraction, q: Fraction) -> int:
    """Sign of p + q*sqrt(5), exactly."""
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: compare p**2 with 5 q**2
    d = p * p - 5 * q * q
    return sp if d > 0 else sq


@total_ordering
class QTau:
    """Element ``a + b*tau`` of the field Q(tau)."""

    __slots__ = ("a", "b")

    def __init__(self, a: Scalar = 0, b: Scalar = 0):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))

    def __setattr__(self, name, value):
        raise AttributeError("QTau is immutable")

    @classmethod
    def coerce(cls, x) -> QTau:
        return x if isinstance(x, QTau) else cls(x, 0)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            o = QTau.coerce(other)
        except TypeError:
            return NotImplemented
        return QTau(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QTau(-self.a, -self.b)

    def __sub__(self, other):
        try:
            o = QTau.coerce(other)
        except TypeError:
            return NotImplemented
        return QTau(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = QTau.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.a, self.b, o.a, o.b
        return QTau(a * c + b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``x * conj(x)``, a rational."""
        return self.a * self.a + self.a * self.b - self.b * self.b

    def inverse(self) -> QTau:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(tau)")
        c = galois_conj(self)
        return QTau(c.a / n, c.b / n)

    def __truediv__(self, other):
        try:
            o = QTau.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return QTau.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = QTau(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison -------------------------------------------------------
    def sign(self) -> int:
        # a + b*tau = (a + b/2) + (b/2) sqrt5
        return _sign_p_plus_q_sqrt5(self.a + self.b / 2, self.b / 2)

    def __eq__(self, other):
        try:
            o = QTau.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other):
        return qtau_cmp(self, QTau.coerce(other)) < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * TAU_FLOAT

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"QTau({self.a}, {self.b})"

    def __str__(self):
        return exact_str(self)


TAU = QTau(0, 1)
TAU_CONJ = QTau(1, -1)  # tau' = 1 - tau
ZERO = QTau(0)
ONE = QTau(1)


def qtau_cmp(u: QTau, v: QTau) -> int:
    """-1, 0, 1 as ``u <, ==, > v`` in the real embedding tau -> (1+sqrt5)/2."""
    return (u - v).sign()


def galois_conj(u: QTau) -> QTau:
    """``a + b*tau -> (a + b) - b*tau`` (i.e. tau -> tau' = 1 - tau)."""
    return QTau(u.a + u.b, -u.b)


def exact_str(u: QTau) -> str:
    """Render as ``"a + b·tau"``; rationals render without the tau term."""
    if u.b == 0:
        return str(u.a)
    sign = "-" if u.b < 0 else "+"
    return f"{u.a} {sign} {abs(u.b)}·tau"


def decimal_str(u: QTau, digits: int = 12) -> str:
    """Decimal rendering with ``digits`` significant digits, computed exactly."""
    from decimal import Decimal, localcontext

    with localcontext() as ctx:
        ctx.prec = digits + 10
        t = (1 + Decimal(5).sqrt()) / 2
        val = Decimal(u.a.numerator) / Decimal(u.a.denominator) + \
            Decimal(u.b.numerator) / Decimal(u.b.denominator) * t
        ctx.prec = digits
        return str(+val)


_QTAU_RE = re.compile(r"^\s*(-?\d+(?:/\d+)?)(?:\s*([+-])\s*(\d+(?:/\d+)?)\s*·tau)?\s*$")


def parse_qtau(text: str) -> QTau:
    """Inverse of :func:`exact_str`."""
    m = _QTAU_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse Q(tau) value {text!r}")
    a, sign, b = m.groups()
    if b is None:
        return QTau(Fraction(a))
    return QTau(Fraction(a), Fraction(b) * (1 if sign == "+" else -1))


# Integer Q(tau) vectors ---------------------------------------------------
# Arrays with a trailing axis of length 2 hold (a, b) integer pairs; used for
# bulk exact projection of lattice points.


def qt_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    a, b = x[..., 0], x[..., 1]
    c, d = y[..., 0], y[..., 1]
    return np.stack([a * c + b * d, a * d + b * c + b * d], axis=-1)


def qt_matvec(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``m`` (r, c, 2) times vectors ``v`` (..., c, 2) -> (..., r, 2)."""
    prod = qt_mul(m[None, :, :, :], v.reshape(-1, 1, v.shape[-2], 2))
    return prod.sum(axis=2).reshape(v.shape[:-2] + (m.shape[0], 2))


def qt_norm2(x: np.ndarray) -> np.ndarray:
    """Sum of squares over the second-to-last axis: (..., k, 2) -> (..., 2)."""
    return qt_mul(x, x).sum(axis=-2)


def qt_to_float(x: np.ndarray) -> np.ndarray:
    return x[..., 0] + x[..., 1] * TAU_FLOAT


def qt_from_matrix(rows) -> np.ndarray:
    """QTau matrix with integer components -> integer array (r, c, 2)."""
    out = np.zeros((len(rows), len(rows[0]), 2), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            x = QTau.coerce(x)
            if x.a.denominator != 1 or x.b.denominator != 1:
                raise ValueError("matrix entries must be integral in Z[tau]")
            out[i, j] = (int(x.a), int(x.b))
    return out


def qt_sign(x: np.ndarray) -> np.ndarray:
    """Exact sign of integer a + b*tau, elementwise."""
    a = x[..., 0].astype(object)
    b = x[..., 1].astype(object)
    # 2(a + b tau) = (2a + b) + b sqrt5
    p, q = 2 * a + b, b
    sp = np.sign(p.astype(np.float64)).astype(np.int64)
    sq = np.sign(q.astype(np.float64)).astype(np.int64)
    d = p * p - 5 * q * q
    out = np.where(sq == 0, sp, np.where((sp == 0) | (sp == sq), sq,
                   np.where(d > 0, sp, sq)))
    return out.astype(np.int64)


def qt_key(x: np.ndarray) -> QTau:
    return QTau(int(x[0]), int(x[1]))


# Quadratic extension Q(tau)(s), s**2 = d -----------------------------------


class QTauExt:
    """``p + q*s`` with ``p, q`` in Q(tau) and ``s = sqrt(d)`` for a fixed
    positive, non-square ``d`` in Q(tau)."""

    __slots__ = ("p", "q", "d")

    def __init__(self, p, q, d: QTau):
        self.p = QTau.coerce(p)
        self.q = QTau.coerce(q)
        self.d = d

    def _lift(self, other) -> QTauExt:
        if isinstance(other, QTauExt):
            if other.d != self.d:
                raise ValueError("mixing different quadratic extensions")
            return other
        return QTauExt(other, 0, self.d)

    def __add__(self, other):
        o = self._lift(other)
        return QTauExt(self.p + o.p, self.q + o.q, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QTauExt(-self.p, -self.q, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        o = self._lift(other)
        return QTauExt(self.p * o.p + self.q * o.q * self.d, self.p * o.q + self.q * o.p, self.d)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._lift(other)
        return self.p == o.p and self.q == o.q

    def __hash__(self):
        return hash((self.p, self.q, self.d))

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(float(self.d))

    def __repr__(self):
        return f"QTauExt({self.p}, {self.q}; sqrt({self.d}))"


# Cyclotomic integers ------------------------------------------------------


def euler_phi(n: int) -> int:
    return sum(1 for m in range(1, n + 1) if math.gcd(m, n) == 1)


def units_mod(n: int) -> list[int]:
    return [m for m in range(1, n) if math.gcd(m, n) == 1] if n > 1 else [0]


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Division of integer polynomials (coefficients low -> high) by a monic ``den``."""
    num = list(num)
    dn = len(den) - 1
    if len(num) - 1 < dn:
        return [0], num
    quot = [0] * (len(num) - dn)
    for k in range(len(num) - 1 - dn, -1, -1):
        c = num[k + dn]
        quot[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    rem = num[:dn] or [0]
    return quot, rem


@cache
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients (low -> high) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_poly(d)))
            assert not any(rem)
    return tuple(poly)


class CycInt:
    """Element ``sum_j coeffs[j] * xi_n**j`` of Z[xi_n]."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) > n:
            folded = [0] * n
            for j, c in enumerate(coeffs):
                folded[j % n] += c
            coeffs = folded
        self.n = n
        self.coeffs = tuple(coeffs + [0] * (n - len(coeffs)))

    @classmethod
    def xi_power(cls, n: int, k: int) -> CycInt:
        c = [0] * n
        c[k % n] = 1
        return cls(n, c)

    def reduced(self) -> tuple[int, ...]:
        """Canonical coefficients: remainder modulo the cyclotomic polynomial."""
        _, rem = _poly_divmod(list(self.coeffs), list(cyclotomic_poly(self.n)))
        deg = len(cyclotomic_poly(self.n)) - 1
        return tuple(rem + [0] * (deg - len(rem)))

    def __eq__(self, other):
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.n == other.n and self.reduced() == other.reduced()

    def __hash__(self):
        return hash((self.n, self.reduced()))

    def __add__(self, other: CycInt) -> CycInt:
        return CycInt(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return CycInt(self.n, [-a for a in self.coeffs])

    def __sub__(self, other: CycInt) -> CycInt:
        return self + (-other)

    def __mul__(self, other: CycInt) -> CycInt:
        n = self.n
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[(i + j) % n] += a * b
        return CycInt(n, out)

    def conj(self) -> CycInt:
        """Complex conjugation ``xi -> xi**-1``."""
        return cyc_apply_t(-1 % self.n, 0, self) if self.n > 2 else self

    def __complex__(self) -> complex:
        xi = np.exp(2j * np.pi * np.arange(self.n) / self.n)
        return complex(np.dot(self.coeffs, xi))

    def is_rational(self) -> bool:
        r = self.reduced()
        return not any(r[1:])

    def __repr__(self):
        return f"CycInt({self.n}, {list(self.coeffs)})"


def cyc_apply_t(m: int, l: int, x: CycInt) -> CycInt:
    """``t_{m,l}``: sends ``xi**j`` to ``xi**(m*j + l)`` coefficientwise."""
    n = x.n
    if math.gcd(m, n) != 1:
        raise NotCoprime(f"gcd({m}, {n}) != 1")
    out = [0] * n
    for j, a in enumerate(x.coeffs):
        out[(m * j + l) % n] += a
    return CycInt(n, out)


def galois_sigma(m: int, x: CycInt) -> CycInt:
    return cyc_apply_t(m, 0, x)


def cyc5_abs2(x: CycInt) -> QTau:
    """Exact ``|x|**2`` for ``x`` in Z[xi_5]; lies in Q(tau).

    ``xi + xi**4 = tau - 1`` and ``xi**2 + xi**3 = -tau``.
    """
    if x.n != 5:
        raise ValueError("exact modulus only implemented for n = 5")
    c = [0] * 5
    for j, a in enumerate(x.coeffs):
        for k, b in enumerate(x.coeffs):
            c[(j - k) % 5] += a * b
    return QTau(c[0]) + QTau(-1, 1) * c[1] + QTau(0, -1) * c[2]
