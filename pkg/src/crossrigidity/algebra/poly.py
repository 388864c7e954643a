"""Dense univariate polynomials over the rationals."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence


class ZeroDivisorError(ZeroDivisionError):
    """Raised when dividing by the zero polynomial."""


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a reduced Fraction.

    Floats are rejected on purpose: silently importing binary rounding
    into exact arithmetic defeats the point of this layer.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip().replace("−", "-"))
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def format_fraction(value: Fraction) -> str:
    """Canonical ``numerator/denominator`` text, always with a denominator."""
    return f"{value.numerator}/{value.denominator}"


class ExactPoly:
    """Immutable polynomial with Fraction coefficients in ascending degree.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("ExactPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def x(cls) -> ExactPoly:
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> ExactPoly:
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c=1) -> ExactPoly:
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> ExactPoly:
        """Monic polynomial with the given rational roots (repeat for multiplicity)."""
        p = cls.constant(1)
        for r in roots:
            p = p * cls((-as_fraction(r), 1))
        return p

    # -- basic properties --------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        """Leading coefficient (0 for the zero polynomial)."""
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monic(self) -> bool:
        return self.lc == 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactPoly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == ExactPoly.constant(other).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other) -> ExactPoly:
        if isinstance(other, ExactPoly):
            return other
        return ExactPoly.constant(other)

    def __add__(self, other) -> ExactPoly:
        o = self._coerce(other).coeffs
        a = self.coeffs
        n = max(len(a), len(o))
        return ExactPoly(
            (a[i] if i < len(a) else 0) + (o[i] if i < len(o) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> ExactPoly:
        return ExactPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> ExactPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> ExactPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> ExactPoly:
        if not isinstance(other, ExactPoly):
            c = as_fraction(other)
            return ExactPoly(c * a for a in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ExactPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return ExactPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> ExactPoly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = ExactPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other) -> tuple[ExactPoly, ExactPoly]:
        return self.divrem(self._coerce(other))

    def __floordiv__(self, other) -> ExactPoly:
        return self.divrem(self._coerce(other))[0]

    def __mod__(self, other) -> ExactPoly:
        return self.divrem(self._coerce(other))[1]

    def divrem(self, divisor: ExactPoly) -> tuple[ExactPoly, ExactPoly]:
        """Quotient and remainder with ``deg(rem) < deg(divisor)``."""
        if divisor.is_zero():
            raise ZeroDivisorError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return ExactPoly(), self
        inv_lc = 1 / divisor.lc
        dc = divisor.coeffs
        quot = [Fraction(0)] * (len(rem) - dd)
        for k in range(len(rem) - 1 - dd, -1, -1):
            c = rem[k + dd] * inv_lc
            quot[k] = c
            if c:
                for j in range(dd + 1):
                    rem[k + j] -= c * dc[j]
        return ExactPoly(quot), ExactPoly(rem[:dd])

    def exact_div(self, divisor: ExactPoly) -> ExactPoly:
        q, r = self.divrem(divisor)
        if r:
            raise ValueError(f"{divisor} does not divide {self}")
        return q

    def divides(self, other: ExactPoly) -> bool:
        """True iff ``self`` divides ``other`` exactly."""
        return other.divrem(self)[1].is_zero()

    def monic(self) -> ExactPoly:
        if self.is_zero():
            raise ZeroDivisorError("zero polynomial has no monic normalization")
        return self * (1 / self.lc)

    # -- calculus and evaluation -------------------------------------------

    def derivative(self, order: int = 1) -> ExactPoly:
        p = self
        for _ in range(order):
            p = ExactPoly(i * c for i, c in enumerate(p.coeffs) if i)
        return p

    def __call__(self, x):
        """Horner evaluation; works for Fraction, int, float and complex points."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x):
        """Horner evaluation with coefficients rounded to float first."""
        acc = 0.0
        for c in self.float_coeffs()[::-1]:
            acc = acc * x + c
        return acc

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def taylor_shift(self, center) -> list:
        """Coefficients of ``p(center + t)`` in ascending powers of ``t``.

        ``center`` may be exact or complex; arithmetic follows its type.
        """
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                cs[j] = cs[j] + center * cs[j + 1]
        return cs

    def compose(self, inner: ExactPoly) -> ExactPoly:
        acc = ExactPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def primitive_integer_coeffs(self) -> list[int]:
        """Integer coefficients of a positive rational multiple of ``self`` with content 1."""
        from math import gcd, lcm

        if self.is_zero():
            return []
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = gcd(*ints)
        return [i // g for i in ints]

    # -- text / json -------------------------------------------------------

    def to_json(self) -> dict:
        return {"coeffs": [format_fraction(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict | Sequence) -> ExactPoly:
        if isinstance(obj, dict):
            obj = obj["coeffs"]
        return cls(as_fraction(c) for c in obj)

    def __repr__(self) -> str:
        return f"ExactPoly({[format_fraction(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


X = ExactPoly.x()
ONE = ExactPoly.constant(1)
ZERO = ExactPoly()


def poly_arith(lhs: ExactPoly, rhs: ExactPoly, op: str):
    """Dispatch ``add``/``sub``/``mul``/``divrem`` by name."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "divrem":
        return lhs.divrem(rhs)
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_gcd(a: ExactPoly, b: ExactPoly) -> ExactPoly:
    """Monic gcd by the Euclidean algorithm over Q."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    while b:
        a, b = b, a.divrem(b)[1]
        if b:
            b = b.monic()
    return a.monic()


def squarefree_decomposition(p: ExactPoly) -> list[tuple[ExactPoly, int]]:
    """Yun's algorithm.

    Returns ``[(f, k), ...]`` with monic, squarefree, pairwise coprime ``f``
    and strictly increasing ``k`` such that ``p == p.lc * prod(f**k)``.
    Trivial factors are omitted, so a constant input yields ``[]``.
    """
    if p.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    if p.is_constant():
        return []
    f = p.monic()
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.derivative()
    out = []
    k = 1
    while not b.is_constant():
        a = poly_gcd(b, d)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        if not a.is_constant():
            out.append((a, k))
        k += 1
    return out


def squarefree_part(p: ExactPoly) -> ExactPoly:
    """Monic product of the distinct irreducible factors of ``p``."""
    if p.is_constant():
        return ONE
    return p.monic().exact_div(poly_gcd(p, p.derivative()))
