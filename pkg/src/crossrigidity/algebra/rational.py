"""Reduced quotients of exact polynomials."""

from __future__ import annotations

from .poly import ONE, ZERO, ExactPoly, ZeroDivisorError, as_fraction, poly_gcd


class RationalFunction:
    """``num/den`` with ``gcd(num, den) == 1`` and ``den`` monic; zero is ``0/1``."""

    __slots__ = ("num", "den")

    def __init__(self, num: ExactPoly, den: ExactPoly = ONE):
        if not isinstance(num, ExactPoly):
            num = ExactPoly.constant(num)
        if not isinstance(den, ExactPoly):
            den = ExactPoly.constant(den)
        if den.is_zero():
            raise ZeroDivisorError("rational function with zero denominator")
        if num.is_zero():
            num, den = ZERO, ONE
        else:
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = num.exact_div(g)
                den = den.exact_div(g)
            scale = den.lc
            num, den = num * (1 / scale), den * (1 / scale)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def from_poly(cls, p: ExactPoly) -> RationalFunction:
        return cls(p, ONE)

    @classmethod
    def zero(cls) -> RationalFunction:
        return cls(ZERO, ONE)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other) -> RationalFunction:
        o = _coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> RationalFunction:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> RationalFunction:
        return _coerce(other) - self

    def __mul__(self, other) -> RationalFunction:
        o = _coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFunction:
        o = _coerce(other)
        if o.is_zero():
            raise ZeroDivisorError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> RationalFunction:
        return _coerce(other) / self

    def __pow__(self, k: int) -> RationalFunction:
        if k < 0:
            return RationalFunction(self.den**-k, self.num**-k)
        return RationalFunction(self.num**k, self.den**k)

    def derivative(self) -> RationalFunction:
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def eval_float(self, x):
        return self.num.eval_float(x) / self.den.eval_float(x)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> RationalFunction:
        return cls(ExactPoly.from_json(obj["num"]), ExactPoly.from_json(obj["den"]))

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _coerce(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, ExactPoly):
        return RationalFunction(value, ONE)
    return RationalFunction(ExactPoly.constant(as_fraction(value)), ONE)


def logarithmic_derivative(p: ExactPoly) -> RationalFunction:
    """``p'/p`` in lowest terms; its denominator is the squarefree part of ``p``."""
    if p.is_constant():
        raise ValueError("logarithmic derivative of a constant polynomial")
    return RationalFunction(p.derivative(), p)
