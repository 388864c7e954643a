"""Partial fraction expansion of rational functions.

Poles that are rational are handled in exact arithmetic; the remaining poles
are located by ``find_roots`` and their coefficients are complex floats. In
both cases the coefficients of ``1/(x - b)^j`` are read off the Laurent
expansion of ``num/den`` at ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .poly import ExactPoly, format_fraction, squarefree_decomposition
from .rational import RationalFunction
from .roots import DEFAULT_TOL, find_roots, rational_roots

Number = Union[Fraction, complex]


@dataclass(frozen=True)
class PFTerm:
    """``coefficient / (x - pole)**order``."""

    pole: Number
    order: int
    coefficient: Number

    @property
    def exact(self) -> bool:
        return isinstance(self.pole, Fraction) and isinstance(self.coefficient, Fraction)

    def __call__(self, x):
        return self.coefficient / (x - self.pole) ** self.order

    def to_json(self) -> dict:
        return {"pole": _num_json(self.pole), "order": self.order,
                "coefficient": _num_json(self.coefficient)}


@dataclass(frozen=True)
class PartialFractionExpansion:
    polynomial_part: ExactPoly
    terms: tuple[PFTerm, ...]
    residual_bound: float = 0.0

    @property
    def exact(self) -> bool:
        return all(t.exact for t in self.terms)

    def __call__(self, x):
        return self.polynomial_part(x) + sum(t(x) for t in self.terms)

    def to_rational_function(self) -> RationalFunction:
        """Exact re-summation; only available when every term is exact."""
        if not self.exact:
            raise ValueError("expansion has inexact terms")
        total = RationalFunction.from_poly(self.polynomial_part)
        for t in self.terms:
            den = ExactPoly((-t.pole, 1)) ** t.order
            total = total + RationalFunction(ExactPoly.constant(t.coefficient), den)
        return total

    def coefficient(self, pole, order: int = 1, tol: float = 1e-9) -> Number:
        """Coefficient at ``(pole, order)``; 0 when no such term exists."""
        for t in self.terms:
            if t.order == order and abs(complex(t.pole) - complex(pole)) <= tol * max(1.0, abs(complex(pole))):
                return t.coefficient
        return Fraction(0)

    def to_json(self) -> dict:
        return {
            "polynomial_part": self.polynomial_part.to_json(),
            "terms": [t.to_json() for t in self.terms],
            "residual_bound": self.residual_bound,
        }


def _num_json(v: Number):
    if isinstance(v, Fraction):
        return format_fraction(v)
    return {"re": v.real, "im": v.imag}


def _series_quotient(num: list, den: list, n: int) -> list:
    """First ``n`` coefficients of the power series ``num/den`` (``den[0] != 0``)."""
    out = []
    for k in range(n):
        acc = num[k] if k < len(num) else 0
        for j in range(1, k + 1):
            if j < len(den):
                acc -= den[j] * out[k - j]
        out.append(acc / den[0])
    return out


def _laurent_terms(num: ExactPoly, den: ExactPoly, pole: Number, order: int) -> list[PFTerm]:
    if isinstance(pole, Fraction):
        n_shift = num.taylor_shift(pole)
        d_shift = den.taylor_shift(pole)
        if any(d_shift[:order]):
            raise ArithmeticError(f"{pole} is not a pole of order {order}")
    else:
        n_shift = _float_shift(num, pole)
        d_shift = _float_shift(den, pole)
    h = _series_quotient(n_shift, d_shift[order:], order)
    return [PFTerm(pole, order - j, h[j]) for j in range(order) if h[j] != 0]


def _float_shift(p: ExactPoly, center: complex) -> list[complex]:
    cs = [complex(float(c)) for c in p.coeffs]
    n = len(cs)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            cs[j] = cs[j] + center * cs[j + 1]
    return cs


def partial_fractions(f: RationalFunction, tol: float = DEFAULT_TOL,
                      samples: int = 20) -> PartialFractionExpansion:
    """Expand ``f`` into a polynomial part plus pole terms.

    ``residual_bound`` is 0 for an exact expansion; otherwise the largest
    relative reconstruction error over ``samples`` deterministic points.
    """
    poly_part, rem = f.num.divrem(f.den)
    terms: list[PFTerm] = []
    if rem.is_zero():
        return PartialFractionExpansion(poly_part, (), 0.0)
    for factor, k in squarefree_decomposition(f.den):
        rest = factor
        for r in rational_roots(factor):
            terms.extend(_laurent_terms(rem, f.den, r, k))
            rest = rest.exact_div(ExactPoly((-r, 1)))
        if not rest.is_constant():
            for z, _ in find_roots(rest, tol).entries:
                terms.extend(_laurent_terms(rem, f.den, z, k))
    expansion = PartialFractionExpansion(poly_part, tuple(terms), 0.0)
    if expansion.exact:
        return expansion
    return PartialFractionExpansion(poly_part, tuple(terms), _reconstruction_error(f, expansion, samples))


def _reconstruction_error(f: RationalFunction, e: PartialFractionExpansion, samples: int) -> float:
    worst = 0.0
    for i in range(samples):
        x = complex(0.37 + 1.3 * i / samples, 0.91 - 0.7 * i / samples)
        want = complex(f.num(x)) / complex(f.den(x))
        got = e(x)
        worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    return worst

