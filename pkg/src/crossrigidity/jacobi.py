"""The unperturbed Jacobi operator, its eigenvalues and monic eigenpolynomials.

Conventions: the operator is

    L u = (1 - x^2) u'' - [(1 + b)(1 + x) - (1 + a)(1 - x)] u'

with weight ``(1 + x)^a (1 - x)^b``. Note ``a`` sits at ``x = -1`` here, the
reverse of the usual ``P_n^(alpha, beta)`` labelling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import roots_jacobi

from .algebra import ExactPoly, as_fraction, format_fraction


@dataclass(frozen=True)
class JacobiParams:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        a, b = as_fraction(self.a), as_fraction(self.b)
        if not (a > -1 and b > -1):
            raise ValueError(f"Jacobi parameters must exceed -1, got a={a}, b={b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def first_order_coeff(self) -> ExactPoly:
        """``(1 + b)(1 + x) - (1 + a)(1 - x) = (b - a) + (a + b + 2) x``."""
        return ExactPoly((self.b - self.a, self.a + self.b + 2))

    def to_json(self) -> dict:
        return {"a": format_fraction(self.a), "b": format_fraction(self.b)}


@dataclass(frozen=True)
class SpectralPair:
    n: int
    lam: Fraction
    polynomial: ExactPoly

    def to_json(self) -> dict:
        return {"n": self.n, "lambda": format_fraction(self.lam),
                "coeffs": self.polynomial.to_json()["coeffs"]}


def params_from_cross(d: int, k: int) -> JacobiParams:
    """Exponents of the model space with dimension ``d`` and generator degree ``k``."""
    from .geometry import validate_signature

    validate_signature(d, k)
    return JacobiParams(Fraction(k, 2) - 1, Fraction(d, 2) - 1)


_ONE_MINUS_X2 = ExactPoly((1, 0, -1))


def jacobi_operator_apply(p: ExactPoly, params: JacobiParams) -> ExactPoly:
    return _ONE_MINUS_X2 * p.derivative(2) - params.first_order_coeff * p.derivative()


def eigenvalue(n: int, params: JacobiParams) -> Fraction:
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return n * (n + params.a + params.b + 1)


def jacobi_polynomial(n: int, params: JacobiParams) -> ExactPoly:
    """Monic degree-``n`` solution of ``L p + lambda_n p = 0``.

    Matching the coefficient of ``x^j`` gives

        (lambda_n - lambda_j) c_j = (b - a)(j + 1) c_{j+1} - (j + 1)(j + 2) c_{j+2}

    which is solved downward from ``c_n = 1``; ``lambda_n != lambda_j`` for
    ``j < n`` because ``a + b > -2``.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    lam_n = eigenvalue(n, params)
    c = [Fraction(0)] * (n + 3)
    c[n] = Fraction(1)
    ba = params.b - params.a
    for j in range(n - 1, -1, -1):
        rhs = ba * (j + 1) * c[j + 1] - (j + 1) * (j + 2) * c[j + 2]
        c[j] = rhs / (lam_n - eigenvalue(j, params))
    return ExactPoly(c[: n + 1])


def spectral_pair(n: int, params: JacobiParams) -> SpectralPair:
    return SpectralPair(n, eigenvalue(n, params), jacobi_polynomial(n, params))


def weight(x, params: JacobiParams) -> float:
    x = float(x)
    if not -1 < x < 1:
        raise ValueError(f"weight is defined on (-1, 1), got {x}")
    return (1 + x) ** float(params.a) * (1 - x) ** float(params.b)


def orthogonality_check(n: int, m: int, params: JacobiParams, quad_order: int = 64) -> float:
    """``int_{-1}^{1} p_n p_m (1+x)^a (1-x)^b dx`` by Gauss-Jacobi quadrature.

    A ``quad_order``-point rule is exact for the polynomial integrand once
    ``quad_order >= n + m + 2``.
    """
    if quad_order < n + m + 2:
        raise ValueError(f"quad_order must be at least n + m + 2 = {n + m + 2}")
    # scipy's weight is (1 - x)^alpha (1 + x)^beta
    nodes, weights = roots_jacobi(quad_order, float(params.b), float(params.a))
    if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
        raise FloatingPointError("Gauss-Jacobi rule is not finite for these parameters")
    pn = np.polynomial.polynomial.polyval(nodes, jacobi_polynomial(n, params).float_coeffs())
    pm = np.polynomial.polynomial.polyval(nodes, jacobi_polynomial(m, params).float_coeffs())
    return float(np.dot(weights, pn * pm))


def exact_weighted_integral(p: ExactPoly, params: JacobiParams) -> Fraction:
    """``int_{-1}^{1} p (1+x)^a (1-x)^b dx`` exactly, for nonnegative integer ``a``, ``b``."""
    if params.a.denominator != 1 or params.b.denominator != 1 or params.a < 0 or params.b < 0:
        raise ValueError("exact integration needs nonnegative integer exponents")
    w = ExactPoly((1, 1)) ** int(params.a) * ExactPoly((1, -1)) ** int(params.b)
    integrand = p * w
    total = Fraction(0)
    for j, c in enumerate(integrand.coeffs):
        if j % 2 == 0:
            total += c * Fraction(2, j + 1)
    return total
