"""Model rank-one spaces: volume density, mean curvature, Einstein constant, Ros bound.

Geodesics are normalized to period ``2*pi``. The volume density of the model
space of dimension ``d`` with cohomology generator in degree ``k`` is

    theta0(r) = sin(r/2)^(d-1) * cos(r/2)^(k-1)

taken as a function on the whole real line (signed, not its absolute value).
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

from .algebra import ExactPoly, RationalFunction, count_real_roots_in, format_fraction
from .jacobi import JacobiParams, eigenvalue, jacobi_polynomial


class Family(enum.Enum):
    SPHERE = "S"
    COMPLEX = "CP"
    QUATERNIONIC = "HP"
    CAYLEY = "OP"


def validate_signature(d: int, k: int) -> Family:
    """Family of the rank-one model with signature ``(d, k)``; ``ValueError`` if none."""
    if not (isinstance(d, int) and isinstance(k, int)) or d < 2 or k < 1:
        raise ValueError(f"invalid signature d={d}, k={k}")
    if k > d or k not in (2, 4, 8, d):
        raise ValueError(f"k must be one of 2, 4, 8, d and at most d (d={d}, k={k})")
    if k == d:
        return Family.SPHERE
    if k == 2 and d % 2 == 0:
        return Family.COMPLEX
    if k == 4 and d % 4 == 0:
        return Family.QUATERNIONIC
    if k == 8 and d == 16:
        return Family.CAYLEY
    raise ValueError(f"no compact rank-one symmetric space has d={d}, k={k}")


@dataclass(frozen=True)
class CrossModel:
    family: Family
    d: int
    k: int

    def __post_init__(self):
        if validate_signature(self.d, self.k) is not self.family:
            raise ValueError(f"({self.d}, {self.k}) is not a {self.family.name} signature")

    @classmethod
    def from_signature(cls, d: int, k: int) -> CrossModel:
        return cls(validate_signature(d, k), d, k)

    @classmethod
    def sphere(cls, d: int) -> CrossModel:
        return cls(Family.SPHERE, d, d)

    @classmethod
    def parse(cls, name: str) -> CrossModel:
        """``S<d>``, ``CP<n>`` (d = 2n), ``HP<n>`` (d = 4n) or ``OP2``."""
        m = re.fullmatch(r"\s*(S|CP|HP|OP)(\d+)\s*", name.upper())
        if not m:
            raise ValueError(f"unrecognized model name {name!r}")
        tag, num = m.group(1), int(m.group(2))
        if tag == "S":
            return cls.sphere(num)
        if tag == "CP":
            if num < 2:
                raise ValueError("CP<n> needs n >= 2 (CP1 is the sphere S2)")
            return cls(Family.COMPLEX, 2 * num, 2)
        if tag == "HP":
            if num < 2:
                raise ValueError("HP<n> needs n >= 2 (HP1 is the sphere S4)")
            return cls(Family.QUATERNIONIC, 4 * num, 4)
        if num != 2:
            raise ValueError("the Cayley plane is OP2")
        return cls(Family.CAYLEY, 16, 8)

    @property
    def name(self) -> str:
        if self.family is Family.SPHERE:
            return f"S{self.d}"
        if self.family is Family.COMPLEX:
            return f"CP{self.d // 2}"
        if self.family is Family.QUATERNIONIC:
            return f"HP{self.d // 4}"
        return "OP2"

    @property
    def params(self) -> JacobiParams:
        return JacobiParams(Fraction(self.k, 2) - 1, Fraction(self.d, 2) - 1)

    def __str__(self) -> str:
        return self.name


# the four models with d = 2, 4, 8, 16 used throughout the checks
STANDARD_MODELS = (
    CrossModel.sphere(2),
    CrossModel(Family.COMPLEX, 4, 2),
    CrossModel(Family.QUATERNIONIC, 8, 4),
    CrossModel(Family.CAYLEY, 16, 8),
)


def models_up_to(max_dim: int) -> list[CrossModel]:
    out = [CrossModel.sphere(d) for d in range(2, max_dim + 1)]
    out += [CrossModel(Family.COMPLEX, d, 2) for d in range(4, max_dim + 1, 2)]
    out += [CrossModel(Family.QUATERNIONIC, d, 4) for d in range(8, max_dim + 1, 4)]
    if max_dim >= 16:
        out.append(CrossModel(Family.CAYLEY, 16, 8))
    return out


def theta0(r, model: CrossModel):
    """Signed volume density; accepts floats, complex numbers and arrays."""
    half = np.asarray(r) / 2
    val = np.sin(half) ** (model.d - 1) * np.cos(half) ** (model.k - 1)
    return val if np.ndim(val) else val[()]


def sigma0(r, model: CrossModel):
    """Mean curvature of the geodesic sphere of radius ``r`` in ``(0, pi)``."""
    r_arr = np.asarray(r, dtype=float)
    if np.any((r_arr <= 0) | (r_arr >= math.pi)):
        raise ValueError("sigma0 is defined for 0 < r < pi")
    c = np.cos(r_arr)
    val = ((model.d - 1) * (1 + c) - (model.k - 1) * (1 - c)) / (2 * np.sin(r_arr))
    return val if np.ndim(val) else float(val)


def theta0_log_derivative(r, model: CrossModel, h: float = 1e-30):
    """``theta0'(r)/theta0(r)`` by complex-step differentiation of ``theta0``."""
    r = np.asarray(r, dtype=float)
    return np.imag(theta0(r + 1j * h, model)) / h / theta0(r, model)


# -- truncated power series -------------------------------------------------

@dataclass(frozen=True)
class SeriesExpansion:
    """Power series ``sum c_j t^j`` known exactly up to (excluding) ``truncation_order``."""

    variable: str
    coefficients: tuple[Fraction, ...]
    truncation_order: int

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coefficients[: self.truncation_order])
        cs = cs + (Fraction(0),) * (self.truncation_order - len(cs))
        object.__setattr__(self, "coefficients", cs)

    def _check(self, other: SeriesExpansion) -> int:
        if other.variable != self.variable:
            raise ValueError("series in different variables")
        return min(self.truncation_order, other.truncation_order)

    def __add__(self, other: SeriesExpansion) -> SeriesExpansion:
        n = self._check(other)
        return SeriesExpansion(self.variable, [self[j] + other[j] for j in range(n)], n)

    def __mul__(self, other) -> SeriesExpansion:
        if not isinstance(other, SeriesExpansion):
            c = Fraction(other)
            return SeriesExpansion(self.variable, [c * v for v in self.coefficients],
                                   self.truncation_order)
        n = self._check(other)
        out = [Fraction(0)] * n
        for i in range(n):
            if self[i]:
                for j in range(n - i):
                    out[i + j] += self[i] * other[j]
        return SeriesExpansion(self.variable, out, n)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> SeriesExpansion:
        out = SeriesExpansion(self.variable, [1], self.truncation_order)
        for _ in range(k):
            out = out * self
        return out

    def __getitem__(self, j: int) -> Fraction:
        return self.coefficients[j] if 0 <= j < self.truncation_order else Fraction(0)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient (``None`` if zero to this order)."""
        for j, c in enumerate(self.coefficients):
            if c:
                return j
        return None

    def derivative(self) -> SeriesExpansion:
        return SeriesExpansion(self.variable,
                               [j * self[j] for j in range(1, self.truncation_order)],
                               self.truncation_order - 1)

    def divide(self, other: SeriesExpansion) -> SeriesExpansion:
        n = self._check(other)
        if other[0] == 0:
            raise ZeroDivisionError("series division needs a nonzero constant term")
        out: list[Fraction] = []
        for k in range(n):
            acc = self[k] - sum(other[j] * out[k - j] for j in range(1, k + 1))
            out.append(acc / other[0])
        return SeriesExpansion(self.variable, out, n)


def sin_series(scale: Fraction, order: int, variable: str = "r") -> SeriesExpansion:
    """``sin(scale * t)``."""
    cs = [Fraction(0)] * order
    for j in range(1, order, 2):
        cs[j] = Fraction((-1) ** (j // 2), math.factorial(j)) * scale**j
    return SeriesExpansion(variable, cs, order)


def cos_series(scale: Fraction, order: int, variable: str = "r") -> SeriesExpansion:
    """``cos(scale * t)``."""
    cs = [Fraction(0)] * order
    for j in range(0, order, 2):
        cs[j] = Fraction((-1) ** (j // 2), math.factorial(j)) * scale**j
    return SeriesExpansion(variable, cs, order)


def theta0_series_at(model: CrossModel, multiple: int, order: int) -> SeriesExpansion:
    """Taylor series of ``theta0(multiple*pi + t)`` in ``t``.

    Uses ``sin(m*pi/2 + t/2)`` and ``cos(m*pi/2 + t/2)`` expanded by the angle
    addition formulas; ``sin(m*pi/2)``, ``cos(m*pi/2)`` are in {-1, 0, 1}.
    """
    s_m = (0, 1, 0, -1)[multiple % 4]
    c_m = (1, 0, -1, 0)[multiple % 4]
    half = Fraction(1, 2)
    sin_t = sin_series(half, order, "t")
    cos_t = cos_series(half, order, "t")
    sin_shift = cos_t * s_m + sin_t * c_m
    cos_shift = cos_t * c_m + sin_t * (-s_m)
    return sin_shift ** (model.d - 1) * cos_shift ** (model.k - 1)


def normalized_density_series(model: CrossModel, order: int) -> SeriesExpansion:
    """``theta0(r) / (leading coefficient * r^(d-1))`` as a series in ``r``."""
    full = theta0_series_at(model, 0, model.d - 1 + order)
    lead = full[model.d - 1]
    return SeriesExpansion("r", [full[model.d - 1 + j] / lead for j in range(order)], order)


def einstein_constant(model: CrossModel) -> Fraction:
    """``K`` with normalized density ``1 - K r^2/6 + O(r^4)``."""
    series = normalized_density_series(model, 4)
    if series[1] != 0:
        raise ArithmeticError("density series has an odd correction term")
    return -6 * series[2]


def mean_curvature_series(model: CrossModel, order: int) -> SeriesExpansion:
    """Series of ``r * sigma0(r) = (d - 1) + r N'(r)/N(r)`` with ``N`` the normalized density."""
    n = normalized_density_series(model, order + 1)
    log_der = n.derivative().divide(SeriesExpansion("r", n.coefficients[:order], order))
    shifted = [Fraction(model.d - 1)] + [log_der[j - 1] for j in range(1, order)]
    return SeriesExpansion("r", shifted, order)


# -- radial form versus algebraic form ------------------------------------

def radial_to_algebraic_residual(f: ExactPoly, lam, model: CrossModel, samples: int = 64) -> float:
    """``max |u'' + sigma0 u' + lam u|`` over ``r_i = pi i/(samples+1)`` with ``u = f(cos r)``.

    The chain rule is applied in ``r``; nothing here uses the algebraic form.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    lam = float(lam)
    c0 = f.float_coeffs()
    c1 = f.derivative().float_coeffs()
    c2 = f.derivative(2).float_coeffs()
    ev = np.polynomial.polynomial.polyval
    r = math.pi * np.arange(1, samples + 1) / (samples + 1)
    x = np.cos(r)
    s = np.sin(r)
    du = -s * ev(x, c1) if c1 else np.zeros_like(r)
    d2u = (s**2 * ev(x, c2) if c2 else 0.0) - x * (ev(x, c1) if c1 else 0.0)
    u = ev(x, c0) if c0 else np.zeros_like(r)
    res = d2u + sigma0(r, model) * du + lam * u
    return float(np.max(np.abs(res)))


def first_eigenfunction_constant(model: CrossModel) -> Fraction:
    """``C`` with first radial eigenfunction ``cos r + C``; checked against ``jacobi_polynomial``."""
    p = model.params
    c = (p.b - p.a) / (p.a + p.b + 2)
    p1 = jacobi_polynomial(1, p)
    if p1 != ExactPoly((c, 1)):
        raise ArithmeticError(f"first eigenpolynomial {p1} is not x + {c}")
    return c


# -- Ros bound ---------------------------------------------------------------

@dataclass(frozen=True)
class RosRecord:
    model: str
    lambda1: Fraction
    ricci: Fraction
    bound: Fraction
    equality: bool

    def to_json(self) -> dict:
        return {"model": self.model, "lambda1": format_fraction(self.lambda1),
                "ricci": format_fraction(self.ricci), "bound": format_fraction(self.bound),
                "equality": self.equality}


def ros_bound_check(model: CrossModel) -> RosRecord:
    lam1 = eigenvalue(1, model.params)
    ricci = einstein_constant(model)
    bound = (2 * ricci + model.d + 2) / 3
    return RosRecord(model.name, lam1, ricci, bound, lam1 == bound)


# -- density properties ------------------------------------------------------

@dataclass(frozen=True)
class DensityProperties:
    model: str
    period_2pi: bool
    parity: bool
    zero_order_even: int
    zero_order_odd: int
    zero_orders_ok: bool
    numeric_orders_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.period_2pi and self.parity and self.zero_orders_ok and self.numeric_orders_ok

    def to_json(self) -> dict:
        return {"model": self.model, "period_2pi": self.period_2pi, "parity": self.parity,
                "zero_order_even": self.zero_order_even, "zero_order_odd": self.zero_order_odd,
                "zero_orders_ok": self.zero_orders_ok, "numeric_orders_ok": self.numeric_orders_ok,
                "all_ok": self.all_ok}


def _numeric_zero_order(model: CrossModel, center: float) -> int:
    h1, h2 = 1e-2, 1e-3
    v1 = abs(theta0(center + h1, model))
    v2 = abs(theta0(center + h2, model))
    return round(math.log(v1 / v2) / math.log(h1 / h2))


def density_properties_check(model: CrossModel, samples: int = 200) -> DensityProperties:
    rs = np.linspace(-3 * math.pi, 3 * math.pi, samples) + 0.123
    base = theta0(rs, model)
    period = bool(np.all(np.abs(theta0(rs + 2 * math.pi, model) - base) <= 1e-12))
    parity = bool(np.all(np.abs(theta0(-rs, model) - (-1) ** (model.d - 1) * base) <= 1e-12))

    order = model.d + model.k + 2
    multiples = (-2, -1, 0, 1, 2, 3)
    exact_orders = {m: theta0_series_at(model, m, order).valuation() for m in multiples}
    expected = {m: (model.d - 1 if m % 2 == 0 else model.k - 1) for m in multiples}
    numeric = {m: _numeric_zero_order(model, m * math.pi) for m in multiples}
    return DensityProperties(
        model=model.name,
        period_2pi=period,
        parity=parity,
        zero_order_even=exact_orders[0],
        zero_order_odd=exact_orders[1],
        zero_orders_ok=exact_orders == expected,
        numeric_orders_ok=numeric == expected,
    )


# -- perturbed density --------------------------------------------------------

@dataclass(frozen=True)
class PerturbedDensity:
    """``theta = exp(alpha(cos r)) theta0`` described through ``delta = alpha'``."""

    base: CrossModel
    delta: RationalFunction

    def is_smooth(self) -> bool:
        """No pole of ``delta`` on ``[-1, 1]`` (exact)."""
        return count_real_roots_in(self.delta.den, -1, 1) == 0

    def alpha(self, x: float) -> float:
        """Antiderivative of ``delta`` normalized by ``alpha(1) = 0``."""
        val, _ = quad(lambda t: self.delta.eval_float(t), 1.0, float(x), epsabs=1e-13, epsrel=1e-13)
        return val

    def theta(self, r: float) -> float:
        return math.exp(self.alpha(math.cos(r))) * float(theta0(r, self.base))

    def sigma(self, r: float) -> float:
        return float(sigma0(r, self.base)) - math.sin(r) * self.delta.eval_float(math.cos(r))
