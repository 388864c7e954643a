"""Numerical cross-checks: collocation spectra on [-1, 1] and radial integration on (0, pi)."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.integrate import solve_ivp

from .algebra import RationalFunction, count_real_roots_in
from .geometry import CrossModel, mean_curvature_series, sigma0
from .jacobi import JacobiParams, eigenvalue, jacobi_polynomial


class SpectralError(RuntimeError):
    pass


def cheb_nodes(order: int) -> np.ndarray:
    """Chebyshev-Gauss-Lobatto points ``cos(j pi / order)``, j = 0..order."""
    return np.cos(np.pi * np.arange(order + 1) / order)


def cheb_diff_matrix(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Differentiation matrix on the Lobatto nodes (diagonal by negative row sums)."""
    x = cheb_nodes(order)
    c = np.ones(order + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(order + 1)
    dx = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (dx + np.eye(order + 1))
    D -= np.diag(D.sum(axis=1))
    return D, x


@dataclass(frozen=True)
class SpectralResult:
    params: JacobiParams
    delta: Optional[RationalFunction]
    discretization_order: int
    eigenvalues: tuple[float, ...]
    residuals: tuple[float, ...]
    # Chebyshev coefficients of each eigenvector (columns), max-normalized
    cheb_coeffs: Optional[np.ndarray] = None

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "delta": None if self.delta is None else self.delta.to_json(),
            "discretization_order": self.discretization_order,
            "eigenvalues": list(self.eigenvalues),
            "residuals": list(self.residuals),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "eigenvalue", "residual"])
        for i, (lam, res) in enumerate(zip(self.eigenvalues, self.residuals)):
            w.writerow([i, repr(lam), repr(res)])
        return buf.getvalue()

    def tail_ratio(self, index: int) -> float:
        """Largest Chebyshev coefficient above degree ``index``, relative to the largest overall."""
        coeffs = np.abs(self.cheb_coeffs[:, index])
        return float(coeffs[index + 1 :].max() / coeffs.max())


def operator_matrix(params: JacobiParams, delta: Optional[RationalFunction], order: int) -> np.ndarray:
    """Collocation matrix of ``-(1-x^2) u'' + [F(x) + (1-x^2) delta(x)] u'``."""
    D, x = cheb_diff_matrix(order)
    F = float(params.b - params.a) + float(params.a + params.b + 2) * x
    if delta is not None and not delta.is_zero():
        F = F + (1 - x**2) * np.array([delta.eval_float(t) for t in x])
    return -(np.diag(1 - x**2) @ (D @ D)) + np.diag(F) @ D


def solve_spectrum(params: JacobiParams, delta: Optional[RationalFunction] = None,
                   order: int = 32, count: int = 5) -> SpectralResult:
    """The ``count`` smallest eigenvalues of the (perturbed) Jacobi operator.

    Bounded solutions are selected by the polynomial ansatz itself: no
    boundary rows are imposed at the singular endpoints.
    """
    if order < count + 4:
        raise ValueError("order must be at least count + 4")
    if delta is not None and not delta.is_zero() and count_real_roots_in(delta.den, -1, 1):
        raise SpectralError("delta has a pole in [-1, 1]")
    A = operator_matrix(params, delta, order)
    w, V = np.linalg.eig(A)
    if not np.all(np.isfinite(w)):
        raise SpectralError("eigenvalue extraction produced non-finite values")
    idx = np.argsort(w.real)[:count]
    lams, vecs = w[idx], V[:, idx]
    if np.any(np.abs(lams.imag) > 1e-8 * np.maximum(1.0, np.abs(lams.real))):
        raise SpectralError("complex eigenvalues among the lowest modes")
    norm_a = np.linalg.norm(A, 2)
    res = [float(np.linalg.norm(A @ vecs[:, i] - lams[i] * vecs[:, i])
                 / (norm_a * np.linalg.norm(vecs[:, i]))) for i in range(count)]
    x = cheb_nodes(order)
    coeffs = np.column_stack([C.chebfit(x, vecs[:, i].real, order) for i in range(count)]) \
        if count else np.zeros((order + 1, 0))
    return SpectralResult(params, delta, order, tuple(float(v) for v in lams.real),
                          tuple(res), coeffs)


def exact_spectrum(params: JacobiParams, count: int) -> list:
    return [eigenvalue(n, params) for n in range(count)]


# -- radial equation ------------------------------------------------------------

@dataclass(frozen=True)
class RadialSolution:
    model: CrossModel
    lam: float
    r0: float
    sol: object  # scipy OdeSolution

    def __call__(self, r):
        return self.sol(r)[0]


def frobenius_coefficients(model: CrossModel, lam: float, order: int = 4) -> list[float]:
    """Even-power coefficients ``u_0 = 1, u_2, u_4, ...`` of the bounded solution at ``r = 0``.

    With ``r sigma0(r) = sum s_j r^j`` (``s_0 = d - 1``) the recursion is
    ``m (m + d - 2) u_m = -lam u_{m-2} - sum_{j>=1} s_j (m - j) u_{m-j}``.
    """
    s = mean_curvature_series(model, order + 1)
    u = [0.0] * (order + 1)
    u[0] = 1.0
    for m in range(1, order + 1):
        acc = -lam * u[m - 2] if m >= 2 else 0.0
        for j in range(1, m + 1):
            acc -= float(s[j]) * (m - j) * u[m - j]
        u[m] = acc / (m * (m + model.d - 2))
    return u


def integrate_radial(model: CrossModel, lam: float, r_end: float, rtol: float = 1e-10,
                     r0: float = 1e-3) -> RadialSolution:
    """Solve ``u'' + sigma0(r) u' + lam u = 0`` with ``u(0) = 1``, ``u'(0) = 0``.

    Starts from the degree-4 Frobenius polynomial at ``r0`` and continues with
    an adaptive 8th-order Runge-Kutta method.
    """
    if not 0 < r_end < math.pi:
        raise ValueError("r_end must lie in (0, pi)")
    if not math.isfinite(lam):
        raise ValueError("lambda must be finite")
    u = frobenius_coefficients(model, float(lam), 4)
    u_start = sum(c * r0**m for m, c in enumerate(u))
    du_start = sum(m * c * r0 ** (m - 1) for m, c in enumerate(u) if m)

    def rhs(r, y):
        return [y[1], -float(sigma0(r, model)) * y[1] - lam * y[0]]

    out = solve_ivp(rhs, (r0, r_end), [u_start, du_start], method="DOP853",
                    rtol=rtol, atol=rtol * 1e-2, dense_output=True)
    if not out.success:
        raise SpectralError(f"radial integration failed: {out.message}")
    return RadialSolution(model, float(lam), r0, out.sol)


def compare_radial_algebraic(n: int, model: CrossModel, tol: float = 1e-10,
                             samples: int = 400) -> float:
    """Sup distance on [0.1, pi - 0.1] between the integrated radial solution for
    ``lambda_n`` and ``p_n(cos r)/p_n(1)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    params = model.params
    lam = eigenvalue(n, params)
    p = jacobi_polynomial(n, params)
    lo, hi = 0.1, math.pi - 0.1
    sol = integrate_radial(model, float(lam), hi, rtol=tol)
    r = np.linspace(lo, hi, samples)
    exact = np.polynomial.polynomial.polyval(np.cos(r), p.float_coeffs()) / float(p(1))
    return float(np.max(np.abs(sol(r) - exact)))
