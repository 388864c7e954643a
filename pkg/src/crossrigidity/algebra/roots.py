"""Complex roots with exact multiplicities.

Multiplicities come from the squarefree decomposition; floats are only used
to locate the distinct roots of each squarefree factor (Aberth-Ehrlich
simultaneous iteration). Residuals are evaluated exactly at the float root.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .poly import ExactPoly, squarefree_decomposition
from .sturm import count_real_roots

DEFAULT_TOL = 1e-10
MAX_ITER = 500


class RootFindingError(RuntimeError):
    """The simultaneous iteration failed to certify every root."""


@dataclass(frozen=True)
class RootMultiset:
    """Distinct complex roots with multiplicities summing to the degree."""

    entries: tuple[tuple[complex, int], ...]
    residual_bound: float = 0.0

    @property
    def roots(self) -> list[complex]:
        return [z for z, _ in self.entries]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.entries]

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {
            "entries": [
                {"re": z.real, "im": z.imag, "multiplicity": m} for z, m in self.entries
            ],
            "residual_bound": self.residual_bound,
        }


def relative_residual(p: ExactPoly, z: complex) -> float:
    """``|p(z)| / sum_j |c_j| |z|^j`` with ``p(z)`` computed exactly at the float ``z``."""
    zr, zi = Fraction(z.real), Fraction(z.imag)
    re, im = Fraction(0), Fraction(0)
    for c in reversed(p.coeffs):
        re, im = re * zr - im * zi + c, re * zi + im * zr
    scale = 0.0
    az = abs(z)
    for c in reversed(p.coeffs):
        scale = scale * az + abs(float(c))
    if scale == 0.0:
        return 0.0
    return math.hypot(float(re), float(im)) / scale


def _horner2(coeffs: list[float], z: complex) -> tuple[complex, complex]:
    p, dp = 0j, 0j
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _abs_horner(coeffs: list[float], t: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def aberth(coeffs: list[float], max_iter: int = MAX_ITER) -> list[complex]:
    """Distinct roots of a squarefree polynomial given by float coefficients (ascending)."""
    n = len(coeffs) - 1
    if n < 1:
        return []
    lead = coeffs[-1]
    a = [c / lead for c in coeffs]
    if n == 1:
        return [complex(-a[0])]
    center = -a[n - 1] / n
    p_center, _ = _horner2(a, complex(center))
    radius = abs(p_center) ** (1.0 / n)
    fujiwara = 2 * max(abs(a[n - k]) ** (1.0 / k) for k in range(1, n + 1))
    if not radius > 1e-8 * max(fujiwara, 1.0):
        radius = max(fujiwara, 1.0) / 2
    z = [center + radius * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]
    eps = 2.0**-52
    abs_a = [abs(c) for c in a]
    converged = [False] * n
    for _ in range(max_iter):
        for i in range(n):
            if converged[i]:
                continue
            pz, dpz = _horner2(a, z[i])
            if abs(pz) <= 4 * n * eps * _abs_horner(abs_a, abs(z[i])):
                converged[i] = True
                continue
            s = 0j
            for j in range(n):
                if j != i:
                    s += 1 / (z[i] - z[j])
            ratio = pz / dpz if dpz != 0 else pz
            step = ratio / (1 - ratio * s)
            z[i] -= step
            size = abs(step)
            if size <= 4 * eps * abs(z[i]) or size < 1e-300:
                converged[i] = True
        if all(converged):
            break
    else:
        raise RootFindingError(f"Aberth iteration did not converge for degree {n}")
    return z


def _newton_polish(coeffs: list[float], z: complex, steps: int = 2) -> complex:
    for _ in range(steps):
        p, dp = _horner2(coeffs, z)
        if dp == 0:
            break
        nz = z - p / dp
        if not cmath.isfinite(nz):
            break
        z = nz
    return z


def _enforce_conjugate_symmetry(roots: list[complex], n_real: int) -> list[complex]:
    order = sorted(roots, key=lambda z: abs(z.imag))
    real = [complex(z.real, 0.0) for z in order[:n_real]]
    rest = order[n_real:]
    upper = sorted(rest, key=lambda z: z.imag)[len(rest) // 2 :]
    lower = sorted(rest, key=lambda z: z.imag)[: len(rest) // 2]
    paired = []
    for z in upper:
        w = min(lower, key=lambda u: abs(u - z.conjugate()))
        lower.remove(w)
        mid = (z + w.conjugate()) / 2
        paired.extend([complex(mid.real, abs(mid.imag)), complex(mid.real, -abs(mid.imag))])
    return real + paired


def _squarefree_roots(f: ExactPoly, tol: float) -> tuple[list[complex], float]:
    if f.degree == 1:
        r = -f.coeffs[0] / f.coeffs[1]
        return [complex(float(r))], relative_residual(f, complex(float(r)))
    fc = f.float_coeffs()
    z = aberth(fc)
    z = [_newton_polish(fc, w) for w in z]
    z = _enforce_conjugate_symmetry(z, count_real_roots(f))
    z = [complex(_newton_polish(fc, w, 1).real, 0.0) if w.imag == 0 else w for w in z]
    worst = max(relative_residual(f, w) for w in z)
    if worst > tol:
        raise RootFindingError(
            f"root residual {worst:.3e} exceeds tolerance {tol:.1e} for factor of degree {f.degree}"
        )
    return z, worst


def find_roots(p: ExactPoly, tol: float = DEFAULT_TOL) -> RootMultiset:
    """Distinct roots of ``p`` with exact multiplicities.

    Every root is certified by ``relative_residual(factor, root) <= tol``;
    ``residual_bound`` is the worst such value.
    """
    if p.is_constant():
        raise ValueError("find_roots needs a nonconstant polynomial")
    entries = []
    bound = 0.0
    for f, k in squarefree_decomposition(p):
        zs, worst = _squarefree_roots(f, tol)
        bound = max(bound, worst)
        entries.extend((z, k) for z in zs)
    entries.sort(key=lambda e: (e[0].real, e[0].imag))
    return RootMultiset(tuple(entries), bound)


def rational_roots(f: ExactPoly) -> list[Fraction]:
    """Exact rational roots of ``f`` (distinct).

    Candidates come from the real float roots snapped to the nearest fraction
    whose denominator divides the integer leading coefficient; each candidate
    is confirmed by exact evaluation.
    """
    if f.is_constant():
        return []
    out = []
    for g, _ in squarefree_decomposition(f):
        ints = g.primitive_integer_coeffs()
        max_den = abs(ints[-1])
        if g.degree == 1:
            out.append(-g.coeffs[0] / g.coeffs[1])
            continue
        try:
            gc = g.float_coeffs()
            zs = [_newton_polish(gc, w) for w in aberth(gc)]
        except RootFindingError:
            continue
        scale = max(1.0, max(abs(z) for z in zs))
        for z in zs:
            if abs(z.imag) > 1e-6 * scale:
                continue
            cand = Fraction(z.real).limit_denominator(max_den)
            if g(cand) == 0 and cand not in out:
                out.append(cand)
    return sorted(out)
