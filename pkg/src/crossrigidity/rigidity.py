"""Perturbed Jacobi equation: extraction of the perturbation and its structure.

The perturbed equation is

    (1 - x^2) u'' - [(1 + b)(1 + x) - (1 + a)(1 - x) + (1 - x^2) delta(x)] u' + lam u = 0.

Given a polynomial solution candidate ``P`` and ``lam`` the perturbation is
forced to be ``delta = (L P + lam P) / ((1 - x^2) P')``. ``structural_analysis``
runs every structural consequence of ``delta`` being continuous on [-1, 1]
and reports the first one that fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import (
    ONE,
    ExactPoly,
    RationalFunction,
    RootFindingError,
    RootMultiset,
    count_real_roots_in,
    find_roots,
    format_fraction,
    in_hull,
    logarithmic_derivative,
    partial_fractions,
    poly_gcd,
    squarefree_decomposition,
    squarefree_part,
)
from .jacobi import JacobiParams, jacobi_operator_apply

ONE_MINUS_X2 = ExactPoly((1, 0, -1))

# Fixed order; the first False decides the verdict.
CHECK_ORDER = (
    "degree_gap_ok",
    "poles_simple",
    "poles_off_interval",
    "q_divides_P",
    "q_divides_Pprime",
    "residue_relation_ok",
    "delta_is_logderiv_q1",
    "endpoints_excluded",
    "s_doubleprime_simple",
    "residue_identity_ok",
    "hull_containment_ok",
    "roots_in_open_interval",
)

DELTA_VANISHES = "DeltaVanishes"
INCONCLUSIVE = "Inconclusive"


class DegenerateRootsError(ArithmeticError):
    """``P'/q1`` still shares a root with ``P``."""


def _require_nonconstant(P: ExactPoly) -> ExactPoly:
    if P.is_constant():
        raise ValueError("the candidate solution must be a nonconstant polynomial")
    return P.monic()


def compute_delta(P: ExactPoly, lam, params: JacobiParams) -> RationalFunction:
    """The unique ``delta`` for which ``P`` solves the perturbed equation with ``lam``."""
    P = _require_nonconstant(P)
    lam = Fraction(lam)
    num = jacobi_operator_apply(P, params) + P * lam
    return RationalFunction(num, ONE_MINUS_X2 * P.derivative())


def riccati_residual(P: ExactPoly, lam, delta: RationalFunction,
                     params: JacobiParams) -> RationalFunction:
    """``v' + v^2 - [(1+b)/(1-x) - (1+a)/(1+x) + delta] v + lam/(1-x^2)`` with ``v = P'/P``."""
    P = _require_nonconstant(P)
    v = logarithmic_derivative(P)
    one_minus_x = RationalFunction(ExactPoly((1, -1)))
    one_plus_x = RationalFunction(ExactPoly((1, 1)))
    bracket = (1 + params.b) / one_minus_x - (1 + params.a) / one_plus_x + delta
    return v.derivative() + v * v - bracket * v + Fraction(lam) / RationalFunction(ONE_MINUS_X2)


def riccati_partial_fraction_form(P: ExactPoly) -> RationalFunction:
    """``sum (m_i^2 - m_i)/(x - b_i)^2 + sum_{i != j} 2 m_i m_j / ((b_i - b_j)(x - b_i))``.

    Only for ``P`` whose roots are all rational; the roots come from exact
    factorization into linear factors.
    """
    from .algebra import rational_roots

    roots = []
    for f, k in squarefree_decomposition(P):
        rs = rational_roots(f)
        if len(rs) != f.degree:
            raise ValueError("riccati_partial_fraction_form needs rational roots")
        roots.extend((r, k) for r in rs)
    total = RationalFunction.zero()
    for i, (bi, mi) in enumerate(roots):
        lin = ExactPoly((-bi, 1))
        total = total + RationalFunction(ExactPoly.constant(mi * mi - mi), lin * lin)
        for j, (bj, mj) in enumerate(roots):
            if i != j:
                total = total + RationalFunction(ExactPoly.constant(Fraction(2 * mi * mj) / (bi - bj)), lin)
    return total


# -- hull argument --------------------------------------------------------------

@dataclass(frozen=True)
class HullReport:
    gamma_roots: RootMultiset
    residue_identity_ok: bool
    residue_identity_error: float
    S_in_hull: bool
    lucas_ok: bool
    S_in_open_interval: bool

    def to_json(self) -> dict:
        return {
            "gamma_roots": self.gamma_roots.to_json(),
            "residue_identity_ok": self.residue_identity_ok,
            "residue_identity_error": self.residue_identity_error,
            "S_in_hull": self.S_in_hull,
            "lucas_ok": self.lucas_ok,
            "S_in_open_interval": self.S_in_open_interval,
        }


def hull_argument_check(P: ExactPoly, params: JacobiParams, tol: float = 1e-8,
                        hull_tol: float = 1e-9) -> HullReport:
    """Root geometry of ``P`` against the critical points ``gamma_j`` of ``P'/q1``.

    ``q1 = gcd(P, P')`` so the ``gamma_j`` are the roots of ``P'`` that are not
    roots of ``P``. At each root ``beta`` of ``P`` the identity

        sum_j M_j/(beta - gamma_j) + (a+1)/(beta+1) + (b+1)/(beta-1) = 0

    is tested relative to the sum of the absolute values of its terms.
    """
    P = _require_nonconstant(P)
    if P(1) == 0 or P(-1) == 0:
        raise ValueError("hull argument needs P(1) != 0 and P(-1) != 0")
    dP = P.derivative()
    q1 = poly_gcd(P, dP)
    R = dP.exact_div(q1)
    if not poly_gcd(R, P).is_constant():
        raise DegenerateRootsError("P'/gcd(P, P') shares a root with P")

    S = find_roots(P).roots
    gamma = find_roots(R) if not R.is_constant() else RootMultiset((), 0.0)
    a1, b1 = float(params.a + 1), float(params.b + 1)
    worst = 0.0
    for beta in S:
        terms = [m / (beta - g) for g, m in gamma.entries]
        terms += [a1 / (beta + 1), b1 / (beta - 1)]
        scale = sum(abs(t) for t in terms)
        worst = max(worst, abs(sum(terms)) / scale)

    s = squarefree_part(P)
    in_open = count_real_roots_in(s, -1, 1, open=True) == s.degree
    return HullReport(
        gamma_roots=gamma,
        residue_identity_ok=worst <= tol,
        residue_identity_error=worst,
        S_in_hull=in_hull(gamma.roots + [1 + 0j, -1 + 0j], S, hull_tol),
        lucas_ok=in_hull(S, gamma.roots, hull_tol) if gamma.entries else True,
        S_in_open_interval=in_open,
    )


# -- structural analysis ----------------------------------------------------------

@dataclass
class PerturbationReport:
    delta: RationalFunction
    degree_gap_ok: Optional[bool] = None
    poles_simple: Optional[bool] = None
    poles_off_interval: Optional[bool] = None
    q_divides_P: Optional[bool] = None
    q_divides_Pprime: Optional[bool] = None
    residue_relation_ok: Optional[bool] = None
    delta_is_logderiv_q1: Optional[bool] = None
    endpoints_excluded: Optional[bool] = None
    s_doubleprime_simple: Optional[bool] = None
    residue_identity_ok: Optional[bool] = None
    hull_containment_ok: Optional[bool] = None
    roots_in_open_interval: Optional[bool] = None
    residues: list = field(default_factory=list)
    residue_rounding_gap: Optional[float] = None
    verdict: str = INCONCLUSIVE
    failing_check: Optional[str] = None
    note: Optional[str] = None

    def checks(self) -> dict:
        return {name: getattr(self, name) for name in CHECK_ORDER}

    def to_json(self) -> dict:
        out = {"delta": self.delta.to_json(), "delta_text": str(self.delta)}
        out.update(self.checks())
        out["residues"] = [
            {"pole": {"re": z.real, "im": z.imag},
             "c": {"re": c.real, "im": c.imag}, "m": m}
            for z, c, m in self.residues
        ]
        out["residue_rounding_gap"] = self.residue_rounding_gap
        out["verdict"] = self.verdict
        out["failing_check"] = self.failing_check
        out["note"] = self.note
        return out


def _residue_table(delta: RationalFunction, factors) -> tuple[list, float]:
    """``(pole, residue, multiplicity of pole in P)`` for every simple-order term of ``delta``."""
    expansion = partial_fractions(delta)
    located = []
    for f, k in factors:
        g = poly_gcd(f, delta.den)
        if not g.is_constant():
            located.extend((z, k) for z in find_roots(g).roots)
    rows = []
    gap = 0.0
    for t in expansion.terms:
        if t.order != 1:
            continue
        z = complex(t.pole)
        m = 0
        for w, k in located:
            if abs(w - z) <= 1e-8 * max(1.0, abs(z)):
                m = k
        c = complex(t.coefficient)
        gap = max(gap, abs(c - round(c.real)))
        rows.append((z, c, m))
    rows.sort(key=lambda row: (row[0].real, row[0].imag))
    return rows, gap


def structural_analysis(P: ExactPoly, lam, params: JacobiParams) -> PerturbationReport:
    """Every structural consequence of a continuous rational perturbation, in fixed order.

    The verdict is ``DeltaVanishes`` exactly when ``delta == 0``; otherwise
    ``StructureViolated(<first failing check>)``, or ``Inconclusive`` when a
    float-layer step failed before any check did (or, in principle, if every
    check passed for a nonzero ``delta``).
    """
    P = _require_nonconstant(P)
    delta = compute_delta(P, lam, params)
    rep = PerturbationReport(delta=delta)
    p, q = delta.num, delta.den
    dP = P.derivative()
    factors = squarefree_decomposition(P)

    rep.degree_gap_ok = delta.is_zero() or p.degree < q.degree
    rep.poles_simple = poly_gcd(q, q.derivative()).is_constant() if not q.is_constant() else True
    rep.poles_off_interval = q.is_constant() or count_real_roots_in(q, -1, 1) == 0
    rep.q_divides_P = q.divides(P)
    rep.q_divides_Pprime = q.divides(dP)

    # Exact residue relation: at a simple pole beta of p/q the residue is
    # p(beta)/q'(beta); it equals m - 1 on every root of g_k = gcd(f_k, q)
    # iff g_k divides p - (k - 1) q'.
    q1 = ONE
    covered = ONE
    relation = rep.poles_simple
    for f, k in factors:
        g = poly_gcd(f, q)
        if g.is_constant():
            continue
        covered = covered * g
        q1 = q1 * g ** (k - 1)
        if k < 2 or not g.divides(p - q.derivative() * (k - 1)):
            relation = False
    rep.residue_relation_ok = bool(relation and covered == q)
    if q1.is_constant():
        rep.delta_is_logderiv_q1 = delta.is_zero()
    else:
        rep.delta_is_logderiv_q1 = delta == logarithmic_derivative(q1)
    rep.endpoints_excluded = P(1) != 0 and P(-1) != 0
    rep.s_doubleprime_simple = all(
        k == 1 or f.divides(q) for f, k in factors
    )

    float_error = None
    try:
        if not delta.is_zero():
            rep.residues, rep.residue_rounding_gap = _residue_table(delta, factors)
        if rep.endpoints_excluded:
            hull = hull_argument_check(P, params)
            rep.residue_identity_ok = hull.residue_identity_ok
            rep.hull_containment_ok = hull.S_in_hull and hull.lucas_ok
            rep.roots_in_open_interval = hull.S_in_open_interval
    except (RootFindingError, DegenerateRootsError) as exc:
        float_error = str(exc)

    if delta.is_zero():
        rep.verdict = DELTA_VANISHES
        if float_error:
            rep.note = f"float layer: {float_error}"
        return rep
    for name in CHECK_ORDER:
        value = getattr(rep, name)
        if value is None:
            break
        if value is False:
            rep.failing_check = name
            rep.verdict = f"StructureViolated({name})"
            return rep
    rep.verdict = INCONCLUSIVE
    rep.note = float_error or "nonzero delta passed every evaluated check"
    return rep


# -- bounded search for polynomial solutions ----------------------------------------

@dataclass(frozen=True)
class DegreeAttempt:
    degree: int
    forced_lambda: Optional[Fraction]
    equations: int
    unknowns: int
    rank: int
    augmented_rank: int
    solution: Optional[ExactPoly]

    @property
    def consistent(self) -> bool:
        return self.solution is not None

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "forced_lambda": None if self.forced_lambda is None else format_fraction(self.forced_lambda),
            "equations": self.equations,
            "unknowns": self.unknowns,
            "rank": self.rank,
            "augmented_rank": self.augmented_rank,
            "solution": None if self.solution is None else self.solution.to_json(),
        }


def solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Gauss-Jordan elimination over Q.

    Returns ``(rank, augmented_rank, x)`` where ``x`` is a particular solution
    (free variables set to 0) or ``None`` if the system is inconsistent.
    """
    n_cols = len(rows[0]) if rows else 0
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    rank = r
    aug_rank = rank + (1 if any(m[i][-1] != 0 for i in range(rank, len(m))) else 0)
    if aug_rank > rank:
        return rank, aug_rank, None
    x = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        x[c] = m[i][-1]
    return rank, aug_rank, x


def solve_degree(delta: RationalFunction, params: JacobiParams, n: int) -> DegreeAttempt:
    """Look for a monic degree-``n`` solution of the perturbed equation.

    After multiplying by ``q`` the equation reads ``A(u) + lam q u = 0`` with
    ``A(u) = q(1-x^2)u'' - (q F + (1-x^2) p) u'``. The top coefficient involves
    only the leading 1 of ``u``, which forces ``lam``; the lower coefficients
    give an exact linear system in ``c_0 .. c_{n-1}``.
    """
    if n < 1:
        raise ValueError("degree must be at least 1")
    p, q = delta.num, delta.den
    first = q * params.first_order_coeff + ONE_MINUS_X2 * p
    qx = q * ONE_MINUS_X2

    def A(u: ExactPoly) -> ExactPoly:
        return qx * u.derivative(2) - first * u.derivative()

    basis = [ExactPoly.monomial(j) for j in range(n + 1)]
    a_cols = [A(e) for e in basis]
    b_cols = [q * e for e in basis]
    top = max(max(c.degree for c in a_cols), max(c.degree for c in b_cols))
    for j in range(n):
        if a_cols[j].degree >= top or b_cols[j].degree >= top:
            raise AssertionError("lower monomials reach the top degree")
    a_top, b_top = a_cols[n][top], b_cols[n][top]
    if b_top == 0:
        # lam cannot balance the top coefficient, which is then nonzero
        return DegreeAttempt(n, None, top + 1, n, 0, 1, None)
    lam = -a_top / b_top
    cols = [a_cols[j] + b_cols[j] * lam for j in range(n + 1)]
    rows = [[cols[j][i] for j in range(n)] for i in range(top)]
    rhs = [-cols[n][i] for i in range(top)]
    rank, aug_rank, x = solve_exact(rows, rhs)
    sol = None
    if x is not None:
        sol = ExactPoly(list(x) + [1])
        residual = A(sol) + q * sol * lam
        if not residual.is_zero():
            raise ArithmeticError("linear solve produced a non-solution")
    return DegreeAttempt(n, lam, top, n, rank, aug_rank, sol)


def falsification_trace(delta: RationalFunction, params: JacobiParams, maxdeg: int,
                        stop_at_first: bool = True) -> list[DegreeAttempt]:
    if maxdeg < 1:
        raise ValueError("maxdeg must be at least 1")
    out = []
    for n in range(1, maxdeg + 1):
        attempt = solve_degree(delta, params, n)
        out.append(attempt)
        if stop_at_first and attempt.consistent:
            break
    return out


def falsification_search(delta: RationalFunction, params: JacobiParams,
                         maxdeg: int) -> Optional[tuple[ExactPoly, Fraction]]:
    """First monic polynomial solution of degree ``1..maxdeg`` with its forced ``lam``, or ``None``.

    ``None`` certifies that no monic polynomial of degree at most ``maxdeg``
    solves the perturbed equation for any ``lam``.
    """
    for attempt in falsification_trace(delta, params, maxdeg):
        if attempt.consistent:
            return attempt.solution, attempt.forced_lambda
    return None
