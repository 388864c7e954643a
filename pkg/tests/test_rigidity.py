import json
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from crossrigidity.algebra import X, ExactPoly, RationalFunction, parse_poly, parse_rational_function
from crossrigidity.geometry import STANDARD_MODELS
from crossrigidity.jacobi import JacobiParams, eigenvalue, jacobi_polynomial
from crossrigidity.rigidity import (
    CHECK_ORDER,
    DELTA_VANISHES,
    compute_delta,
    falsification_search,
    falsification_trace,
    hull_argument_check,
    riccati_residual,
    solve_exact,
    structural_analysis,
)

LEGENDRE = JacobiParams(0, 0)
xs = sp.Symbol("x")


def sym(p: ExactPoly):
    return sum(sp.Rational(c.numerator, c.denominator) * xs**j for j, c in enumerate(p.coeffs))


def sym_rf(f: RationalFunction):
    return sym(f.num) / sym(f.den)


def sym_delta(P: ExactPoly, lam, params):
    a, b = (sp.Rational(v.numerator, v.denominator) for v in (params.a, params.b))
    p = sym(P.monic())
    lam = sp.Rational(Fraction(lam).numerator, Fraction(lam).denominator)
    Lp = (1 - xs**2) * p.diff(xs, 2) - ((b - a) + (a + b + 2) * xs) * p.diff(xs)
    return sp.cancel((Lp + lam * p) / ((1 - xs**2) * p.diff(xs)))


monic = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=1, max_size=8) \
    .map(lambda cs: ExactPoly(cs + [1]))
lams = st.fractions(min_value=-60, max_value=60, max_denominator=7)


# -- delta and the Riccati form ----------------------------------------------------------

def test_compute_delta_examples():
    assert compute_delta(parse_poly("x^2"), 6, LEGENDRE) == RationalFunction(ExactPoly([-1]), parse_poly("x^3 - x"))
    assert compute_delta(X, 1, LEGENDRE) == RationalFunction(X, parse_poly("x^2 - 1"))
    for model in STANDARD_MODELS:
        for n in range(1, 11):
            assert compute_delta(jacobi_polynomial(n, model.params), eigenvalue(n, model.params),
                                 model.params).is_zero()
    with pytest.raises(ValueError):
        compute_delta(ExactPoly([3]), 0, LEGENDRE)


@settings(max_examples=40, deadline=None)
@given(monic, lams, st.sampled_from(STANDARD_MODELS))
def test_compute_delta_matches_sympy(P, lam, model):
    assert sp.simplify(sym_rf(compute_delta(P, lam, model.params)) - sym_delta(P, lam, model.params)) == 0


def test_riccati_examples():
    P = parse_poly("x^2")
    assert riccati_residual(P, 6, compute_delta(P, 6, LEGENDRE), LEGENDRE).is_zero()
    nonzero = riccati_residual(P, 6, RationalFunction.zero(), LEGENDRE)
    assert nonzero(Fraction(1, 2)) != 0
    p3 = jacobi_polynomial(3, LEGENDRE)
    assert riccati_residual(p3, 12, RationalFunction.zero(), LEGENDRE).is_zero()


@settings(max_examples=100, deadline=None)
@given(monic, lams, st.sampled_from(STANDARD_MODELS))
def test_riccati_consistency_and_degree_gap(P, lam, model):
    delta = compute_delta(P, lam, model.params)
    assert riccati_residual(P, lam, delta, model.params).is_zero()
    if not delta.is_zero():
        assert delta.num.degree < delta.den.degree


# -- structural analysis ------------------------------------------------------------------

@pytest.mark.parametrize("model", STANDARD_MODELS, ids=lambda m: m.name)
def test_eigenpairs_vanish(model):
    for n in range(1, 11):
        rep = structural_analysis(jacobi_polynomial(n, model.params), eigenvalue(n, model.params), model.params)
        assert rep.verdict == DELTA_VANISHES
        assert all(v is True for v in rep.checks().values())


def test_x_squared_violation():
    rep = structural_analysis(parse_poly("x^2"), 6, LEGENDRE)
    assert rep.verdict == "StructureViolated(poles_off_interval)"
    assert rep.failing_check == "poles_off_interval"
    assert rep.degree_gap_ok and rep.poles_simple


def test_first_failing_check_is_deterministic():
    P = parse_poly("(x-2)^2 (x-1/4)")
    for lam in (Fraction(0), Fraction(3), Fraction(-7, 2), Fraction(12)):
        rep = structural_analysis(P, lam, LEGENDRE)
        again = structural_analysis(P, lam, LEGENDRE)
        assert rep.to_json() == again.to_json()
        values = rep.checks()
        first_false = next(name for name in CHECK_ORDER if values[name] is False)
        assert rep.failing_check == first_false
        # independent pole location
        den = sp.fraction(sym_delta(P, lam, LEGENDRE))[1]
        on_interval = any(abs(complex(r).imag) < 1e-12 and -1 <= complex(r).real <= 1
                          for r in sp.Poly(den, xs).nroots())
        assert values["poles_off_interval"] is (not on_interval)


def test_report_json_roundtrip():
    rep = structural_analysis(parse_poly("x^3 - x/2 + 3"), Fraction(5, 2), JacobiParams(1, 3))
    blob = json.loads(json.dumps(rep.to_json()))
    assert blob["verdict"] == rep.verdict
    assert set(CHECK_ORDER) <= set(blob)


@settings(max_examples=50, deadline=None)
@given(monic, lams, st.sampled_from(STANDARD_MODELS))
def test_non_eigenpairs_violated(P, lam, model):
    if compute_delta(P, lam, model.params).is_zero():
        return
    rep = structural_analysis(P, lam, model.params)
    assert rep.verdict.startswith("StructureViolated")
    assert rep.verdict != DELTA_VANISHES


def test_rational_pole_residue_relation():
    # P = (x-2)^2 (x-3), lam chosen freely: pole structure is checked exactly
    P = parse_poly("(x-2)^2 (x-3)")
    rep = structural_analysis(P, 1, LEGENDRE)
    assert rep.verdict.startswith("StructureViolated")
    assert rep.residue_rounding_gap is not None


# -- hull argument -------------------------------------------------------------------------

def test_hull_example_legendre():
    hull = hull_argument_check(jacobi_polynomial(2, LEGENDRE), LEGENDRE)
    assert hull.residue_identity_ok
    assert [round(g.real, 12) for g in hull.gamma_roots.roots] == [0]
    assert list(hull.gamma_roots.multiplicities) == [1]
    assert hull.S_in_hull and hull.lucas_ok and hull.S_in_open_interval


def test_hull_root_outside():
    hull = hull_argument_check(parse_poly("(x-2)(x+1/2)"), LEGENDRE)
    assert not hull.S_in_open_interval
    with pytest.raises(ValueError):
        hull_argument_check(parse_poly("x^2 - 1"), LEGENDRE)


@pytest.mark.parametrize("model", STANDARD_MODELS, ids=lambda m: m.name)
def test_hull_chain_on_jacobi(model):
    for n in range(1, 9):
        hull = hull_argument_check(jacobi_polynomial(n, model.params), model.params)
        assert hull.residue_identity_ok and hull.residue_identity_error <= 1e-8
        assert hull.S_in_hull and hull.lucas_ok and hull.S_in_open_interval


def test_hull_identity_fails_off_spectrum():
    hull = hull_argument_check(parse_poly("x^2 - 1/2"), LEGENDRE)
    assert not hull.residue_identity_ok


# -- exact linear algebra and the bounded search ---------------------------------------------

def test_solve_exact_against_sympy():
    rng = random.Random(11)
    for _ in range(30):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        rows = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(m)]
        if rng.random() < 0.5 and m > 1:
            rows[-1] = [2 * v for v in rows[0]]
        rhs = [Fraction(rng.randint(-3, 3)) for _ in range(m)]
        rank, aug, x = solve_exact(rows, rhs)
        M = sp.Matrix(rows)
        assert rank == M.rank()
        assert aug == M.row_join(sp.Matrix(rhs)).rank()
        if x is not None:
            assert all(sum(r[j] * x[j] for j in range(n)) == b for r, b in zip(rows, rhs))


def test_falsification_delta_zero_recovers_first_jacobi_pair():
    for model in STANDARD_MODELS:
        a, b = model.params.a, model.params.b
        P, lam = falsification_search(RationalFunction.zero(), model.params, 5)
        assert P == ExactPoly([(b - a) / (a + b + 2), 1]) and lam == a + b + 2


@pytest.mark.parametrize("model", STANDARD_MODELS, ids=lambda m: m.name)
def test_falsification_one_over_x_minus_2(model):
    trace = falsification_trace(parse_rational_function("1/(x-2)"), model.params, 12)
    assert len(trace) == 12
    assert all(not a.consistent and a.augmented_rank > a.rank for a in trace)


def _sympy_polynomial_solutions(delta_expr, params, n):
    a, b = (sp.Rational(v.numerator, v.denominator) for v in (params.a, params.b))
    cs = sp.symbols(f"c0:{n}")
    lam = sp.Symbol("lam")
    u = xs**n + sum(c * xs**j for j, c in enumerate(cs))
    F = (b - a) + (a + b + 2) * xs + (1 - xs**2) * delta_expr
    expr = sp.together((1 - xs**2) * u.diff(xs, 2) - F * u.diff(xs) + lam * u)
    eqs = sp.Poly(sp.numer(expr), xs).all_coeffs()
    return sp.solve(eqs, list(cs) + [lam], dict=True)


@pytest.mark.parametrize("text", ["1/(x-2)", "2/(x-3)", "x/(x^2+4)"])
@pytest.mark.parametrize("model", STANDARD_MODELS[:2], ids=lambda m: m.name)
def test_falsification_matches_sympy_low_degree(text, model):
    delta = parse_rational_function(text)
    for n in range(1, 4):
        attempt = falsification_trace(delta, model.params, n, stop_at_first=False)[-1]
        sols = _sympy_polynomial_solutions(sym_rf(delta), model.params, n)
        assert attempt.consistent == bool(sols)
        if sols:
            assert sp.Rational(attempt.forced_lambda.numerator, attempt.forced_lambda.denominator) \
                == sols[0][sp.Symbol("lam")]


# -- the 2/(x-3) counterexample --------------------------------------------------------------

def test_counterexample_two_over_x_minus_3():
    found = falsification_search(parse_rational_function("2/(x-3)"), LEGENDRE, 12)
    assert found is not None
    P, lam = found
    assert P == parse_poly("x^2 - 6x + 1") and lam == 2
    # independent substitution with sympy
    u = xs**2 - 6 * xs + 1
    expr = (1 - xs**2) * u.diff(xs, 2) - (2 * xs + (1 - xs**2) * 2 / (xs - 3)) * u.diff(xs) + 2 * u
    assert sp.simplify(expr) == 0


@pytest.mark.parametrize("c", [Fraction(3), Fraction(-5, 2), Fraction(7, 4), Fraction(10)])
def test_counterexample_family(c):
    # P = x^2 - 2cx + 1 solves the S2 equation with delta = 2/(x - c), lam = 2, for every c
    P = ExactPoly([1, -2 * c, 1])
    delta = compute_delta(P, 2, LEGENDRE)
    assert delta == RationalFunction(ExactPoly([2]), ExactPoly([-c, 1]))
    assert riccati_residual(P, 2, delta, LEGENDRE).is_zero()
    rep = structural_analysis(P, 2, LEGENDRE)
    assert rep.verdict.startswith("StructureViolated")
    if abs(c) > 1:
        assert rep.poles_off_interval


def test_no_counterexample_for_other_models_two_over_x_minus_3():
    delta = parse_rational_function("2/(x-3)")
    for model in STANDARD_MODELS[1:]:
        assert falsification_search(delta, model.params, 12) is None


def test_search_rejects_bad_maxdeg():
    with pytest.raises(ValueError):
        falsification_trace(RationalFunction.zero(), LEGENDRE, 0)
