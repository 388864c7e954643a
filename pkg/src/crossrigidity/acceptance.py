"""Acceptance criteria, runnable from the CLI (``verify-all``) and from pytest.

Every randomized criterion draws from its own ``random.Random`` seeded from
the run seed, so reports are reproducible byte for byte. Elapsed times are
kept out of the JSON report; only the pass/fail of each runtime limit is in it.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .algebra import (
    ONE,
    ExactPoly,
    RationalFunction,
    logarithmic_derivative,
    lucas_check,
    parse_rational_function,
    partial_fractions,
    poly_gcd,
    squarefree_decomposition,
)
from .geometry import (
    STANDARD_MODELS,
    density_properties_check,
    first_eigenfunction_constant,
    models_up_to,
    ros_bound_check,
    sigma0,
    theta0_log_derivative,
)
from .jacobi import eigenvalue, jacobi_operator_apply, jacobi_polynomial
from .rigidity import (
    DELTA_VANISHES,
    compute_delta,
    falsification_trace,
    riccati_partial_fraction_form,
    riccati_residual,
    structural_analysis,
)
from .spectral import compare_radial_algebraic, solve_spectrum

FAULTS = ("wrong-lambda",)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    runtime_limit: float | None = None
    runtime_ok: bool = True
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "runtime_limit_s": self.runtime_limit, "runtime_ok": self.runtime_ok,
                "details": self.details, "failures": self.failures}

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({'; '.join(map(str, self.failures[:3]))})" if self.failures else ""
        return f"[{status}] criterion {self.number}: {self.name}{extra}"


def _random_fraction(rng: random.Random, span: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span * den, span * den), rng.randint(1, den))


def _random_monic(rng: random.Random, degree: int) -> ExactPoly:
    return ExactPoly([_random_fraction(rng) for _ in range(degree)] + [1])


# -- criteria ---------------------------------------------------------------------

def criterion_eigen_identity(seed: int = 0, fault: str | None = None) -> CriterionResult:
    res = CriterionResult(1, "exact eigen-identity L p_n + lambda_n p_n = 0", True, 5.0)
    checked = 0
    for model in STANDARD_MODELS:
        params = model.params
        for n in range(11):
            p = jacobi_polynomial(n, params)
            lam = eigenvalue(n, params)
            if fault == "wrong-lambda" and n == 3:
                lam += 1
            if not (jacobi_operator_apply(p, params) + p * lam).is_zero():
                res.failures.append(f"{model.name} n={n}: L p + lam p != 0")
            if p.degree != n or not p.is_monic():
                res.failures.append(f"{model.name} n={n}: not monic of degree n")
            checked += 1
    res.details = {"cases": checked}
    return res


def criterion_rigidity_positive(seed: int = 0, fault: str | None = None) -> CriterionResult:
    res = CriterionResult(2, "rigidity positive: eigenpairs give delta = 0 and DeltaVanishes", True)
    checked = 0
    for model in STANDARD_MODELS:
        params = model.params
        for n in range(1, 11):
            p = jacobi_polynomial(n, params)
            lam = eigenvalue(n, params)
            delta = compute_delta(p, lam, params)
            report = structural_analysis(p, lam, params)
            if not delta.is_zero():
                res.failures.append(f"{model.name} n={n}: delta = {delta}")
            if report.verdict != DELTA_VANISHES:
                res.failures.append(f"{model.name} n={n}: verdict {report.verdict}")
            bad = [k for k, v in report.checks().items() if v is not True]
            if bad:
                res.failures.append(f"{model.name} n={n}: checks not affirmed {bad}")
            checked += 1
    res.details = {"cases": checked}
    return res


def criterion_rigidity_negative(seed: int = 0, fault: str | None = None) -> CriterionResult:
    res = CriterionResult(3, "rigidity negative: random non-eigen pairs are StructureViolated", True, 30.0)
    rng = random.Random(f"negative-{seed}")
    verdicts: dict[str, int] = {}
    cases = 0
    while cases < 50:
        model = STANDARD_MODELS[rng.randrange(4)]
        params = model.params
        P = _random_monic(rng, rng.randint(1, 6))
        lam = _random_fraction(rng, span=40)
        delta = compute_delta(P, lam, params)
        if delta.is_zero():
            continue
        cases += 1
        report = structural_analysis(P, lam, params)
        verdicts[report.failing_check or report.verdict] = verdicts.get(report.failing_check or report.verdict, 0) + 1
        if not report.verdict.startswith("StructureViolated") or report.failing_check is None:
            res.failures.append(f"P={P}, lam={lam}, {model.name}: verdict {report.verdict}")
        if not delta.num.degree < delta.den.degree:
            res.failures.append(f"P={P}, lam={lam}: degree gap fails for delta={delta}")
        if not riccati_residual(P, lam, delta, params).is_zero():
            res.failures.append(f"P={P}, lam={lam}: Riccati residual nonzero")
    res.details = {"cases": cases, "first_failing_checks": dict(sorted(verdicts.items()))}
    return res


def criterion_falsification(seed: int = 0, fault: str | None = None) -> CriterionResult:
    res = CriterionResult(4, "falsification: no polynomial solutions for 1/(x-2), 2/(x-3) up to degree 12", True, 30.0)
    outcomes = []
    for text in ("1/(x-2)", "2/(x-3)"):
        delta = parse_rational_function(text)
        for model in STANDARD_MODELS:
            trace = falsification_trace(delta, model.params, 12)
            found = trace[-1].solution if trace[-1].consistent else None
            entry = {"delta": text, "model": model.name, "max_degree_tried": trace[-1].degree,
                     "found": None}
            if found is not None:
                entry["found"] = {"degree": found.degree, "poly": str(found),
                                  "lambda": str(trace[-1].forced_lambda)}
                res.failures.append(
                    f"delta={text}, {model.name}: P = {found}, lambda = {trace[-1].forced_lambda} solves it")
            outcomes.append(entry)
    for model in STANDARD_MODELS:
        a, b = model.params.a, model.params.b
        trace = falsification_trace(RationalFunction.zero(), model.params, 12)
        want = ExactPoly(((b - a) / (a + b + 2), 1))
        got = trace[-1]
        ok = got.degree == 1 and got.solution == want and got.forced_lambda == a + b + 2
        outcomes.append({"delta": "0", "model": model.name,
                         "found": None if got.solution is None else
                         {"degree": got.degree, "poly": str(got.solution), "lambda": str(got.forced_lambda)}})
        if not ok:
            res.failures.append(f"delta=0, {model.name}: expected ({want}, {a + b + 2}) at degree 1")
    res.details = {"outcomes": outcomes}
    return res


def criterion_spectral(seed: int = 0, fault: str | None = None) -> CriterionResult:
    res = CriterionResult(5, "spectral agreement: collocation and radial integration", True)
    worst_eig, worst_radial = 0.0, 0.0
    for model in STANDARD_MODELS:
        params = model.params
        result = solve_spectrum(params, None, order=32, count=6)
        for n, lam in enumerate(result.eigenvalues):
            exact = float(eigenvalue(n, params))
            err = abs(lam - exact) / max(1.0, abs(exact))
            worst_eig = max(worst_eig, err)
            if err > 1e-8:
                res.failures.append(f"{model.name} n={n}: eigenvalue rel. error {err:.2e}")
        for n in range(5):
            d = compare_radial_algebraic(n, model)
            worst_radial = max(worst_radial, d)
            if d > 1e-5:
                res.failures.append(f"{model.name} n={n}: radial sup error {d:.2e}")
    res.details = {"max_eigenvalue_rel_error_le_1e-8": worst_eig <= 1e-8,
                   "max_radial_sup_error_le_1e-5": worst_radial <= 1e-5}
    return res


def criterion_geometry(seed: int = 0, fault: str | None = None) -> CriterionResult:
    res = CriterionResult(6, "geometry: density properties and sigma0 = theta0'/theta0", True)
    props = {}
    r = np.linspace(0.01, math.pi - 0.01, 100)
    for model in STANDARD_MODELS:
        p = density_properties_check(model)
        props[model.name] = p.to_json()
        if not p.all_ok or p.zero_order_even != model.d - 1 or p.zero_order_odd != model.k - 1:
            res.failures.append(f"{model.name}: density properties {p.to_json()}")
        err = float(np.max(np.abs(sigma0(r, model) - theta0_log_derivative(r, model))))
        if err > 1e-10:
            res.failures.append(f"{model.name}: sigma0 vs log-derivative {err:.2e}")
    res.details = {"properties": props}
    return res


def criterion_ros(seed: int = 0, fault: str | None = None) -> CriterionResult:
    res = CriterionResult(7, "Ros equality and first eigenfunction cos r + C", True)
    rows = []
    for model in models_up_to(16):
        rec = ros_bound_check(model)
        rows.append(rec.to_json())
        if not rec.equality:
            res.failures.append(f"{model.name}: lambda1={rec.lambda1}, bound={rec.bound}")
        if rec.lambda1 != Fraction(model.d + model.k, 2):
            res.failures.append(f"{model.name}: lambda1 {rec.lambda1} != (d+k)/2")
        a, b = model.params.a, model.params.b
        try:
            c = first_eigenfunction_constant(model)
        except ArithmeticError as exc:
            res.failures.append(f"{model.name}: {exc}")
            continue
        if c != (b - a) / (a + b + 2):
            res.failures.append(f"{model.name}: C = {c}")
    res.details = {"models": len(rows), "rows": rows}
    return res


def criterion_algebra(seed: int = 0, fault: str | None = None) -> CriterionResult:
    res = CriterionResult(8, "algebra substrate: exact reconstruction, Riccati identity, Lucas", True, 20.0)
    rng = random.Random(f"algebra-{seed}")
    for it in range(200):
        a = _random_monic(rng, rng.randint(0, 7)) * _random_fraction(rng)
        b = _random_monic(rng, rng.randint(0, 5)) * (1 + abs(_random_fraction(rng)))
        q, r = a.divrem(b)
        if q * b + r != a or r.degree >= b.degree:
            res.failures.append(f"iter {it}: divrem")
        common = _random_monic(rng, rng.randint(0, 2))
        g = poly_gcd(a * common, b * common)
        if not (g.divides(a * common) and g.divides(b * common) and common.divides(g)):
            res.failures.append(f"iter {it}: gcd")
        # squarefree reconstruction on a polynomial with forced repeated factors
        base = _random_monic(rng, rng.randint(1, 3))
        p = base ** rng.randint(1, 3) * _random_monic(rng, rng.randint(0, 3)) * _random_fraction(rng, 3)
        if not p.is_zero():
            prod = ExactPoly.constant(p.lc)
            for f, k in squarefree_decomposition(p):
                prod = prod * f**k
            if prod != p:
                res.failures.append(f"iter {it}: squarefree")
        # partial fractions with rational poles: exact re-summation
        poles = [_random_fraction(rng, 3) for _ in range(rng.randint(1, 4))]
        den = ExactPoly.from_roots(poles)
        num = _random_monic(rng, rng.randint(0, den.degree + 1)) * _random_fraction(rng)
        f = RationalFunction(num, den)
        exp = partial_fractions(f)
        if not exp.exact or exp.to_rational_function() != f:
            res.failures.append(f"iter {it}: partial fractions")
        # Riccati identity with distinct rational roots and multiplicities
        roots = list({_random_fraction(rng, 3) for _ in range(rng.randint(1, 4))})
        P = ONE
        for beta in roots:
            P = P * ExactPoly((-beta, 1)) ** rng.randint(1, 3)
        v = logarithmic_derivative(P)
        if v.derivative() + v * v != riccati_partial_fraction_form(P):
            res.failures.append(f"iter {it}: Riccati identity")
    lucas_fail = 0
    for it in range(100):
        p = _random_monic(rng, rng.randint(2, 8))
        if not lucas_check(p):
            lucas_fail += 1
            res.failures.append(f"lucas {it}: {p}")
    res.details = {"iterations": 200, "lucas_polynomials": 100, "lucas_failures": lucas_fail}
    return res


CRITERIA: tuple[Callable[..., CriterionResult], ...] = (
    criterion_eigen_identity,
    criterion_rigidity_positive,
    criterion_rigidity_negative,
    criterion_falsification,
    criterion_spectral,
    criterion_geometry,
    criterion_ros,
    criterion_algebra,
)


def run_criterion(fn: Callable[..., CriterionResult], seed: int = 0,
                  fault: str | None = None) -> CriterionResult:
    start = time.perf_counter()
    res = fn(seed=seed, fault=fault)
    res.elapsed = time.perf_counter() - start
    if res.runtime_limit is not None and res.elapsed > res.runtime_limit:
        res.runtime_ok = False
        res.failures.append(f"runtime {res.elapsed:.1f}s exceeds {res.runtime_limit:.0f}s")
    res.passed = not res.failures
    return res


def run_all(seed: int = 0, fault: str | None = None) -> list[CriterionResult]:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    return [run_criterion(fn, seed, fault) for fn in CRITERIA]
