import csv
import io
import json
import math

import numpy as np
import pytest

from crossrigidity.algebra import RationalFunction, parse_rational_function
from crossrigidity.geometry import STANDARD_MODELS, CrossModel
from crossrigidity.jacobi import JacobiParams, eigenvalue
from crossrigidity.spectral import (
    SpectralError,
    cheb_diff_matrix,
    compare_radial_algebraic,
    frobenius_coefficients,
    integrate_radial,
    solve_spectrum,
)

LEGENDRE = JacobiParams(0, 0)
PERTURBED = parse_rational_function("x/(10x^2 - 40)")


def rel_errors(result):
    return [abs(lam - float(eigenvalue(n, result.params))) / max(1.0, float(eigenvalue(n, result.params)))
            for n, lam in enumerate(result.eigenvalues)]


def test_diff_matrix_exact_on_polynomials():
    D, x = cheb_diff_matrix(12)
    for k in range(13):
        assert np.max(np.abs(D @ x**k - k * x ** max(k - 1, 0) * (k > 0))) < 1e-11


@pytest.mark.parametrize("params, expected", [
    (LEGENDRE, [0, 2, 6, 12, 20]),
    (JacobiParams(0, 1), [0, 3, 8, 15, 24]),
])
def test_spectrum_examples(params, expected):
    res = solve_spectrum(params, order=32, count=5)
    assert np.allclose(res.eigenvalues, expected, rtol=1e-8, atol=1e-8)
    assert list(res.eigenvalues) == sorted(res.eigenvalues)
    assert max(res.residuals) < 1e-10


def test_explicit_zero_delta_is_absent_delta():
    a = solve_spectrum(LEGENDRE, None, order=32, count=5)
    b = solve_spectrum(LEGENDRE, RationalFunction.zero(), order=32, count=5)
    assert a.eigenvalues == b.eigenvalues


@pytest.mark.parametrize("model", STANDARD_MODELS, ids=lambda m: m.name)
def test_spectrum_all_models(model):
    res = solve_spectrum(model.params, order=32, count=6)
    assert max(rel_errors(res)) <= 1e-8


def test_unperturbed_accuracy_across_orders():
    # with delta = 0 the collocation is exact on polynomials; only roundoff remains
    for order in (16, 32, 48):
        assert max(rel_errors(solve_spectrum(LEGENDRE, order=order, count=5))) <= 1e-12


def test_perturbed_convergence_is_monotone():
    ref = np.array(solve_spectrum(LEGENDRE, PERTURBED, order=64, count=4).eigenvalues)
    errs = [np.max(np.abs(np.array(solve_spectrum(LEGENDRE, PERTURBED, order=o, count=4).eigenvalues) - ref))
            for o in (8, 12, 16)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-6


def test_perturbation_destroys_polynomial_eigenvectors():
    pert = solve_spectrum(LEGENDRE, PERTURBED, order=40, count=5)
    plain = solve_spectrum(LEGENDRE, None, order=40, count=5)
    # the constant mode u = 1, lam = 0 survives any delta
    assert abs(pert.eigenvalues[0]) < 1e-10
    for i in range(1, 5):
        assert pert.tail_ratio(i) > 1e-8
        assert plain.tail_ratio(i) < 1e-11


def test_spectrum_preconditions():
    with pytest.raises(ValueError):
        solve_spectrum(LEGENDRE, order=6, count=5)
    with pytest.raises(SpectralError):
        solve_spectrum(LEGENDRE, parse_rational_function("1/(x-1/2)"))
    with pytest.raises(SpectralError):
        solve_spectrum(LEGENDRE, parse_rational_function("1/(x^2-1)"))


def test_spectrum_serialization():
    res = solve_spectrum(LEGENDRE, order=16, count=3)
    rows = list(csv.reader(io.StringIO(res.to_csv())))
    assert rows[0] == ["index", "eigenvalue", "residual"]
    assert len(rows) == 4
    blob = json.loads(json.dumps(res.to_json()))
    assert blob["discretization_order"] == 16 and len(blob["eigenvalues"]) == 3


# -- radial integration ----------------------------------------------------------------

def test_frobenius_s2_matches_cos():
    # lam = 2 on S2: bounded solution is cos r = 1 - r^2/2 + r^4/24
    u = frobenius_coefficients(CrossModel.sphere(2), 2.0, 4)
    assert u == pytest.approx([1, 0, -0.5, 0, 1 / 24], abs=1e-14)


def test_radial_examples():
    r = np.linspace(0.1, 3.0, 200)
    s2 = integrate_radial(CrossModel.sphere(2), 2.0, 3.0)
    assert np.max(np.abs(s2(r) - np.cos(r))) <= 1e-6
    for model in STANDARD_MODELS:
        const = integrate_radial(model, 0.0, 3.0)
        assert np.max(np.abs(const(r) - 1)) < 1e-12
    cp2 = integrate_radial(CrossModel.parse("CP2"), 3.0, 3.0)
    assert np.max(np.abs(cp2(r) - (np.cos(r) + 1 / 3) / (4 / 3))) <= 1e-6


def test_radial_preconditions():
    with pytest.raises(ValueError):
        integrate_radial(CrossModel.sphere(2), 2.0, math.pi)
    with pytest.raises(ValueError):
        integrate_radial(CrossModel.sphere(2), float("nan"), 1.0)
    with pytest.raises(ValueError):
        compare_radial_algebraic(-1, CrossModel.sphere(2))


@pytest.mark.parametrize("model", STANDARD_MODELS, ids=lambda m: m.name)
def test_compare_radial_algebraic(model):
    assert compare_radial_algebraic(0, model) < 1e-12
    for n in range(5):
        assert compare_radial_algebraic(n, model) <= 1e-5
    if model.name == "S2":
        assert compare_radial_algebraic(1, model) <= 1e-6
