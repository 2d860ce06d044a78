"""Tests for homogeneous forms, beta/rho and mixed homogenization."""

import numpy as np
import pytest

from src.errors import (
    AdmissibilityViolation,
    DimensionMismatch,
    NotHomogeneous,
    RootFinderError,
    UsageError,
    ZeroPolynomialError,
)
from src.polynomials.homogeneous import (
    HomFactorization,
    Homogenization,
    admissible_at_infinity,
    admissible_at_origin,
    beta,
    degree_equality_case,
    dehomogenize,
    epsilon,
    expand_factorization,
    factor_form,
    homogenize,
    rho,
    simultaneous_roots,
)
from src.polynomials.mixed_poly import MixedPoly
from src.polynomials.parser import parse, parse_homogeneous


def _family(n):
    return MixedPoly({(n, 0): 1, (1, 0): 1, (0, 1): 1})


def test_simultaneous_roots_of_simple_polynomials():
    roots = np.sort_complex(simultaneous_roots(np.array([1, 0, -1])))
    assert np.allclose(roots, [-1, 1], atol=1e-12)
    cubic = np.sort_complex(simultaneous_roots(np.poly([2, -1j, 0.5 + 0.5j])))
    assert np.allclose(cubic, [-1j, 0.5 + 0.5j, 2], atol=1e-10)


def test_factor_form_of_the_worked_example_top_form(worked):
    fac = factor_form(worked.graded_part(4))
    assert (fac.p, fac.q, fac.degree, fac.s) == (2, 1, 4, 1)
    assert fac.c == 1
    (gamma, nu), = fac.factors
    assert gamma == pytest.approx(-2)
    assert nu == 1


def test_factor_form_groups_a_double_factor():
    u, ubar = MixedPoly.variable(0), MixedPoly.variable(0, conjugate=True)
    h = 3 * u * (u + 0.5 * ubar) ** 2
    fac = factor_form(h)
    assert (fac.p, fac.q) == (1, 0)
    (gamma, nu), = fac.factors
    assert nu == 2
    assert gamma == pytest.approx(0.5, abs=1e-9)
    assert fac.c == pytest.approx(3)


def test_factor_form_rejects_bad_input():
    with pytest.raises(NotHomogeneous):
        factor_form(parse("u^2 + u"))
    with pytest.raises(ZeroPolynomialError):
        factor_form(MixedPoly.zero())
    with pytest.raises(DimensionMismatch):
        factor_form(parse("z1"))


def test_random_forms_factor_and_expand_back():
    rng = np.random.default_rng(11)
    u, ubar = MixedPoly.variable(0), MixedPoly.variable(0, conjugate=True)
    for _ in range(500):
        count = int(rng.integers(1, 5))
        gammas = []
        while len(gammas) < count:
            g = complex(*rng.uniform(-2.5, 2.5, size=2))
            if abs(g) > 0.1 and all(abs(g - h) > 0.2 for h in gammas):
                gammas.append(g)
        p, q = (int(v) for v in rng.integers(0, 3, size=2))
        c = complex(*rng.normal(size=2))
        h = c * u ** p * ubar ** q
        for g in gammas:
            h = h * (u + g * ubar)
        fac = factor_form(h)
        assert (fac.p, fac.q) == (p, q)
        found = sorted((g for g, _ in fac.factors), key=lambda z: (z.real, z.imag))
        planted = sorted(gammas, key=lambda z: (z.real, z.imag))
        assert np.allclose(found, planted, atol=1e-6)
        rebuilt = expand_factorization(fac)
        for key, value in h.terms.items():
            assert rebuilt.terms.get(key, 0) == pytest.approx(value, abs=1e-8 * max(abs(v) for v in h.terms.values()))


def test_epsilon_band():
    assert epsilon(0.5) == 1
    assert epsilon(2j) == -1
    assert epsilon(1 + 1e-12) == 0
    with pytest.raises(UsageError):
        epsilon(0)


@pytest.mark.parametrize("n", range(2, 10))
def test_beta_of_the_family_is_n(n):
    assert beta(_family(n)) == n


def test_beta_of_the_worked_example_is_zero(worked):
    assert beta(worked) == 0


def test_rho_of_the_chart_equation(chart):
    assert rho(chart) == 1


def test_rho_at_a_simple_root_is_its_sign(worked):
    assert rho(worked, at=1) == -1
    assert rho(worked, at=1j * (1 / 3) ** 0.25) == 1


def test_rho_away_from_the_zero_set_is_zero():
    assert rho(parse("u + 1")) == 0


def test_unit_modulus_factor_is_not_admissible():
    f = parse("u + conj(u)")
    assert not admissible_at_infinity(f)
    assert not admissible_at_origin(f)
    with pytest.raises(AdmissibilityViolation) as info:
        beta(f)
    assert info.value.diagnostics["modulus"] == pytest.approx(1)
    with pytest.raises(AdmissibilityViolation):
        rho(f)


def test_zero_polynomial_has_no_invariants():
    with pytest.raises(ZeroPolynomialError):
        beta(MixedPoly.zero())
    with pytest.raises(ZeroPolynomialError):
        rho(MixedPoly.zero())


def test_homogenization_of_the_worked_example(worked, chart):
    hom = homogenize(worked)
    assert (hom.dplus, hom.dminus) == (3, 2)
    assert hom.radial_degree == 5
    assert hom.polar_degree == 1
    assert hom.at_infinity_point()
    assert dehomogenize(hom, 0) == worked
    assert dehomogenize(hom, 1) == chart
    assert str(hom) == "Z0^3*conj(Z0)^2 - 2*Z0*Z1^2*conj(Z1)^2 + conj(Z0)*Z1^3*conj(Z1)"


def test_homogenization_degrees_are_at_least_the_total_degree():
    f = parse("u^3 + conj(u)^2")
    hom = homogenize(f)
    assert hom.radial_degree == 5 > f.total_degree()
    report = degree_equality_case(f)
    assert not report["equality"]
    assert report["consistent"]
    assert degree_equality_case(parse("u^2*conj(u) + u"))["equality"]


def test_two_variable_homogenization():
    sphere = parse("2*z1 + z1*conj(z1) + z2*conj(z2)")
    hom = homogenize(sphere)
    assert hom.nhom == 3
    assert hom.polar_degree == 0
    assert hom.dehomogenize(0) == sphere
    chart2 = hom.dehomogenize(2)
    assert chart2.nvars == 2
    assert chart2((0, 0)) == 1
    with pytest.raises(DimensionMismatch):
        hom.at_infinity_point()


def test_forms_parsed_from_text():
    terms, count = parse_homogeneous("Z0*conj(Z1) + Z1*conj(Z0)")
    hom = Homogenization.from_terms(terms, count)
    assert (hom.dplus, hom.dminus) == (1, 1)
    assert not hom.is_generic_chart(0)
    assert dehomogenize(hom, 0) == parse("conj(u) + u")
    bad, n = parse_homogeneous("Z0 + Z1*conj(Z1)")
    with pytest.raises(NotHomogeneous):
        Homogenization.from_terms(bad, n)
    with pytest.raises(DimensionMismatch):
        hom.dehomogenize(2)


def test_homogenize_checks_the_degree_equality_rule(monkeypatch):
    f = parse("u^2*conj(u) + u")
    assert homogenize(f).radial_degree == f.total_degree() == 3
    # a factorization that claims a linear factor contradicts d_h = d̄
    wrong = HomFactorization(1 + 0j, 1, 0, ((0.5 + 0j, 2),), 3)
    monkeypatch.setattr("src.polynomials.homogeneous.factor_form", lambda h, tol=None: wrong)
    with pytest.raises(RootFinderError) as info:
        homogenize(f)
    assert info.value.diagnostics["s"] == 2
    assert not info.value.diagnostics["consistent"]


def test_beta_of_a_monomial_top_form_is_p_minus_q():
    rng = np.random.default_rng(17)
    for _ in range(30):
        p, q = (int(v) for v in rng.integers(0, 4, size=2))
        if p + q == 0:
            continue
        terms = {(p, q): complex(*rng.normal(size=2))}
        for _ in range(4):
            nu, mu = (int(v) for v in rng.integers(0, p + q, size=2))
            if nu + mu < p + q:
                terms[(nu, mu)] = complex(*rng.normal(size=2))
        assert beta(MixedPoly(terms)) == p - q


@pytest.mark.parametrize("nvars", [1, 2])
def test_dehomogenizing_the_first_chart_gives_f_back(nvars):
    rng = np.random.default_rng(70 + nvars)
    for _ in range(25):
        terms = {}
        for _ in range(int(rng.integers(1, 6))):
            terms[tuple(int(e) for e in rng.integers(0, 3, size=2 * nvars))] = complex(*rng.normal(size=2))
        f = MixedPoly(terms, nvars)
        if f.is_zero():
            continue
        hom = homogenize(f)
        assert hom.radial_degree >= f.total_degree()
        assert dehomogenize(hom, 0) == f
