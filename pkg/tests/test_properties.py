"""Seeded property checks for winding numbers, sm and SM."""

import numpy as np
import pytest

from src.errors import CertificationFailure
from src.polynomials.homogeneous import HomFactorization, beta, expand_factorization
from src.polynomials.mixed_poly import MixedPoly
from src.topology.winding import sm, total_sm, winding_number

SEEDS = range(25)


def _random_poly(rng, degree=3):
    terms = {}
    for _ in range(4):
        nu, mu = (int(v) for v in rng.integers(0, degree + 1, size=2))
        terms[(nu, mu)] = complex(*rng.normal(size=2))
    return MixedPoly(terms)


def _safe_winding(f, center, radius):
    """Winding or None when the circle passes too close to a root."""
    try:
        return winding_number(f, center, radius).degree
    except CertificationFailure:
        return None


@pytest.mark.parametrize("seed", SEEDS)
def test_winding_is_constant_between_root_free_radii(seed):
    rng = np.random.default_rng(seed)
    a = complex(*rng.uniform(-0.3, 0.3, size=2))
    b = complex(*rng.uniform(-0.3, 0.3, size=2))
    u = MixedPoly.variable(0)
    ubar = MixedPoly.variable(0, conjugate=True)
    # roots of (u - a)(ū - b̄)·(u + 3)
    f = (u - a) * (ubar - b.conjugate()) * (u + 3)
    assert winding_number(f, 0, 1.0).degree == winding_number(f, 0, 2.0).degree == 0
    assert winding_number(f, 0, 4.0).degree == 1


@pytest.mark.parametrize("seed", SEEDS)
def test_winding_is_additive_under_products(seed):
    rng = np.random.default_rng(100 + seed)
    f, g = _random_poly(rng), _random_poly(rng)
    radius = float(rng.uniform(0.5, 2.0))
    wf, wg, wfg = (_safe_winding(p, 0, radius) for p in (f, g, f * g))
    if None in (wf, wg, wfg):
        pytest.skip("circle too close to a root for this seed")
    assert wfg == wf + wg


@pytest.mark.parametrize("seed", SEEDS)
def test_conjugation_reverses_winding(seed):
    rng = np.random.default_rng(200 + seed)
    f = _random_poly(rng)
    radius = float(rng.uniform(0.5, 2.0))
    w = _safe_winding(f, 0, radius)
    if w is None:
        pytest.skip("circle too close to a root for this seed")
    assert winding_number(f.conjugate_swap(), 0, radius).degree == -w


@pytest.mark.parametrize("seed", SEEDS)
def test_holomorphic_multiplicity_oracle(seed):
    rng = np.random.default_rng(300 + seed)
    u = MixedPoly.variable(0)
    roots = [complex(-1, 0), complex(1, 0), complex(0, 1.5)]
    multiplicities = [int(m) for m in rng.integers(1, 5, size=3)]
    f = MixedPoly.constant(1)
    for r, m in zip(roots, multiplicities):
        f = f * (u - r) ** m
    for r, m in zip(roots, multiplicities):
        assert sm(f, r) == m


def _separated_roots(rng, count, spread=1.0, gap=0.3):
    roots = []
    while len(roots) < count:
        r = complex(*rng.uniform(-spread, spread, size=2))
        if all(abs(r - s) > gap for s in roots):
            roots.append(r)
    return roots


def _planted(rng, count):
    """Product of (u − r)^j (ū − r̄)^k over separated roots; returns (f, [(r, j − k)])."""
    u = MixedPoly.variable(0)
    ubar = MixedPoly.variable(0, conjugate=True)
    f = MixedPoly.constant(1)
    planted = []
    for r in _separated_roots(rng, count):
        j, k = (int(v) for v in rng.integers(0, 3, size=2))
        if j + k == 0:
            j = 1
        f = f * (u - r) ** j * (ubar - r.conjugate()) ** k
        planted.append((r, j - k))
    return f, planted


@pytest.mark.parametrize("seed", SEEDS)
def test_big_circle_is_the_sum_of_small_circles(seed):
    rng = np.random.default_rng(400 + seed)
    f, planted = _planted(rng, int(rng.integers(1, 4)))
    small = [winding_number(f, r, 0.1).degree for r, _ in planted]
    assert small == [signed for _, signed in planted]
    assert winding_number(f, 0, 2.0).degree == sum(small)


@pytest.mark.parametrize("seed", range(10))
def test_sm_is_translation_invariant(seed):
    rng = np.random.default_rng(500 + seed)
    f, planted = _planted(rng, 2)
    for r, signed in planted:
        assert sm(f, r) == sm(f.shift(r), 0) == signed


def _admissible_gamma(rng):
    modulus = rng.uniform(0.2, 0.6) if rng.integers(0, 2) else rng.uniform(1.6, 3.0)
    return complex(modulus * np.exp(1j * rng.uniform(0, 2 * np.pi)))


@pytest.mark.parametrize("seed", SEEDS)
def test_total_sm_equals_beta_for_admissible_polynomials(seed):
    rng = np.random.default_rng(600 + seed)
    p, q, s = (int(v) for v in rng.integers(0, 3, size=3))
    if p + q + s == 0:
        p = 1
    factors = tuple((_admissible_gamma(rng), 1) for _ in range(s))
    top = expand_factorization(HomFactorization(complex(*rng.normal(size=2)), p, q, factors, p + q + s))
    lower = {}
    for _ in range(3):
        nu, mu = (int(v) for v in rng.integers(0, p + q + s, size=2))
        if nu + mu < p + q + s:
            lower[(nu, mu)] = complex(*rng.normal(scale=0.5, size=2))
    f = top + MixedPoly(lower)
    assert total_sm(f) == beta(f)
