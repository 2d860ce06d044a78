"""Tests for certified winding numbers, sm and SM."""

import numpy as np
import pytest

from src.errors import AdmissibilityViolation, CertificationFailure, DimensionMismatch, NonIsolated, NotARoot
from src.polynomials.homogeneous import rho
from src.polynomials.mixed_poly import MixedPoly
from src.polynomials.parser import parse
from src.topology.winding import (
    bifurcate,
    bounding_radius,
    multiplicity_with_sign,
    sm,
    total_sm,
    total_sm_result,
    trace,
    winding_number,
)
from tests.conftest import FOURTH_ROOT_THIRD


def _family(n):
    return MixedPoly({(n, 0): 1, (1, 0): 1, (0, 1): 1})


@pytest.mark.parametrize(
    "text, degree",
    [("u", 1), ("conj(u)", -1), ("u^3", 3), ("conj(u)^2*u", -1), ("u - 2", 0), ("u^2*conj(u) + 5", 0)],
)
def test_winding_of_basic_maps(text, degree):
    result = winding_number(parse(text), 0, 1.0)
    assert result.degree == degree
    assert result.certified
    assert result.samples_used >= 64
    assert result.max_step_phase < np.pi / 2


def test_winding_on_circles_around_the_family(quadratic_family):
    assert winding_number(quadratic_family, 0, 1.5).degree == 1
    assert winding_number(quadratic_family, 0, 3.0).degree == 2


def test_winding_refuses_a_circle_through_a_root(quadratic_family):
    with pytest.raises(CertificationFailure) as info:
        winding_number(quadratic_family, 0, 2.0)
    assert "min_modulus" in info.value.diagnostics


def test_winding_about_an_offset_center():
    f = parse("u - 2")
    assert winding_number(f, 2, 0.5).degree == 1
    assert winding_number(f, 2 + 1j, 0.5).degree == 0


def test_winding_argument_checks():
    with pytest.raises(ValueError):
        winding_number(parse("u"), 0, 0.0)
    with pytest.raises(DimensionMismatch):
        winding_number(parse("z1"), 0, 1.0)


@pytest.mark.parametrize("n", range(2, 10))
def test_sm_at_the_origin_follows_n_mod_4(n):
    expected = -1 if n % 4 == 3 else 1
    assert sm(_family(n), 0) == expected


def test_sm_certificate(quadratic_family):
    result = multiplicity_with_sign(quadratic_family, 0)
    assert result.value == 1
    assert result.radius <= 0.1
    assert result.winding.center == 0
    assert result.to_dict()["sm"] == 1


def test_sm_of_simple_roots(worked, quadratic_family):
    assert sm(quadratic_family, -2) == 1
    assert sm(worked, 1) == -1
    assert sm(worked, -1) == -1
    assert sm(worked, 1j * FOURTH_ROOT_THIRD) == 1


def test_sm_needs_a_root(quadratic_family):
    with pytest.raises(NotARoot):
        sm(quadratic_family, 1)


def test_sm_of_a_non_isolated_root():
    with pytest.raises(NonIsolated):
        sm(parse("u + conj(u)"), 0)


@pytest.mark.parametrize("n", range(2, 10))
def test_total_sm_of_the_family_is_n(n):
    assert total_sm(_family(n)) == n


def test_total_sm_of_the_worked_example_is_zero(worked):
    result = total_sm_result(worked)
    assert result.degree == 0
    assert result.radius >= bounding_radius(worked)


def test_total_sm_needs_admissibility_at_infinity():
    with pytest.raises(AdmissibilityViolation):
        total_sm(parse("u + conj(u) + 1"))


def test_bounding_radius_encloses_every_root(worked):
    assert bounding_radius(worked) >= 1.0
    assert bounding_radius(parse("u^3")) == 1.0


def test_bifurcation_conserves_sm():
    box = (-0.5, 0.5, -0.5, 0.5)
    report = bifurcate(lambda t: parse("(u^2 - t)*conj(u)", params={"t": t}), 0.01, box)
    assert report.reference_sm == 1
    assert report.sum_sm == 1
    assert report.conserved
    assert len(report.roots) == 3
    assert report.logs


def test_bifurcation_into_a_single_simple_root():
    box = (-0.5, 0.5, -0.5, 0.5)
    report = bifurcate(lambda s: parse("u*(u*conj(u) + s)", params={"s": s}), 0.01, box)
    assert report.reference_sm == 1
    assert [r.kind for r in report.roots] == ["positive-simple"]
    assert report.conserved


def test_trace_rows(quadratic_family):
    rows = trace(quadratic_family, 2.0, 8)
    assert len(rows) == 8
    theta, re, im = rows[0]
    assert theta == 0.0
    assert complex(re, im) == pytest.approx(quadratic_family(2.0))
    assert rows[4][0] == pytest.approx(np.pi)
    assert abs(complex(rows[4][1], rows[4][2])) < 1e-12
    with pytest.raises(ValueError):
        trace(quadratic_family, 2.0, 2)


def test_sm_starts_inside_the_nearest_other_root():
    # a root of sm -1 sits 0.007 from a root of sm 2
    f = parse("u^2*(conj(u) + 0.007i)")
    result = multiplicity_with_sign(f, 0)
    assert result.value == 2 == rho(f)
    assert result.radius < 0.4 * 0.007
    assert sm(f, 0.007j) == -1


def test_sm_matches_rho_next_to_close_roots():
    rng = np.random.default_rng(9)
    for _ in range(12):
        p, q = int(rng.integers(1, 4)), int(rng.integers(0, 3))
        c = float(rng.uniform(0.002, 0.04)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        holomorphic = bool(rng.integers(0, 2))
        factor = MixedPoly({(1, 0): 1, (0, 0): -c}) if holomorphic else MixedPoly({(0, 1): 1, (0, 0): -np.conj(c)})
        f = MixedPoly({(p, q): 1}) * factor
        assert sm(f, 0) == rho(f) == p - q, (p, q, c)
        assert sm(f, c) == (1 if holomorphic else -1), (p, q, c)
