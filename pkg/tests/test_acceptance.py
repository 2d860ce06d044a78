"""End-to-end invariant results, one test per acceptance criterion."""

import time

import pytest

from src.polynomials.parser import parse
from src.topology.intersection import degree_s3
from src.topology.winding import sm
from src.verification.checks import (
    check_assertion_table,
    check_chart_example,
    check_circle_windings,
    check_conservation,
    check_family_root_counts,
    check_sm_family,
    check_transverse_vs_degree,
    check_worked_example_roots,
)


def test_assertion_table_for_n_2_to_9():
    start = time.perf_counter()
    result = check_assertion_table()
    assert [row["sm"] for row in result["rows"]] == [1, -1, 1, 1, 1, -1, 1, 1]
    assert time.perf_counter() - start < 10


def test_total_sm_equals_n_and_beta():
    start = time.perf_counter()
    result = check_sm_family()
    assert result["passed"], result["rows"]
    assert [row["SM"] for row in result["rows"]] == list(range(2, 10))
    assert time.perf_counter() - start < 10


def test_worked_example_roots():
    result = check_worked_example_roots()
    assert result["passed"], result["roots"]
    assert sorted(r["sm"] for r in result["roots"]) == [-1, -1, 1, 1]


def test_chart_example():
    result = check_chart_example()
    assert result["passed"]
    assert result["chart_U1"] == "u^3*conj(u)^2 - 2*u + conj(u)"


@pytest.mark.slow
@pytest.mark.parametrize(
    "f, g, degree",
    [("z1", "2*z1 + z1*conj(z1) + z2*conj(z2)", 0), ("z1", "z2", 1), ("z1^2", "z2", 2)],
)
def test_sphere_degrees(f, g, degree):
    result = degree_s3(parse(f), parse(g), (0, 0))
    assert result.degree == degree
    assert result.residual < 0.25
    assert result.refinement_depth <= 4


def test_conservation_under_bifurcation():
    result = check_conservation(0.01)
    assert result["passed"]
    assert sm(parse("u^2*conj(u)"), 0) == 1
    assert [r["sum_sm"] for r in result["reports"]] == [1, 1]


@pytest.mark.slow
def test_determinant_sign_matches_sphere_degree():
    result = check_transverse_vs_degree(count=20, seed=7)
    assert result["agree"] == 20


def test_circle_windings_and_tangent_trace():
    result = check_circle_windings()
    assert (result["winding_1_5"], result["winding_3"]) == (1, 2)
    assert result["closest_to_zero_r2"] < 1e-9


@pytest.mark.slow
def test_family_nonzero_root_counts():
    result = check_family_root_counts((3, 4, 5, 6))
    assert [row["count"] for row in result["rows"]] == [4, 3, 4, 5]
    assert all(row["all_positive_simple"] for row in result["rows"])
