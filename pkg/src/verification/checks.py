"""
Invariant checks

Each check recomputes a known closed-form result with the certified engines
and returns a dict with at least a 'passed' key. The registry CHECKS maps
action names (as used in verification plans) to the callable and the
reason shown in the plan.
"""

import logging
from typing import Any, Callable, Dict, Tuple

import numpy as np

from src.polynomials.homogeneous import beta, dehomogenize, homogenize, rho
from src.polynomials.mixed_poly import MixedPoly
from src.polynomials.parser import format_poly, parse
from src.roots.root_finder import expected_nonzero_root_count, find_roots
from src.topology.intersection import (
    degree_s3,
    global_sum_check,
    itop_transverse,
    projective_sum_check,
)
from src.topology.winding import bifurcate, sm, total_sm, trace, winding_number

logger = logging.getLogger(__name__)

WORKED_EXAMPLE = "u^2*conj(u)*(u - 2*conj(u)) + 1"
CHART_EXAMPLE = "conj(u) - 2*u + u^3*conj(u)^2"
SPHERE = "2*z1 + z1*conj(z1) + z2*conj(z2)"


def family_n(n: int) -> MixedPoly:
    """uⁿ + u + ū."""
    return MixedPoly({(n, 0): 1, (1, 0): 1, (0, 1): 1})


def expected_sm_at_origin(n: int) -> int:
    return -1 if n % 4 == 3 else 1


def check_assertion_table(ns: Tuple[int, ...] = tuple(range(2, 10))) -> Dict[str, Any]:
    """sm(uⁿ + u + ū, 0): 1 for n even or n ≡ 1 mod 4, −1 for n ≡ 3 mod 4."""
    rows = [{"n": n, "sm": sm(family_n(n), 0), "expected": expected_sm_at_origin(n)} for n in ns]
    return {"passed": all(r["sm"] == r["expected"] for r in rows), "rows": rows}


def check_sm_family(ns: Tuple[int, ...] = tuple(range(2, 10))) -> Dict[str, Any]:
    """SM(uⁿ + u + ū) = n = β."""
    rows = []
    for n in ns:
        f = family_n(n)
        rows.append({"n": n, "SM": total_sm(f), "beta": beta(f)})
    return {"passed": all(r["SM"] == r["n"] == r["beta"] for r in rows), "rows": rows}


def check_worked_example_roots() -> Dict[str, Any]:
    """Four roots ±(1/3)^(1/4) i (sm +1) and ±1 (sm −1); SM = β = 0."""
    f = parse(WORKED_EXAMPLE)
    result = find_roots(f, (-2, 2, -2, 2))
    a = (1 / 3) ** 0.25
    planted = {1j * a: 1, -1j * a: 1, 1 + 0j: -1, -1 + 0j: -1}
    matched = 0
    for root in result:
        for z, value in planted.items():
            if abs(root.location - z) <= 1e-8 and root.sm == value:
                matched += 1
    passed = len(result) == 4 and matched == 4 and result.total_sm == 0 == beta(f) == total_sm(f)
    return {"passed": passed, "roots": [r.to_dict() for r in result], "sum_sm": result.total_sm}


def check_chart_example() -> Dict[str, Any]:
    """ρ of the chart-U1 equation is 1 = sm at 0; degrees 5 and 1; chart U1 reproduces it."""
    f = parse(WORKED_EXAMPLE)
    chart = parse(CHART_EXAMPLE)
    hom = homogenize(f)
    dehom = dehomogenize(hom, 1)
    passed = (
        rho(chart) == 1 == sm(chart, 0)
        and hom.radial_degree == 5
        and hom.polar_degree == 1
        and dehom == chart
    )
    return {
        "passed": passed,
        "rho": rho(chart),
        "radial_degree": hom.radial_degree,
        "polar_degree": hom.polar_degree,
        "chart_U1": format_poly(dehom),
    }


def check_sphere_example() -> Dict[str, Any]:
    """The plane z1 = 0 meets the sphere with intersection number 0; the sum is 1·0."""
    f = parse("z1")
    g = parse(SPHERE)
    degree = degree_s3(f, g, (0, 0))
    report = global_sum_check(f, g, [(0, 0)])
    return {
        "passed": degree.degree == 0 and report.passed,
        "degree": degree.to_dict(),
        "global": report.to_dict(),
    }


def check_conservation(t: float = 0.01) -> Dict[str, Any]:
    """Σ sm of the perturbed roots equals sm of the unperturbed root."""
    box = (-0.5, 0.5, -0.5, 0.5)
    first = bifurcate(lambda s: parse("(u^2 - t)*conj(u)", params={"t": s}), t, box)
    second = bifurcate(lambda s: parse("u*(u*conj(u) + s)", params={"s": s}), t, box)
    return {
        "passed": first.conserved and second.conserved and first.sum_sm == 1 == second.sum_sm,
        "reports": [first.to_dict(), second.to_dict()],
    }


def random_linear_pair(rng: np.random.Generator) -> Tuple[MixedPoly, MixedPoly, Tuple[complex, complex]]:
    """A transverse pair a·z1 + b·z̄1 + c·z2 + d·z̄2 + e and its common zero."""
    while True:
        coeffs = rng.normal(size=(2, 5)) + 1j * rng.normal(size=(2, 5))
        polys = [
            MixedPoly({(1, 0, 0, 0): c[0], (0, 1, 0, 0): c[1], (0, 0, 1, 0): c[2],
                       (0, 0, 0, 1): c[3], (0, 0, 0, 0): c[4]}, 2)
            for c in coeffs
        ]
        rows = []
        rhs = []
        for c in coeffs:
            # columns: x1, y1, x2, y2
            dx1, dy1 = c[0] + c[1], 1j * (c[0] - c[1])
            dx2, dy2 = c[2] + c[3], 1j * (c[2] - c[3])
            rows += [[dx1.real, dy1.real, dx2.real, dy2.real], [dx1.imag, dy1.imag, dx2.imag, dy2.imag]]
            rhs += [-c[4].real, -c[4].imag]
        matrix = np.array(rows)
        if abs(np.linalg.det(matrix)) < 0.1:
            continue
        x = np.linalg.solve(matrix, np.array(rhs))
        return polys[0], polys[1], (complex(x[0], x[1]), complex(x[2], x[3]))


def check_transverse_vs_degree(count: int = 20, seed: int = 7) -> Dict[str, Any]:
    """Determinant sign and S³ degree agree on random transverse linear pairs."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(count):
        f, g, P = random_linear_pair(rng)
        sign = itop_transverse(f, g, P)
        degree = degree_s3(f, g, P).degree
        rows.append({"sign": sign, "degree": degree})
    agree = sum(1 for r in rows if r["sign"] == r["degree"])
    return {"passed": agree == count, "agree": agree, "count": count, "rows": rows}


def check_circle_windings() -> Dict[str, Any]:
    """Windings 1 and 2 at radii 3/2 and 3; the radius-2 trace touches 0."""
    f = parse("u^2 + u + conj(u)")
    small = winding_number(f, 0, 1.5).degree
    large = winding_number(f, 0, 3.0).degree
    rows = trace(f, 2.0, 720)
    closest = min(np.hypot(re, im) for _, re, im in rows)
    return {
        "passed": small == 1 and large == 2 and closest < 1e-9,
        "winding_1_5": small,
        "winding_3": large,
        "closest_to_zero_r2": closest,
    }


def check_family_root_counts(ns: Tuple[int, ...] = (3, 4, 5, 6)) -> Dict[str, Any]:
    """Nonzero roots of uⁿ + u + ū: n − 1 (n even), n + 1 (n ≡ 3), n − 1 (n ≡ 1 mod 4)."""
    rows = []
    for n in ns:
        result = find_roots(family_n(n), (-3, 3, -3, 3))
        nonzero = [r for r in result if abs(r.location) > 1e-4]
        rows.append({
            "n": n,
            "count": len(nonzero),
            "expected": expected_nonzero_root_count(n),
            "all_positive_simple": all(r.kind == "positive-simple" for r in nonzero),
            "unresolved": len(result.unresolved),
        })
    passed = all(
        r["count"] == r["expected"] and r["all_positive_simple"] and not r["unresolved"] for r in rows
    )
    return {"passed": passed, "rows": rows}


def check_projective_sum() -> Dict[str, Any]:
    """SM in U0 plus sm of (0:1) in U1 equals the polar degree."""
    report = projective_sum_check(parse(WORKED_EXAMPLE))
    return dict(report)


CHECKS: Dict[str, Tuple[Callable[..., Dict[str, Any]], str]] = {
    "assertion_table": (check_assertion_table, "sm at the origin for the uⁿ+u+ū family follows n mod 4"),
    "sm_family": (check_sm_family, "total sm of uⁿ+u+ū is n and agrees with beta"),
    "worked_example_roots": (check_worked_example_roots, "four roots with signed multiplicities summing to 0"),
    "chart_example": (check_chart_example, "homogenization degrees and the chart-U1 equation"),
    "sphere_example": (check_sphere_example, "plane meets the sphere with intersection number 0"),
    "conservation": (check_conservation, "sm is conserved when a singular root bifurcates"),
    "transverse_vs_degree": (check_transverse_vs_degree, "determinant sign equals the S³ mapping degree"),
    "circle_windings": (check_circle_windings, "windings of u²+u+ū on three circles"),
    "family_root_counts": (check_family_root_counts, "closed-form nonzero root counts of uⁿ+u+ū"),
    "projective_sum": (check_projective_sum, "affine SM plus the point at infinity gives the polar degree"),
}
