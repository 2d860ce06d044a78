"""
Local intersection numbers of mixed plane curves

C = V(f), C' = V(g) in C², f and g two-variable mixed polynomials.

is_mixed_nonsingular  rank of the real 2×4 Jacobian of (f_R, f_I)
itop_transverse       sign of det(grad f_R, grad f_I, grad g_R, grad g_I)
degree_s3             Brouwer degree of (f_R, f_I, g_R, g_I)/‖·‖ on a small 3-sphere
itop_line             reduction to sm when C' is the line z2 = 0
global_sum_check      Σ I_top over a finite intersection list against d·d'
projective_sum_check  affine SM plus the contribution of (0:1) against the polar degree
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from src.config import Tolerances, get_tolerances
from src.errors import (
    DimensionMismatch,
    MixcurveError,
    NoConvergence,
    NotARoot,
    SphereHitsZero,
    TransversalityFailure,
    UsageError,
)
from src.polynomials.homogeneous import homogenize
from src.polynomials.mixed_poly import MixedPoly, Z, ZBAR, cached_wirtinger, real_jacobian
from src.roots.root_finder import find_roots
from src.topology.winding import sm, total_sm

logger = logging.getLogger(__name__)

# Gauss-Legendre nodes per panel and panel counts (t1, t2, t3) at depth 0
_NODES_PER_PANEL = 4
_BASE_PANELS = (8, 8, 16)
_EPSILON_SHRINKS = 12
_VOLUME_S3 = 2 * np.pi ** 2

Point = Tuple[complex, complex]


def _point(P: Sequence[complex]) -> Point:
    values = tuple(complex(v) for v in P)
    if len(values) != 2:
        raise DimensionMismatch(f"a point in C² needs 2 coordinates, got {len(values)}")
    return values


def _require_two_variables(*polys: MixedPoly) -> None:
    for p in polys:
        if p.nvars != 2:
            raise DimensionMismatch(f"expected a two-variable polynomial, got {p.nvars} variable(s)")


def _check_common_root(P: Point, tol: Tolerances, *polys: MixedPoly) -> None:
    for p in polys:
        residual = abs(p(P))
        scale = p.magnitude_at(P)
        if residual > tol.root_residual * scale:
            raise NotARoot(
                f"point is not on the curve (|f(P)| = {residual:.3e})",
                {"residual": residual, "scale": scale},
            )


# ============ NONSINGULARITY + GRADIENT FRAME ============

def is_mixed_nonsingular(f: MixedPoly, P: Sequence[complex], tol: Optional[Tolerances] = None) -> bool:
    """True iff the real Jacobian of (f_R, f_I) at P has rank two."""
    tol = tol or get_tolerances()
    _require_two_variables(f)
    P = _point(P)
    _check_common_root(P, tol, f)
    singular_values = np.linalg.svd(real_jacobian(f, P), compute_uv=False)
    return bool(singular_values[1] > tol.rank_threshold * max(1.0, f.magnitude_at(P)))


@dataclass(frozen=True)
class GradientFrame:
    """grad f_R, grad f_I, grad g_R, grad g_I at P in (x1, y1, x2, y2)."""

    grad_fR: np.ndarray
    grad_fI: np.ndarray
    grad_gR: np.ndarray
    grad_gI: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.vstack([self.grad_fR, self.grad_fI, self.grad_gR, self.grad_gI])

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def hadamard_bound(self) -> float:
        return float(np.prod(np.linalg.norm(self.matrix, axis=1)))


def gradient_frame(f: MixedPoly, g: MixedPoly, P: Sequence[complex]) -> GradientFrame:
    _require_two_variables(f, g)
    P = _point(P)
    jf = real_jacobian(f, P)
    jg = real_jacobian(g, P)
    return GradientFrame(jf[0], jf[1], jg[0], jg[1])


def itop_transverse(
    f: MixedPoly, g: MixedPoly, P: Sequence[complex], tol: Optional[Tolerances] = None
) -> int:
    """
    Local intersection number at a transverse intersection: the sign of the
    gradient-frame determinant.

    Raises:
        TransversalityFailure: a curve is singular at P or |det| is below
            determinant_threshold times the product of the gradient norms
    """
    tol = tol or get_tolerances()
    _require_two_variables(f, g)
    P = _point(P)
    _check_common_root(P, tol, f, g)
    frame = gradient_frame(f, g, P)
    det = frame.determinant
    bound = frame.hadamard_bound
    if bound == 0 or abs(det) <= tol.determinant_threshold * bound:
        raise TransversalityFailure(
            "gradient frame is degenerate; use degree_s3",
            {"determinant": det, "hadamard_bound": bound},
        )
    return 1 if det > 0 else -1


# ============ S³ MAPPING DEGREE ============

@dataclass(frozen=True)
class DegreeResult:
    """Brouwer degree of φ/‖φ‖ on the sphere of radius epsilon around P."""

    degree: int
    raw_integral: float
    residual: float
    refinement_depth: int
    epsilon: float
    min_norm: float = 0.0
    history: Tuple[float, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "raw_integral": self.raw_integral,
            "residual": self.residual,
            "refinement_depth": self.refinement_depth,
            "epsilon": self.epsilon,
            "min_norm": self.min_norm,
            "history": list(self.history),
        }


def _panel_rule(lower: float, upper: float, panels: int) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on [lower, upper]."""
    x, w = leggauss(_NODES_PER_PANEL)
    edges = np.linspace(lower, upper, panels + 1)
    half = (edges[1:] - edges[:-1]) / 2
    mid = (edges[1:] + edges[:-1]) / 2
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


class _SphereMap:
    """φ = (f_R, f_I, g_R, g_I) on the sphere P + ε·S³ with its directional derivatives."""

    def __init__(self, f: MixedPoly, g: MixedPoly, P: Point, eps: float):
        self.f, self.g, self.P, self.eps = f, g, P, eps
        self.partials = [
            (cached_wirtinger(p, Z, 0), cached_wirtinger(p, ZBAR, 0),
             cached_wirtinger(p, Z, 1), cached_wirtinger(p, ZBAR, 1))
            for p in (f, g)
        ]

    def integrand(self, t1: float, t2: np.ndarray, t3: np.ndarray) -> Tuple[np.ndarray, float]:
        """det(φ, Dφ·x_t1, Dφ·x_t2, Dφ·x_t3)·ε³/‖φ‖⁴ on a (t2, t3) grid; also min ‖φ‖."""
        s1, c1 = np.sin(t1), np.cos(t1)
        s2, c2 = np.sin(t2), np.cos(t2)
        s3, c3 = np.sin(t3), np.cos(t3)
        ones = np.ones_like(s2 * s3)
        x = np.stack([c1 * ones, s1 * c2 * ones, s1 * s2 * c3, s1 * s2 * s3])
        tangents = [
            np.stack([-s1 * ones, c1 * c2 * ones, c1 * s2 * c3, c1 * s2 * s3]),
            np.stack([0 * ones, -s1 * s2 * ones, s1 * c2 * c3, s1 * c2 * s3]),
            np.stack([0 * ones, 0 * ones, -s1 * s2 * s3, s1 * s2 * c3]),
        ]
        z1 = self.P[0] + self.eps * (x[0] + 1j * x[1])
        z2 = self.P[1] + self.eps * (x[2] + 1j * x[3])
        points = (z1, z2)

        columns = [[], [], [], []]
        values = []
        for poly, (a1, b1, a2, b2) in zip((self.f, self.g), self.partials):
            value = poly.evaluate(points)
            values += [value.real, value.imag]
            A1, B1, A2, B2 = (d.evaluate(points) for d in (a1, b1, a2, b2))
            for k, v in enumerate(tangents):
                w1 = v[0] + 1j * v[1]
                w2 = v[2] + 1j * v[3]
                dv = A1 * w1 + B1 * np.conj(w1) + A2 * w2 + B2 * np.conj(w2)
                columns[k + 1] += [dv.real, dv.imag]
        columns[0] = values
        # matrix[..., row, col]: rows are the four real components, cols (φ, ∂1, ∂2, ∂3)
        matrix = np.stack([np.stack(col, axis=-1) for col in columns], axis=-1)
        det = np.linalg.det(matrix)
        norm_sq = sum(v * v for v in values)
        return det * self.eps ** 3 / norm_sq ** 2, float(np.sqrt(norm_sq.min()))


def _integrate(sphere: _SphereMap, depth: int, floor: float) -> Tuple[float, float]:
    n1, n2, n3 = (p * 2 ** depth for p in _BASE_PANELS)
    t1, w1 = _panel_rule(0.0, np.pi, n1)
    t2, w2 = _panel_rule(0.0, np.pi, n2)
    t3, w3 = _panel_rule(0.0, 2 * np.pi, n3)
    T2, T3 = np.meshgrid(t2, t3, indexing="ij")
    W23 = np.outer(w2, w3)
    total = 0.0
    min_norm = np.inf
    # one t1 node per chunk keeps the summation order fixed
    for node, weight in zip(t1, w1):
        values, chunk_min = sphere.integrand(node, T2, T3)
        min_norm = min(min_norm, chunk_min)
        if min_norm <= floor:
            raise SphereHitsZero(
                "the map vanishes on the sphere (or nearly)",
                {"min_norm": min_norm, "floor": floor, "epsilon": sphere.eps, "depth": depth},
            )
        total += weight * float(np.sum(values * W23))
    return total / _VOLUME_S3, min_norm


def _degree_at_radius(
    f: MixedPoly, g: MixedPoly, P: Point, eps: float, tol: Tolerances
) -> DegreeResult:
    sphere = _SphereMap(f, g, P, eps)
    reach = (abs(P[0]) + eps, abs(P[1]) + eps)
    floor = tol.sphere_margin * max(f.magnitude_at(reach), g.magnitude_at(reach), 1e-300)
    history: List[float] = []
    min_norm = np.inf
    for depth in range(tol.quadrature_max_depth + 1):
        raw, depth_min = _integrate(sphere, depth, floor)
        min_norm = min(min_norm, depth_min)
        history.append(raw)
        nearest = int(np.rint(raw))
        residual = abs(raw - nearest)
        logger.debug(f"🔍 S³ quadrature depth {depth}: {raw:.6f} (ε={eps:g})")
        if depth > 0 and nearest == int(np.rint(history[-2])) and residual < tol.quadrature_residual_gate:
            return DegreeResult(nearest, raw, residual, depth, eps, min_norm, tuple(history))
    raise NoConvergence(
        "quadrature did not settle on an integer",
        {"history": history, "epsilon": eps, "max_depth": tol.quadrature_max_depth},
    )


def degree_s3(
    f: MixedPoly,
    g: MixedPoly,
    P: Sequence[complex],
    epsilon: Optional[float] = None,
    neighbours: Optional[Sequence[Sequence[complex]]] = None,
    tol: Optional[Tolerances] = None,
) -> DegreeResult:
    """
    Topological local intersection number as the degree of φ/‖φ‖ on S³_ε(P).

    Args:
        f, g: two-variable mixed polynomials with an isolated common zero P
        P: the intersection point
        epsilon: sphere radius; when omitted it starts at half the distance to
            the nearest neighbour (0.5 without neighbours) and halves whenever
            the map comes too close to zero on the sphere
        neighbours: other known intersection points
    """
    tol = tol or get_tolerances()
    _require_two_variables(f, g)
    P = _point(P)
    _check_common_root(P, tol, f, g)
    if epsilon is not None:
        if not epsilon > 0:
            raise UsageError(f"epsilon must be positive, got {epsilon}")
        return _degree_at_radius(f, g, P, float(epsilon), tol)

    eps = 0.5
    distances = [
        float(np.hypot(abs(P[0] - q[0]), abs(P[1] - q[1])))
        for q in (_point(q) for q in neighbours or ())
    ]
    distances = [d for d in distances if d > 0]
    if distances:
        eps = 0.5 * min(distances)
    last_error: Optional[SphereHitsZero] = None
    for _ in range(_EPSILON_SHRINKS):
        try:
            return _degree_at_radius(f, g, P, eps, tol)
        except SphereHitsZero as e:
            logger.info(f"⚠️  sphere of radius {eps:g} meets the zero set; shrinking")
            last_error = e
            eps /= 2
    raise last_error


# ============ LINE REDUCTION ============

_LINE_Z2 = MixedPoly({(0, 0, 1, 0): 1}, 2)


def itop_line(fhat: MixedPoly, alpha: complex, tol: Optional[Tolerances] = None) -> int:
    """I_top(V(fhat), {z2 = 0}; (α, 0)) = sm(fhat|_{z2=0}, α)."""
    _require_two_variables(fhat)
    return sm(fhat.restrict(1, 0), alpha, tol=tol)


def line_intersections(
    fhat: MixedPoly, box: Sequence[float], tol: Optional[Tolerances] = None
) -> List[Point]:
    """Intersection points of V(fhat) with z2 = 0 whose z1 lies in box."""
    _require_two_variables(fhat)
    result = find_roots(fhat.restrict(1, 0), box, tol)
    if result.unresolved:
        raise MixcurveError(
            "the line slice has unresolved regions; the intersection list would be incomplete",
            {"unresolved": [u.to_dict() for u in result.unresolved]},
        )
    return [(r.location, 0j) for r in result.roots]


# ============ GLOBAL CHECKS ============

@dataclass
class GlobalCheckReport:
    """Per-point intersection numbers and their sum against d·d'."""

    contributions: List[Dict[str, Any]]
    total: int
    expected: int
    passed: bool
    assumptions: List[str] = field(default_factory=list)
    logs: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "contributions": self.contributions,
            "total": self.total,
            "expected": self.expected,
            "passed": self.passed,
            "assumptions": list(self.assumptions),
            "logs": list(self.logs),
        }


def global_sum_check(
    f: MixedPoly,
    g: MixedPoly,
    points: Optional[Sequence[Sequence[complex]]] = None,
    dpolar_f: Optional[int] = None,
    dpolar_g: Optional[int] = None,
    box: Optional[Sequence[float]] = None,
    tol: Optional[Tolerances] = None,
) -> GlobalCheckReport:
    """
    Σ_P I_top(C, C'; P) compared with the product of the polar degrees.

    Each point uses the cheapest applicable path: the line reduction when g
    is z2, the determinant sign when transverse, else the S³ degree.
    Failures at a point are recorded and the check continues.

    Args:
        points: complete intersection list; derived automatically when g is
            the line z2 and box is given
        dpolar_f, dpolar_g: polar degrees (default: from the homogenizations)
    """
    tol = tol or get_tolerances()
    _require_two_variables(f, g)
    logs: List[str] = []

    def log(message: str) -> None:
        logs.append(message)
        logger.info(message)

    is_line = g == _LINE_Z2
    if points is None:
        if not (is_line and box is not None):
            raise UsageError("intersection points are required unless g is the line z2 and a box is given")
        points = line_intersections(f, box, tol)
        log(f"🔍 derived {len(points)} intersection point(s) on z2 = 0")
    points = [_point(p) for p in points]

    if dpolar_f is None:
        dpolar_f = homogenize(f).polar_degree
    if dpolar_g is None:
        dpolar_g = homogenize(g).polar_degree
    expected = dpolar_f * dpolar_g

    contributions = []
    total = 0
    failures = 0
    for i, P in enumerate(points):
        entry: Dict[str, Any] = {"point": [[c.real, c.imag] for c in P]}
        neighbours = [q for j, q in enumerate(points) if j != i]
        try:
            if is_line:
                entry["value"] = itop_line(f, P[0], tol)
                entry["method"] = "line"
            else:
                try:
                    entry["value"] = itop_transverse(f, g, P, tol)
                    entry["method"] = "transverse"
                except TransversalityFailure:
                    result = degree_s3(f, g, P, neighbours=neighbours, tol=tol)
                    entry["value"] = result.degree
                    entry["method"] = "degree_s3"
                    entry["quadrature"] = result.to_dict()
            total += entry["value"]
            log(f"📊 point {i}: I_top = {entry['value']} via {entry['method']}")
        except MixcurveError as e:
            failures += 1
            entry["error"] = e.to_dict()
            log(f"❌ point {i}: {e.message}")
        contributions.append(entry)

    passed = failures == 0 and total == expected
    log(f"{'✅' if passed else '❌'} Σ I_top = {total}, d·d' = {expected}")
    return GlobalCheckReport(
        contributions,
        total,
        expected,
        passed,
        assumptions=["no intersection on the line at infinity (not checked)"],
        logs=logs,
    )


def projective_sum_check(
    f: MixedPoly, box: Optional[Sequence[float]] = None, tol: Optional[Tolerances] = None
) -> Dict[str, Any]:
    """
    For one-variable f: SM over the affine chart plus sm of (0:1) in chart U1
    equals the polar degree of the homogenization.

    The affine part uses total_sm, or find_roots over box when given.
    """
    tol = tol or get_tolerances()
    if f.nvars != 1:
        raise DimensionMismatch("projective_sum_check needs a one-variable polynomial")
    hom = homogenize(f)
    if box is not None:
        affine = find_roots(f, box, tol)
        if affine.unresolved:
            raise MixcurveError(
                "unresolved regions in the affine root search",
                {"unresolved": [u.to_dict() for u in affine.unresolved]},
            )
        affine_sum = affine.total_sm
    else:
        affine_sum = total_sm(f, tol)

    infinity = 0
    on_curve = hom.at_infinity_point()
    chart = hom.dehomogenize(1)
    if on_curve:
        infinity = sm(chart, 0j, tol=tol)
    total = affine_sum + infinity
    return {
        "affine_sm": affine_sum,
        "infinity_on_curve": on_curve,
        "infinity_sm": infinity,
        "chart_U1": str(chart),
        "total": total,
        "polar_degree": hom.polar_degree,
        "passed": total == hom.polar_degree,
    }


if __name__ == "__main__":
    from src.polynomials.parser import parse

    z1, z2 = parse("z1"), parse("z2")
    print(f"📊 itop_transverse(z1, z2) = {itop_transverse(z1, z2, (0, 0))}")
    print(f"📊 degree_s3(z1^2, z2) = {degree_s3(parse('z1^2'), z2, (0, 0)).degree}")
    print(f"📊 projective check: {projective_sum_check(parse('u^2*conj(u)*(u-2*conj(u))+1'))}")
    print("✅ intersection self-check done")
