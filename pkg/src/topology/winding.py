"""
Certified rotation numbers on circles

winding_number  phase count of f along a circle with a sampling certificate
sm              multiplicity with sign of an isolated root (shrinking circles)
total_sm        winding on a circle that encloses every root
bifurcate       conservation of sm under a one-parameter perturbation
trace           raw samples of f along a circle (for plotting)

A winding computation is certified when every consecutive phase step is
below π/2 and no sample is within the rounding floor of zero.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config import Tolerances, get_tolerances
from src.errors import (
    AdmissibilityViolation,
    BoundaryRoot,
    CertificationFailure,
    DimensionMismatch,
    NonIsolated,
    NotARoot,
)
from src.polynomials.homogeneous import admissible_at_infinity, factor_form
from src.polynomials.mixed_poly import MixedPoly

logger = logging.getLogger(__name__)

# An offending interval narrower than this (radians) means a zero on the circle
_MIN_ARC = 1e-13


@dataclass(frozen=True)
class WindingResult:
    """Rotation number of f/|f| on a circle plus its certificate."""

    degree: int
    min_modulus: float
    max_step_phase: float
    samples_used: int
    center: complex = 0j
    radius: float = 1.0

    @property
    def certified(self) -> bool:
        return self.max_step_phase < np.pi / 2 and self.min_modulus > 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "min_modulus": self.min_modulus,
            "max_step_phase": self.max_step_phase,
            "samples_used": self.samples_used,
            "center": [self.center.real, self.center.imag],
            "radius": self.radius,
            "certified": self.certified,
        }


def _require_one_variable(f: MixedPoly, what: str) -> None:
    if f.nvars != 1:
        raise DimensionMismatch(f"{what} needs a one-variable polynomial, got {f.nvars}")


def winding_number(
    f: MixedPoly,
    center: complex = 0j,
    radius: float = 1.0,
    tol: Optional[Tolerances] = None,
) -> WindingResult:
    """
    Rotation number of f/|f| along the counterclockwise circle |u − center| = radius.

    Sampling starts at 64 uniform points; every interval whose
    principal-branch phase step is π/2 or more is bisected until no such
    interval remains.

    Raises:
        CertificationFailure: a sample is within the rounding floor of zero,
            an offending interval shrinks below _MIN_ARC, or the sample cap
            is reached
    """
    _require_one_variable(f, "winding_number")
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    tol = tol or get_tolerances()
    center = complex(center)
    scale = max(f.magnitude_at(abs(center) + radius), np.finfo(float).tiny)
    floor = tol.winding_floor * scale

    def sample(angles: np.ndarray) -> np.ndarray:
        return f.evaluate(center + radius * np.exp(1j * angles))

    n = tol.winding_start_samples
    theta = 2 * np.pi * np.arange(n) / n
    values = sample(theta)
    while True:
        moduli = np.abs(values)
        min_modulus = float(moduli.min())
        if min_modulus <= floor:
            k = int(moduli.argmin())
            raise CertificationFailure(
                "f vanishes (within rounding) on the circle",
                {
                    "min_modulus": min_modulus,
                    "floor": floor,
                    "theta": float(theta[k]),
                    "samples": int(theta.size),
                    "radius": radius,
                },
            )
        steps = np.angle(np.roll(values, -1) / values)
        max_step = float(np.abs(steps).max())
        if max_step < np.pi / 2:
            degree = int(np.rint(steps.sum() / (2 * np.pi)))
            logger.debug(
                f"🔍 winding {degree} on |u-{center}|={radius:g} "
                f"({theta.size} samples, max step {max_step:.3f})"
            )
            return WindingResult(degree, min_modulus, max_step, int(theta.size), center, float(radius))

        bad = np.abs(steps) >= np.pi / 2
        widths = np.mod(np.roll(theta, -1) - theta, 2 * np.pi)
        narrowest = float(widths[bad].min())
        if narrowest < _MIN_ARC or theta.size + int(bad.sum()) > tol.winding_max_samples:
            raise CertificationFailure(
                "phase steps did not settle; probable root on or near the circle",
                {
                    "min_modulus": min_modulus,
                    "max_step_phase": max_step,
                    "samples": int(theta.size),
                    "narrowest_arc": narrowest,
                    "radius": radius,
                },
            )
        midpoints = theta[bad] + widths[bad] / 2
        theta = np.concatenate([theta, midpoints])
        values = np.concatenate([values, sample(midpoints)])
        order = np.argsort(theta, kind="stable")
        theta, values = theta[order], values[order]


@dataclass(frozen=True)
class SignedMultiplicity:
    """sm(f, α) together with the circle that certified it."""

    value: int
    root: complex
    radius: float
    halvings: int
    winding: WindingResult

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sm": self.value,
            "root": [self.root.real, self.root.imag],
            "radius": self.radius,
            "halvings": self.halvings,
            "winding": self.winding.to_dict(),
        }


def check_root(f: MixedPoly, alpha: complex, tol: Tolerances) -> float:
    """Residual |f(α)|; raises NotARoot above root_residual · magnitude."""
    residual = abs(f(alpha))
    scale = f.magnitude_at(alpha)
    if residual > tol.root_residual * scale:
        raise NotARoot(
            f"|f(α)| = {residual:.3e} is not a root within tolerance",
            {"residual": residual, "scale": scale, "alpha": [complex(alpha).real, complex(alpha).imag]},
        )
    return residual


def _neighbour_radius(f: MixedPoly, alpha: complex, tol: Tolerances) -> float:
    """
    Starting radius that keeps every other root of f off the first circles.

    Searches the square of half-width 1.25·r0 around α and returns
    min(r0, 0.4·d), d being the distance to the nearest other root or
    unresolved region. Candidates within one quadtree width of α are α itself.
    """
    # root_finder depends on this module
    from src.roots.root_finder import find_roots

    r0 = tol.sm_default_radius
    for stretch in (1.25, 1.6, 2.0):
        h = r0 * stretch
        box = (alpha.real - h, alpha.real + h, alpha.imag - h, alpha.imag + h)
        try:
            search = find_roots(f, box, tol)
        except BoundaryRoot:
            continue
        break
    else:
        logger.warning(f"⚠️  roots on every neighbourhood box of {alpha:.6g}; starting at r={r0:g}")
        return r0

    distances = [abs(record.location - alpha) for record in search.roots]
    for region in search.unresolved:
        dx = max(region.xmin - alpha.real, 0.0, alpha.real - region.xmax)
        dy = max(region.ymin - alpha.imag, 0.0, alpha.imag - region.ymax)
        distances.append(float(np.hypot(dx, dy)))
    near = [d for d in distances if d > tol.quadtree_min_width]
    radius = min([r0] + [0.4 * d for d in near])
    if radius < r0:
        logger.debug(f"🔍 nearest other root {min(near):.3e} from {alpha:.6g}; starting at r={radius:.3e}")
    return radius


def multiplicity_with_sign(
    f: MixedPoly,
    alpha: complex,
    radius: Optional[float] = None,
    tol: Optional[Tolerances] = None,
) -> SignedMultiplicity:
    """
    sm(f, α) with its certificate.

    The shifted polynomial f(w + α) is wound around 0 at radii r, r/2, ...
    until two consecutive certified radii agree.

    Args:
        f: one-variable polynomial
        alpha: isolated root of f
        radius: starting radius. When omitted the nearby roots are located
            first and r = min(0.1, 0.4·distance to the nearest one).
        tol: tolerances
    """
    _require_one_variable(f, "sm")
    tol = tol or get_tolerances()
    alpha = complex(alpha)
    check_root(f, alpha, tol)
    local = f.shift(alpha)
    r = float(radius) if radius else _neighbour_radius(f, alpha, tol)
    previous: Optional[WindingResult] = None
    failures = 0

    for halving in range(tol.sm_max_halvings + 1):
        try:
            current = winding_number(local, 0j, r, tol)
        except CertificationFailure:
            failures += 1
            previous = None
        else:
            if previous is not None and previous.degree == current.degree:
                result = WindingResult(
                    current.degree,
                    current.min_modulus,
                    current.max_step_phase,
                    current.samples_used,
                    alpha,
                    current.radius,
                )
                return SignedMultiplicity(current.degree, alpha, r, halving, result)
            previous = current
        r /= 2

    raise NonIsolated(
        f"no two consecutive radii agreed after {tol.sm_max_halvings} halvings",
        {"alpha": [alpha.real, alpha.imag], "final_radius": r * 2, "uncertified_radii": failures},
    )


def sm(
    f: MixedPoly,
    alpha: complex,
    radius: Optional[float] = None,
    tol: Optional[Tolerances] = None,
) -> int:
    """Multiplicity with sign of the isolated root α."""
    return multiplicity_with_sign(f, alpha, radius, tol).value


def bounding_radius(f: MixedPoly, tol: Optional[Tolerances] = None) -> float:
    """
    A radius R on which |f_d̄| > 2|f − f_d̄|, so every root lies inside |u| < R.

    R = max(1, 4K/m) with K the ℓ¹ norm of the lower graded parts and m a
    certified lower bound of |f_d̄| on the unit circle (sampled minimum minus
    a Lipschitz margin).
    """
    _require_one_variable(f, "bounding_radius")
    tol = tol or get_tolerances()
    d = f.total_degree()
    top = f.graded_part(d)
    lower = f - top
    k_norm = lower.coefficient_norm()
    if k_norm == 0:
        return 1.0

    # |d/dθ top(e^{iθ})| ≤ d · Σ|c|
    lipschitz = max(d, 1) * top.coefficient_norm()
    n = max(256, 64 * d)
    while n <= tol.winding_max_samples:
        theta = 2 * np.pi * np.arange(n) / n
        sampled = float(np.abs(top.evaluate(np.exp(1j * theta))).min())
        lower_bound = sampled - lipschitz * np.pi / n
        if lower_bound > 0:
            radius = max(1.0, 4.0 * k_norm / lower_bound)
            logger.debug(f"🔍 bounding radius {radius:.6g} (K={k_norm:.3g}, m={lower_bound:.3g})")
            return radius
        n *= 2
    raise AdmissibilityViolation(
        "the top form vanishes on the unit circle; no bounding radius exists",
        {"sampled_minimum": sampled},
    )


def total_sm(f: MixedPoly, tol: Optional[Tolerances] = None) -> int:
    """SM(f): the sum of sm over all roots, read off a circle enclosing them."""
    return total_sm_result(f, tol).degree


def total_sm_result(f: MixedPoly, tol: Optional[Tolerances] = None) -> WindingResult:
    _require_one_variable(f, "total_sm")
    tol = tol or get_tolerances()
    if not admissible_at_infinity(f, tol):
        fac = factor_form(f.graded_part(f.total_degree()), tol)
        moduli = [abs(g) for g, _ in fac.factors]
        raise AdmissibilityViolation(
            "f is not admissible at infinity; SM needs a root-free large circle",
            {"factor_moduli": moduli},
        )
    radius = bounding_radius(f, tol)
    return winding_number(f, 0j, radius, tol)


# ============ BIFURCATION ============

@dataclass
class BifurcationReport:
    """Roots of f_t in a box with their sm, compared against sm(f_0, 0)."""

    t: float
    roots: List[Any]
    sum_sm: int
    reference_sm: int
    unresolved: List[Any] = field(default_factory=list)
    logs: List[str] = field(default_factory=list)

    @property
    def conserved(self) -> bool:
        return not self.unresolved and self.sum_sm == self.reference_sm

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "roots": [r.to_dict() for r in self.roots],
            "sum_sm": self.sum_sm,
            "reference_sm": self.reference_sm,
            "conserved": self.conserved,
            "unresolved": [u.to_dict() for u in self.unresolved],
            "logs": list(self.logs),
        }


def bifurcate(
    family: Callable[[float], MixedPoly],
    t: float,
    box: Sequence[float],
    tol: Optional[Tolerances] = None,
) -> BifurcationReport:
    """
    Compare Σ sm(f_t, P_i) over the roots in box with sm(f_0, 0).

    Args:
        family: t ↦ f_t, with f_0 having an isolated root at 0
        t: parameter value
        box: (xmin, xmax, ymin, ymax); must stay root-free on its boundary
    """
    # root_finder depends on this module
    from src.roots.root_finder import find_roots

    tol = tol or get_tolerances()
    logs: List[str] = []

    def log(message: str) -> None:
        logs.append(message)
        logger.info(message)

    base = family(0.0)
    reference = sm(base, 0j, tol=tol)
    log(f"📊 reference sm(f_0, 0) = {reference}")

    perturbed = family(float(t))
    search = find_roots(perturbed, box, tol=tol)
    total = sum(record.sm for record in search.roots)
    log(f"🔍 t = {t:g}: {len(search.roots)} root(s), Σ sm = {total}")
    if search.unresolved:
        log(f"⚠️  {len(search.unresolved)} unresolved region(s)")
    if total == reference and not search.unresolved:
        log("✅ sm conserved")
    else:
        log("❌ sm not conserved in this box")
    return BifurcationReport(float(t), list(search.roots), total, reference, list(search.unresolved), logs)


# ============ TRACE ============

def trace(
    f: MixedPoly,
    radius: float,
    n: int,
    center: complex = 0j,
) -> List[Tuple[float, float, float]]:
    """(θ, Re f, Im f) on a uniform θ grid over [0, 2π); no certification."""
    _require_one_variable(f, "trace")
    if n < 3:
        raise ValueError(f"trace needs at least 3 samples, got {n}")
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    theta = 2 * np.pi * np.arange(n) / n
    values = f.evaluate(complex(center) + radius * np.exp(1j * theta))
    return [(float(a), float(v.real), float(v.imag)) for a, v in zip(theta, values)]


if __name__ == "__main__":
    from src.polynomials.parser import parse

    f = parse("u^2 + u + conj(u)")
    for r in (1.5, 3.0):
        print(f"📊 winding of {f} on |u|={r}: {winding_number(f, 0, r).degree}")
    print(f"📊 sm(f, 0) = {sm(f, 0)}, sm(f, -2) = {sm(f, -2)}, SM(f) = {total_sm(f)}")
    print("✅ winding self-check done")
