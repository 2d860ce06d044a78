"""
Root Finder Module

Locates the isolated roots of a one-variable mixed polynomial inside a
rectangle and classifies each one.

Pipeline:
1. Quadtree subdivision of the box. A cell with center C and circumradius r
   is excluded when |f(C)| > Σ_{(j,k)≠(0,0)} |T_jk(C)| r^(j+k), where T_jk
   are the coefficients of f(C + w) in (w, w̄).
2. Surviving cells at the target width are grouped into connected components.
3. Gauss-Newton on the real 2×2 system (f_R, f_I) = 0 from up to 16 seeds
   per component, all seeds iterated together.
4. Candidates are merged, checked against the box boundary and classified by
   comparing |∂f/∂u| and |∂f/∂ū|; sm comes from a winding number.

Components that yield no root are reported as unresolved regions rather
than dropped.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.config import Tolerances, get_tolerances
from src.errors import (
    BoundaryRoot,
    CertificationFailure,
    DimensionMismatch,
    InconclusiveResult,
    NewtonDivergence,
    NonIsolated,
    NotARoot,
    ZeroPolynomialError,
)
from src.polynomials.mixed_poly import MixedPoly, Z, ZBAR, cached_wirtinger
from src.topology.winding import check_root, multiplicity_with_sign

logger = logging.getLogger(__name__)

POSITIVE_SIMPLE = "positive-simple"
NEGATIVE_SIMPLE = "negative-simple"
MIXED_SINGULAR = "mixed-singular"

MAX_SEEDS_PER_COMPONENT = 16

NEWTON_DIVERGED = "newton divergence"
CONVERGED_OUTSIDE = "converged outside the box"
NEWTON_REASONS = (NEWTON_DIVERGED, CONVERGED_OUTSIDE)


@dataclass(frozen=True)
class RootRecord:
    """A root with its sm, its kind and the Wirtinger values a = ∂f/∂u, b = ∂f/∂ū."""

    location: complex
    sm: int
    kind: str
    wirtinger_a: complex
    wirtinger_b: complex
    residual: float = 0.0

    @property
    def is_simple(self) -> bool:
        return self.kind != MIXED_SINGULAR

    def to_dict(self) -> Dict[str, Any]:
        return {
            "location": [self.location.real, self.location.imag],
            "sm": self.sm,
            "kind": self.kind,
            "abs_a": abs(self.wirtinger_a),
            "abs_b": abs(self.wirtinger_b),
            "residual": self.residual,
        }


@dataclass(frozen=True)
class UnresolvedRegion:
    """Bounding rectangle of cells the finder could not turn into a certified root."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    reason: str
    cells: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "box": [self.xmin, self.xmax, self.ymin, self.ymax],
            "reason": self.reason,
            "cells": self.cells,
        }


@dataclass
class RootSearchResult:
    """Roots found in a box plus whatever could not be resolved."""

    roots: List[RootRecord]
    unresolved: List[UnresolvedRegion] = field(default_factory=list)
    cells_examined: int = 0
    final_width: float = 0.0

    def __iter__(self) -> Iterator[RootRecord]:
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def __getitem__(self, index: int) -> RootRecord:
        return self.roots[index]

    @property
    def total_sm(self) -> int:
        return sum(r.sm for r in self.roots)

    def require_complete(self) -> "RootSearchResult":
        """Return self, or raise when any part of the box was left unresolved."""
        if not self.unresolved:
            return self
        regions = [u.to_dict() for u in self.unresolved]
        if any(u.reason in NEWTON_REASONS for u in self.unresolved):
            raise NewtonDivergence("Newton left a cell group without a root in the box", {"unresolved": regions})
        raise InconclusiveResult("the search left unresolved regions", {"unresolved": regions})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "roots": [r.to_dict() for r in self.roots],
            "count": len(self.roots),
            "sum_sm": self.total_sm,
            "unresolved": [u.to_dict() for u in self.unresolved],
            "cells_examined": self.cells_examined,
            "final_width": self.final_width,
        }


# ============ CLASSIFICATION ============

def _kind(a: complex, b: complex, tol: Tolerances) -> str:
    gap = abs(a) - abs(b)
    if abs(gap) <= tol.wirtinger_balance * max(1.0, abs(a), abs(b)):
        return MIXED_SINGULAR
    return POSITIVE_SIMPLE if gap > 0 else NEGATIVE_SIMPLE


def classify(
    f: MixedPoly,
    alpha: complex,
    radius: Optional[float] = None,
    tol: Optional[Tolerances] = None,
) -> RootRecord:
    """
    Classify the root α by comparing |a| and |b|.

    |a| > |b|: positive simple (sm = +1); |a| < |b|: negative simple
    (sm = −1); otherwise mixed singular, with sm from the winding engine.
    """
    tol = tol or get_tolerances()
    if f.nvars != 1:
        raise DimensionMismatch("classify needs a one-variable polynomial")
    alpha = complex(alpha)
    residual = check_root(f, alpha, tol)
    a = cached_wirtinger(f, Z, 0)(alpha)
    b = cached_wirtinger(f, ZBAR, 0)(alpha)
    kind = _kind(a, b, tol)
    if kind == MIXED_SINGULAR:
        value = multiplicity_with_sign(f, alpha, radius, tol).value
    else:
        value = 1 if kind == POSITIVE_SIMPLE else -1
    return RootRecord(alpha, value, kind, a, b, residual)


# ============ QUADTREE ============

def _parse_box(box: Sequence[float]) -> Tuple[float, float, float, float]:
    if len(box) != 4:
        raise ValueError(f"box must be (xmin, xmax, ymin, ymax), got {box!r}")
    xmin, xmax, ymin, ymax = (float(v) for v in box)
    if not (xmin < xmax and ymin < ymax):
        raise ValueError(f"empty box {box!r}")
    return xmin, xmax, ymin, ymax


def _surviving(f: MixedPoly, centers: np.ndarray, radius: float) -> Tuple[np.ndarray, np.ndarray]:
    """Mask of cells that cannot be excluded, and |f| at their centers."""
    taylor = f.taylor_coefficients(centers)
    value = np.abs(taylor.get((0, 0), np.zeros(centers.shape, dtype=complex)))
    bound = np.zeros(centers.shape)
    for (j, k), coeff in taylor.items():
        if j + k:
            bound = bound + np.abs(coeff) * radius ** (j + k)
    return value <= bound, value


def _components(centers: np.ndarray, origin: complex, dx: float, dy: float) -> List[np.ndarray]:
    """8-connected components of grid cells, as index arrays."""
    ix = np.rint((centers.real - origin.real) / dx - 0.5).astype(np.int64)
    iy = np.rint((centers.imag - origin.imag) / dy - 0.5).astype(np.int64)
    lookup = {(int(x), int(y)): i for i, (x, y) in enumerate(zip(ix, iy))}
    seen = np.zeros(centers.size, dtype=bool)
    groups = []
    for start in range(centers.size):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        members = []
        while queue:
            i = queue.popleft()
            members.append(i)
            for ddx in (-1, 0, 1):
                for ddy in (-1, 0, 1):
                    j = lookup.get((int(ix[i]) + ddx, int(iy[i]) + ddy))
                    if j is not None and not seen[j]:
                        seen[j] = True
                        queue.append(j)
        groups.append(np.array(members, dtype=np.int64))
    return groups


def _region(centers: np.ndarray, hx: float, hy: float, reason: str) -> UnresolvedRegion:
    return UnresolvedRegion(
        float(centers.real.min() - hx),
        float(centers.real.max() + hx),
        float(centers.imag.min() - hy),
        float(centers.imag.max() + hy),
        reason,
        int(centers.size),
    )


# ============ NEWTON ============

def _newton(f: MixedPoly, seeds: np.ndarray, limit: float, tol: Tolerances) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gauss-Newton on (f_R, f_I) from all seeds at once.

    Iterates until the step is below 1e-14·max(1,|x|), a short step reaches
    newton_residual, or the cap; a seed counts as converged when the final
    residual is within root_residual.

    Returns:
        (points, converged mask)
    """
    da = cached_wirtinger(f, Z, 0)
    db = cached_wirtinger(f, ZBAR, 0)
    degrees = np.array([sum(exp) for exp in f.terms])
    weights = np.abs(np.array(list(f.terms.values()), dtype=complex))

    def scale(z: np.ndarray) -> np.ndarray:
        # vectorized magnitude_at
        base = np.maximum(1.0, np.abs(z))[:, None]
        return (weights[None, :] * base ** degrees[None, :]).sum(axis=1)

    x = seeds.astype(complex).copy()
    active = np.ones(x.size, dtype=bool)
    diverged = np.zeros(x.size, dtype=bool)

    for _ in range(tol.newton_max_iterations):
        if not active.any():
            break
        z = x[active]
        value = f.evaluate(z)
        a = da.evaluate(z)
        b = db.evaluate(z)
        dx = a + b
        dy = 1j * (a - b)
        jac = np.empty((z.size, 2, 2))
        jac[:, 0, 0], jac[:, 0, 1] = dx.real, dy.real
        jac[:, 1, 0], jac[:, 1, 1] = dx.imag, dy.imag
        rhs = np.stack([value.real, value.imag], axis=1)[:, :, None]
        step = (np.linalg.pinv(jac) @ rhs)[:, :, 0]
        delta = step[:, 0] + 1j * step[:, 1]
        z_new = z - delta

        idx = np.flatnonzero(active)
        bad = ~np.isfinite(z_new) | (np.abs(z_new) > limit)
        diverged[idx[bad]] = True
        z_new[bad] = z[bad]
        x[idx] = z_new
        size = np.maximum(1.0, np.abs(z_new))
        small = np.abs(delta) <= 1e-14 * size
        # a short step that lands within newton_residual is already polished
        polished = (np.abs(delta) <= 1e-8 * size) & (
            np.abs(f.evaluate(z_new)) <= tol.newton_residual * scale(z_new)
        )
        active[idx[small | bad | polished]] = False

    residual = np.abs(f.evaluate(x))
    converged = ~diverged & (residual <= tol.root_residual * scale(x))
    return x, converged


# ============ MAIN ENTRY ============

def find_roots(
    f: MixedPoly,
    box: Sequence[float],
    tol: Optional[Tolerances] = None,
) -> RootSearchResult:
    """
    All isolated roots of f in box = (xmin, xmax, ymin, ymax).

    Args:
        f: nonzero one-variable mixed polynomial
        box: search rectangle; its boundary must be root-free
        tol: tolerances

    Returns:
        RootSearchResult, roots sorted by (Re, Im)

    Raises:
        BoundaryRoot: a root lies on the boundary of the box
    """
    tol = tol or get_tolerances()
    if f.nvars != 1:
        raise DimensionMismatch("find_roots needs a one-variable polynomial")
    if f.is_zero():
        raise ZeroPolynomialError("every point is a root of the zero polynomial")
    xmin, xmax, ymin, ymax = _parse_box(box)
    extent = max(xmax - xmin, ymax - ymin)
    origin = complex(xmin, ymin)

    hx, hy = (xmax - xmin) / 2, (ymax - ymin) / 2
    centers = np.array([complex((xmin + xmax) / 2, (ymin + ymax) / 2)])
    examined = 0
    budget_hit = False
    while True:
        examined += centers.size
        keep, moduli = _surviving(f, centers, float(np.hypot(hx, hy)))
        centers, moduli = centers[keep], moduli[keep]
        if centers.size == 0 or 2 * max(hx, hy) <= tol.quadtree_min_width:
            break
        if examined + 4 * centers.size > tol.quadtree_max_cells:
            budget_hit = True
            break
        hx, hy = hx / 2, hy / 2
        offsets = np.array([complex(-hx, -hy), complex(hx, -hy), complex(-hx, hy), complex(hx, hy)])
        centers = (centers[:, None] + offsets[None, :]).ravel()

    logger.debug(f"🔍 quadtree: {centers.size} surviving cell(s) of width {2 * max(hx, hy):.2e}")
    unresolved: List[UnresolvedRegion] = []
    if centers.size == 0:
        return RootSearchResult([], [], examined, 2 * max(hx, hy))

    groups = _components(centers, origin, 2 * hx, 2 * hy)
    if budget_hit:
        logger.warning(f"⚠️  cell budget exhausted with {centers.size} live cells")
        for g in groups:
            unresolved.append(_region(centers[g], hx, hy, "cell budget exhausted"))
        return RootSearchResult([], unresolved, examined, 2 * max(hx, hy))

    seed_list, owner = [], []
    for gi, g in enumerate(groups):
        picks = g[np.argsort(moduli[g], kind="stable")[:MAX_SEEDS_PER_COMPONENT]]
        seed_list.append(centers[picks])
        owner += [gi] * picks.size
    seeds = np.concatenate(seed_list)
    owner_arr = np.array(owner)
    limit = 4 * (extent + abs(complex((xmin + xmax) / 2, (ymin + ymax) / 2)))
    points, converged = _newton(f, seeds, limit, tol)

    # Boundary and box membership
    margin = tol.merge_radius * max(1.0, extent)
    accepted: List[complex] = []
    resolved, escaped = set(), set()
    for z, ok, gi in zip(points, converged, owner_arr):
        if not ok:
            continue
        # positive outside the box, minus the distance to the nearest edge inside
        dist_out = max(xmin - z.real, z.real - xmax, ymin - z.imag, z.imag - ymax)
        if abs(dist_out) <= margin:
            raise BoundaryRoot(
                "a root lies on the boundary of the search box",
                {"root": [z.real, z.imag], "box": [xmin, xmax, ymin, ymax]},
            )
        if dist_out < 0:
            accepted.append(complex(z))
            resolved.add(int(gi))
        else:
            escaped.add(int(gi))

    for gi, g in enumerate(groups):
        if gi in resolved:
            continue
        reason = CONVERGED_OUTSIDE if gi in escaped else NEWTON_DIVERGED
        unresolved.append(_region(centers[g], hx, hy, reason))

    candidates = _merge(f, accepted, tol)
    roots: List[RootRecord] = []
    for i, z in enumerate(candidates):
        others = [abs(z - w) for j, w in enumerate(candidates) if j != i]
        radius = min([tol.sm_default_radius] + [0.4 * d for d in others])
        try:
            record = _record(f, z, radius, tol)
        except (NonIsolated, CertificationFailure, NotARoot) as e:
            logger.warning(f"⚠️  candidate {z:.6g} left unresolved: {e}")
            w = tol.quadtree_min_width
            unresolved.append(
                UnresolvedRegion(z.real - w, z.real + w, z.imag - w, z.imag + w, "non-isolated root", 0)
            )
            continue
        roots.append(record)

    roots.sort(key=lambda r: (r.location.real, r.location.imag))
    logger.info(f"✅ {len(roots)} root(s) in box, {len(unresolved)} unresolved region(s)")
    return RootSearchResult(roots, unresolved, examined, 2 * max(hx, hy))


def _merge(f: MixedPoly, points: List[complex], tol: Tolerances) -> List[complex]:
    """
    Merge candidates closer than merge_radius; mixed-singular candidates
    within one refinement width collapse to the one with the smallest residual.
    """
    points = sorted(points, key=lambda z: abs(f(z)))
    da = cached_wirtinger(f, Z, 0)
    db = cached_wirtinger(f, ZBAR, 0)
    kept: List[complex] = []
    kinds: List[str] = []
    for z in points:
        kind = _kind(da(z), db(z), tol)
        duplicate = False
        for w, k in zip(kept, kinds):
            distance = abs(z - w)
            if distance <= tol.merge_radius * max(1.0, abs(w)):
                duplicate = True
            elif kind == MIXED_SINGULAR and k == MIXED_SINGULAR and distance <= tol.quadtree_min_width:
                duplicate = True
            if duplicate:
                break
        if not duplicate:
            kept.append(z)
            kinds.append(kind)
    return kept


def _record(f: MixedPoly, z: complex, radius: float, tol: Tolerances) -> RootRecord:
    a = cached_wirtinger(f, Z, 0)(z)
    b = cached_wirtinger(f, ZBAR, 0)(z)
    kind = _kind(a, b, tol)
    residual = check_root(f, z, tol)
    try:
        value = multiplicity_with_sign(f, z, radius, tol).value
    except (NonIsolated, CertificationFailure):
        if kind == MIXED_SINGULAR:
            raise
        value = 1 if kind == POSITIVE_SIMPLE else -1
        logger.warning(f"⚠️  winding failed at simple root {z:.6g}; sm taken from |a| vs |b|")
    if kind != MIXED_SINGULAR and value != (1 if kind == POSITIVE_SIMPLE else -1):
        logger.warning(f"⚠️  winding sm {value} disagrees with {kind} at {z:.6g}")
    return RootRecord(z, value, kind, a, b, residual)


# ============ uⁿ + u + ū FAMILY ============

def expected_nonzero_root_count(n: int) -> int:
    """Closed-form count of nonzero roots of uⁿ + u + ū."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if n % 2 == 0:
        return n - 1
    return n + 1 if n % 4 == 3 else n - 1


def count_nonzero_roots(n: int, tol: Optional[Tolerances] = None) -> int:
    """Nonzero roots of uⁿ + u + ū found in the box [−3, 3]²."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    tol = tol or get_tolerances()
    f = MixedPoly({(n, 0): 1, (1, 0): 1, (0, 1): 1})
    result = find_roots(f, (-3.0, 3.0, -3.0, 3.0), tol).require_complete()
    return sum(1 for r in result.roots if abs(r.location) > tol.quadtree_min_width)


if __name__ == "__main__":
    from src.polynomials.parser import parse

    f = parse("u^2*conj(u)*(u - 2*conj(u)) + 1")
    result = find_roots(f, (-2, 2, -2, 2))
    for r in result:
        print(f"📊 {r.location:.10f}  sm={r.sm:+d}  {r.kind}")
    print(f"✅ {len(result)} roots, Σ sm = {result.total_sm}")
