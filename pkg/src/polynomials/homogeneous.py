"""
Homogeneous forms of mixed polynomials

Graded parts, factorization of a one-variable mixed homogeneous form
    h = c · u^p ū^q · Π (u + γ_j ū)^ν_j,
the closed-form invariants β (top form) and ρ (bottom form), admissibility,
and mixed (de)homogenization.

The factorization reduces to a univariate companion polynomial: with
cofactor Σ a_μ u^(m−μ) ū^μ, set P(w) = Σ a_μ w^μ; each root w_j gives
γ_j = −1/w_j and c = a_0.
"""

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from src.config import Tolerances, get_tolerances
from src.errors import (
    AdmissibilityViolation,
    DimensionMismatch,
    NotHomogeneous,
    RootFinderError,
    UsageError,
    ZeroPolynomialError,
)
from src.polynomials.mixed_poly import MixedPoly

logger = logging.getLogger(__name__)


# ============ GRADED PARTS ============

def graded_part(f: MixedPoly, degree: int) -> MixedPoly:
    """f_ℓ: the terms of f with ν+μ = ℓ (possibly the zero polynomial)."""
    return f.graded_part(degree)


def max_degree(f: MixedPoly) -> int:
    """d̄, the maximal degree of f."""
    return f.total_degree()


def min_degree(f: MixedPoly) -> int:
    """d̲, the minimal degree of f at the origin."""
    return f.min_total_degree()


# ============ SIMULTANEOUS ROOT FINDING ============

def simultaneous_roots(coeffs: np.ndarray, tol: Optional[Tolerances] = None) -> np.ndarray:
    """
    All roots of a univariate polynomial by Aberth iteration.

    Args:
        coeffs: coefficients, highest degree first, leading one nonzero
        tol: tolerances (iteration cap and residual target)

    Returns:
        complex array of the deg roots
    """
    tol = tol or get_tolerances()
    coeffs = np.asarray(coeffs, dtype=complex)
    n = coeffs.size - 1
    if n <= 0:
        return np.empty(0, dtype=complex)
    if n == 1:
        return np.array([-coeffs[1] / coeffs[0]])

    deriv = np.polyder(coeffs)
    magnitudes = np.abs(coeffs)
    radius = 1.0 + np.max(magnitudes[1:] / magnitudes[0])
    # Offset angle so real-symmetric polynomials do not start on a symmetry line
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    x = radius * np.exp(1j * angles)
    done = np.zeros(n, dtype=bool)

    for iteration in range(tol.aberth_max_iterations):
        p = np.polyval(coeffs, x)
        scale = np.polyval(magnitudes, np.abs(x))
        done |= np.abs(p) <= tol.aberth_residual * scale
        if done.all():
            logger.debug(f"🔍 Aberth converged after {iteration} iterations (degree {n})")
            return x
        dp = np.polyval(deriv, x)
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            inverse = 1.0 / diff
            np.fill_diagonal(inverse, 0.0)
            ratio = p / dp
            delta = ratio / (1.0 - ratio * inverse.sum(axis=1))
        bad = ~np.isfinite(delta)
        delta[bad] = 1e-3 * (1.0 + np.abs(x[bad]))
        delta[done] = 0.0
        x = x - delta
        done |= np.abs(delta) <= 1e-14 * np.maximum(1.0, np.abs(x))

    raise RootFinderError(
        f"Aberth iteration did not converge in {tol.aberth_max_iterations} iterations",
        {
            "degree": n,
            "max_residual": float(np.max(np.abs(np.polyval(coeffs, x)))),
            "unconverged": int((~done).sum()),
        },
    )


def _cluster(roots: np.ndarray, coeffs: np.ndarray, tol: Tolerances) -> List[Tuple[complex, int]]:
    """Group nearby roots into (center, multiplicity) and polish each center."""
    n = roots.size
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            limit = tol.cluster_radius * max(1.0, abs(roots[i]), abs(roots[j]))
            if abs(roots[i] - roots[j]) <= limit:
                parent[find(i)] = find(j)

    groups: Dict[int, List[complex]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])

    clusters = []
    for members in groups.values():
        k = len(members)
        center = complex(np.mean(members))
        # A k-fold root of P is a simple root of P^(k-1)
        target = np.polyder(coeffs, k - 1) if k > 1 else coeffs
        slope = np.polyder(target)
        for _ in range(20):
            value = np.polyval(target, center)
            d = np.polyval(slope, center)
            if d == 0:
                break
            step = value / d
            center -= step
            if abs(step) <= 1e-15 * max(1.0, abs(center)):
                break
        clusters.append((complex(center), k))
    return clusters


# ============ FACTORIZATION ============

@dataclass(frozen=True)
class HomFactorization:
    """c · u^p ū^q · Π (u + γ_j ū)^ν_j for a form of degree ℓ."""

    c: complex
    p: int
    q: int
    factors: Tuple[Tuple[complex, int], ...]
    degree: int

    @property
    def s(self) -> int:
        """Number of linear factors counted with multiplicity."""
        return sum(nu for _, nu in self.factors)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "c": [self.c.real, self.c.imag],
            "p": self.p,
            "q": self.q,
            "factors": [
                {"gamma": [g.real, g.imag], "modulus": abs(g), "multiplicity": nu}
                for g, nu in self.factors
            ],
            "degree": self.degree,
        }


def expand_factorization(h: HomFactorization) -> MixedPoly:
    """Rebuild the form from its factorization."""
    u = MixedPoly.variable(0)
    ubar = MixedPoly.variable(0, conjugate=True)
    result = MixedPoly.constant(h.c) * u ** h.p * ubar ** h.q
    for gamma, nu in h.factors:
        result = result * (u + gamma * ubar) ** nu
    return result


def factor_form(h: MixedPoly, tol: Optional[Tolerances] = None) -> HomFactorization:
    """
    Factor a nonzero one-variable mixed homogeneous form.

    Args:
        h: form whose terms all have the same degree ℓ
        tol: tolerances (cluster radius, Aberth settings, expansion residual)

    Returns:
        HomFactorization with pairwise distinct γ_j
    """
    tol = tol or get_tolerances()
    if h.nvars != 1:
        raise DimensionMismatch("factor_form needs a one-variable form")
    if h.is_zero():
        raise ZeroPolynomialError("cannot factor the zero form")
    degree = h.total_degree()
    if h.min_total_degree() != degree:
        raise NotHomogeneous(
            f"form mixes degrees {h.min_total_degree()}..{degree}",
            {"degrees": sorted({sum(e) for e in h.terms})},
        )

    p = min(nu for nu, _ in h.terms)
    q = min(mu for _, mu in h.terms)
    m = degree - p - q
    # a[μ] = coefficient of u^(m-μ) ū^μ in the cofactor
    a = np.zeros(m + 1, dtype=complex)
    for (nu, mu), c in h.terms.items():
        a[mu - q] = c
    c0 = complex(a[0])

    factors: List[Tuple[complex, int]] = []
    if m > 0:
        coeffs = a[::-1]
        roots = simultaneous_roots(coeffs, tol)
        for w, nu in _cluster(roots, coeffs, tol):
            assert w != 0, "companion root at zero"
            factors.append((-1.0 / w, nu))
        factors.sort(key=lambda item: (abs(item[0]), np.angle(item[0])))

    result = HomFactorization(c0, p, q, tuple(factors), degree)

    expanded = expand_factorization(result)
    reference = max(abs(c) for c in h.terms.values())
    keys = set(h.terms) | set(expanded.terms)
    residual = max(abs(h.terms.get(k, 0) - expanded.terms.get(k, 0)) for k in keys)
    if residual > tol.expansion_residual * reference:
        raise RootFinderError(
            "factorization does not reproduce the form",
            {"relative_residual": residual / reference, "degree": degree},
        )
    logger.debug(f"🔍 Factored degree-{degree} form: p={p}, q={q}, {len(factors)} distinct factor(s)")
    return result


# ============ β / ρ ============

def epsilon(xi: complex, tol: Optional[Tolerances] = None) -> int:
    """ε(ξ) = 1 if |ξ| < 1, 0 if |ξ| = 1, −1 if |ξ| > 1 (with a tolerance band)."""
    tol = tol or get_tolerances()
    if xi == 0:
        raise UsageError("epsilon is undefined at 0")
    modulus = abs(xi)
    if modulus < 1.0 - tol.admissibility_band:
        return 1
    if modulus > 1.0 + tol.admissibility_band:
        return -1
    return 0


def _signed_count(form: MixedPoly, where: str, tol: Tolerances) -> int:
    fac = factor_form(form, tol)
    total = fac.p - fac.q
    for gamma, nu in fac.factors:
        e = epsilon(gamma, tol)
        if e == 0:
            raise AdmissibilityViolation(
                f"factor u + γ·conj(u) with |γ| = 1 makes the invariant undefined ({where})",
                {"gamma": [gamma.real, gamma.imag], "modulus": abs(gamma), "multiplicity": nu},
            )
        total += e * nu
    return total


def _local_form(f: MixedPoly, at: Optional[complex], tol: Tolerances) -> MixedPoly:
    if at is None or at == 0:
        return f
    shifted = f.shift(at)
    # shifting leaves rounding noise where exact cancellation happened
    floor = tol.root_residual * f.magnitude_at(at)
    return MixedPoly({e: c for e, c in shifted.terms.items() if abs(c) > floor}, 1)


def beta(f: MixedPoly, tol: Optional[Tolerances] = None) -> int:
    """β(f) = p − q + Σ ε(γ_j) ν_j from the top form f_d̄."""
    tol = tol or get_tolerances()
    if f.is_zero():
        raise ZeroPolynomialError("beta of the zero polynomial")
    return _signed_count(f.graded_part(f.total_degree()), "at infinity", tol)


def rho(f: MixedPoly, at: Optional[complex] = None, tol: Optional[Tolerances] = None) -> int:
    """
    ρ(f, α) from the bottom form of f shifted to α (α = 0 by default).

    A point that is not a root has a nonzero constant bottom form, so ρ = 0 there.
    """
    tol = tol or get_tolerances()
    if f.is_zero():
        raise ZeroPolynomialError("rho of the zero polynomial")
    local = _local_form(f, at, tol)
    return _signed_count(local.graded_part(local.min_total_degree()), "at the origin", tol)


def _admissible(form: MixedPoly, tol: Tolerances) -> bool:
    fac = factor_form(form, tol)
    return all(epsilon(gamma, tol) != 0 for gamma, _ in fac.factors)


def admissible_at_infinity(f: MixedPoly, tol: Optional[Tolerances] = None) -> bool:
    tol = tol or get_tolerances()
    if f.is_zero():
        raise ZeroPolynomialError("admissibility of the zero polynomial")
    return _admissible(f.graded_part(f.total_degree()), tol)


def admissible_at_origin(f: MixedPoly, tol: Optional[Tolerances] = None) -> bool:
    tol = tol or get_tolerances()
    if f.is_zero():
        raise ZeroPolynomialError("admissibility of the zero polynomial")
    return _admissible(f.graded_part(f.min_total_degree()), tol)


# ============ MIXED HOMOGENIZATION ============

@dataclass(frozen=True)
class Homogenization:
    """
    Strongly polar homogeneous form F in Z0, Z1[, Z2].

    Keys of `terms` are (ν0, μ0, ν1, μ1[, ν2, μ2]); every monomial has
    Σν = dplus and Σμ = dminus.
    """

    terms: Mapping[Tuple[int, ...], complex]
    nhom: int
    dplus: int
    dminus: int

    def __post_init__(self):
        if self.nhom not in (2, 3):
            raise DimensionMismatch(f"homogeneous forms have 2 or 3 variables, got {self.nhom}")
        for exp in self.terms:
            if len(exp) != 2 * self.nhom:
                raise DimensionMismatch(f"exponent {exp} does not match {self.nhom} variables")
            if sum(exp[0::2]) != self.dplus or sum(exp[1::2]) != self.dminus:
                raise NotHomogeneous(
                    f"monomial {exp} breaks strong polar homogeneity "
                    f"(expected holomorphic degree {self.dplus}, antiholomorphic {self.dminus})"
                )

    @classmethod
    def from_terms(cls, terms: Mapping[Tuple[int, ...], complex], nhom: int) -> "Homogenization":
        """Build from raw terms, inferring (d⁺, d⁻) from the first monomial."""
        clean = {tuple(e): complex(c) for e, c in terms.items() if c != 0}
        if not clean:
            raise ZeroPolynomialError("the zero form has no degrees")
        first = next(iter(clean))
        return cls(MappingProxyType(clean), nhom, sum(first[0::2]), sum(first[1::2]))

    @property
    def radial_degree(self) -> int:
        return self.dplus + self.dminus

    @property
    def polar_degree(self) -> int:
        return self.dplus - self.dminus

    def is_generic_chart(self, chart: int) -> bool:
        """True if some monomial avoids both Z_chart and conj(Z_chart)."""
        self._check_chart(chart)
        return any(e[2 * chart] == 0 and e[2 * chart + 1] == 0 for e in self.terms)

    def at_infinity_point(self) -> bool:
        """Whether (0:1) lies on V(F): every monomial contains Z0 or conj(Z0)."""
        if self.nhom != 2:
            raise DimensionMismatch("the point (0:1) is defined for forms in Z0, Z1")
        return all(e[0] + e[1] > 0 for e in self.terms)

    def _check_chart(self, chart: int) -> None:
        if not 0 <= chart < self.nhom:
            raise DimensionMismatch(f"chart {chart} out of range for {self.nhom} variables")

    def dehomogenize(self, chart: int = 0) -> MixedPoly:
        """Affine equation in chart U_chart (Z_chart := 1); remaining variables keep their order."""
        self._check_chart(chart)
        terms: Dict[Tuple[int, ...], complex] = {}
        for exp, c in self.terms.items():
            key = tuple(v for k, v in enumerate(exp) if k // 2 != chart)
            terms[key] = terms.get(key, 0j) + c
        return MixedPoly(terms, self.nhom - 1)

    def __str__(self) -> str:
        from src.polynomials.parser import format_homogenization
        return format_homogenization(self.terms)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "F": str(self),
            "dplus": self.dplus,
            "dminus": self.dminus,
            "radial_degree": self.radial_degree,
            "polar_degree": self.polar_degree,
        }


def _homogenization(f: MixedPoly) -> Homogenization:
    if f.is_zero():
        raise ZeroPolynomialError("cannot homogenize the zero polynomial")
    dplus = f.holomorphic_degree()
    dminus = f.antiholomorphic_degree()
    terms = {}
    for exp, c in f.terms.items():
        key = (dplus - sum(exp[0::2]), dminus - sum(exp[1::2])) + tuple(exp)
        terms[key] = c
    return Homogenization(MappingProxyType(terms), f.nvars + 1, dplus, dminus)


def homogenize(f: MixedPoly, tol: Optional[Tolerances] = None) -> Homogenization:
    """
    Mixed homogenization F = Z0^d⁺ conj(Z0)^d⁻ f(Z/Z0).

    Monomial z^ν z̄^μ maps to Z0^(d⁺−|ν|) conj(Z0)^(d⁻−|μ|) Z^ν conj(Z)^μ.
    For one variable the radial degree is checked against the top form:
    d_h ≥ d̄, with equality exactly when p = d⁺, q = d⁻ and s = 0.

    Raises:
        RootFinderError: the top-form factorization contradicts the degrees
    """
    hom = _homogenization(f)
    if f.nvars == 1:
        report = _equality_case(f, hom, tol or get_tolerances())
        if hom.radial_degree < f.total_degree() or not report["consistent"]:
            raise RootFinderError("radial degree disagrees with the top-form factorization", report)
    return hom


def dehomogenize(hom: Homogenization, chart: int = 0) -> MixedPoly:
    return hom.dehomogenize(chart)


def _equality_case(f: MixedPoly, hom: Homogenization, tol: Tolerances) -> Dict[str, Any]:
    fac = factor_form(f.graded_part(f.total_degree()), tol)
    equal = hom.radial_degree == f.total_degree()
    predicted = fac.p == hom.dplus and fac.q == hom.dminus and fac.s == 0
    return {
        "radial_degree": hom.radial_degree,
        "max_degree": f.total_degree(),
        "p": fac.p,
        "q": fac.q,
        "s": fac.s,
        "dplus": hom.dplus,
        "dminus": hom.dminus,
        "equality": equal,
        "factor_criterion": predicted,
        "consistent": equal == predicted,
    }


def degree_equality_case(f: MixedPoly, tol: Optional[Tolerances] = None) -> Dict[str, Any]:
    """
    Compare d_h = d̄ against the factor criterion p = d⁺, q = d⁻, s = 0.

    Both readings are reported; `consistent` is True when they agree.
    """
    tol = tol or get_tolerances()
    return _equality_case(f, _homogenization(f), tol)


if __name__ == "__main__":
    from src.polynomials.parser import parse

    f = parse("u^2*conj(u)*(u - 2*conj(u)) + 1")
    print(f"🔍 top form factorization: {factor_form(graded_part(f, 4))}")
    print(f"📊 beta = {beta(f)}")
    hom = homogenize(f)
    print(f"📊 F = {hom}  (radial {hom.radial_degree}, polar {hom.polar_degree})")
    g = hom.dehomogenize(1)
    print(f"📊 chart U1: {g}  rho = {rho(g)}")
    print("✅ homogeneous self-check done")
