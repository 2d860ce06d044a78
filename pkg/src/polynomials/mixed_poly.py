"""
Mixed polynomials - sparse exact-structure representation and calculus

A mixed polynomial in one or two complex variables is a finite sum
    f(z, z̄) = Σ c_{νμ} z^ν z̄^μ
with exponents stored per variable as (ν, μ) pairs:
    one variable:  key (ν, μ)
    two variables: key (ν1, μ1, ν2, μ2)

Values are immutable after construction; every method returns a new object.
Only coefficients that are exactly zero are dropped, so degrees never move
because of rounding noise.
"""

import math
import logging
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Dict, Iterable, Mapping, Sequence, Tuple, Union

import numpy as np

from src.errors import DimensionMismatch, ZeroPolynomialError

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Scalar = Union[int, float, complex]

Z = "z"
ZBAR = "zbar"
_WHICH_ALIASES = {"z": Z, "u": Z, "zbar": ZBAR, "conj": ZBAR, "ubar": ZBAR}


def _check_exponent(exp: Iterable[Any], nvars: int) -> Exponent:
    values = []
    for e in exp:
        if isinstance(e, bool) or not isinstance(e, (int, np.integer)):
            raise ValueError(f"exponent {e!r} is not an integer")
        if e < 0:
            raise ValueError(f"negative exponent {e} in {tuple(exp)}")
        values.append(int(e))
    if len(values) != 2 * nvars:
        raise DimensionMismatch(
            f"exponent {tuple(values)} does not match {nvars} variable(s)"
        )
    return tuple(values)


class MixedPoly:
    """
    Sparse mixed polynomial in 1 or 2 complex variables.

    Example:
        f = MixedPoly({(3, 1): 1, (2, 2): -2, (0, 0): 1})   # u³ū - 2u²ū² + 1
        f(1)                                               # 0
        f.wirtinger("z").terms                             # {(2, 1): 3, (1, 2): -4}
    """

    __slots__ = ("_nvars", "_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Scalar] = None, nvars: int = 1):
        if nvars not in (1, 2):
            raise DimensionMismatch(f"nvars must be 1 or 2, got {nvars}")
        canonical: Dict[Exponent, complex] = {}
        for exp, coeff in (terms or {}).items():
            key = _check_exponent(exp, nvars)
            value = complex(coeff) + canonical.get(key, 0j)
            if value == 0:
                canonical.pop(key, None)
            else:
                canonical[key] = value
        self._nvars = nvars
        self._terms = MappingProxyType(canonical)
        self._hash = None

    # ============ CONSTRUCTORS ============

    @classmethod
    def zero(cls, nvars: int = 1) -> "MixedPoly":
        return cls({}, nvars)

    @classmethod
    def constant(cls, value: Scalar, nvars: int = 1) -> "MixedPoly":
        return cls({(0,) * (2 * nvars): value}, nvars)

    @classmethod
    def variable(cls, index: int = 0, conjugate: bool = False, nvars: int = 1) -> "MixedPoly":
        """The monomial z_index (or its conjugate) with coefficient 1."""
        if not 0 <= index < nvars:
            raise DimensionMismatch(f"variable index {index} out of range for {nvars} variable(s)")
        exp = [0] * (2 * nvars)
        exp[2 * index + (1 if conjugate else 0)] = 1
        return cls({tuple(exp): 1}, nvars)

    # ============ BASIC PROPERTIES ============

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> Mapping[Exponent, complex]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, float, complex)):
            other = MixedPoly.constant(other, self._nvars)
        if not isinstance(other, MixedPoly):
            return NotImplemented
        return self._nvars == other._nvars and dict(self._terms) == dict(other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"MixedPoly(nvars={self._nvars}, terms={dict(self._terms)})"

    def __str__(self) -> str:
        from src.polynomials.parser import format_poly
        return format_poly(self)

    # ============ DEGREES ============

    def _require_nonzero(self) -> None:
        if not self._terms:
            raise ZeroPolynomialError("degree of the zero polynomial is undefined")

    def total_degree(self) -> int:
        """Maximal degree d̄ = max(ν+μ) summed over all variables."""
        self._require_nonzero()
        return max(sum(exp) for exp in self._terms)

    def min_total_degree(self) -> int:
        """Minimal degree d̲ = min(ν+μ) at the origin."""
        self._require_nonzero()
        return min(sum(exp) for exp in self._terms)

    def holomorphic_degree(self) -> int:
        """d⁺: maximal total degree in z."""
        self._require_nonzero()
        return max(sum(exp[0::2]) for exp in self._terms)

    def antiholomorphic_degree(self) -> int:
        """d⁻: maximal total degree in z̄."""
        self._require_nonzero()
        return max(sum(exp[1::2]) for exp in self._terms)

    def coefficient_norm(self) -> float:
        """ℓ¹ norm of the coefficient vector."""
        return float(sum(abs(c) for c in self._terms.values()))

    def magnitude_at(self, point: Any) -> float:
        """
        Rounding scale of an evaluation: Σ|c|·Π max(1,|z_k|)^(ν_k+μ_k).

        Every "|f| <= tol·scale" test in the library uses this scale.
        """
        zs = self._as_point(point)
        bases = [max(1.0, abs(z)) for z in zs]
        total = 0.0
        for exp, c in self._terms.items():
            weight = abs(c)
            for k, base in enumerate(bases):
                weight *= base ** (exp[2 * k] + exp[2 * k + 1])
            total += weight
        return total

    # ============ ARITHMETIC ============

    def _coerce(self, other: Any) -> "MixedPoly":
        if isinstance(other, MixedPoly):
            if other._nvars != self._nvars:
                raise DimensionMismatch(
                    f"cannot combine {self._nvars}-variable and {other._nvars}-variable polynomials"
                )
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return MixedPoly.constant(complex(other), self._nvars)
        raise TypeError(f"unsupported operand {type(other).__name__}")

    def __add__(self, other: Any) -> "MixedPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for exp, c in other._terms.items():
            terms[exp] = terms.get(exp, 0j) + c
        return MixedPoly(terms, self._nvars)

    __radd__ = __add__

    def __neg__(self) -> "MixedPoly":
        return MixedPoly({exp: -c for exp, c in self._terms.items()}, self._nvars)

    def __sub__(self, other: Any) -> "MixedPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for exp, c in other._terms.items():
            terms[exp] = terms.get(exp, 0j) - c
        return MixedPoly(terms, self._nvars)

    def __rsub__(self, other: Any) -> "MixedPoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "MixedPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms: Dict[Exponent, complex] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                terms[key] = terms.get(key, 0j) + c1 * c2
        return MixedPoly(terms, self._nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MixedPoly":
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {n!r}")
        result = MixedPoly.constant(1, self._nvars)
        base = self
        n = int(n)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ============ EVALUATION ============

    def _as_point(self, point: Any) -> Tuple[complex, ...]:
        if isinstance(point, (int, float, complex, np.number)):
            values = (complex(point),)
        else:
            values = tuple(complex(v) for v in point)
        if len(values) != self._nvars:
            raise DimensionMismatch(
                f"point has {len(values)} coordinate(s), polynomial has {self._nvars} variable(s)"
            )
        return values

    def __call__(self, point: Any) -> complex:
        """Evaluate Σ c z^ν z̄^μ at a single point."""
        zs = self._as_point(point)
        total = 0j
        for exp, c in self._terms.items():
            value = c
            for k, z in enumerate(zs):
                nu, mu = exp[2 * k], exp[2 * k + 1]
                if nu:
                    value *= z ** nu
                if mu:
                    value *= z.conjugate() ** mu
            total += value
        return total

    def evaluate(self, points: Any) -> np.ndarray:
        """
        Vectorized evaluation.

        Args:
            points: complex array (one variable) or a pair of broadcastable
                complex arrays (two variables)

        Returns:
            complex ndarray with the broadcast shape of the inputs
        """
        if self._nvars == 1:
            zs = [np.asarray(points, dtype=complex)]
        else:
            if len(points) != 2:
                raise DimensionMismatch("two-variable evaluation needs a pair of arrays")
            zs = list(np.broadcast_arrays(*(np.asarray(p, dtype=complex) for p in points)))
        out = np.zeros(zs[0].shape, dtype=complex)
        cache: Dict[Tuple[int, bool, int], np.ndarray] = {}

        def power(k: int, conj: bool, e: int) -> np.ndarray:
            key = (k, conj, e)
            if key not in cache:
                base = np.conj(zs[k]) if conj else zs[k]
                cache[key] = base ** e
            return cache[key]

        for exp, c in self._terms.items():
            term = np.full(zs[0].shape, c, dtype=complex)
            for k in range(self._nvars):
                if exp[2 * k]:
                    term = term * power(k, False, exp[2 * k])
                if exp[2 * k + 1]:
                    term = term * power(k, True, exp[2 * k + 1])
            out += term
        return out

    # ============ CALCULUS ============

    def wirtinger(self, which: str = Z, index: int = 0) -> "MixedPoly":
        """
        Formal partial derivative treating z and z̄ as independent.

        Args:
            which: "z" for ∂/∂z, "zbar" for ∂/∂z̄
            index: variable index (0 for z1/u, 1 for z2)
        """
        which = _WHICH_ALIASES.get(which, which)
        if which not in (Z, ZBAR):
            raise ValueError(f"which must be 'z' or 'zbar', got {which!r}")
        if not 0 <= index < self._nvars:
            raise DimensionMismatch(f"variable index {index} out of range")
        pos = 2 * index + (0 if which == Z else 1)
        terms: Dict[Exponent, complex] = {}
        for exp, c in self._terms.items():
            if exp[pos] == 0:
                continue
            new = list(exp)
            new[pos] -= 1
            terms[tuple(new)] = c * exp[pos]
        return MixedPoly(terms, self._nvars)

    def real_forms(self) -> "RealPolyPair":
        """Expand through z = x + iy, z̄ = x − iy into (f_R, f_I)."""
        combined: Dict[Exponent, complex] = {}
        for exp, c in self._terms.items():
            partial: Dict[Exponent, complex] = {(): c}
            for k in range(self._nvars):
                factor = _real_expansion(exp[2 * k], exp[2 * k + 1])
                merged: Dict[Exponent, complex] = {}
                for key, value in partial.items():
                    for fkey, fvalue in factor.items():
                        merged[key + fkey] = merged.get(key + fkey, 0j) + value * fvalue
                partial = merged
            for key, value in partial.items():
                combined[key] = combined.get(key, 0j) + value
        real = {k: v.real for k, v in combined.items() if v.real != 0}
        imag = {k: v.imag for k, v in combined.items() if v.imag != 0}
        return RealPolyPair(self._nvars, MappingProxyType(real), MappingProxyType(imag))

    # ============ SUBSTITUTIONS ============

    def shift(self, alpha: Scalar) -> "MixedPoly":
        """f_α(w) := f(w + α, w̄ + ᾱ) for a one-variable polynomial."""
        if self._nvars != 1:
            raise DimensionMismatch("shift is defined for one-variable polynomials")
        alpha = complex(alpha)
        alpha_bar = alpha.conjugate()
        terms: Dict[Exponent, complex] = {}
        for (nu, mu), c in self._terms.items():
            for j in range(nu + 1):
                a = math.comb(nu, j) * alpha ** (nu - j)
                for k in range(mu + 1):
                    value = c * a * math.comb(mu, k) * alpha_bar ** (mu - k)
                    terms[(j, k)] = terms.get((j, k), 0j) + value
        return MixedPoly(terms, 1)

    def taylor_coefficients(self, centers: Any) -> Dict[Exponent, np.ndarray]:
        """
        Coefficients of f(c + w) in (w, w̄) for many centers c at once.

        Vectorized version of shift; returns {(j, k): array over centers}.
        """
        if self._nvars != 1:
            raise DimensionMismatch("taylor_coefficients is defined for one-variable polynomials")
        c = np.asarray(centers, dtype=complex)
        cbar = np.conj(c)
        out: Dict[Exponent, np.ndarray] = {}
        for (nu, mu), coeff in self._terms.items():
            for j in range(nu + 1):
                a = coeff * math.comb(nu, j) * c ** (nu - j)
                for k in range(mu + 1):
                    value = a * (math.comb(mu, k) * cbar ** (mu - k))
                    if (j, k) in out:
                        out[(j, k)] = out[(j, k)] + value
                    else:
                        out[(j, k)] = value
        return out

    def restrict(self, index: int, value: Scalar) -> "MixedPoly":
        """Substitute z_index := value (and its conjugate) in a two-variable polynomial."""
        if self._nvars != 2:
            raise DimensionMismatch("restrict needs a two-variable polynomial")
        if index not in (0, 1):
            raise DimensionMismatch(f"variable index {index} out of range")
        value = complex(value)
        keep = 1 - index
        terms: Dict[Exponent, complex] = {}
        for exp, c in self._terms.items():
            nu, mu = exp[2 * index], exp[2 * index + 1]
            factor = (value ** nu if nu else 1) * (value.conjugate() ** mu if mu else 1)
            key = (exp[2 * keep], exp[2 * keep + 1])
            terms[key] = terms.get(key, 0j) + c * factor
        return MixedPoly(terms, 1)

    def conjugate_swap(self) -> "MixedPoly":
        """The polynomial whose values are the complex conjugates of f's values."""
        terms = {}
        for exp, c in self._terms.items():
            swapped = []
            for k in range(self._nvars):
                swapped += [exp[2 * k + 1], exp[2 * k]]
            terms[tuple(swapped)] = c.conjugate()
        return MixedPoly(terms, self._nvars)

    def graded_part(self, degree: int) -> "MixedPoly":
        """Sum of the terms of total degree `degree`."""
        if degree < 0:
            raise ValueError(f"degree must be non-negative, got {degree}")
        return MixedPoly(
            {exp: c for exp, c in self._terms.items() if sum(exp) == degree}, self._nvars
        )


@lru_cache(maxsize=None)
def _real_expansion(nu: int, mu: int) -> Dict[Tuple[int, int], complex]:
    """(x+iy)^ν (x−iy)^μ as {(deg_x, deg_y): complex coefficient}."""
    out: Dict[Tuple[int, int], complex] = {}
    for j in range(nu + 1):
        for l in range(mu + 1):
            coeff = math.comb(nu, j) * math.comb(mu, l) * (1j ** j) * ((-1j) ** l)
            key = (nu - j + mu - l, j + l)
            out[key] = out.get(key, 0j) + coeff
    return {k: v for k, v in out.items() if v != 0}


@lru_cache(maxsize=4096)
def cached_wirtinger(f: MixedPoly, which: str, index: int) -> MixedPoly:
    """Memoized wirtinger(); polynomials are immutable and hashable."""
    return f.wirtinger(which, index)


# ============ REAL FORMS ============

@dataclass(frozen=True)
class RealPolyPair:
    """
    Real and imaginary parts of a mixed polynomial as real polynomials.

    Keys are real exponents (a1, b1[, a2, b2]) for x1^a1 y1^b1 x2^a2 y2^b2.
    """

    nvars: int
    real: Mapping[Exponent, float]
    imag: Mapping[Exponent, float]

    def _check(self, point: Sequence[float]) -> np.ndarray:
        values = np.asarray(point, dtype=float)
        if values.shape != (2 * self.nvars,):
            raise DimensionMismatch(
                f"real point must have {2 * self.nvars} coordinates, got shape {values.shape}"
            )
        return values

    @staticmethod
    def _eval_part(part: Mapping[Exponent, float], values: np.ndarray) -> float:
        total = 0.0
        for exp, c in part.items():
            term = c
            for v, e in zip(values, exp):
                if e:
                    term *= v ** e
            total += term
        return total

    @staticmethod
    def _grad_part(part: Mapping[Exponent, float], values: np.ndarray) -> np.ndarray:
        grad = np.zeros(values.size)
        for exp, c in part.items():
            for i, e in enumerate(exp):
                if e == 0:
                    continue
                term = c * e
                for j, (v, ej) in enumerate(zip(values, exp)):
                    power = ej - 1 if j == i else ej
                    if power:
                        term *= v ** power
                grad[i] += term
        return grad

    def evaluate(self, point: Sequence[float]) -> Tuple[float, float]:
        values = self._check(point)
        return self._eval_part(self.real, values), self._eval_part(self.imag, values)

    def recombine(self, point: Sequence[float]) -> complex:
        """f_R + i·f_I at a real point (x1, y1[, x2, y2])."""
        fr, fi = self.evaluate(point)
        return complex(fr, fi)

    def gradient(self, point: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
        """(grad f_R, grad f_I) at a real point."""
        values = self._check(point)
        return self._grad_part(self.real, values), self._grad_part(self.imag, values)


# ============ DIRECT FUNCTIONS ============

def wirtinger(f: MixedPoly, which: str = Z, index: int = 0) -> MixedPoly:
    return f.wirtinger(which, index)


def real_forms(f: MixedPoly) -> RealPolyPair:
    return f.real_forms()


def shift(f: MixedPoly, alpha: Scalar) -> MixedPoly:
    return f.shift(alpha)


def restrict(f: MixedPoly, index: int, value: Scalar) -> MixedPoly:
    return f.restrict(index, value)


def real_jacobian(f: MixedPoly, point: Any) -> np.ndarray:
    """
    2 × 2n real Jacobian of (f_R, f_I) in (x1, y1[, x2, y2]).

    Uses ∂f/∂x_k = a_k + b_k and ∂f/∂y_k = i(a_k − b_k) with
    a_k = ∂f/∂z_k, b_k = ∂f/∂z̄_k.
    """
    columns = []
    for k in range(f.nvars):
        a = cached_wirtinger(f, Z, k)(point)
        b = cached_wirtinger(f, ZBAR, k)(point)
        dx = a + b
        dy = 1j * (a - b)
        columns += [dx, dy]
    row = np.array(columns, dtype=complex)
    return np.vstack([row.real, row.imag])


if __name__ == "__main__":
    f = MixedPoly({(3, 1): 1, (2, 2): -2, (0, 0): 1})
    print(f"🔍 f = {f}")
    print(f"   f(1) = {f(1)}   f(-1) = {f(-1)}")
    print(f"   ∂f/∂u = {f.wirtinger('z')}")
    print(f"   shift(f, 1) = {f.shift(1)}")
    print("✅ mixed_poly self-check done")
