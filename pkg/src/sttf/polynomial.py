"""Sparse multivariate Laurent polynomials with complex coefficients.

A :class:`MultiPoly` maps integer exponent tuples (negative entries allowed)
to complex coefficients.  Instances are immutable and always canonical: no
stored coefficient is exactly zero.  Iteration and evaluation follow the
lexicographic order of exponent tuples so every result is reproducible
bit-for-bit, whatever the caller's evaluation partitioning.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from types import MappingProxyType
from typing import Union

import numpy as np

from .errors import DimMismatch, RootFindingFailure, ZeroBaseNegativeExponent

Exponent = tuple[int, ...]
TermsLike = Union[Mapping[Exponent, complex], Iterable[tuple[Exponent, complex]]]


def _ipow(z, e: int):
    """Integer power by repeated squaring; one code path for scalars and arrays."""
    if e < 0:
        return 1.0 / _ipow(z, -e)
    result = None
    base = z
    while e:
        if e & 1:
            result = base if result is None else result * base
        e >>= 1
        if e:
            base = base * base
    return np.ones_like(z) if result is None else result


class MultiPoly:
    """Immutable sparse Laurent polynomial in ``dim`` variables."""

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: TermsLike = ()):
        if dim < 1:
            raise ValueError(f"dim must be positive, got {dim}")
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, complex] = {}
        for expo, coeff in pairs:
            expo = tuple(int(e) for e in expo)
            if len(expo) != dim:
                raise DimMismatch(f"exponent {expo} has length {len(expo)}, expected {dim}")
            coeff = complex(coeff)
            if not (np.isfinite(coeff.real) and np.isfinite(coeff.imag)):
                raise ValueError(f"non-finite coefficient {coeff} at {expo}")
            acc[expo] = acc.get(expo, 0j) + coeff
        self.dim = dim
        self._terms = {e: acc[e] for e in sorted(acc) if acc[e] != 0}

    # -- construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, dim: int, value: complex) -> MultiPoly:
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def monomial(cls, expo: Exponent, coeff: complex = 1.0) -> MultiPoly:
        return cls(len(expo), {tuple(expo): coeff})

    @classmethod
    def zero(cls, dim: int) -> MultiPoly:
        return cls(dim)

    # -- inspection -----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, complex]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def min_exponents(self) -> Exponent:
        if not self._terms:
            return (0,) * self.dim
        return tuple(min(e[i] for e in self._terms) for i in range(self.dim))

    def max_exponents(self) -> Exponent:
        if not self._terms:
            return (0,) * self.dim
        return tuple(max(e[i] for e in self._terms) for i in range(self.dim))

    def has_negative_exponents(self) -> bool:
        return any(m < 0 for m in self.min_exponents())

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def sum_abs_coeff(self) -> float:
        return float(sum(abs(c) for c in self._terms.values()))

    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self._terms.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.dim, tuple(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"MultiPoly({self.dim}, 0)"
        parts = []
        for expo, c in self._terms.items():
            mono = "*".join(
                f"z{i + 1}" if e == 1 else f"z{i + 1}^{e}" for i, e in enumerate(expo) if e
            )
            coeff = f"{c.real:g}" if c.imag == 0 else f"({c:g})"
            parts.append(f"{coeff}*{mono}" if mono else coeff)
        return f"MultiPoly({self.dim}, {' + '.join(parts)})"

    # -- arithmetic -----------------------------------------------------------

    def _check_dim(self, other: MultiPoly) -> None:
        if self.dim != other.dim:
            raise DimMismatch(f"dimension {self.dim} vs {other.dim}")

    def __add__(self, other: MultiPoly) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check_dim(other)
        return MultiPoly(self.dim, list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.dim, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c: complex) -> MultiPoly:
        return MultiPoly(self.dim, {e: c * v for e, v in self._terms.items()})

    def mul_monomial(self, expo: Exponent) -> MultiPoly:
        if len(expo) != self.dim:
            raise DimMismatch(f"shift {expo} has length {len(expo)}, expected {self.dim}")
        return MultiPoly(
            self.dim,
            {tuple(a + b for a, b in zip(e, expo)): c for e, c in self._terms.items()},
        )

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            self._check_dim(other)
            pairs = [
                (tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
                for e1, c1 in self._terms.items()
                for e2, c2 in other._terms.items()
            ]
            return MultiPoly(self.dim, pairs)
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, *coords):
        """Evaluate at a point or, with array coordinates, elementwise on a grid.

        Coordinates broadcast against each other.  Terms are summed in
        lexicographic exponent order.
        """
        if len(coords) != self.dim:
            raise DimMismatch(f"got {len(coords)} coordinates for a {self.dim}-variable polynomial")
        # >=1-d arrays keep every operation in ufunc loops; numpy scalar
        # arithmetic rounds differently and would break bitwise agreement
        # between pointwise and gridded evaluation
        zs = [np.atleast_1d(np.asarray(z, dtype=complex)) for z in coords]
        out_shape = np.broadcast_shapes(*(np.shape(z) for z in coords))
        mins = self.min_exponents()
        for i, z in enumerate(zs):
            if mins[i] < 0 and np.any(z == 0):
                raise ZeroBaseNegativeExponent(
                    f"coordinate {i + 1} is zero but the polynomial has z{i + 1}^{mins[i]}"
                )
        shape = np.broadcast_shapes(*(z.shape for z in zs))
        total = np.zeros(shape, dtype=complex)
        for expo, c in self._terms.items():
            term = np.full(shape, c, dtype=complex)
            for z, e in zip(zs, expo):
                if e:
                    term = term * _ipow(z, e)
            total = total + term
        return total.reshape(out_shape)

    def __call__(self, *coords):
        out = self.evaluate(*coords)
        return complex(out) if out.ndim == 0 else out

    # -- univariate views -----------------------------------------------------

    def univariate_coeffs(self, free_axis: int, fixed: Mapping[int, complex]) -> np.ndarray:
        """Coefficients (highest power first) of the polynomial in one free variable.

        Every other axis must be fixed to a value.  The free variable must only
        appear with nonnegative exponents.
        """
        others = [i for i in range(self.dim) if i != free_axis]
        if sorted(fixed) != others:
            raise DimMismatch(f"fixed axes {sorted(fixed)} must be exactly {others}")
        if self.min_exponents()[free_axis] < 0:
            raise ValueError("free variable carries negative exponents; clear them first")
        deg = self.max_exponents()[free_axis]
        out = np.zeros(deg + 1, dtype=complex)
        fixed_vals = {i: np.atleast_1d(np.asarray(v, dtype=complex)) for i, v in fixed.items()}
        for i, v in fixed_vals.items():
            if self.min_exponents()[i] < 0 and np.any(v == 0):
                raise ZeroBaseNegativeExponent(f"fixed coordinate {i + 1} is zero")
        for expo, c in self._terms.items():
            val = complex(c)
            for i in others:
                if expo[i]:
                    val = val * complex(_ipow(fixed_vals[i], expo[i])[0])
            out[deg - expo[free_axis]] += val
        return out

    # -- serialization --------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [{"e": list(e), "c": [c.real, c.imag]} for e, c in self._terms.items()]

    @classmethod
    def from_json(cls, dim: int, terms: list[dict]) -> MultiPoly:
        return cls(dim, [(tuple(t["e"]), complex(t["c"][0], t["c"][1])) for t in terms])


# Functional aliases.

def poly_eval(p: MultiPoly, z) -> complex:
    """Evaluate ``p`` at the point ``z`` (a sequence of ``p.dim`` coordinates)."""
    return p(*z)


def poly_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p + q


def poly_scale(p: MultiPoly, c: complex) -> MultiPoly:
    return p.scale(c)


def poly_mul_monomial(p: MultiPoly, expo: Exponent) -> MultiPoly:
    return p.mul_monomial(expo)


def certified_roots(coeffs, tol: float, *, lead_rtol: float = 1e-14, polish: int = 3) -> np.ndarray:
    """All roots of a univariate polynomial, each certified by its residual.

    ``coeffs`` is highest-power first.  Leading coefficients that are
    negligible relative to the largest one are dropped (those roots sit at
    infinity).  Roots come from the companion-matrix eigenvalues and are
    polished with a few guarded Newton steps; any root whose residual
    ``|p(r)|`` still exceeds ``tol`` raises :class:`RootFindingFailure`.
    """
    c = np.asarray(coeffs, dtype=complex)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0:
        return np.zeros(0, dtype=complex)
    lead = 0
    while lead < c.size and abs(c[lead]) <= lead_rtol * scale:
        lead += 1
    trimmed = c[lead:]
    if trimmed.size <= 1:
        return np.zeros(0, dtype=complex)
    roots = np.roots(trimmed).astype(complex)
    dc = np.polyder(trimmed)
    for i, r in enumerate(roots):
        res = abs(np.polyval(c, r))
        for _ in range(polish):
            d = np.polyval(dc, r)
            if d == 0:
                break
            cand = r - np.polyval(trimmed, r) / d
            cand_res = abs(np.polyval(c, cand))
            if not cand_res < res:
                break
            r, res = cand, cand_res
        if not res <= tol:
            raise RootFindingFailure(f"root {r} has residual {res:.3e} > {tol:.3e}")
        roots[i] = r
    # deterministic order: by real part, then imaginary part
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]
