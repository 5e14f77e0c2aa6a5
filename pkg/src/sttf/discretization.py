"""Central-difference discretization and the discrete transfer function ``1/P(z1, z2)``.

Shift convention: a tap at grid offset ``(dn, dm)`` contributes the monomial
``z1**dn * z2**dm``.  Under it the literal cross-derivative stencil maps onto
the ``c1`` terms of the discrete characteristic polynomial term for term.

Two cross-derivative readings are offered.  ``StencilMode.PAPER_LITERAL``
keeps the literal taps, which evaluate to ``-phi_xy`` on the probe
``phi = x*y``; ``StencilMode.CORRECTED_CROSS`` negates them and is
consistent with ``phi_xy``.  All other stencils are shared.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .continuous import Pole, pole_threshold
from .errors import DegeneratePde, DimMismatch, OutOfBounds
from .pde import PdeModel
from .polynomial import MultiPoly


class StencilMode(enum.Enum):
    PAPER_LITERAL = "paper"
    CORRECTED_CROSS = "corrected"

    @classmethod
    def parse(cls, value) -> StencilMode:
        if isinstance(value, cls):
            return value
        for m in cls:
            if value in (m.value, m.name):
                return m
        raise ValueError(f"unknown stencil mode {value!r}")


@dataclass(frozen=True)
class GridSpacing:
    h: float
    k: float

    def __post_init__(self):
        if not (self.h > 0 and self.k > 0 and np.isfinite(self.h) and np.isfinite(self.k)):
            raise ValueError(f"grid spacings must be positive and finite, got h={self.h}, k={self.k}")


class Stencil:
    """Finite set of taps ``{(dn, dm): weight}``."""

    __slots__ = ("_taps",)

    def __init__(self, taps: Mapping[tuple[int, int], float]):
        clean = {}
        for off, w in taps.items():
            off = (int(off[0]), int(off[1]))
            if not np.isfinite(w):
                raise ValueError(f"non-finite weight at {off}")
            if w != 0:
                clean[off] = w
        self._taps = dict(sorted(clean.items()))

    @property
    def taps(self) -> Mapping[tuple[int, int], float]:
        return MappingProxyType(self._taps)

    def __eq__(self, other):
        return isinstance(other, Stencil) and self._taps == other._taps

    def __repr__(self):
        return f"Stencil({self._taps})"

    def symbol(self) -> MultiPoly:
        """Laurent symbol: offset ``(dn, dm)`` becomes ``z1**dn z2**dm``."""
        return MultiPoly(2, self._taps)

    @classmethod
    def from_symbol(cls, p: MultiPoly) -> Stencil:
        if p.dim != 2:
            raise DimMismatch("stencils are two-dimensional")
        return cls(dict(p.items()))


def central_stencils(spacing: GridSpacing, mode=StencilMode.PAPER_LITERAL) -> dict[str, Stencil]:
    mode = StencilMode.parse(mode)
    h, k = spacing.h, spacing.k
    cross = 1.0 / (4 * h * k)
    if mode is StencilMode.CORRECTED_CROSS:
        cross = -cross
    return {
        "x": Stencil({(1, 0): 1 / (2 * h), (-1, 0): -1 / (2 * h)}),
        "y": Stencil({(0, 1): 1 / (2 * k), (0, -1): -1 / (2 * k)}),
        "xx": Stencil({(1, 0): 1 / h**2, (0, 0): -2 / h**2, (-1, 0): 1 / h**2}),
        "yy": Stencil({(0, 1): 1 / k**2, (0, 0): -2 / k**2, (0, -1): 1 / k**2}),
        "xy": Stencil({(1, -1): cross, (-1, -1): -cross, (1, 1): -cross, (-1, 1): cross}),
    }


def discrete_coefficients(pde: PdeModel, spacing: GridSpacing) -> tuple[float, ...]:
    """``(c1, ..., c6)`` of the discrete characteristic polynomial."""
    if pde.dim != 2:
        raise DimMismatch("discretization is two-dimensional")
    a, b, c, d, e, g = pde.a, pde.b, pde.c, pde.d, pde.e, pde.g
    h, k = spacing.h, spacing.k
    return (
        b / (4 * h * k),
        a / h**2 + d / (2 * h),
        c / k**2 + e / (2 * k),
        a / h**2 - d / (2 * h),
        c / k**2 - e / (2 * k),
        g - 2 * a / h**2 - 2 * c / k**2,
    )


def discrete_char_poly(pde: PdeModel, spacing: GridSpacing, mode=StencilMode.PAPER_LITERAL) -> MultiPoly:
    mode = StencilMode.parse(mode)
    c1, c2, c3, c4, c5, c6 = discrete_coefficients(pde, spacing)
    if mode is StencilMode.CORRECTED_CROSS:
        c1 = -c1
    return MultiPoly(2, [
        ((1, -1), c1), ((-1, -1), -c1), ((1, 1), -c1), ((-1, 1), c1),
        ((1, 0), c2), ((0, 1), c3), ((-1, 0), c4), ((0, -1), c5), ((0, 0), c6),
    ])


@dataclass(frozen=True)
class DiscreteSttf:
    denom: MultiPoly
    spacing: GridSpacing
    mode: StencilMode = StencilMode.PAPER_LITERAL

    def __post_init__(self):
        if self.denom.is_zero():
            raise DegeneratePde("discrete transfer function with zero denominator")

    def to_json_dict(self) -> dict:
        return {"terms": self.denom.to_json(), "h": self.spacing.h,
                "k": self.spacing.k, "mode": self.mode.value}

    @classmethod
    def from_json_dict(cls, obj) -> DiscreteSttf:
        return cls(MultiPoly.from_json(2, obj["terms"]), GridSpacing(obj["h"], obj["k"]),
                   StencilMode.parse(obj["mode"]))


def discrete_sttf(pde: PdeModel, spacing: GridSpacing, mode=StencilMode.PAPER_LITERAL) -> DiscreteSttf:
    mode = StencilMode.parse(mode)
    return DiscreteSttf(discrete_char_poly(pde, spacing, mode), spacing, mode)


def discrete_freq_response(H: DiscreteSttf, theta: tuple[float, float]) -> complex | Pole:
    """``1/P(e^{j theta1}, e^{j theta2})`` or a :class:`Pole` marker."""
    t1, t2 = (float(t) for t in theta)
    p = H.denom(np.exp(1j * t1), np.exp(1j * t2))
    if abs(p) < pole_threshold(H.denom):
        return Pole(abs(p))
    return 1.0 / p


def stencil_apply(s: Stencil, field: np.ndarray, n: int, m: int, *, wrap: bool = False):
    """``sum w * field[n + dn, m + dm]`` at one grid point."""
    n1, n2 = field.shape
    total = 0.0
    for (dn, dm), w in s.taps.items():
        i, j = n + dn, m + dm
        if wrap:
            i, j = i % n1, j % n2
        elif not (0 <= i < n1 and 0 <= j < n2):
            raise OutOfBounds(f"tap {(dn, dm)} at ({n}, {m}) leaves a {n1}x{n2} array")
        total = total + w * field[i, j]
    return total


def stencil_apply_periodic(s: Stencil, field: np.ndarray) -> np.ndarray:
    """Apply ``s`` at every point of a periodic grid."""
    out = np.zeros_like(field)
    for (dn, dm), w in s.taps.items():
        out = out + w * np.roll(field, shift=(-dn, -dm), axis=(0, 1))
    return out
