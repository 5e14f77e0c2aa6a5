"""Continuous transfer functions ``G(s) = 1/P(s)`` and their frequency responses.

Frequency responses are taken on the imaginary axes, ``s_k = j*omega_k``.
The separable damped-sine input used for the Poisson example enters through
its closed-form spectrum; arbitrary inputs are out of reach by design.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstantRestriction, DegeneratePde, DimMismatch
from .pde import PdeModel, char_poly_continuous
from .polynomial import MultiPoly, certified_roots

MASKED_VALUE = 0j  # stored in SpectrumField.values wherever pole_mask is set


@dataclass(frozen=True)
class Pole:
    """Marker returned instead of ``1/P`` when ``|P|`` is below the pole threshold."""

    modulus: float


def pole_threshold(p: MultiPoly) -> float:
    return 1e-12 * (1.0 + p.sum_abs_coeff())


@dataclass(frozen=True)
class Sttf:
    denom: MultiPoly

    def __post_init__(self):
        if self.denom.is_zero():
            raise DegeneratePde("transfer function with zero denominator")

    @property
    def dim(self) -> int:
        return self.denom.dim


def sttf_from_pde(pde: PdeModel) -> Sttf:
    if pde.is_zero():
        raise DegeneratePde("all PDE coefficients are zero")
    return Sttf(char_poly_continuous(pde))


def _response_arrays(g: Sttf, omegas: Sequence[np.ndarray]):
    """``(1/P(j omega), mask, |P|)`` elementwise; masked entries hold MASKED_VALUE."""
    shape = np.broadcast_shapes(*(np.shape(w) for w in omegas))
    p = g.denom.evaluate(*(np.atleast_1d(1j * np.asarray(w, dtype=float)) for w in omegas))
    mod = np.abs(p)
    mask = mod < pole_threshold(g.denom)
    safe = np.where(mask, 1.0, p)
    vals = np.where(mask, MASKED_VALUE, 1.0 / safe)
    return vals.reshape(shape), mask.reshape(shape), mod.reshape(shape)


def freq_response(g: Sttf, w: Sequence[float]) -> complex | Pole:
    w = np.asarray(w, dtype=float)
    if w.shape != (g.dim,):
        raise DimMismatch(f"frequency point must have {g.dim} entries")
    if not np.all(np.isfinite(w)):
        raise ValueError("frequency point must be finite")
    vals, mask, mod = _response_arrays(g, list(w))
    if mask:
        return Pole(float(mod))
    return complex(vals)


def dispersion_roots(pde: PdeModel, fixed: tuple[int, float]) -> list[complex]:
    """Solve ``P(j omega) = 0`` for the free frequency of a two-variable model.

    ``fixed`` is ``(axis, value)`` for the frequency held constant.  Real
    roots come back with an exactly zero imaginary part.
    """
    if pde.dim != 2:
        raise DimMismatch("dispersion roots are only defined for dim=2")
    axis, value = fixed
    if axis not in (0, 1):
        raise ValueError(f"axis must be 0 or 1, got {axis}")
    p = char_poly_continuous(pde)
    free = 1 - axis
    coeffs = p.univariate_coeffs(free, {axis: 1j * float(value)})
    nz = np.flatnonzero(coeffs)
    if nz.size == 0 or nz[0] == coeffs.size - 1:
        raise ConstantRestriction(f"P does not depend on s{free + 1} once s{axis + 1} is fixed")
    tol = 1e-9 * (1.0 + np.max(np.abs(coeffs)))
    s_roots = certified_roots(coeffs, tol)
    out = []
    for s in s_roots:
        w = complex(s / 1j)
        re = w.real if abs(w.real) > 1e-9 else 0.0
        im = w.imag if abs(w.imag) > 1e-9 else 0.0
        out.append(complex(re, im))
    out.sort(key=lambda z: (z.real, z.imag))
    return out


@dataclass(frozen=True)
class SeparableDampedSineInput:
    """``K exp(-sum a_k x_k) prod sin(w'_k x_k)`` described by its parameters."""

    gain: float
    decay: tuple[float, ...]
    carrier: tuple[float, ...]

    def __post_init__(self):
        decay = tuple(float(v) for v in self.decay)
        carrier = tuple(float(v) for v in self.carrier)
        if len(decay) != len(carrier) or not decay:
            raise DimMismatch("decay and carrier must be non-empty and of equal length")
        if not all(v > 0 for v in decay):
            raise ValueError("decay rates must be strictly positive")
        if not all(v > 0 for v in carrier):
            raise ValueError("carrier frequencies must be strictly positive")
        if not np.isfinite(self.gain) or not all(np.isfinite(decay + carrier)):
            raise ValueError("input parameters must be finite")
        object.__setattr__(self, "gain", float(self.gain))
        object.__setattr__(self, "decay", decay)
        object.__setattr__(self, "carrier", carrier)

    @property
    def dim(self) -> int:
        return len(self.decay)


def _input_arrays(u: SeparableDampedSineInput, omegas: Sequence[np.ndarray]):
    shape = np.broadcast_shapes(*(np.shape(w) for w in omegas))
    out = np.full(shape or (1,), u.gain, dtype=complex)
    for a, wp, w in zip(u.decay, u.carrier, omegas):
        w = np.atleast_1d(np.asarray(w, dtype=float))
        factor = (a * a + wp * wp - w * w) + 2j * a * w
        out = out * (wp / factor)
    return out.reshape(shape)


def input_spectrum(u: SeparableDampedSineInput, w: Sequence[float]) -> complex:
    """``K prod_k w'_k / ((a_k^2 + w'_k^2 - w_k^2) + 2j a_k w_k)``."""
    w = np.asarray(w, dtype=float)
    if w.shape != (u.dim,):
        raise DimMismatch(f"frequency point must have {u.dim} entries")
    return complex(_input_arrays(u, list(w)))


@dataclass(frozen=True)
class SpectrumField:
    axes: tuple[np.ndarray, ...]
    values: np.ndarray
    pole_mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        shape = tuple(len(a) for a in self.axes)
        if self.values.shape != shape or self.pole_mask.shape != shape:
            raise DimMismatch(f"field shape must be {shape}")

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape


def _check_axes(axes) -> tuple[np.ndarray, ...]:
    out = []
    for ax in axes:
        ax = np.asarray(ax, dtype=float).ravel()
        if ax.size == 0 or not np.all(np.isfinite(ax)):
            raise ValueError("grid axes must be non-empty and finite")
        if np.any(np.diff(ax) <= 0):
            raise ValueError("grid axes must be strictly increasing")
        out.append(ax)
    return tuple(out)


def output_spectrum(g: Sttf, u: SeparableDampedSineInput, axes) -> SpectrumField:
    """``Phi = G * U`` sampled on the outer product of ``axes``."""
    axes = _check_axes(axes)
    if len(axes) != g.dim or u.dim != g.dim:
        raise DimMismatch("grid, transfer function and input must share one dimension")
    mesh = np.meshgrid(*axes, indexing="ij")
    gv, mask, _ = _response_arrays(g, mesh)
    values = np.where(mask, MASKED_VALUE, gv * _input_arrays(u, mesh))
    return SpectrumField(axes, values, mask)


def magnitude_spectrum(f: SpectrumField) -> np.ma.MaskedArray:
    return np.ma.masked_array(np.abs(f.values), mask=f.pole_mask.copy())


def phase_spectrum(f: SpectrumField) -> np.ma.MaskedArray:
    """Four-quadrant phase in ``(-pi, pi]``."""
    ang = np.angle(f.values)
    ang = np.where(ang == -np.pi, np.pi, ang)
    return np.ma.masked_array(ang, mask=f.pole_mask.copy())


def _neighbour_offsets(ndim: int):
    grids = np.meshgrid(*([np.array([-1, 0, 1])] * ndim), indexing="ij")
    offs = np.stack([g.ravel() for g in grids], axis=1)
    return [tuple(o) for o in offs if any(o)]


def _neighbour_table(shape: tuple[int, ...]) -> np.ndarray:
    """Flat index of every in-bounds neighbour of every sample, -1 where outside."""
    idx = np.arange(int(np.prod(shape))).reshape(shape)
    padded = np.pad(idx, 1, mode="constant", constant_values=-1)
    cols = []
    for off in _neighbour_offsets(len(shape)):
        sl = tuple(slice(1 + o, padded.shape[k] - 1 + o) for k, o in enumerate(off))
        cols.append(padded[sl].ravel())
    return np.stack(cols, axis=1)


def topographic_prominence(field: np.ndarray) -> np.ndarray:
    """Prominence of every sample; non-summits get 0.

    Samples are flooded from the top with a union-find over the full
    neighbourhood (8 neighbours in 2-D).  When two basins meet at a saddle
    the lower summit's prominence is its height above that saddle.  The
    global summit is measured down to the global minimum.
    """
    f = np.asarray(field, dtype=float)
    flat = f.ravel().tolist()
    order = np.argsort(-f.ravel(), kind="stable").tolist()
    neighbours = _neighbour_table(f.shape).tolist()
    parent = [-1] * len(flat)
    summit = list(range(len(flat)))
    prom = [0.0] * len(flat)

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    for idx in order:
        parent[idx] = idx
        for j in neighbours[idx]:
            if j < 0 or parent[j] < 0:
                continue
            ri, rj = find(idx), find(j)
            if ri == rj:
                continue
            si, sj = summit[ri], summit[rj]
            if (flat[si], -si) >= (flat[sj], -sj):
                keep, drop = ri, rj
            else:
                keep, drop = rj, ri
            prom[summit[drop]] = flat[summit[drop]] - flat[idx]
            parent[drop] = keep
    top = order[0]
    prom[top] = flat[top] - min(flat)
    return np.asarray(prom).reshape(f.shape)


def find_peaks(f, min_prominence: float = 0.05) -> list[tuple[int, ...]]:
    """Strict local maxima whose prominence is at least ``min_prominence * max``.

    Works on any dimension (2-D is the common case); masked samples never
    count as peaks and never block a neighbour.  Returned indices are sorted
    by value, largest first.
    """
    if np.ma.isMaskedArray(f):
        data = np.ma.filled(f.astype(float), -np.inf)
    else:
        data = np.asarray(f, dtype=float)
    if any(s < 3 for s in data.shape):
        raise ValueError("peak search needs at least 3 samples per axis")
    finite = np.isfinite(data)
    if not finite.any():
        return []
    floor = data[finite].min()
    work = np.where(finite, data, floor)
    padded = np.pad(work, 1, mode="constant", constant_values=-np.inf)
    is_peak = finite.copy()
    core = tuple(slice(1, -1) for _ in range(data.ndim))
    for off in _neighbour_offsets(data.ndim):
        shifted = tuple(slice(1 + o, padded.shape[k] - 1 + o) for k, o in enumerate(off))
        is_peak &= padded[core] > padded[shifted]
    if not is_peak.any():
        return []
    prom = topographic_prominence(work)
    gmax = work.max()
    keep = is_peak & (prom >= min_prominence * gmax)
    idx = [tuple(int(v) for v in i) for i in np.argwhere(keep)]
    idx.sort(key=lambda i: (-work[i], i))
    return idx
