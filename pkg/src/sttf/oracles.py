"""Independent checks of the discrete machinery.

* ``dft_gain_oracle`` applies the denominator stencil to discrete Fourier
  modes on a periodic grid and compares the gain with the Laurent symbol.
* ``dalembert`` is the closed-form solution of the 1-D wave Cauchy problem.
* ``wave_leapfrog`` is the explicit scheme obtained from the central
  differences, with space along axis 0 and time along axis 1.
"""
from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .discretization import DiscreteSttf, Stencil, stencil_apply_periodic
from .errors import BoundaryContamination, CflViolation


@dataclass(frozen=True)
class PeriodicGrid2D:
    values: np.ndarray

    def __post_init__(self):
        if self.values.ndim != 2 or min(self.values.shape) < 4:
            raise ValueError("periodic grids must be 2-D with at least 4 points per axis")

    @property
    def n1(self) -> int:
        return self.values.shape[0]

    @property
    def n2(self) -> int:
        return self.values.shape[1]


def fourier_mode(n1: int, n2: int, p: int, q: int) -> PeriodicGrid2D:
    n = np.arange(n1)[:, None]
    m = np.arange(n2)[None, :]
    return PeriodicGrid2D(np.exp(2j * np.pi * (p * n / n1 + q * m / n2)))


def dft_gain_oracle(H: DiscreteSttf, n1: int, n2: int) -> float:
    """Largest ``|stencil(mode)/mode - P(z)|`` over all Fourier modes of the grid."""
    if n1 < 4 or n2 < 4:
        raise ValueError("grid sizes must be at least 4")
    stencil = Stencil.from_symbol(H.denom)
    worst = 0.0
    for p in range(n1):
        for q in range(n2):
            mode = fourier_mode(n1, n2, p, q).values
            gain = stencil_apply_periodic(stencil, mode) / mode
            symbol = H.denom(np.exp(2j * np.pi * p / n1), np.exp(2j * np.pi * q / n2))
            worst = max(worst, float(np.max(np.abs(gain - symbol))))
    return worst


@dataclass(frozen=True)
class CauchyData:
    """Initial displacement ``phi0``, initial velocity ``psi0`` and wave speed.

    ``support`` optionally bounds where the data are nonzero; without it the
    leapfrog simulator estimates the support from the sampled data.
    """

    phi0: Callable[[np.ndarray], np.ndarray]
    psi0: Callable[[np.ndarray], np.ndarray]
    alpha: float
    support: Optional[tuple[float, float]] = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("wave speed must be positive")


def _simpson(f, lo: float, hi: float, steps: int) -> float:
    x = np.linspace(lo, hi, steps + 1)
    w = np.ones(steps + 1)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return float((hi - lo) / (3 * steps) * np.dot(w, np.asarray(f(x), dtype=float)))


def dalembert(data: CauchyData, x: float, t: float, quad_steps: int = 64) -> float:
    """Closed-form solution, integral term by composite Simpson."""
    if quad_steps < 2 or quad_steps % 2:
        raise ValueError("quad_steps must be even and at least 2")
    if t < 0:
        raise ValueError("t must be nonnegative")
    a = data.alpha
    left, right = x - a * t, x + a * t
    travel = 0.5 * (float(data.phi0(np.asarray(left))) + float(data.phi0(np.asarray(right))))
    if t == 0:
        return travel
    return travel + _simpson(data.psi0, left, right, quad_steps) / (2 * a)


@dataclass(frozen=True)
class SpaceTimeField:
    x: np.ndarray
    t: np.ndarray
    values: np.ndarray  # shape (len(x), len(t)); axis 0 space, axis 1 time
    h: float
    k: float
    alpha: float

    @property
    def lam(self) -> float:
        return self.alpha**2 * self.k**2 / self.h**2


def _support(data: CauchyData, x: np.ndarray, rtol: float = 1e-14) -> Optional[tuple[float, float]]:
    if data.support is not None:
        return data.support
    mag = np.abs(data.phi0(x)) + np.abs(data.psi0(x))
    if not np.any(mag):
        return None
    nz = np.flatnonzero(mag > rtol * mag.max())
    return float(x[nz[0]]), float(x[nz[-1]])


def wave_leapfrog(data: CauchyData, h: float, k: float, half_width: float, steps: int) -> SpaceTimeField:
    """March ``phi_tt = alpha^2 phi_xx`` with the centred three-level scheme.

    ``phi[n, m+1] = 2 phi[n, m] - phi[n, m-1] + lam (phi[n+1, m] - 2 phi[n, m] + phi[n-1, m])``
    seeded with the second-order Taylor start.  The ends are held at zero
    and must never be reached by the light cone of the data.
    """
    if not (h > 0 and k > 0 and half_width > 0) or steps < 1:
        raise ValueError("h, k, half_width must be positive and steps >= 1")
    lam = data.alpha**2 * k**2 / h**2
    if lam > 1 + 1e-12:
        raise CflViolation(f"lambda = {lam:.6g} exceeds 1")
    n_half = int(round(half_width / h))
    x = h * np.arange(-n_half, n_half + 1)
    t = k * np.arange(steps + 1)
    supp = _support(data, x)
    if supp is not None:
        reach = data.alpha * t[-1]
        if supp[0] - reach <= x[0] or supp[1] + reach >= x[-1]:
            raise BoundaryContamination(
                f"support {supp} widened by {reach:.6g} reaches the boundary at +/-{x[-1]:.6g}"
            )
    phi = np.zeros((x.size, steps + 1))
    phi[:, 0] = data.phi0(x)
    phi[0, 0] = phi[-1, 0] = 0.0
    lap = np.zeros(x.size)
    lap[1:-1] = phi[2:, 0] - 2 * phi[1:-1, 0] + phi[:-2, 0]
    phi[1:-1, 1] = phi[1:-1, 0] + k * data.psi0(x[1:-1]) + 0.5 * lam * lap[1:-1]
    for m in range(1, steps):
        cur, prev = phi[:, m], phi[:, m - 1]
        phi[1:-1, m + 1] = (
            2 * cur[1:-1] - prev[1:-1] + lam * (cur[2:] - 2 * cur[1:-1] + cur[:-2])
        )
    return SpaceTimeField(x, t, phi, h, k, data.alpha)


def leapfrog_error(data: CauchyData, h: float, k: float, half_width: float, t_end: float,
                   quad_steps: int = 64) -> float:
    """Max-norm error against d'Alembert at ``t_end`` (``t_end/k`` must be an integer)."""
    steps = int(round(t_end / k))
    if not math.isclose(steps * k, t_end, rel_tol=1e-9):
        raise ValueError("t_end must be a whole number of time steps")
    sim = wave_leapfrog(data, h, k, half_width, steps)
    exact = np.array([dalembert(data, xi, sim.t[-1], quad_steps) for xi in sim.x])
    return float(np.max(np.abs(sim.values[:, -1] - exact)))


def convergence_orders(errors) -> list[float]:
    e = np.asarray(errors, dtype=float)
    return list(np.log2(e[:-1] / e[1:]))


def gaussian_data(alpha: float, width: float = 0.25, amplitude: float = 1.0, *,
                  kappa: float = 0.0, travelling: bool = False) -> CauchyData:
    """Gaussian packet ``A exp(-x^2 / 2 w^2) cos(kappa x)``.

    With ``travelling=True`` the initial velocity makes it move right only.
    """
    def phi0(x):
        x = np.asarray(x, dtype=float)
        return amplitude * np.exp(-0.5 * (x / width) ** 2) * np.cos(kappa * x)

    def psi0(x):
        if not travelling:
            return np.zeros_like(np.asarray(x, dtype=float))
        x = np.asarray(x, dtype=float)
        env = amplitude * np.exp(-0.5 * (x / width) ** 2)
        dphi = env * (-(x / width**2) * np.cos(kappa * x) - kappa * np.sin(kappa * x))
        return -alpha * dphi

    return CauchyData(phi0, psi0, alpha)


def measured_dispersion(sim: SpaceTimeField, kappa: float) -> tuple[float, float]:
    """Temporal frequency of the spatial Fourier component nearest ``kappa``.

    Returns ``(wavenumber actually used, |omega|)``; omega is the slope of the
    unwrapped phase of that component over time.
    """
    n = sim.x.size
    freqs = 2 * np.pi * np.fft.fftfreq(n, d=sim.h)
    j = int(np.argmin(np.abs(freqs - kappa)))
    kap = float(freqs[j])
    coeff = np.exp(-1j * kap * sim.x) @ sim.values
    phase = np.unwrap(np.angle(coeff))
    slope = np.polyfit(sim.t, phase, 1)[0]
    return kap, float(abs(slope))


def discrete_wave_frequency(alpha: float, h: float, k: float, kappa: float) -> float:
    """Temporal frequency the leapfrog scheme assigns to wavenumber ``kappa``."""
    lam = alpha**2 * k**2 / h**2
    return 2 / k * math.asin(math.sqrt(lam) * math.sin(kappa * h / 2))
