"""BIBO stability of two-variable discrete characteristic polynomials.

The test works on the cleared polynomial ``Q`` (negative powers multiplied
away) and checks the two zero-freeness conditions

* A: ``Q(z1, 0) != 0`` for ``|z1| <= 1``
* B: ``Q(z1, z2) != 0`` for ``|z1| = 1`` and ``|z2| <= 1``

exactly as stated, with ``z`` (not ``z**-1``) as the disc variable.
Condition B is swept over ``theta1`` and every ``z2`` root is certified by
its residual.  A numerical band ``eps_circle`` around the unit circle
separates marginal zeros from interior ones.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .discretization import GridSpacing, StencilMode, discrete_char_poly
from .errors import DimMismatch
from .pde import PdeModel
from .polynomial import MultiPoly, certified_roots

DEFAULT_RESOLUTION = 2048
DEFAULT_EPS_CIRCLE = 1e-7
REFINE_WIDTH = 1e-6
REFINE_BAND = 0.05  # near-misses closer than this to the circle get a local search


class Verdict(enum.Enum):
    STABLE = "STABLE"
    MARGINALLY_STABLE = "MARGINAL"
    UNSTABLE = "UNSTABLE"


@dataclass(frozen=True)
class ClearedPoly:
    poly: MultiPoly
    clearing_expo: tuple[int, int]


def clear_negative_exponents(p: MultiPoly) -> ClearedPoly:
    """Multiply by the smallest ``z1**m z2**n`` that leaves no negative power."""
    if p.dim != 2:
        raise DimMismatch("clearing is implemented for two variables")
    shift = tuple(max(0, -e) for e in p.min_exponents())
    return ClearedPoly(p.mul_monomial(shift), shift)


@dataclass(frozen=True)
class Witness:
    """A zero of ``Q`` in the closed test region.

    For condition B, ``theta1`` is the angle of ``z1`` on the unit circle
    and ``root`` the offending ``z2``.  For condition A, ``theta1`` is None
    and ``root`` is the ``z1`` zero of ``Q(z1, 0)``.
    """

    condition: str
    theta1: Optional[float]
    root: complex
    inside: bool

    def to_json_dict(self) -> dict:
        return {"theta1": self.theta1, "root_re": self.root.real, "root_im": self.root.imag,
                "condition": self.condition, "inside": self.inside}


@dataclass(frozen=True)
class ConditionAZero:
    root: complex
    artifact: bool  # origin zero introduced by clearing

    def to_json_dict(self) -> dict:
        return {"re": self.root.real, "im": self.root.imag, "artifact": self.artifact}


@dataclass(frozen=True)
class StabilityReport:
    verdict: Verdict
    min_modulus: float
    min_modulus_at: tuple[float, float]
    witnesses: tuple[Witness, ...]
    condition_a_zeros: tuple[ConditionAZero, ...]
    sweep_resolution: int
    eps_circle: float = DEFAULT_EPS_CIRCLE
    mode: Optional[str] = None

    @property
    def inside_witnesses(self) -> list[Witness]:
        return [w for w in self.witnesses if w.inside]

    @property
    def circle_witnesses(self) -> list[Witness]:
        return [w for w in self.witnesses if not w.inside]

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "min_modulus": self.min_modulus,
            "min_modulus_at": list(self.min_modulus_at),
            "witnesses": [w.to_json_dict() for w in self.witnesses],
            "condition_a_zeros": [z.to_json_dict() for z in self.condition_a_zeros],
            "resolution": self.sweep_resolution,
            "eps_circle": self.eps_circle,
            "mode": self.mode,
        }


def min_modulus_on_torus(p: MultiPoly, resolution: int, *, chunk: int = 256):
    """Minimum of ``|p|`` on the ``resolution x resolution`` grid of the unit bicircle.

    Returns ``(value, (theta1, theta2))``; ties go to the lexicographically
    first angle pair.
    """
    if p.dim != 2:
        raise DimMismatch("torus sweep needs a two-variable polynomial")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    theta = 2 * np.pi * np.arange(resolution) / resolution
    z = np.exp(1j * theta)
    best, best_at = np.inf, (0, 0)
    for start in range(0, resolution, chunk):
        rows = slice(start, min(start + chunk, resolution))
        mod = np.abs(p.evaluate(z[rows, None], z[None, :]))
        i, j = np.unravel_index(np.argmin(mod), mod.shape)
        if mod[i, j] < best:
            best, best_at = float(mod[i, j]), (start + int(i), int(j))
    return best, (float(theta[best_at[0]]), float(theta[best_at[1]]))


def _z2_roots(q: MultiPoly, theta1: float, tol: float) -> np.ndarray:
    coeffs = q.univariate_coeffs(1, {0: np.exp(1j * theta1)})
    return certified_roots(coeffs, tol)


def _min_mod(roots: np.ndarray) -> float:
    return float(np.min(np.abs(roots))) if roots.size else math.inf


def _ternary_min(f, lo: float, hi: float, width: float) -> float:
    while hi - lo > width:
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if f(m1) <= f(m2):
            hi = m2
        else:
            lo = m1
    return 0.5 * (lo + hi)


def huang_test(
    Q: ClearedPoly,
    sweep_resolution: int = DEFAULT_RESOLUTION,
    eps_circle: float = DEFAULT_EPS_CIRCLE,
) -> StabilityReport:
    q = Q.poly
    if q.has_negative_exponents():
        raise ValueError("huang_test expects a cleared polynomial")
    if sweep_resolution < 3:
        raise ValueError("sweep_resolution must be at least 3")
    tol = 1e-8 * (1.0 + q.max_abs_coeff())
    witnesses: list[Witness] = []
    a_zeros: list[ConditionAZero] = []

    # condition A
    qa = {e[0]: c for e, c in q.items() if e[1] == 0}
    if qa:
        low = min(qa)
        n_artifacts = min(low, Q.clearing_expo[0])
        for i in range(low):
            a_zeros.append(ConditionAZero(0j, artifact=i < n_artifacts))
            if i >= n_artifacts:
                witnesses.append(Witness("A", None, 0j, inside=True))
        deg = max(qa)
        coeffs = np.array([qa.get(p, 0) for p in range(deg, low - 1, -1)], dtype=complex)
        for r in certified_roots(coeffs, tol):
            mod = abs(r)
            if mod <= 1 + eps_circle:
                a_zeros.append(ConditionAZero(complex(r), artifact=False))
                witnesses.append(Witness("A", None, complex(r), inside=mod < 1 - eps_circle))

    # condition B
    if q.max_exponents()[1] > 0:
        thetas = 2 * np.pi * np.arange(sweep_resolution) / sweep_resolution
        roots = [_z2_roots(q, t, tol) for t in thetas]
        mins = np.array([_min_mod(r) for r in roots])
        sampled = list(zip(thetas.tolist(), roots))

        step = thetas[1] - thetas[0]
        n = sweep_resolution
        for i in range(n):
            m, left, right = mins[i], mins[i - 1], mins[(i + 1) % n]
            if not (m < left and m < right):
                continue
            if abs(m - 1) <= eps_circle or m > 1 + REFINE_BAND:
                continue
            t_star = _ternary_min(
                lambda t: _min_mod(_z2_roots(q, t, tol)),
                thetas[i] - step, thetas[i] + step, REFINE_WIDTH,
            ) % (2 * np.pi)
            sampled.append((float(t_star), _z2_roots(q, t_star, tol)))

        for t, rts in sorted(sampled, key=lambda s: s[0]):
            for r in rts:
                mod = abs(r)
                if mod < 1 - eps_circle:
                    witnesses.append(Witness("B", t, complex(r), inside=True))
                elif mod <= 1 + eps_circle:
                    witnesses.append(Witness("B", t, complex(r), inside=False))

    if any(w.inside for w in witnesses):
        verdict = Verdict.UNSTABLE
    elif witnesses or a_zeros:
        verdict = Verdict.MARGINALLY_STABLE
    else:
        verdict = Verdict.STABLE
    min_mod, at = min_modulus_on_torus(q, sweep_resolution)
    return StabilityReport(
        verdict, min_mod, at, tuple(witnesses), tuple(a_zeros), sweep_resolution, eps_circle
    )


def classify(
    pde: PdeModel,
    spacing: GridSpacing,
    mode=StencilMode.PAPER_LITERAL,
    sweep_resolution: int = DEFAULT_RESOLUTION,
    eps_circle: float = DEFAULT_EPS_CIRCLE,
) -> StabilityReport:
    """Discretize, clear and test in one call."""
    mode = StencilMode.parse(mode)
    cleared = clear_negative_exponents(discrete_char_poly(pde, spacing, mode))
    report = huang_test(cleared, sweep_resolution, eps_circle)
    return StabilityReport(**{**report.__dict__, "mode": mode.value})


# -- wave equation specifics ----------------------------------------------------


@dataclass(frozen=True)
class WaveStabilityParams:
    lam: float
    cfl_ok: bool = field(init=False)

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        object.__setattr__(self, "cfl_ok", self.lam <= 1)

    @classmethod
    def from_grid(cls, alpha: float, spacing: GridSpacing) -> WaveStabilityParams:
        return cls(alpha**2 * spacing.k**2 / spacing.h**2)


def wave_q0(lam: float) -> MultiPoly:
    """``(z2 + 1/z2 - 2) - lam (z1 + 1/z1 - 2)``."""
    return MultiPoly(2, {(0, 1): 1, (0, -1): 1, (1, 0): -lam, (-1, 0): -lam, (0, 0): 2 * lam - 2})


def wave_cleared(lam: float) -> MultiPoly:
    """``z1 (1 - z2)^2 - lam z2 (1 - z1)^2``."""
    return MultiPoly(2, {(1, 0): 1, (1, 1): 2 * lam - 2, (1, 2): 1, (0, 1): -lam, (2, 1): -lam})


def wave_critical_curve(params: WaveStabilityParams, theta1: float) -> Optional[float]:
    """``theta2 in [0, pi]`` with ``cos theta2 = 1 - lam + lam cos theta1``, if any."""
    arg = 1 - params.lam + params.lam * math.cos(theta1)
    if arg < -1 or arg > 1:
        return None
    return math.acos(arg)
