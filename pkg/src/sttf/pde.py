"""Constant-coefficient second-order linear PDE models.

The model is ``sum_ij quad[i][j] d_i d_j phi + sum_i lin[i] d_i phi + zero*phi = u``.
For two variables the classical field names ``a, b, c, d, e, g`` are kept:
``quad = [[a, b/2], [b/2, c]]``, ``lin = (d, e)`` and ``zero = g``.
"""
from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .errors import DimMismatch
from .polynomial import MultiPoly


@dataclass(frozen=True)
class PdeModel:
    dim: int
    quad: tuple[tuple[float, ...], ...]
    lin: tuple[float, ...]
    zero: float = 0.0

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"dim must be at least 2, got {self.dim}")
        quad = tuple(tuple(float(v) for v in row) for row in self.quad)
        lin = tuple(float(v) for v in self.lin)
        if len(quad) != self.dim or any(len(row) != self.dim for row in quad):
            raise DimMismatch(f"quad must be {self.dim}x{self.dim}")
        if len(lin) != self.dim:
            raise DimMismatch(f"lin must have length {self.dim}")
        values = [v for row in quad for v in row] + list(lin) + [float(self.zero)]
        if not all(math.isfinite(v) for v in values):
            raise ValueError("PDE coefficients must be finite")
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if quad[i][j] != quad[j][i]:
                    raise ValueError(f"quad is not symmetric at ({i}, {j})")
        object.__setattr__(self, "quad", quad)
        object.__setattr__(self, "lin", lin)
        object.__setattr__(self, "zero", float(self.zero))

    @classmethod
    def from_coefficients(cls, a=0.0, b=0.0, c=0.0, d=0.0, e=0.0, g=0.0) -> PdeModel:
        """Two-variable model ``a phi_xx + b phi_xy + c phi_yy + d phi_x + e phi_y + g phi``."""
        return cls(2, ((a, b / 2), (b / 2, c)), (d, e), g)

    @classmethod
    def wave(cls, alpha: float) -> PdeModel:
        """``alpha^2 phi_xx - phi_tt = 0`` with the second axis as time."""
        if not alpha > 0:
            raise ValueError("wave speed must be positive")
        return cls.from_coefficients(a=alpha * alpha, c=-1.0)

    @classmethod
    def poisson(cls, dim: int = 3) -> PdeModel:
        eye = tuple(tuple(1.0 if i == j else 0.0 for j in range(dim)) for i in range(dim))
        return cls(dim, eye, (0.0,) * dim, 0.0)

    # classical names, two-variable models only

    def _require_2d(self):
        if self.dim != 2:
            raise DimMismatch("named coefficients a..g exist only for dim=2")

    @property
    def a(self) -> float:
        self._require_2d()
        return self.quad[0][0]

    @property
    def b(self) -> float:
        self._require_2d()
        return 2 * self.quad[0][1]

    @property
    def c(self) -> float:
        self._require_2d()
        return self.quad[1][1]

    @property
    def d(self) -> float:
        self._require_2d()
        return self.lin[0]

    @property
    def e(self) -> float:
        self._require_2d()
        return self.lin[1]

    @property
    def g(self) -> float:
        return self.zero

    def is_zero(self) -> bool:
        return (
            all(v == 0 for row in self.quad for v in row)
            and all(v == 0 for v in self.lin)
            and self.zero == 0
        )

    # -- JSON -----------------------------------------------------------------

    @classmethod
    def from_json_dict(cls, obj: Mapping) -> PdeModel:
        """Parse either the named two-variable form or the general quad/lin form."""
        if "dim" not in obj:
            raise ValueError("PDE description needs a 'dim' field")
        dim = obj["dim"]
        if not isinstance(dim, int) or isinstance(dim, bool):
            raise ValueError("'dim' must be an integer")
        named = {"a", "b", "c", "d", "e"} & set(obj)
        general = {"quad", "lin"} & set(obj)
        if named and general:
            raise ValueError("give either a..g or quad/lin, not both")
        if named or not general:
            if dim != 2:
                raise ValueError("the a..g form is only valid for dim=2")
            unknown = set(obj) - {"dim", "a", "b", "c", "d", "e", "g"}
            if unknown:
                raise ValueError(f"unknown fields {sorted(unknown)}")
            return cls.from_coefficients(**{k: _num(obj, k) for k in "abcdeg"})
        unknown = set(obj) - {"dim", "quad", "lin", "g"}
        if unknown:
            raise ValueError(f"unknown fields {sorted(unknown)}")
        quad = obj.get("quad", [[0.0] * dim for _ in range(dim)])
        lin = obj.get("lin", [0.0] * dim)
        if not _is_matrix(quad) or not _is_vector(lin):
            raise ValueError("'quad' must be a list of lists and 'lin' a list of numbers")
        return cls(dim, tuple(tuple(r) for r in quad), tuple(lin), _num(obj, "g"))

    def to_json_dict(self) -> dict:
        if self.dim == 2:
            return {"dim": 2, "a": self.a, "b": self.b, "c": self.c,
                    "d": self.d, "e": self.e, "g": self.g}
        return {"dim": self.dim, "quad": [list(r) for r in self.quad],
                "lin": list(self.lin), "g": self.zero}


def _num(obj: Mapping, key: str) -> float:
    v = obj.get(key, 0.0)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"field {key!r} must be a number")
    return float(v)


def _is_vector(v) -> bool:
    return isinstance(v, Sequence) and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in v
    )


def _is_matrix(m) -> bool:
    return isinstance(m, Sequence) and all(_is_vector(r) for r in m)


def char_poly_continuous(pde: PdeModel) -> MultiPoly:
    """Characteristic polynomial ``s^T quad s + lin^T s + zero`` in ``s_1..s_n``."""
    n = pde.dim
    terms: dict[tuple[int, ...], float] = {}

    def unit(*axes):
        e = [0] * n
        for ax in axes:
            e[ax] += 1
        return tuple(e)

    for i in range(n):
        terms[unit(i, i)] = pde.quad[i][i]
        for j in range(i + 1, n):
            terms[unit(i, j)] = 2 * pde.quad[i][j]
        terms[unit(i)] = pde.lin[i]
    terms[(0,) * n] = pde.zero
    return MultiPoly(n, terms)
