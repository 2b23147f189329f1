"""Physical specification of a cyclic spin-1/2 XYZ chain in a transverse field.

The Hamiltonian is

    H = b S_z - sum_{i<j} r_{j-i} (v_x s_x^i s_x^j + v_y s_y^i s_y^j + v_z s_z^i s_z^j)

with a range profile ``r_1 .. r_{n-1}`` satisfying ``r_l = r_{n-l}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import NonCanonicalSpec

_SYM_TOL = 1e-12


def nearest_neighbor_range(n: int) -> tuple[float, ...]:
    """``r_l = delta_{l,1} + delta_{l,n-1}``; for n = 2 both deltas hit l = 1."""
    r = [0.0] * (n - 1)
    r[0] += 1.0
    r[n - 2] += 1.0
    return tuple(r)


def full_range(n: int) -> tuple[float, ...]:
    """Constant profile ``r_l = 2/(n-1)``, normalized so that r = 1."""
    return tuple([2.0 / (n - 1)] * (n - 1))


@dataclass(frozen=True)
class ChainSpec:
    n: int
    vx: float
    vy: float
    vz: float
    range: tuple[float, ...] = field(default=())
    b: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise NonCanonicalSpec(f"n must be an integer >= 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        rng = self.range if len(self.range) else nearest_neighbor_range(self.n)
        rng = tuple(float(x) for x in rng)
        object.__setattr__(self, "range", rng)
        for name in ("vx", "vy", "vz", "b"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise NonCanonicalSpec(f"{name} must be finite")
            object.__setattr__(self, name, val)
        if len(rng) != self.n - 1:
            raise NonCanonicalSpec(
                f"range profile needs n-1 = {self.n - 1} entries, got {len(rng)}"
            )
        if not all(math.isfinite(x) for x in rng):
            raise NonCanonicalSpec("range profile must be finite")
        for l in range(1, self.n):
            if abs(rng[l - 1] - rng[self.n - l - 1]) > _SYM_TOL:
                raise NonCanonicalSpec(f"range profile not cyclic: r_{l} != r_{self.n - l}")
        if self.b < 0:
            raise NonCanonicalSpec("field must satisfy b >= 0 (use field-sign symmetry)")
        if self.vx < abs(self.vy):
            raise NonCanonicalSpec("couplings must satisfy v_x >= |v_y|")

    @classmethod
    def nearest_neighbor(cls, n: int, vx: float, vy: float, vz: float = 0.0, b: float = 0.0):
        return cls(n, vx, vy, vz, nearest_neighbor_range(n), b)

    @classmethod
    def fully_connected(cls, n: int, vx: float, vy: float, vz: float = 0.0, b: float = 0.0):
        return cls(n, vx, vy, vz, full_range(n), b)

    @classmethod
    def from_keyword(cls, n, vx, vy, vz, range_, b=0.0):
        """Build from a range keyword ``"nn"``/``"full"`` or an explicit list."""
        if isinstance(range_, str):
            if range_ == "nn":
                return cls.nearest_neighbor(n, vx, vy, vz, b)
            if range_ == "full":
                return cls.fully_connected(n, vx, vy, vz, b)
            raise NonCanonicalSpec(f"unknown range keyword {range_!r}")
        return cls(n, vx, vy, vz, tuple(range_), b)

    def with_field(self, b: float) -> "ChainSpec":
        return replace(self, b=float(b))

    @property
    def v_plus(self) -> float:
        return 0.5 * (self.vx + self.vy)

    @property
    def v_minus(self) -> float:
        return 0.5 * (self.vx - self.vy)

    @property
    def r(self) -> float:
        """Half-sum of the range weights."""
        return 0.5 * math.fsum(self.range)

    @property
    def attractive(self) -> bool:
        return all(x >= 0 for x in self.range)

    @property
    def b_c(self) -> float:
        """Field beyond which the mean-field ground state is fully aligned."""
        return self.r * (self.vx - self.vz)

    def is_nearest_neighbor(self, tol: float = 1e-12) -> bool:
        return np.allclose(self.range, nearest_neighbor_range(self.n), rtol=0, atol=tol)

    def is_fully_connected(self, tol: float = 1e-12) -> bool:
        return np.allclose(self.range, full_range(self.n), rtol=0, atol=tol)

    def range_weight(self, i: int, j: int) -> float:
        """Coupling weight between sites i and j (0-based)."""
        l = (j - i) % self.n
        return self.range[l - 1]
