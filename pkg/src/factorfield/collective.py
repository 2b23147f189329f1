"""Fully connected chain solved in the maximum total-spin multiplet.

With the constant profile ``r_l = 2/(n-1)`` the Hamiltonian only involves
collective operators,

    H = b S_z - sum_mu v_mu (S_mu^2 - n/4) / (n - 1),

and the ground state of each parity lives in the ``S = n/2`` multiplet. In the
basis ``|k> ~ S_+^k |0>`` (k = 0..n) the matrix is pentadiagonal; even and odd
k decouple into two tridiagonal blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .chain import ChainSpec
from .concurrence import PairCorrelators
from .errors import NotFullyConnected


@dataclass(frozen=True)
class CollectiveBlock:
    """Banded storage: ``diag[k]`` and ``off2[k] = <k+2|H|k>``."""

    n: int
    diag: np.ndarray
    off2: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        m = np.diag(self.diag)
        idx = np.arange(len(self.off2))
        m[idx + 2, idx] = self.off2
        m[idx, idx + 2] = self.off2
        return m

    def sub_block(self, parity: int):
        start = 0 if parity > 0 else 1
        return self.diag[start::2], self.off2[start::2]


@dataclass(frozen=True)
class CollectiveGroundState:
    n: int
    parity: int
    energy: float
    w: np.ndarray  # length n+1, zero on the other parity

    @property
    def magnetization(self) -> float:
        m = np.arange(self.n + 1) - 0.5 * self.n
        return float(self.w**2 @ m)


def _raise2(n: int) -> np.ndarray:
    """``<k+2| S_+^2 |k>`` for k = 0..n-2."""
    s = 0.5 * n
    m = np.arange(n + 1) - s
    a = np.sqrt(np.clip(s * (s + 1) - m[:-1] * (m[:-1] + 1), 0.0, None))
    return a[:-1] * a[1:]


def build_collective_hamiltonian(spec: ChainSpec) -> CollectiveBlock:
    if not spec.is_fully_connected():
        raise NotFullyConnected("collective model needs the constant profile r_l = 2/(n-1)")
    n = spec.n
    s = 0.5 * n
    m = np.arange(n + 1) - s
    norm = 1.0 / (n - 1)
    # v_x Sx^2 + v_y Sy^2 = v_+ (S^2 - Sz^2) + (v_-/2)(S+^2 + S-^2)
    diag = spec.b * m - norm * (
        spec.v_plus * (s * (s + 1) - m**2) + spec.vz * m**2 - 0.25 * n * (spec.vx + spec.vy + spec.vz)
    )
    off2 = -0.5 * norm * spec.v_minus * _raise2(n)
    return CollectiveBlock(n, diag, off2)


def collective_levels(block: CollectiveBlock, parity: int, levels: int = 1):
    """Lowest ``levels`` eigenpairs of one parity sub-block, vectors embedded in length n+1."""
    d, e = block.sub_block(parity)
    k = min(levels, len(d))
    if len(d) == 1:
        w, v = d.copy(), np.ones((1, 1))
    else:
        w, v = eigh_tridiagonal(d, e, select="i", select_range=(0, k - 1))
    full = np.zeros((block.n + 1, k))
    full[(0 if parity > 0 else 1) :: 2] = v
    for c in range(k):
        nz = np.flatnonzero(np.abs(full[:, c]) > 1e-14)
        if nz.size and full[nz[0], c] < 0:
            full[:, c] *= -1
    return w, full


def collective_ground_state(block: CollectiveBlock, parity: int) -> CollectiveGroundState:
    w, v = collective_levels(block, parity, 1)
    return CollectiveGroundState(block.n, parity, float(w[0]), v[:, 0])


def collective_pair_correlators(gs: CollectiveGroundState) -> PairCorrelators:
    """Two-spin correlators, identical for every pair of sites."""
    n = gs.n
    cn = n * (n - 1)
    w = gs.w
    m = np.arange(n + 1) - 0.5 * n
    sz2 = float(w**2 @ m**2)
    splus2 = float(w[2:] @ (_raise2(n) * w[:-2]))
    sz = gs.magnetization / n
    return PairCorrelators(
        alpha_plus=splus2 / cn,
        alpha_minus=(0.25 * n * n - sz2) / cn,
        szsz=(sz2 - 0.25 * n) / cn,
        sz_i=sz,
        sz_j=sz,
    )
