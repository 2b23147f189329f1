"""Exhaustive diagonalization in the full 2^n computational basis.

Basis index bit k is site k, 1 = spin up, so the all-down state is index 0.
The Hamiltonian is block diagonal in the S_z parity ``(-1)**n_up``; each
parity block is diagonalized densely, except that the few lowest levels of
large blocks come from Lanczos iteration. This module is the reference every
other route is checked against, so it is written for clarity, not speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .chain import ChainSpec
from .closed_forms import factorization_point, parity_state_vector, separable_state_amplitudes
from .concurrence import reduced_two_spin
from .errors import NonPositiveTemperature, SizeTooLarge

MAX_SITES = 14
MAX_THERMAL_SITES = 12
DEGENERACY_GAP = 1e-11
LANCZOS_DIM = 512  # blocks above this size use eigsh when only low levels are wanted


def popcount(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(2**n, dtype=np.uint64)).astype(np.int64)


def sector_indices(n: int, parity: int) -> np.ndarray:
    """Basis indices with ``(-1)**n_up == parity``."""
    even = popcount(n) % 2 == 0
    return np.flatnonzero(even if parity > 0 else ~even)


@dataclass
class DenseHamiltonian:
    """Hamiltonian of a chain; ``matrix`` is held sparse, blocks are densified on demand."""

    spec: ChainSpec
    matrix: sp.csr_matrix

    @property
    def n(self) -> int:
        return self.spec.n

    def block(self, parity: int) -> np.ndarray:
        return self.sparse_block(parity).toarray()

    def sparse_block(self, parity: int) -> sp.csr_matrix:
        idx = sector_indices(self.n, parity)
        return self.matrix[idx][:, idx]

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ v


def build_hamiltonian(spec: ChainSpec) -> DenseHamiltonian:
    n = spec.n
    if n > MAX_SITES:
        raise SizeTooLarge(f"oracle limited to n <= {MAX_SITES}, got {n}")
    dim = 2**n
    states = np.arange(dim, dtype=np.int64)
    bits = [(states >> i) & 1 for i in range(n)]
    diag = spec.b * (popcount(n) - 0.5 * n).astype(float)
    rows, cols, vals = [], [], []
    vp, vm = spec.v_plus, spec.v_minus
    for i in range(n):
        for j in range(i + 1, n):
            r = spec.range[j - i - 1]
            if r == 0.0:
                continue
            same = bits[i] == bits[j]
            diag -= r * spec.vz * np.where(same, 0.25, -0.25)
            amp = -0.5 * r * np.where(same, vm, vp)
            keep = amp != 0.0
            rows.append(states[keep] ^ ((1 << i) | (1 << j)))
            cols.append(states[keep])
            vals.append(amp[keep])
    rows.append(states)
    cols.append(states)
    vals.append(diag)
    m = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
    ).tocsr()
    m.sum_duplicates()
    return DenseHamiltonian(spec, m)


@dataclass
class SectorSolution:
    parity: int
    energies: np.ndarray
    states: np.ndarray  # columns are full-space vectors of length 2**n
    degenerate: bool

    @property
    def ground_energy(self) -> float:
        return float(self.energies[0])

    @property
    def ground_state(self) -> np.ndarray:
        return self.states[:, 0]


def _fix_sign(vecs: np.ndarray) -> np.ndarray:
    for c in range(vecs.shape[1]):
        col = vecs[:, c]
        big = np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max())
        if big.size and col[big[0]] < 0:
            vecs[:, c] = -col
    return vecs


def solve_sector(h: DenseHamiltonian, parity: int, levels: int | None = 2) -> SectorSolution:
    idx = sector_indices(h.n, parity)
    if levels is None or levels >= len(idx):
        w, v = la.eigh(h.block(parity))
    elif len(idx) > LANCZOS_DIM:
        v0 = np.random.default_rng(len(idx)).standard_normal(len(idx))
        w, v = spla.eigsh(h.sparse_block(parity), k=levels + 1, which="SA", tol=0, v0=v0)
        order = np.argsort(w)[:levels]
        w, v = w[order], v[:, order]
    else:
        w, v = la.eigh(h.block(parity), subset_by_index=[0, levels - 1])
    full = np.zeros((2**h.n, v.shape[1]))
    full[idx] = _fix_sign(v)
    degenerate = len(w) > 1 and w[1] - w[0] < DEGENERACY_GAP
    return SectorSolution(parity, w, full, bool(degenerate))


def sector_ground_states(h: DenseHamiltonian, levels: int | None = 2):
    """Lowest eigenpairs of the even and odd blocks, as ``(plus, minus)``."""
    return solve_sector(h, +1, levels), solve_sector(h, -1, levels)


def magnetization(state: np.ndarray, n: int) -> float:
    """<S_z> of a state vector, or of the weighted columns of a state array."""
    prob = np.abs(np.asarray(state)) ** 2
    if prob.ndim > 1:
        prob = prob.sum(axis=1)
    return float(prob @ (popcount(n) - 0.5 * n))


@dataclass
class FactorizationCheck:
    residual: float
    E_s: float
    b_s: float
    overlap: float
    gs_overlap_plus: float | None = None
    gs_overlap_minus: float | None = None
    sector_energies: tuple[float, float] | None = None


def verify_factorization(spec: ChainSpec, ground_states: bool = False) -> FactorizationCheck:
    """Residual of the separable states ``|+-theta>`` against the degenerate energy.

    The field is taken from ``spec`` as given, so passing ``b != b_s`` measures
    how far the product state is from an eigenstate there. With
    ``ground_states`` the parity-projected states are compared with the sector
    ground states of the oracle.
    """
    fp = factorization_point(spec)
    h = build_hamiltonian(spec)
    res = 0.0
    for th in (fp.theta, -fp.theta):
        v = separable_state_amplitudes(th, spec.n)
        res = max(res, float(np.linalg.norm(h.apply(v) - fp.E_s * v)))
    overlap = float(
        separable_state_amplitudes(-fp.theta, spec.n) @ separable_state_amplitudes(fp.theta, spec.n)
    )
    check = FactorizationCheck(res, fp.E_s, fp.b_s, overlap)
    if ground_states:
        plus, minus = sector_ground_states(h)
        check.gs_overlap_plus = abs(float(parity_state_vector(fp.theta, spec.n, +1) @ plus.ground_state))
        check.gs_overlap_minus = abs(
            float(parity_state_vector(fp.theta, spec.n, -1) @ minus.ground_state)
        )
        check.sector_energies = (plus.ground_energy, minus.ground_energy)
    return check


@dataclass
class ThermalState:
    n: int
    T: float
    energies: np.ndarray
    states: np.ndarray
    weights: np.ndarray

    def reduced(self, i: int, j: int) -> np.ndarray:
        keep = self.weights > 1e-300
        return reduced_two_spin(self.states[:, keep], self.n, i, j, self.weights[keep])

    def magnetization(self) -> float:
        return float(self.weights @ [magnetization(s, self.n) for s in self.states.T])

    def density_matrix(self) -> np.ndarray:
        return (self.states * self.weights) @ self.states.T


def thermal_state(h: DenseHamiltonian, T: float) -> ThermalState:
    """Gibbs state ``exp(-H/T)/Z`` from the full spectrum (k_B = 1)."""
    if not T > 0:
        raise NonPositiveTemperature(f"T must be positive, got {T!r}")
    if h.n > MAX_THERMAL_SITES:
        raise SizeTooLarge(f"thermal oracle limited to n <= {MAX_THERMAL_SITES}")
    plus, minus = sector_ground_states(h, levels=None)
    energies = np.concatenate([plus.energies, minus.energies])
    states = np.concatenate([plus.states, minus.states], axis=1)
    w = np.exp(-(energies - energies.min()) / T)
    return ThermalState(h.n, T, energies, states, w / w.sum())


def fermion_creation(n: int, i: int) -> sp.csr_matrix:
    """Jordan-Wigner ``c_i^dagger = s_i^+ prod_{j<i} (1 - 2 n_j)`` as a sparse matrix."""
    states = np.arange(2**n, dtype=np.int64)
    empty = ((states >> i) & 1) == 0
    src = states[empty]
    lower = np.bitwise_count((src & ((1 << i) - 1)).astype(np.uint64)).astype(np.int64)
    sign = np.where(lower % 2 == 0, 1.0, -1.0)
    return sp.csr_matrix((sign, (src | (1 << i), src)), shape=(2**n, 2**n))


def block_schmidt_probabilities(psi: np.ndarray, n: int, L: int) -> np.ndarray:
    """Squared singular values across the cut (sites 0..L-1) | (sites L..n-1)."""
    s = np.linalg.svd(np.asarray(psi).reshape(2 ** (n - L), 2**L), compute_uv=False)
    return np.sort(s**2)[::-1]


def gs_same_sign(state: np.ndarray, parity: int, n: int, tol: float = 1e-12) -> bool:
    comp = state[sector_indices(n, parity)]
    return bool(np.all(comp >= -tol) or np.all(comp <= tol))
