"""Nearest-neighbour XY chain (v_z = 0) through the Jordan-Wigner mapping.

For each S_z parity the spin Hamiltonian is a quadratic fermion form with
antiperiodic (even parity) or periodic (odd parity) boundary conditions:
momenta ``omega_k = 2 pi k / n`` with k half-integer or integer. Modes k and
-k are paired by a BCS rotation; the unpaired modes (omega = 0 in the odd
sector, omega = pi whenever it occurs) keep their bare energy
``eps = b - v_+ cos(omega)``.

Occupation bookkeeping, valid for b >= 0 and v_+- >= 0: the even-sector
ground state is the BCS vacuum with every unpaired mode empty. The odd-sector
ground state additionally fills the omega = 0 mode, so its signed energy is
``lambda_0 = v_+ - b``. Emptying that mode costs ``b - v_+`` but restoring odd
fermion parity then costs at least ``min(lambda_k, b + v_+) > b - v_+``, so
this is the sector minimum for every field.

Fourier convention ``c_j = e^{-i pi/4} n^{-1/2} sum_k e^{i omega_k j} c_k``
makes the contractions ``f_l = <c_i^+ c_{i+l}> - delta_l0 / 2`` and
``g_l = <c_i^+ c_{i+l}^+>`` real.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec
from .concurrence import PairCorrelators
from .errors import ChainError, EmptyGrid, NotNearestNeighbor, SeparationOutOfRange, VzUnsupported
from .sectors import SectorGrid
from .transitions import find_transitions


@dataclass(frozen=True)
class ModeSet:
    n: int
    parity: int
    k: np.ndarray
    omega: np.ndarray
    eps: np.ndarray
    lam: np.ndarray  # signed for unpaired modes: eps * (1 - 2 * occupation)
    u: np.ndarray
    v: np.ndarray
    unpaired: np.ndarray
    occupation: np.ndarray  # <c_k^+ c_k>
    pairing: np.ndarray  # <c_k^+ c_{-k}^+>
    v_minus: float


@dataclass(frozen=True)
class ContractionTable:
    """``f[l]``, ``g[l]`` for l = 0..n-1; negative separations follow from parity in l."""

    n: int
    parity: int
    f: np.ndarray
    g: np.ndarray

    def f_at(self, l):
        return self.f[np.abs(l)]

    def g_at(self, l):
        return np.sign(l) * self.g[np.abs(l)]


def _check_spec(spec: ChainSpec):
    if spec.vz != 0.0:
        raise VzUnsupported("free-fermion route needs v_z = 0; use the oracle")
    if spec.n < 3:
        raise ChainError("free-fermion route needs n >= 3")
    if not spec.is_nearest_neighbor():
        raise NotNearestNeighbor("free-fermion route needs r_l = delta_l1 + delta_l,n-1")


def momenta(n: int, parity: int) -> np.ndarray:
    k = np.arange(n, dtype=float)
    return k + 0.5 if parity > 0 else k


def _mode_arrays(n, v_plus, v_minus, b, parity):
    """Mode data on a field grid; every returned array has shape (len(b), n)."""
    b = np.atleast_1d(np.asarray(b, dtype=float))[:, None]
    k = momenta(n, parity)
    omega = 2 * np.pi * k / n
    twice = (2 * k) % (2 * n)
    unpaired = (twice == 0) | (twice == n)
    cos = np.where(twice == n, -1.0, np.where(twice == 0, 1.0, np.cos(omega)))
    sin = np.where(unpaired, 0.0, np.sin(omega))
    eps = b - v_plus * cos
    delta = v_minus * sin
    lam_abs = np.hypot(eps, delta)
    occ_unpaired = np.broadcast_to((twice == 0) & (parity < 0), eps.shape).astype(float)
    safe = np.where(lam_abs > 0, lam_abs, 1.0)
    occ_paired = np.where(lam_abs > 0, 0.5 * (1.0 - eps / safe), 0.0)
    pair_amp = np.where(lam_abs > 0, -0.5 * delta / safe, 0.0)
    occ = np.where(unpaired, occ_unpaired, occ_paired)
    pairing = np.where(unpaired, 0.0, pair_amp)
    lam = np.where(unpaired, eps * (1.0 - 2.0 * occ), lam_abs)
    return k, omega, eps, lam, occ, pairing, np.broadcast_to(unpaired, eps.shape)


def mode_spectrum(spec: ChainSpec, parity: int) -> ModeSet:
    _check_spec(spec)
    k, omega, eps, lam, occ, pairing, unpaired = _mode_arrays(
        spec.n, spec.v_plus, spec.v_minus, spec.b, parity
    )
    eps, lam, occ, pairing, unpaired = eps[0], lam[0], occ[0], pairing[0], unpaired[0]
    return ModeSet(
        n=spec.n,
        parity=parity,
        k=k,
        omega=omega,
        eps=eps,
        lam=lam,
        u=np.sqrt(1.0 - occ),
        v=np.sqrt(occ) * np.where(pairing < 0, -1.0, 1.0),
        unpaired=np.array(unpaired),
        occupation=occ,
        pairing=pairing,
        v_minus=spec.v_minus,
    )


def sector_energy(modes: ModeSet) -> float:
    return float(-0.5 * np.sum(modes.lam))


def _contraction_arrays(n, omega, occ, pairing):
    l = np.arange(n)
    phase = np.outer(l, omega[0] if omega.ndim > 1 else omega)
    f = occ @ np.cos(phase).T / n
    f[:, 0] -= 0.5
    g = -(pairing @ np.sin(phase).T) / n
    return f, g


def contractions(modes: ModeSet) -> ContractionTable:
    f, g = _contraction_arrays(modes.n, modes.omega, modes.occupation[None], modes.pairing[None])
    return ContractionTable(modes.n, modes.parity, f[0], g[0])


def _string_determinants(f, g, l):
    """Batched ``<sx sx>`` and ``<sy sy>`` (in units of 1/4) at separation l."""
    r = np.arange(l)
    shift_x = r[:, None] - r[None, :] + 1
    shift_y = r[:, None] - r[None, :] - 1

    def h(shift):
        a = np.abs(shift)
        return 2.0 * (f[:, a] + np.sign(shift) * g[:, a])

    return np.linalg.det(h(shift_x)), np.linalg.det(h(shift_y))


def pair_correlators_wick(table: ContractionTable, l: int) -> PairCorrelators:
    if not 1 <= l <= table.n - 1:
        raise SeparationOutOfRange(f"separation {l} outside [1, {table.n - 1}]")
    dx, dy = _string_determinants(table.f[None], table.g[None], l)
    f0, fl, gl = table.f[0], table.f[l], table.g[l]
    return PairCorrelators(
        alpha_plus=0.25 * float(dx[0] - dy[0]),
        alpha_minus=0.25 * float(dx[0] + dy[0]),
        szsz=float(f0 * f0 - fl * fl + gl * gl),
        sz_i=float(f0),
        sz_j=float(f0),
    )


def sector_grid(spec: ChainSpec, parity: int, b_grid, separations=None) -> SectorGrid:
    """Vectorized sector ground-state energies and pair correlators over many fields."""
    _check_spec(spec)
    n = spec.n
    b = np.atleast_1d(np.asarray(b_grid, dtype=float))
    ls = np.arange(1, n) if separations is None else np.asarray(separations, dtype=int)
    if ls.size and (ls.min() < 1 or ls.max() > n - 1):
        raise SeparationOutOfRange(f"separations must lie in [1, {n - 1}]")
    _, omega, _, lam, occ, pairing, _ = _mode_arrays(n, spec.v_plus, spec.v_minus, b, parity)
    f, g = _contraction_arrays(n, omega, occ, pairing)
    ap = np.empty((len(b), len(ls)))
    am = np.empty_like(ap)
    for j, l in enumerate(ls):
        dx, dy = _string_determinants(f, g, int(l))
        ap[:, j] = 0.25 * (dx - dy)
        am[:, j] = 0.25 * (dx + dy)
    f0 = f[:, 0]
    szsz = f0[:, None] ** 2 - f[:, ls] ** 2 + g[:, ls] ** 2
    return SectorGrid(
        parity=parity,
        b=b,
        energy=-0.5 * lam.sum(axis=1),
        magnetization=n * f0,
        separations=ls,
        alpha_plus=ap,
        alpha_minus=am,
        szsz=szsz,
        sz=np.broadcast_to(f0[:, None], szsz.shape).copy(),
    )


def sector_energies(spec: ChainSpec, b) -> tuple[np.ndarray, np.ndarray]:
    """E_+(b), E_-(b) without any correlator work."""
    _check_spec(spec)
    out = []
    for parity in (+1, -1):
        lam = _mode_arrays(spec.n, spec.v_plus, spec.v_minus, b, parity)[3]
        out.append(-0.5 * lam.sum(axis=1))
    return out[0], out[1]


@dataclass
class SectorSweep:
    b: np.ndarray
    E_plus: np.ndarray
    E_minus: np.ndarray
    gs_parity: np.ndarray
    transitions: list[float]


def sector_sweep(spec: ChainSpec, b_grid) -> SectorSweep:
    """Sector energies on a grid, the global ground-state parity and refined crossings."""
    b = np.asarray(b_grid, dtype=float)
    if b.size == 0:
        raise EmptyGrid("field grid is empty")
    if np.any(np.diff(b) <= 0):
        raise ChainError("field grid must be strictly ascending")
    ep, em = sector_energies(spec, b)

    def gap(x):
        p, m = sector_energies(spec, [x])
        return float(p[0] - m[0])

    return SectorSweep(b, ep, em, np.where(ep <= em, 1, -1), find_transitions(gap, b, ep - em))
