"""Pairwise concurrence of two spins.

Two independent routes are provided:

* :func:`concurrence_from_correlators` for parity-symmetric states, built from
  ``<s+ s+>``, ``<s+ s->``, ``<sz sz>`` and ``<sz>``;
* :func:`wootters_concurrence` for an arbitrary two-qubit density matrix.

Two-spin matrices use the basis index ``2*bit_i + bit_j`` with bit 1 = spin up,
i.e. the ordering ``|dd>, |du>, |ud>, |uu>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadIndices, NegativeDiscriminant, NotADensityMatrix, SizeTooLarge

ZERO_TOL = 1e-12
PARALLEL = "parallel"
ANTIPARALLEL = "antiparallel"
ZERO = "zero"
UNCLASSIFIED = "unclassified"

MAX_SITES = 20

_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_FLIP = np.kron(_SY, _SY)


@dataclass(frozen=True)
class PairCorrelators:
    """Two-spin observables of a parity-conserving state.

    ``alpha_plus`` is ``<s+_i s+_j>`` (drives parallel entanglement) and
    ``alpha_minus`` is ``<s+_i s-_j>`` (drives antiparallel entanglement).
    """

    alpha_plus: complex
    alpha_minus: complex
    szsz: float
    sz_i: float
    sz_j: float

    @property
    def p(self) -> float:
        return 0.25 - self.szsz

    def populations(self):
        """Diagonal of the reduced density: P(dd), P(du), P(ud), P(uu)."""
        s, d = self.sz_i + self.sz_j, self.sz_i - self.sz_j
        return (
            0.25 - 0.5 * s + self.szsz,
            0.25 - 0.5 * d - self.szsz,
            0.25 + 0.5 * d - self.szsz,
            0.25 + 0.5 * s + self.szsz,
        )

    @property
    def q_squared(self) -> float:
        dd, _, _, uu = self.populations()
        return dd * uu

    def density_matrix(self) -> np.ndarray:
        dd, du, ud, uu = self.populations()
        rho = np.diag([dd, du, ud, uu]).astype(complex)
        rho[0, 3] = self.alpha_plus
        rho[3, 0] = np.conj(self.alpha_plus)
        rho[1, 2] = self.alpha_minus
        rho[2, 1] = np.conj(self.alpha_minus)
        return rho

    @classmethod
    def from_density(cls, rho: np.ndarray) -> "PairCorrelators":
        rho = np.asarray(rho)
        dd, du, ud, uu = np.real(np.diag(rho))
        return cls(
            alpha_plus=complex(rho[0, 3]),
            alpha_minus=complex(rho[1, 2]),
            szsz=float(0.25 * (dd + uu - du - ud)),
            sz_i=float(0.5 * (ud + uu - dd - du)),
            sz_j=float(0.5 * (du + uu - dd - ud)),
        )

    def mix(self, other: "PairCorrelators", weight: float) -> "PairCorrelators":
        """``weight * self + (1 - weight) * other``; correlators are linear in the state."""
        w, u = weight, 1.0 - weight
        return PairCorrelators(
            w * self.alpha_plus + u * other.alpha_plus,
            w * self.alpha_minus + u * other.alpha_minus,
            w * self.szsz + u * other.szsz,
            w * self.sz_i + u * other.sz_i,
            w * self.sz_j + u * other.sz_j,
        )


@dataclass(frozen=True)
class ConcurrenceValue:
    value: float
    kind: str

    def __float__(self):
        return self.value


def _classify(parallel: float, antiparallel: float) -> ConcurrenceValue:
    c = 2.0 * max(parallel, antiparallel, 0.0)
    if c < ZERO_TOL:
        return ConcurrenceValue(0.0, ZERO)
    return ConcurrenceValue(c, PARALLEL if parallel >= antiparallel else ANTIPARALLEL)


def _safe_sqrt(x: float) -> float:
    if x < -ZERO_TOL:
        raise NegativeDiscriminant(f"negative population product {x:.3e}")
    return math.sqrt(max(x, 0.0))


def concurrence_branches(c: PairCorrelators) -> tuple[float, float]:
    """The parallel and antiparallel terms ``|a+| - p`` and ``|a-| - q``."""
    dd, du, ud, uu = c.populations()
    p = _safe_sqrt(du * ud)
    q = _safe_sqrt(dd * uu)
    return abs(c.alpha_plus) - p, abs(c.alpha_minus) - q


def concurrence_from_correlators(c: PairCorrelators) -> ConcurrenceValue:
    par, anti = concurrence_branches(c)
    return _classify(par, anti)


def _check_density(rho: np.ndarray, tol: float) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise NotADensityMatrix(f"expected 4x4, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise NotADensityMatrix("not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise NotADensityMatrix(f"trace {np.trace(rho).real!r} != 1")
    rho = 0.5 * (rho + rho.conj().T)
    if np.linalg.eigvalsh(rho)[0] < -tol:
        raise NotADensityMatrix("not positive semidefinite")
    return rho


def is_parity_symmetric(rho: np.ndarray, tol: float = 1e-10) -> bool:
    """True when rho has no coherence between even and odd two-spin parity."""
    off = rho[np.ix_([0, 3], [1, 2])]
    return bool(np.max(np.abs(off)) <= tol)


def wootters_concurrence(rho: np.ndarray, tol: float = 1e-10) -> ConcurrenceValue:
    """Concurrence from the spin-flip construction.

    With ``rho = M M^dagger`` (columns of M are eigenvectors scaled by the square
    roots of their weights) the square roots of the eigenvalues of
    ``rho rho~`` are the singular values of ``M^T (sy x sy) M``. This form keeps
    full precision for rank-deficient reduced states, where taking square roots
    of round-off eigenvalues would not.
    """
    rho = _check_density(rho, tol)
    w, v = np.linalg.eigh(rho)
    m = v * np.sqrt(np.clip(w, 0.0, None))
    s = np.linalg.svd(m.T @ _FLIP @ m, compute_uv=False)
    c = s[0] - s[1] - s[2] - s[3]
    if c < ZERO_TOL:
        return ConcurrenceValue(0.0, ZERO)
    if not is_parity_symmetric(rho):
        return ConcurrenceValue(float(c), UNCLASSIFIED)
    d = np.real(np.diag(rho))
    par = abs(rho[0, 3]) - math.sqrt(max(d[1] * d[2], 0.0))
    anti = abs(rho[1, 2]) - math.sqrt(max(d[0] * d[3], 0.0))
    return ConcurrenceValue(float(c), PARALLEL if par >= anti else ANTIPARALLEL)


def reduced_two_spin(amplitudes, n: int, i: int, j: int, weights=None) -> np.ndarray:
    """Reduced density matrix of sites i, j.

    ``amplitudes`` is a state vector of length ``2**n`` (bit k of the index is
    site k, 1 = up) or a ``(2**n, m)`` array of states mixed with ``weights``.
    """
    if n > MAX_SITES:
        raise SizeTooLarge(f"n = {n} exceeds {MAX_SITES}")
    if not (0 <= i < n and 0 <= j < n and i != j):
        raise BadIndices(f"need distinct sites in [0, {n}), got ({i}, {j})")
    psi = np.asarray(amplitudes)
    if psi.shape[0] != 2**n:
        raise BadIndices(f"state has length {psi.shape[0]}, expected {2**n}")
    cols = psi.reshape(2**n, -1)
    if weights is None:
        weights = np.ones(cols.shape[1])
    rho = np.zeros((4, 4), dtype=complex)
    ai, aj = n - 1 - i, n - 1 - j
    for w, col in zip(weights, cols.T):
        if w == 0:
            continue
        t = np.moveaxis(col.reshape((2,) * n), (ai, aj), (0, 1)).reshape(4, -1)
        rho += w * (t @ t.conj().T)
    return rho


def concurrence_arrays(alpha_plus, alpha_minus, szsz, sz_i, sz_j):
    """Vectorized :func:`concurrence_from_correlators`; returns (values, kinds)."""
    ap, am = np.abs(np.asarray(alpha_plus)), np.abs(np.asarray(alpha_minus))
    szsz = np.asarray(szsz)
    s = np.asarray(sz_i) + np.asarray(sz_j)
    d = np.asarray(sz_i) - np.asarray(sz_j)
    du_ud = (0.25 - szsz) ** 2 - 0.25 * d**2
    dd_uu = (0.25 + szsz) ** 2 - 0.25 * s**2
    if np.any(du_ud < -ZERO_TOL) or np.any(dd_uu < -ZERO_TOL):
        raise NegativeDiscriminant("negative population product in correlator array")
    par = ap - np.sqrt(np.clip(du_ud, 0.0, None))
    anti = am - np.sqrt(np.clip(dd_uu, 0.0, None))
    return _classify_arrays(par, anti)


def _classify_arrays(par, anti):
    c = 2.0 * np.maximum(np.maximum(par, anti), 0.0)
    zero = c < ZERO_TOL
    kinds = np.where(zero, ZERO, np.where(par >= anti, PARALLEL, ANTIPARALLEL))
    return np.where(zero, 0.0, c), kinds


def wootters_batch(rhos: np.ndarray):
    """Vectorized :func:`wootters_concurrence` for an array of shape (..., 4, 4).

    Inputs are assumed valid density matrices (no checks). Kinds follow the
    branch of the parity-symmetric formula, or ``unclassified`` when a matrix
    has coherences between the two two-spin parities.
    """
    rhos = np.asarray(rhos, dtype=complex)
    rhos = 0.5 * (rhos + np.conj(np.swapaxes(rhos, -1, -2)))
    w, v = np.linalg.eigh(rhos)
    m = v * np.sqrt(np.clip(w, 0.0, None))[..., None, :]
    tau = np.swapaxes(m, -1, -2) @ _FLIP @ m
    s = np.linalg.svd(tau, compute_uv=False)
    c = s[..., 0] - s[..., 1] - s[..., 2] - s[..., 3]
    d = np.real(np.diagonal(rhos, axis1=-2, axis2=-1))
    par = np.abs(rhos[..., 0, 3]) - np.sqrt(np.clip(d[..., 1] * d[..., 2], 0.0, None))
    anti = np.abs(rhos[..., 1, 2]) - np.sqrt(np.clip(d[..., 0] * d[..., 3], 0.0, None))
    off = np.max(np.abs(rhos[..., [0, 0, 3, 3], [1, 2, 1, 2]]), axis=-1)
    zero = c < ZERO_TOL
    kinds = np.where(
        zero,
        ZERO,
        np.where(off > 1e-10, UNCLASSIFIED, np.where(par >= anti, PARALLEL, ANTIPARALLEL)),
    )
    return np.where(zero, 0.0, c), kinds


def density_arrays(alpha_plus, alpha_minus, szsz, sz_i, sz_j) -> np.ndarray:
    """X-shaped two-spin densities (..., 4, 4) from broadcastable correlator arrays."""
    ap, am, szsz, si, sj = np.broadcast_arrays(
        *(np.asarray(x, dtype=complex) for x in (alpha_plus, alpha_minus, szsz, sz_i, sz_j))
    )
    rho = np.zeros(ap.shape + (4, 4), dtype=complex)
    s, d = si + sj, si - sj
    rho[..., 0, 0] = 0.25 - 0.5 * s + szsz
    rho[..., 1, 1] = 0.25 - 0.5 * d - szsz
    rho[..., 2, 2] = 0.25 + 0.5 * d - szsz
    rho[..., 3, 3] = 0.25 + 0.5 * s + szsz
    rho[..., 0, 3] = ap
    rho[..., 3, 0] = np.conj(ap)
    rho[..., 1, 2] = am
    rho[..., 2, 1] = np.conj(am)
    return rho
