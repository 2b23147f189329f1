"""Closed-form quantities at the factorizing field.

Everything here depends only on the anisotropy ``chi``, the size ``n`` and,
where relevant, a block size, a mixing weight or the scaled anisotropy
``delta = n (1 - chi)``. Powers of ``chi`` are evaluated through logarithms so
that sizes of order 10^4 remain accurate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .chain import ChainSpec
from .concurrence import ANTIPARALLEL, PARALLEL, ZERO, ZERO_TOL, PairCorrelators
from .errors import (
    BlockOutOfRange,
    ChiOutOfRange,
    DegenerateCoupling,
    NonPositiveDelta,
    SizeTooLarge,
    WeightOutOfRange,
)

MAX_STATE_SITES = 20


@dataclass(frozen=True)
class FactorizationPoint:
    chi: float
    theta: float
    r: float
    b_s: float
    E_s: float


@dataclass(frozen=True)
class SideLimitSet:
    C_plus: float
    C_minus: float
    C_zero: float
    c_plus: float
    c_minus: float
    c_zero: float
    delta: float
    dM: float


@dataclass(frozen=True)
class BlockSpectrum:
    L: int
    parity: int
    p_nu: tuple[float, float]
    S_L: float
    C_L: float


@dataclass(frozen=True)
class MixtureSpec:
    q: float
    q_c: float
    C_q: float
    kind: str


def _pow(chi: float, e: float) -> float:
    """chi**e via logarithms (0**0 = 1)."""
    if chi == 0.0:
        return 1.0 if e == 0 else 0.0
    return math.exp(e * math.log(chi))


def _one_minus_pow(chi: float, e: float) -> float:
    """1 - chi**e without cancellation for chi close to 1."""
    if chi == 0.0:
        return 0.0 if e == 0 else 1.0
    return -math.expm1(e * math.log(chi))


def _check_chi(chi: float) -> float:
    chi = float(chi)
    if not (0.0 <= chi < 1.0):
        raise ChiOutOfRange(f"anisotropy chi = {chi!r} outside [0, 1)")
    return chi


def anisotropy(vx: float, vy: float, vz: float) -> float:
    if vx == vz:
        raise DegenerateCoupling("v_x = v_z leaves the anisotropy undefined")
    return (vy - vz) / (vx - vz)


def factorization_point(spec: ChainSpec) -> FactorizationPoint:
    chi = _check_chi(anisotropy(spec.vx, spec.vy, spec.vz))
    r = spec.r
    cos_t = math.sqrt(chi)
    return FactorizationPoint(
        chi=chi,
        theta=math.acos(cos_t),
        r=r,
        b_s=r * (spec.vx - spec.vz) * cos_t,
        E_s=-0.25 * spec.n * r * (spec.vx + spec.vy - spec.vz),
    )


def _popcount(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(2**n, dtype=np.uint64)).astype(np.int64)


def separable_state_amplitudes(theta: float, n: int) -> np.ndarray:
    """Product state with every spin rotated by theta about y from the all-down state."""
    if n > MAX_STATE_SITES:
        raise SizeTooLarge(f"n = {n} exceeds {MAX_STATE_SITES}")
    k = _popcount(n)
    return np.sin(theta / 2) ** k * np.cos(theta / 2) ** (n - k)


def parity_state_vector(theta: float, n: int, parity: int) -> np.ndarray:
    """Normalized ``|theta> + parity * |-theta>``."""
    overlap = math.cos(theta) ** n
    v = separable_state_amplitudes(theta, n) + parity * separable_state_amplitudes(-theta, n)
    return v / math.sqrt(2.0 * (1.0 + parity * overlap))


def parity_state_correlators(chi: float, n: int, parity: int) -> PairCorrelators:
    """Pair correlators of the parity-projected separable state (same for every pair)."""
    chi = _check_chi(chi)
    denom = 1.0 + parity * _pow(chi, n / 2)
    c_nm2 = _pow(chi, (n - 2) / 2)
    gamma_p = (1.0 + parity * c_nm2) / denom
    gamma_m = (1.0 - parity * c_nm2) / denom
    sin2 = 1.0 - chi
    alpha_p = 0.25 * sin2 * gamma_p
    alpha_m = 0.25 * sin2 * gamma_m
    sz = -0.5 * math.sqrt(chi) * gamma_p
    return PairCorrelators(alpha_p, alpha_m, 0.25 - alpha_m, sz, sz)


def side_limits(chi: float, n: int) -> SideLimitSet:
    chi = _check_chi(chi)
    half = _pow(chi, n / 2)
    lead = (1.0 - chi) * _pow(chi, n / 2 - 1)
    one_minus_n = _one_minus_pow(chi, n)
    c_plus = lead / (1.0 + half)
    c_minus = lead / _one_minus_pow(chi, n / 2)
    c_zero = (1.0 - chi) * _pow(chi, n - 1) / one_minus_n
    dM = n * (1.0 - chi) * _pow(chi, (n - 1) / 2) / one_minus_n
    return SideLimitSet(
        C_plus=c_plus,
        C_minus=c_minus,
        C_zero=c_zero,
        c_plus=n * c_plus,
        c_minus=n * c_minus,
        c_zero=n * c_zero,
        delta=n * (1.0 - chi),
        dM=dM,
    )


def rescaled_asymptotics(delta: float) -> tuple[float, float, float, float]:
    """Large-n limits (c_plus, c_minus, c_zero, dM) at fixed delta = n (1 - chi)."""
    if not delta > 0:
        raise NonPositiveDelta(f"delta must be positive, got {delta!r}")
    e = math.exp(-delta / 2)
    one_m_e2 = -math.expm1(-delta)
    c_plus = delta * e / (1.0 + e)
    c_minus = delta * e / -math.expm1(-delta / 2)
    c_zero = delta * math.exp(-delta) / one_m_e2
    dM = delta * e / one_m_e2
    return c_plus, c_minus, c_zero, dM


def productlog(x: float, tol: float = 1e-14) -> float:
    """Principal branch of w e^w = x for x >= 0, by Newton iteration."""
    if x < 0:
        raise ValueError("only x >= 0 is supported")
    w = math.log1p(x)
    for _ in range(100):
        ew = math.exp(w)
        step = (w * ew - x) / (ew * (w + 1.0))
        w -= step
        if abs(step) < tol * max(1.0, abs(w)):
            break
    return w


def cplus_maximum() -> tuple[float, float]:
    """Location and height of the maximum of c_plus(delta)."""

    # numerator of d c_plus / d delta for c_plus = delta / (exp(delta/2) + 1)
    def slope(d):
        e = math.exp(d / 2)
        return e + 1.0 - 0.5 * d * e

    d_star = brentq(slope, 1.0, 5.0, xtol=1e-13, rtol=4 * np.finfo(float).eps)
    return d_star, rescaled_asymptotics(d_star)[0]


def mixture_concurrence(q: float, chi: float, n: int) -> MixtureSpec:
    """Concurrence of ``q |theta_+><theta_+| + (1-q) |theta_-><theta_-|``."""
    if not 0.0 <= q <= 1.0:
        raise WeightOutOfRange(f"q = {q!r} outside [0, 1]")
    chi = _check_chi(chi)
    q_c = 0.5 * (1.0 + _pow(chi, n / 2))
    c = abs(1.0 - q / q_c) * side_limits(chi, n).C_minus
    if c < ZERO_TOL:
        return MixtureSpec(q, q_c, 0.0, ZERO)
    return MixtureSpec(q, q_c, c, ANTIPARALLEL if q < q_c else PARALLEL)


def block_entanglement(chi: float, n: int, L: int, parity: int) -> BlockSpectrum:
    """Schmidt spectrum of an L | n-L cut of the parity-projected separable state."""
    if not 1 <= L <= n - 1:
        raise BlockOutOfRange(f"block size L = {L} outside [1, {n - 1}]")
    chi = _check_chi(chi)
    cl, cr = _pow(chi, L / 2), _pow(chi, (n - L) / 2)
    ml, mr = _one_minus_pow(chi, L / 2), _one_minus_pow(chi, (n - L) / 2)
    if parity > 0:
        den = 2.0 * (1.0 + _pow(chi, n / 2))
        p_plus = (1.0 + cl) * (1.0 + cr) / den
        p_minus = ml * mr / den
    else:
        den = 2.0 * _one_minus_pow(chi, n / 2)
        p_plus = (1.0 + cl) * mr / den
        p_minus = ml * (1.0 + cr) / den
    entropy = -sum(p * math.log2(p) for p in (p_plus, p_minus) if p > 0)
    return BlockSpectrum(L, parity, (p_plus, p_minus), entropy, 2.0 * math.sqrt(p_plus * p_minus))
