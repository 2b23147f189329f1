import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar
from scipy.special import lambertw

from factorfield.chain import ChainSpec
from factorfield.closed_forms import (
    anisotropy,
    block_entanglement,
    cplus_maximum,
    factorization_point,
    mixture_concurrence,
    parity_state_correlators,
    parity_state_vector,
    productlog,
    rescaled_asymptotics,
    side_limits,
)
from factorfield.concurrence import reduced_two_spin, wootters_concurrence
from factorfield.errors import (
    BlockOutOfRange,
    ChiOutOfRange,
    DegenerateCoupling,
    NonPositiveDelta,
    WeightOutOfRange,
)
from factorfield.oracle import block_schmidt_probabilities

chis = st.floats(0.01, 0.99)
sizes = st.integers(2, 40)


def test_factorization_point_nn():
    fp = factorization_point(ChainSpec.nearest_neighbor(10, 1.0, 0.75))
    assert fp.chi == 0.75
    assert fp.b_s == pytest.approx(math.sqrt(0.75))
    assert fp.E_s == pytest.approx(-10 / 4 * (1 + 0.75))
    assert math.cos(fp.theta) ** 2 == pytest.approx(0.75)


def test_anisotropy_errors():
    with pytest.raises(DegenerateCoupling):
        anisotropy(1.0, 0.5, 1.0)
    with pytest.raises(ChiOutOfRange):
        factorization_point(ChainSpec.nearest_neighbor(6, 1.0, -0.5, 0.0))


@settings(max_examples=50)
@given(chis, sizes)
def test_side_limit_identities(chi, n):
    sl = side_limits(chi, n)
    assert sl.C_zero == pytest.approx(0.5 * (sl.C_minus - sl.C_plus), rel=1e-10)
    assert sl.dM == pytest.approx(0.5 * (sl.c_plus + sl.c_minus) * math.sqrt(chi), rel=1e-10)
    assert 0 < sl.C_plus <= sl.C_minus <= 1


@settings(max_examples=50)
@given(chis, sizes)
def test_mixture_endpoints(chi, n):
    sl = side_limits(chi, n)
    assert mixture_concurrence(0.0, chi, n).C_q == pytest.approx(sl.C_minus, rel=1e-12)
    assert mixture_concurrence(1.0, chi, n).C_q == pytest.approx(sl.C_plus, rel=1e-10)
    assert mixture_concurrence(0.5, chi, n).C_q == pytest.approx(sl.C_zero, rel=1e-9)
    assert mixture_concurrence(0.5 * (1 + chi ** (n / 2)), chi, n).C_q == 0.0


def test_mixture_weight_error():
    with pytest.raises(WeightOutOfRange):
        mixture_concurrence(1.5, 0.5, 6)


@pytest.mark.parametrize("n", [3, 4, 7, 10])
@pytest.mark.parametrize("chi", [0.2, 0.75])
def test_side_limits_from_explicit_states(n, chi):
    fp = factorization_point(ChainSpec.nearest_neighbor(n, 1.0, chi))
    sl = side_limits(chi, n)
    for parity, expected in ((+1, sl.C_plus), (-1, sl.C_minus)):
        psi = parity_state_vector(fp.theta, n, parity)
        for j in range(1, n):
            rho = reduced_two_spin(psi, n, 0, j)
            assert wootters_concurrence(rho).value == pytest.approx(expected, abs=1e-12)
            c = parity_state_correlators(chi, n, parity)
            np.testing.assert_allclose(c.density_matrix(), rho, atol=1e-12)


@pytest.mark.parametrize("q", [0.0, 0.2, 0.5, 0.7, 1.0])
def test_mixture_matches_explicit_mixture(q):
    n, chi = 8, 0.6
    theta = math.acos(math.sqrt(chi))
    states = np.stack([parity_state_vector(theta, n, p) for p in (+1, -1)], axis=1)
    rho = reduced_two_spin(states, n, 0, 3, weights=[q, 1 - q])
    assert mixture_concurrence(q, chi, n).C_q == pytest.approx(wootters_concurrence(rho).value, abs=1e-10)


@pytest.mark.parametrize("n,L", [(6, 1), (6, 3), (9, 4), (12, 5)])
@pytest.mark.parametrize("parity", [1, -1])
def test_block_spectrum_matches_schmidt(n, L, parity):
    chi = 0.55
    psi = parity_state_vector(math.acos(math.sqrt(chi)), n, parity)
    probs = block_schmidt_probabilities(psi, n, L)
    bs = block_entanglement(chi, n, L, parity)
    np.testing.assert_allclose(sorted(bs.p_nu, reverse=True), probs[:2], atol=1e-12)
    assert probs[2:].sum() < 1e-12


@settings(max_examples=40)
@given(chis, st.integers(3, 30))
def test_block_concurrence_exceeds_pair_bound(chi, n):
    sl = side_limits(chi, n)
    for parity, c in ((+1, sl.C_plus), (-1, sl.C_minus)):
        assert block_entanglement(chi, n, 1, parity).C_L >= math.sqrt(n - 1) * c * (1 - 1e-12)


def test_block_errors():
    with pytest.raises(BlockOutOfRange):
        block_entanglement(0.5, 6, 6, 1)


@pytest.mark.parametrize("x", [0.0, 0.1, 1 / math.e, 1.0, 10.0])
def test_productlog(x):
    assert productlog(x) == pytest.approx(lambertw(x).real, rel=1e-13, abs=1e-15)


def test_cplus_maximum():
    d_star, c_star = cplus_maximum()
    w = lambertw(math.exp(-1)).real
    assert d_star == pytest.approx(2 * (1 + w), abs=1e-10)
    assert c_star == pytest.approx(2 * w, abs=1e-10)
    res = minimize_scalar(lambda d: -rescaled_asymptotics(d)[0], bounds=(0.5, 6), method="bounded",
                          options={"xatol": 1e-10})
    assert res.x == pytest.approx(d_star, abs=1e-5)


def test_asymptotics_row():
    np.testing.assert_allclose(
        rescaled_asymptotics(2.5), (0.55675, 1.00388, 0.22356, 0.78031), atol=6e-6
    )


def test_asymptotics_small_delta():
    np.testing.assert_allclose(rescaled_asymptotics(1e-9), (0, 2, 1, 1), atol=1e-8)
    with pytest.raises(NonPositiveDelta):
        rescaled_asymptotics(0.0)


def test_side_limits_large_n_stable():
    sl = side_limits(1 - 2.5 / 1e6, 10**6)
    assert all(math.isfinite(x) for x in (sl.c_plus, sl.c_minus, sl.c_zero, sl.dM))
