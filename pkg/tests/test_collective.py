import numpy as np
import pytest

from factorfield.chain import ChainSpec
from factorfield.collective import (
    build_collective_hamiltonian,
    collective_ground_state,
    collective_levels,
    collective_pair_correlators,
)
from factorfield.concurrence import reduced_two_spin
from factorfield.errors import NotFullyConnected
from factorfield.oracle import build_hamiltonian, magnetization, sector_ground_states


@pytest.mark.parametrize("n", [2, 3, 6, 9])
@pytest.mark.parametrize("couplings", [(1.0, 0.3, 0.0), (1.0, -0.4, 0.5), (0.8, 0.2, -0.6)])
@pytest.mark.parametrize("b", [0.0, 0.35, 1.2])
def test_matches_oracle(n, couplings, b):
    spec = ChainSpec.fully_connected(n, *couplings, b=b)
    blk = build_collective_hamiltonian(spec)
    for sol in sector_ground_states(build_hamiltonian(spec), levels=2):
        if sol.degenerate:
            continue
        gs = collective_ground_state(blk, sol.parity)
        assert gs.energy == pytest.approx(sol.ground_energy, abs=1e-12)
        assert gs.magnetization == pytest.approx(magnetization(sol.ground_state, n), abs=1e-10)
        rho = reduced_two_spin(sol.ground_state, n, 0, n - 1)
        np.testing.assert_allclose(collective_pair_correlators(gs).density_matrix(), rho, atol=1e-10)


def test_spectrum_is_subset_of_full():
    spec = ChainSpec.fully_connected(6, 1.0, 0.25, 0.1, b=0.4)
    full = np.linalg.eigvalsh(build_hamiltonian(spec).dense())
    w = np.linalg.eigvalsh(build_collective_hamiltonian(spec).matrix)
    assert all(np.min(np.abs(full - x)) < 1e-10 for x in w)


def test_levels_sorted():
    blk = build_collective_hamiltonian(ChainSpec.fully_connected(10, 1.0, 0.5, b=0.3))
    w, v = collective_levels(blk, -1, 3)
    assert np.all(np.diff(w) > 0)
    np.testing.assert_allclose(v.T @ v, np.eye(3), atol=1e-12)
    assert np.all(v[0::2] == 0)


def test_requires_constant_range():
    with pytest.raises(NotFullyConnected):
        build_collective_hamiltonian(ChainSpec.nearest_neighbor(5, 1.0, 0.5))


def test_large_n_is_cheap():
    blk = build_collective_hamiltonian(ChainSpec.fully_connected(2000, 1.0, 0.5, b=0.2))
    gs = collective_ground_state(blk, 1)
    assert np.isclose(np.linalg.norm(gs.w), 1.0)
