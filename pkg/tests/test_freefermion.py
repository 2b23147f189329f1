import numpy as np
import pytest

from factorfield.chain import ChainSpec
from factorfield.closed_forms import factorization_point, side_limits
from factorfield.concurrence import reduced_two_spin
from factorfield.errors import ChainError, EmptyGrid, NotNearestNeighbor, SeparationOutOfRange, VzUnsupported
from factorfield.freefermion import (
    contractions,
    mode_spectrum,
    pair_correlators_wick,
    sector_energies,
    sector_energy,
    sector_grid,
    sector_sweep,
)
from factorfield.oracle import build_hamiltonian, fermion_creation, sector_ground_states


@pytest.mark.parametrize("n", [3, 4, 5, 8])
@pytest.mark.parametrize("vy", [-0.6, 0.0, 0.45, 0.9])
@pytest.mark.parametrize("b", [0.05, 0.6, 1.7])
def test_sector_energies_match_oracle(n, vy, b):
    spec = ChainSpec.nearest_neighbor(n, 1.0, vy, b=b)
    p, m = sector_ground_states(build_hamiltonian(spec), levels=1)
    assert sector_energy(mode_spectrum(spec, +1)) == pytest.approx(p.ground_energy, abs=1e-12)
    assert sector_energy(mode_spectrum(spec, -1)) == pytest.approx(m.ground_energy, abs=1e-12)


@pytest.mark.parametrize("parity", [1, -1])
def test_contractions_match_operator_expectations(parity):
    n = 6
    spec = ChainSpec.nearest_neighbor(n, 1.0, 0.3, b=0.4)
    sol = sector_ground_states(build_hamiltonian(spec), levels=1)[0 if parity > 0 else 1]
    psi = sol.ground_state
    table = contractions(mode_spectrum(spec, parity))
    c = [fermion_creation(n, i) for i in range(n)]
    for l in range(1, n):
        assert psi @ (c[0] @ (c[l].T @ psi)) == pytest.approx(table.f[l], abs=1e-12)
        assert psi @ (c[0] @ (c[l] @ psi)) == pytest.approx(table.g[l], abs=1e-12)


@pytest.mark.parametrize("parity", [1, -1])
def test_wick_correlators_match_reduced_density(parity):
    n = 7
    spec = ChainSpec.nearest_neighbor(n, 1.0, 0.2, b=0.7)
    sol = sector_ground_states(build_hamiltonian(spec), levels=1)[0 if parity > 0 else 1]
    table = contractions(mode_spectrum(spec, parity))
    for l in range(1, n):
        rho = reduced_two_spin(sol.ground_state, n, 0, l)
        c = pair_correlators_wick(table, l)
        np.testing.assert_allclose(c.density_matrix(), rho, atol=1e-12)


def test_nearest_neighbor_direct_expansion():
    # the l = 1 correlators alone rebuild the sector energy
    n = 9
    spec = ChainSpec.nearest_neighbor(n, 1.0, 0.35, b=0.5)
    table = contractions(mode_spectrum(spec, 1))
    c = pair_correlators_wick(table, 1)
    xx = 0.5 * (c.alpha_minus + c.alpha_plus)  # <sx sx> = (alpha_- + alpha_+)/2 for real coherences
    yy = 0.5 * (c.alpha_minus - c.alpha_plus)
    energy = spec.b * n * c.sz_i - n * (spec.vx * xx + spec.vy * yy)
    assert energy == pytest.approx(sector_energy(mode_spectrum(spec, 1)), abs=1e-12)


def test_grid_matches_scalar_route():
    spec = ChainSpec.nearest_neighbor(10, 1.0, 0.5)
    b = np.linspace(0.1, 1.2, 7)
    grid = sector_grid(spec, -1, b, [1, 3, 5])
    for ib, x in enumerate(b):
        table = contractions(mode_spectrum(spec.with_field(x), -1))
        for il, l in enumerate([1, 3, 5]):
            c = pair_correlators_wick(table, l)
            assert grid.alpha_plus[ib, il] == pytest.approx(c.alpha_plus, abs=1e-13)
            assert grid.alpha_minus[ib, il] == pytest.approx(c.alpha_minus, abs=1e-13)


def test_gap_slope_is_magnetization_jump():
    n, chi = 12, 0.7
    spec = ChainSpec.nearest_neighbor(n, 1.0, chi)
    b_s = factorization_point(spec).b_s
    h = 1e-6
    gp = np.subtract(*sector_energies(spec, [b_s + h]))
    gm = np.subtract(*sector_energies(spec, [b_s - h]))
    slope = float((gp - gm)[0] / (2 * h))
    assert -slope == pytest.approx(side_limits(chi, n).dM, abs=1e-4)


def test_sweep_counts_transitions():
    spec = ChainSpec.nearest_neighbor(10, 1.0, 0.5)
    sw = sector_sweep(spec, np.linspace(1e-6, spec.b_c, 300))
    assert len(sw.transitions) == 5
    assert sw.transitions[-1] == pytest.approx(factorization_point(spec).b_s, abs=1e-8)


def test_errors():
    with pytest.raises(VzUnsupported):
        mode_spectrum(ChainSpec.nearest_neighbor(6, 1.0, 0.5, 0.1), 1)
    with pytest.raises(NotNearestNeighbor):
        mode_spectrum(ChainSpec.fully_connected(6, 1.0, 0.5), 1)
    with pytest.raises(ChainError):
        mode_spectrum(ChainSpec.nearest_neighbor(2, 1.0, 0.5), 1)
    table = contractions(mode_spectrum(ChainSpec.nearest_neighbor(6, 1.0, 0.5), 1))
    with pytest.raises(SeparationOutOfRange):
        pair_correlators_wick(table, 6)
    with pytest.raises(EmptyGrid):
        sector_sweep(ChainSpec.nearest_neighbor(6, 1.0, 0.5), [])
