
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factorfield.chain import ChainSpec
from factorfield.errors import NonCanonicalSpec, NonPositiveTemperature, SizeTooLarge
from factorfield.oracle import (
    build_hamiltonian,
    magnetization,
    sector_ground_states,
    sector_indices,
    solve_sector,
    thermal_state,
    verify_factorization,
)

# single site, basis [down, up]
SZ = np.diag([-0.5, 0.5])
SX = np.array([[0, 0.5], [0.5, 0]])
SY = np.array([[0, 0.5j], [-0.5j, 0]])


def site_op(op, k, n):
    """Operator on site k; kron puts site n-1 in the most significant bit."""
    mats = [np.eye(2)] * n
    mats[n - 1 - k] = op
    out = np.array([[1.0]])
    for m in mats:
        out = np.kron(out, m)
    return out


def kron_hamiltonian(spec):
    n = spec.n
    ops = {a: [site_op(m, k, n) for k in range(n)] for a, m in (("x", SX), ("y", SY), ("z", SZ))}
    h = spec.b * sum(ops["z"])
    for i in range(n):
        for j in range(i + 1, n):
            r = spec.range_weight(i, j)
            h = h - r * (spec.vx * ops["x"][i] @ ops["x"][j]
                         + spec.vy * ops["y"][i] @ ops["y"][j]
                         + spec.vz * ops["z"][i] @ ops["z"][j])
    return h


def specs(max_n=6):
    @st.composite
    def build(draw):
        n = draw(st.integers(2, max_n))
        half = draw(st.lists(st.floats(-1, 1), min_size=n // 2, max_size=n // 2))
        r = tuple(half[min(l, n - l) - 1] for l in range(1, n))
        vx = draw(st.floats(0, 2))
        vy = draw(st.floats(-vx, vx))
        vz = draw(st.floats(-2, 2))
        return ChainSpec(n, vx, vy, vz, r, draw(st.floats(0, 2)))

    return build()


@settings(max_examples=30, deadline=None)
@given(specs())
def test_matches_kronecker_construction(spec):
    np.testing.assert_allclose(build_hamiltonian(spec).dense(), kron_hamiltonian(spec), atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(specs())
def test_parity_blocks(spec):
    h = build_hamiltonian(spec).dense()
    even = sector_indices(spec.n, +1)
    odd = sector_indices(spec.n, -1)
    assert np.abs(h[np.ix_(even, odd)]).max(initial=0) == 0
    w_all = np.linalg.eigvalsh(h)
    p, m = sector_ground_states(build_hamiltonian(spec), levels=None)
    np.testing.assert_allclose(np.sort(np.concatenate([p.energies, m.energies])), w_all, atol=1e-10)


@pytest.mark.parametrize("n", [4, 9])
@pytest.mark.parametrize("vz", [0.0, -0.4])
def test_factorization_residual(n, vz):
    spec = ChainSpec.nearest_neighbor(n, 1.0, 0.6, vz)
    from factorfield.closed_forms import factorization_point

    spec = spec.with_field(factorization_point(spec).b_s)
    chk = verify_factorization(spec, ground_states=True)
    assert chk.residual < 1e-12
    assert chk.gs_overlap_plus == pytest.approx(1.0, abs=1e-9)
    assert chk.gs_overlap_minus == pytest.approx(1.0, abs=1e-9)
    assert chk.sector_energies[0] == pytest.approx(chk.E_s, abs=1e-10)
    assert chk.sector_energies[1] == pytest.approx(chk.E_s, abs=1e-10)


def test_lanczos_matches_dense():
    import factorfield.oracle as oracle

    h = build_hamiltonian(ChainSpec.nearest_neighbor(11, 1.0, 0.3, 0.2, b=0.45))
    a = solve_sector(h, -1, levels=1)
    dense = solve_sector(h, -1, levels=None)
    assert len(sector_indices(11, -1)) > oracle.LANCZOS_DIM
    assert a.ground_energy == pytest.approx(dense.ground_energy, abs=1e-12)
    assert abs(a.ground_state @ dense.ground_state) == pytest.approx(1.0, abs=1e-12)


def test_polarized_limit():
    n = 5
    h = build_hamiltonian(ChainSpec.nearest_neighbor(n, 1.0, 0.5, b=50.0))
    p, m = sector_ground_states(h, levels=1)
    best = p if p.ground_energy < m.ground_energy else m
    assert magnetization(best.ground_state, n) == pytest.approx(-n / 2, abs=1e-3)


def test_thermal_state():
    spec = ChainSpec.nearest_neighbor(6, 1.0, 0.4, b=0.3)
    th = thermal_state(build_hamiltonian(spec), 0.7)
    assert th.weights.sum() == pytest.approx(1.0)
    rho = th.density_matrix()
    h = kron_hamiltonian(spec)
    w, v = np.linalg.eigh(h)
    g = np.exp(-(w - w[0]) / 0.7)
    ref = (v * (g / g.sum())) @ v.T
    np.testing.assert_allclose(rho, ref, atol=1e-12)
    with pytest.raises(NonPositiveTemperature):
        thermal_state(build_hamiltonian(spec), 0.0)


def test_size_limits():
    with pytest.raises(SizeTooLarge):
        build_hamiltonian(ChainSpec.nearest_neighbor(15, 1.0, 0.5))
    with pytest.raises(SizeTooLarge):
        thermal_state(build_hamiltonian(ChainSpec.nearest_neighbor(13, 1.0, 0.5)), 1.0)


def test_noncanonical_specs():
    with pytest.raises(NonCanonicalSpec):
        ChainSpec(4, 1.0, 0.5, 0.0, (1.0, 0.0, 0.5))
    with pytest.raises(NonCanonicalSpec):
        ChainSpec.nearest_neighbor(4, 0.5, 1.0)
    with pytest.raises(NonCanonicalSpec):
        ChainSpec.nearest_neighbor(4, 1.0, 0.5, b=-0.1)
