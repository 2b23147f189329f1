"""Per-parity ground-state data on a field grid, shared by all three models."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .concurrence import (
    PairCorrelators,
    concurrence_arrays,
    density_arrays,
    reduced_two_spin,
    wootters_batch,
)


@dataclass
class SectorGrid:
    """Arrays over (field, separation); ``parity`` 0 marks a mixture of both sectors."""

    parity: int
    b: np.ndarray
    energy: np.ndarray
    magnetization: np.ndarray
    separations: np.ndarray
    alpha_plus: np.ndarray
    alpha_minus: np.ndarray
    szsz: np.ndarray
    sz: np.ndarray
    rho: np.ndarray | None = None  # (len(b), len(separations), 4, 4) when available

    def correlators(self, ib: int, il: int) -> PairCorrelators:
        return PairCorrelators(
            float(self.alpha_plus[ib, il]),
            float(self.alpha_minus[ib, il]),
            float(self.szsz[ib, il]),
            float(self.sz[ib, il]),
            float(self.sz[ib, il]),
        )

    def densities(self) -> np.ndarray:
        if self.rho is not None:
            return self.rho
        return density_arrays(self.alpha_plus, self.alpha_minus, self.szsz, self.sz, self.sz)

    def concurrence(self, wootters: bool = False):
        """(values, kinds) arrays; Wootters is used when densities are stored or requested."""
        if wootters or self.rho is not None:
            return wootters_batch(self.densities())
        return concurrence_arrays(self.alpha_plus, self.alpha_minus, self.szsz, self.sz, self.sz)

    def take(self, ib) -> "SectorGrid":
        ib = np.atleast_1d(ib)
        return replace(
            self,
            b=self.b[ib],
            energy=self.energy[ib],
            magnetization=self.magnetization[ib],
            alpha_plus=self.alpha_plus[ib],
            alpha_minus=self.alpha_minus[ib],
            szsz=self.szsz[ib],
            sz=self.sz[ib],
            rho=None if self.rho is None else self.rho[ib],
        )


def mix(plus: SectorGrid, minus: SectorGrid, q) -> SectorGrid:
    """``q * plus + (1 - q) * minus`` pointwise in the field; q broadcasts over fields."""
    q = np.asarray(q, dtype=float)
    q1 = q.reshape(-1)
    q2 = q1[:, None]

    def m(a, b, w):
        return w * a + (1.0 - w) * b

    rho = None
    if plus.rho is not None and minus.rho is not None:
        rho = m(plus.rho, minus.rho, q2[..., None, None])
    return SectorGrid(
        parity=0,
        b=plus.b,
        energy=m(plus.energy, minus.energy, q1),
        magnetization=m(plus.magnetization, minus.magnetization, q1),
        separations=plus.separations,
        alpha_plus=m(plus.alpha_plus, minus.alpha_plus, q2),
        alpha_minus=m(plus.alpha_minus, minus.alpha_minus, q2),
        szsz=m(plus.szsz, minus.szsz, q2),
        sz=m(plus.sz, minus.sz, q2),
        rho=rho,
    )


def _empty(parity, b, ls, with_rho=False):
    nb, nl = len(b), len(ls)
    return SectorGrid(
        parity=parity,
        b=np.asarray(b, dtype=float),
        energy=np.empty(nb),
        magnetization=np.empty(nb),
        separations=np.asarray(ls),
        alpha_plus=np.empty((nb, nl)),
        alpha_minus=np.empty((nb, nl)),
        szsz=np.empty((nb, nl)),
        sz=np.empty((nb, nl)),
        rho=np.empty((nb, nl, 4, 4), dtype=complex) if with_rho else None,
    )


def _fill(grid: SectorGrid, ib: int, il: int, c: PairCorrelators):
    grid.alpha_plus[ib, il] = np.real(c.alpha_plus)
    grid.alpha_minus[ib, il] = np.real(c.alpha_minus)
    grid.szsz[ib, il] = c.szsz
    grid.sz[ib, il] = c.sz_i


def collective_grids(spec, b_grid, separations, pool_map=map):
    from .collective import build_collective_hamiltonian, collective_ground_state, collective_pair_correlators

    b = np.asarray(b_grid, dtype=float)
    ls = np.asarray(separations)
    grids = {p: _empty(p, b, ls) for p in (+1, -1)}

    def solve(x):
        blk = build_collective_hamiltonian(spec.with_field(x))
        return [collective_ground_state(blk, p) for p in (+1, -1)]

    for ib, states in enumerate(pool_map(solve, b)):
        for gs in states:
            g = grids[gs.parity]
            g.energy[ib] = gs.energy
            g.magnetization[ib] = gs.magnetization
            c = collective_pair_correlators(gs)
            for il in range(len(ls)):
                _fill(g, ib, il, c)
    return grids[+1], grids[-1]


def oracle_grids(spec, b_grid, separations, pool_map=map):
    from .oracle import build_hamiltonian, magnetization, sector_ground_states

    b = np.asarray(b_grid, dtype=float)
    ls = np.asarray(separations)
    grids = {p: _empty(p, b, ls, with_rho=True) for p in (+1, -1)}
    n = spec.n

    def solve(x):
        return sector_ground_states(build_hamiltonian(spec.with_field(x)), levels=1)

    for ib, sols in enumerate(pool_map(solve, b)):
        for sol in sols:
            g = grids[sol.parity]
            psi = sol.ground_state
            g.energy[ib] = sol.ground_energy
            g.magnetization[ib] = magnetization(psi, n)
            for il, l in enumerate(ls):
                rho = reduced_two_spin(psi, n, 0, int(l))
                g.rho[ib, il] = rho
                _fill(g, ib, il, PairCorrelators.from_density(rho))
    return grids[+1], grids[-1]


def freefermion_grids(spec, b_grid, separations, pool_map=map):
    from .freefermion import sector_grid

    return sector_grid(spec, +1, b_grid, separations), sector_grid(spec, -1, b_grid, separations)


MODELS = {
    "collective": collective_grids,
    "freefermion": freefermion_grids,
    "oracle": oracle_grids,
}


def model_grids(spec, model: str, b_grid, separations, pool_map=map):
    return MODELS[model](spec, b_grid, separations, pool_map)


def model_gap(spec, model: str):
    """Callable b -> E_+(b) - E_-(b) for the chosen model."""
    if model == "freefermion":
        from .freefermion import sector_energies

        def gap(x):
            p, m = sector_energies(spec, [x])
            return float(p[0] - m[0])

    elif model == "collective":
        from .collective import build_collective_hamiltonian, collective_ground_state

        def gap(x):
            blk = build_collective_hamiltonian(spec.with_field(x))
            return collective_ground_state(blk, 1).energy - collective_ground_state(blk, -1).energy

    else:
        from .oracle import build_hamiltonian, sector_ground_states

        def gap(x):
            p, m = sector_ground_states(build_hamiltonian(spec.with_field(x)), levels=1)
            return p.ground_energy - m.ground_energy

    return gap
