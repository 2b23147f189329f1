"""Field and temperature scans over a chosen model, plus record emission."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import expit

from .chain import ChainSpec
from .closed_forms import anisotropy, factorization_point, rescaled_asymptotics, side_limits
from .errors import ChainError, ChiOutOfRange, ConfigError, DegenerateCoupling, NonPositiveTemperature
from .sectors import SectorGrid, mix, model_gap, model_grids
from .transitions import XTOL, find_transitions

MODELS = ("collective", "freefermion", "oracle")
DEGENERATE_GAP = 1e-10
TWO_STATE_LABEL = "two-state low-T approximation"
GIBBS_LABEL = "exact Gibbs state"


@dataclass
class RunConfig:
    n: int
    vx: float
    vy: float
    vz: float = 0.0
    range: Any = "nn"
    model: str = "freefermion"
    b_min: float = 0.0
    b_max: float = 1.0
    steps: int = 101
    temperature: float | None = None
    pairs: Any = "all"
    outputs: dict = field(default_factory=dict)
    workers: int = 1

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        """Build from the nested JSON layout (``chain``/``scan``/``outputs`` sections)."""
        doc = dict(doc)
        flat = {}
        flat.update(doc.pop("chain", {}))
        flat.update(doc.pop("scan", {}))
        flat.update(doc)
        known = {f.name for f in fields(cls)}
        unknown = set(flat) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            cfg = cls(**flat)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        return {
            "chain": {"n": self.n, "vx": self.vx, "vy": self.vy, "vz": self.vz, "range": self.range},
            "model": self.model,
            "scan": {"b_min": self.b_min, "b_max": self.b_max, "steps": self.steps},
            "temperature": self.temperature,
            "pairs": self.pairs,
            "outputs": self.outputs,
            "workers": self.workers,
        }

    def spec(self) -> ChainSpec:
        try:
            return ChainSpec.from_keyword(self.n, self.vx, self.vy, self.vz, self.range)
        except ChainError as exc:
            raise ConfigError(str(exc)) from None

    def separations(self) -> list[int]:
        if self.pairs == "all":
            return list(range(1, self.n // 2 + 1))
        ls = [int(x) for x in self.pairs]
        if not ls or min(ls) < 1 or max(ls) > self.n - 1:
            raise ConfigError(f"pair separations must lie in [1, {self.n - 1}]")
        return ls

    def validate(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ConfigError("n must be an integer >= 2")
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}")
        if not self.b_min < self.b_max:
            raise ConfigError("need b_min < b_max")
        if self.b_min < 0:
            raise ConfigError("fields must be >= 0")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ConfigError("steps must be an integer >= 2")
        if self.temperature is not None and not self.temperature > 0:
            raise ConfigError("temperature must be positive")
        if int(self.workers) < 1:
            raise ConfigError("workers must be >= 1")
        spec = self.spec()
        if self.model == "freefermion" and not (
            spec.is_nearest_neighbor() and spec.vz == 0 and spec.n >= 3
        ):
            raise ConfigError("freefermion model needs range 'nn', v_z = 0 and n >= 3")
        if self.model == "collective" and not spec.is_fully_connected():
            raise ConfigError("collective model needs range 'full'")
        if self.model == "oracle":
            limit = 12 if self.temperature is not None else 14
            if self.n > limit:
                raise ConfigError(f"oracle model limited to n <= {limit}")
        self.separations()
        return self


@dataclass
class ScanRecord:
    model: str
    n: int
    chi: float
    delta: float
    b: float
    sector: str
    l: int
    concurrence: float
    kind: str
    energy: float
    magnetization: float


@dataclass
class Fig1Record:
    delta: float
    c_plus: float
    c_minus: float
    c_zero: float
    dM: float


@dataclass
class ScanResult:
    records: list
    metadata: dict


SECTOR_LABEL = {1: "+", -1: "-", 0: "global"}


def _chi(spec: ChainSpec) -> float:
    try:
        return anisotropy(spec.vx, spec.vy, spec.vz)
    except DegenerateCoupling:
        return math.nan


def _factorization(spec):
    try:
        return factorization_point(spec)
    except (ChiOutOfRange, DegenerateCoupling):
        return None


@contextmanager
def _pool(workers: int):
    if workers <= 1:
        yield map
    else:
        with ThreadPoolExecutor(workers) as ex:
            yield ex.map


def _units(spec):
    return "v_x" if spec.vx != 0 else "absolute"


def _records_for(grid: SectorGrid, sector: str, model, n, chi, delta, wootters=False):
    vals, kinds = grid.concurrence(wootters)
    out = []
    for ib, b in enumerate(grid.b):
        for il, l in enumerate(grid.separations):
            out.append(
                ScanRecord(
                    model, n, chi, delta, float(b), sector, int(l),
                    float(vals[ib, il]), str(kinds[ib, il]),
                    float(grid.energy[ib]), float(grid.magnetization[ib]),
                )
            )
    return out


def _global_grid(plus: SectorGrid, minus: SectorGrid) -> SectorGrid:
    """Lower sector pointwise; at an exact crossing the equal mixture of both."""
    gap = plus.energy - minus.energy
    scale = np.maximum(1.0, np.abs(plus.energy))
    q = np.where(np.abs(gap) <= DEGENERATE_GAP * scale, 0.5, np.where(gap < 0, 1.0, 0.0))
    return mix(plus, minus, q)


def _merge_fields(grid, extras):
    pts = list(np.asarray(grid, dtype=float))
    for x in extras:
        if x is None or not grid[0] <= x <= grid[-1]:
            continue
        if min(abs(x - p) for p in pts) > 1e-12:
            pts.append(float(x))
    return np.array(sorted(pts))


def _side_limit_meta(fp, spec, plus, minus, at):
    if fp is None or not 0 < fp.chi < 1:
        return None
    sl = side_limits(fp.chi, spec.n)
    ib = int(np.argmin(np.abs(plus.b - at)))
    cp, _ = plus.take(ib).concurrence()
    cm, _ = minus.take(ib).concurrence()
    return {
        "b_s": fp.b_s,
        "closed_form": asdict(sl),
        "computed_plus": [float(x) for x in cp[0]],
        "computed_minus": [float(x) for x in cm[0]],
        "max_deviation": float(
            max(np.max(np.abs(cp[0] - sl.C_plus)), np.max(np.abs(cm[0] - sl.C_minus)))
        ),
    }


def run_scan(config: RunConfig) -> ScanResult:
    """Per-sector and global ground-state concurrences over a field grid."""
    config.validate()
    spec = config.spec()
    ls = config.separations()
    chi = _chi(spec)
    delta = spec.n * (1.0 - chi)
    fp = _factorization(spec)
    grid = np.linspace(config.b_min, config.b_max, int(config.steps))
    with _pool(int(config.workers)) as pmap:
        plus, minus = model_grids(spec, config.model, grid, ls, pmap)
        transitions = find_transitions(
            model_gap(spec, config.model), grid, plus.energy - minus.energy
        )
        b_s = fp.b_s if fp is not None else None
        fields_all = _merge_fields(grid, [b_s, *transitions])
        extra = np.setdiff1d(fields_all, grid)
        if extra.size:
            p2, m2 = model_grids(spec, config.model, extra, ls, pmap)
            plus, minus = _concat(plus, p2), _concat(minus, m2)
    order = np.argsort(plus.b, kind="stable")
    plus, minus = plus.take(order), minus.take(order)
    glob = _global_grid(plus, minus)
    records = []
    per_sector = [
        _records_for(g, SECTOR_LABEL[g.parity], config.model, spec.n, chi, delta)
        for g in (plus, minus, glob)
    ]
    nl = len(ls)
    for ib in range(len(plus.b)):
        for rows in per_sector:
            records.extend(rows[ib * nl : (ib + 1) * nl])
    meta = {
        "model": config.model,
        "config": config.to_dict(),
        "chi": None if math.isnan(chi) else chi,
        "delta": None if math.isnan(delta) else delta,
        "energy_unit": _units(spec),
        "factorization": None if fp is None else asdict(fp),
        "transitions": transitions,
        "transitions_below_b_c": int(sum(0 < t <= spec.b_c + 1e-12 for t in transitions)),
        "side_limits": None,
    }
    if fp is not None and grid[0] <= fp.b_s <= grid[-1]:
        meta["side_limits"] = _side_limit_meta(fp, spec, plus, minus, fp.b_s)
    return ScanResult(records, meta)


def _concat(a: SectorGrid, b: SectorGrid) -> SectorGrid:
    rho = None if a.rho is None else np.concatenate([a.rho, b.rho])
    return SectorGrid(
        a.parity,
        np.concatenate([a.b, b.b]),
        np.concatenate([a.energy, b.energy]),
        np.concatenate([a.magnetization, b.magnetization]),
        a.separations,
        np.concatenate([a.alpha_plus, b.alpha_plus]),
        np.concatenate([a.alpha_minus, b.alpha_minus]),
        np.concatenate([a.szsz, b.szsz]),
        np.concatenate([a.sz, b.sz]),
        rho,
    )


def thermal_grid(spec, model, T, b_grid, ls, pmap=map) -> SectorGrid:
    """Thermal pair data: exact Gibbs state for the oracle, two-state mixture otherwise."""
    if not T > 0:
        raise NonPositiveTemperature(f"T must be positive, got {T!r}")
    b = np.asarray(b_grid, dtype=float)
    if model == "oracle":
        return _gibbs_grid(spec, T, b, ls, pmap)
    plus, minus = model_grids(spec, model, b, ls, pmap)
    q = expit((minus.energy - plus.energy) / T)
    return mix(plus, minus, q)


def _gibbs_grid(spec, T, b, ls, pmap):
    from .oracle import build_hamiltonian, thermal_state

    nb, nl = len(b), len(ls)
    grid = SectorGrid(
        0, b, np.empty(nb), np.empty(nb), np.asarray(ls),
        np.empty((nb, nl)), np.empty((nb, nl)), np.empty((nb, nl)), np.empty((nb, nl)),
        np.empty((nb, nl, 4, 4), dtype=complex),
    )

    def solve(x):
        return thermal_state(build_hamiltonian(spec.with_field(x)), T)

    from .concurrence import PairCorrelators

    for ib, th in enumerate(pmap(solve, b)):
        grid.energy[ib] = float(th.weights @ th.energies)
        grid.magnetization[ib] = th.magnetization()
        for il, l in enumerate(ls):
            rho = th.reduced(0, int(l))
            grid.rho[ib, il] = rho
            c = PairCorrelators.from_density(rho)
            grid.alpha_plus[ib, il] = c.alpha_plus.real
            grid.alpha_minus[ib, il] = c.alpha_minus.real
            grid.szsz[ib, il] = c.szsz
            grid.sz[ib, il] = c.sz_i
    return grid


def _antiparallel_branch(grid: SectorGrid) -> np.ndarray:
    rho = grid.densities()
    d = np.real(np.diagonal(rho, axis1=-2, axis2=-1))
    return np.abs(rho[..., 1, 2]) - np.sqrt(np.clip(d[..., 0] * d[..., 3], 0.0, None))


def thermal_scan(config: RunConfig) -> ScanResult:
    """Thermal pair concurrences over a field grid, with crossing and vanishing fields."""
    if config.temperature is None:
        raise ConfigError("thermal scan needs a temperature")
    config.validate()
    spec = config.spec()
    T = float(config.temperature)
    ls = config.separations()
    chi = _chi(spec)
    delta = spec.n * (1.0 - chi)
    fp = _factorization(spec)
    grid = np.linspace(config.b_min, config.b_max, int(config.steps))
    with _pool(int(config.workers)) as pmap:
        th = thermal_grid(spec, config.model, T, grid, ls, pmap)

        def at(x):
            return thermal_grid(spec, config.model, T, [x], ls)

        crossing = None
        if fp is not None and grid[0] <= fp.b_s <= grid[-1]:
            crossing = _crossing_field(spec, config.model, T, fp.b_s, grid, ls)
        vanishing = {}
        start = crossing if crossing is not None else grid[0]
        anti = _antiparallel_branch(th)
        for il, l in enumerate(ls):
            vanishing[int(l)] = _vanishing_field(
                lambda x, il=il: float(_antiparallel_branch(at(x))[0, il]), grid, anti[:, il], start
            )
    records = _records_for(th, "thermal", config.model, spec.n, chi, delta, wootters=True)
    meta = {
        "model": config.model,
        "config": config.to_dict(),
        "temperature": T,
        "method": GIBBS_LABEL if config.model == "oracle" else TWO_STATE_LABEL,
        "energy_unit": _units(spec),
        "factorization": None if fp is None else asdict(fp),
        "crossing_field": crossing,
        "vanishing_fields": vanishing,
    }
    if crossing is not None and 0 < fp.chi < 1:
        vals, _ = at(crossing).concurrence(wootters=True)
        meta["crossing_concurrences"] = [float(v) for v in vals[0]]
        meta["C_zero"] = side_limits(fp.chi, spec.n).C_zero
    return ScanResult(records, meta)


def _crossing_field(spec, model, T, b_s, grid, ls):
    """Field where the thermal concurrences of all separations meet."""
    if model != "oracle":
        # two-state mixture: equal weights exactly where the sector energies cross
        gap = model_gap(spec, model)
        lo, hi = max(grid[0], b_s - 1e-6), min(grid[-1], b_s + 1e-6)
        if gap(lo) * gap(hi) < 0:
            return float(brentq(gap, lo, hi, xtol=XTOL))
        return float(b_s)

    def spread(x):
        vals, _ = thermal_grid(spec, model, T, [x], ls).concurrence(wootters=True)
        return float(np.ptp(vals[0]))

    w = 20 * T
    res = minimize_scalar(
        spread, bounds=(max(grid[0], b_s - w), min(grid[-1], b_s + w)), method="bounded",
        options={"xatol": 1e-10},
    )
    return float(res.x)


def _vanishing_field(branch, grid, values, start):
    """First field above ``start`` where the antiparallel branch drops to zero."""
    idx = np.flatnonzero(grid > start)
    for a, b in zip(idx[:-1], idx[1:]):
        if values[a] > 0 >= values[b]:
            return float(brentq(branch, grid[a], grid[b], xtol=XTOL))
    return None


def fig1_curves(delta_grid) -> list[Fig1Record]:
    return [Fig1Record(float(d), *rescaled_asymptotics(float(d))) for d in delta_grid]


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    return str(x)


def _json_value(x):
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return None if not math.isfinite(x) else float(_fmt(x))
    if isinstance(x, np.integer):
        return int(x)
    return x


def emit(records, fmt: str, path, metadata: dict | None = None, **plot_options):
    """Write records as csv, json or svg; returns the path written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cls = type(records[0]) if records else ScanRecord
    names = [f.name for f in fields(cls)]
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(names)
            for r in records:
                w.writerow([_fmt(getattr(r, k)) for k in names])
    elif fmt == "json":
        rows = [{k: _json_value(getattr(r, k)) for k in names} for r in records]
        path.write_text(json.dumps(rows, indent=1) + "\n", encoding="utf-8")
    elif fmt == "svg":
        from .plotting import plot_fig1, plot_scan

        if cls is Fig1Record:
            plot_fig1(records, path, **plot_options)
        else:
            plot_scan(records, path, metadata=metadata, **plot_options)
    else:
        raise ConfigError(f"unknown output format {fmt!r}")
    return path


def write_metadata(metadata: dict, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(metadata, indent=1, default=_json_value) + "\n", encoding="utf-8")
    return path


_CASTS = {"n": int, "l": int, "model": str, "sector": str, "kind": str}


def read_csv(path) -> list:
    """Parse a CSV written by :func:`emit` back into records."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        return []
    cls = Fig1Record if "c_plus" in rows[0] else ScanRecord
    return [cls(**{k: _CASTS.get(k, float)(v) for k, v in row.items()}) for row in rows]
