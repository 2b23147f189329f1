"""Cross-checks of the fast routes and closed forms against the exact oracle.

Every check returns a :class:`CheckResult`; ``run_all`` collects them for the
``verify`` subcommand, which exits nonzero if any fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chain import ChainSpec
from .closed_forms import factorization_point, rescaled_asymptotics, side_limits
from .sectors import model_gap, model_grids
from .transitions import find_transitions


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name}: {self.value:.3e} (tol {self.tolerance:.0e})"


def _result(name, err, tol, **detail):
    err = float(err)
    return CheckResult(name, bool(err < tol), err, tol, detail)


def random_attractive_spec(rng: np.random.Generator, n_min: int = 3, n_max: int = 12) -> ChainSpec:
    """Random cyclic profile r_l >= 0 and couplings v_z < v_y < v_x, field at b_s."""
    n = int(rng.integers(n_min, n_max + 1))
    half = rng.uniform(0.0, 1.0, n // 2)
    r = np.empty(n - 1)
    for l in range(1, n):
        r[l - 1] = half[min(l, n - l) - 1]
    r[0] = r[-1] = r[0] + 0.1  # keep the chain connected
    vx, vy, vz = sorted(rng.uniform(-1.0, 1.0, 3), reverse=True)
    vx = max(vx, abs(vy) + 1e-3)
    spec = ChainSpec(n, vx, vy, vz, tuple(r))
    return spec.with_field(factorization_point(spec).b_s)


def check_factorization(count: int = 50, seed: int = 0, tol: float = 1e-10) -> CheckResult:
    from .oracle import verify_factorization

    rng = np.random.default_rng(seed)
    worst, where = 0.0, None
    for _ in range(count):
        spec = random_attractive_spec(rng)
        res = verify_factorization(spec).residual
        if res >= worst:
            worst, where = res, spec
    return _result("factorization residual", worst, tol, count=count, worst_n=where.n)


def _chain(n, chi, model, b=0.0):
    rng = "full" if model == "collective" else "nn"
    return ChainSpec.from_keyword(n, 1.0, chi, 0.0, rng, b)


def check_side_limits(n: int = 10, chi: float = 0.75, models=("freefermion", "collective", "oracle"),
                      tol: float = 1e-9) -> CheckResult:
    sl = side_limits(chi, n)
    ls = list(range(1, n // 2 + 1))
    err = 0.0
    detail = {"C_plus": sl.C_plus, "C_minus": sl.C_minus}
    for model in models:
        spec = _chain(n, chi, model)
        b_s = factorization_point(spec).b_s
        plus, minus = model_grids(spec, model, [b_s], ls)
        cp, _ = plus.concurrence()
        cm, _ = minus.concurrence()
        err = max(err, np.abs(cp - sl.C_plus).max(), np.abs(cm - sl.C_minus).max())
        detail[model] = {"plus": cp[0].tolist(), "minus": cm[0].tolist()}
    return _result(f"side limits n={n} chi={chi}", err, tol, **detail)


def _compare(spec, model, b, ls):
    a_plus, a_minus = model_grids(spec, "oracle", b, ls)
    m_plus, m_minus = model_grids(spec, model, b, ls)
    err = 0.0
    for a, m in ((a_plus, m_plus), (a_minus, m_minus)):
        err = max(
            err,
            np.abs(a.energy - m.energy).max(),
            np.abs(a.magnetization - m.magnetization).max(),
            np.abs(a.concurrence()[0] - m.concurrence()[0]).max(),
        )
    return err


def check_model_equivalence(model: str, sizes=range(3, 13), tol: float = 1e-9) -> CheckResult:
    """Sector energies, magnetizations and all pair concurrences on a 5x5 (v_y, b) grid."""
    vys = np.linspace(-0.5, 0.8, 5)
    fields = np.linspace(0.07, 1.43, 5)
    err, worst = 0.0, None
    for n in sizes:
        ls = list(range(1, n))
        for vy in vys:
            spec = _chain(n, vy, model)
            e = _compare(spec, model, fields * spec.r, ls)
            if e >= err:
                err, worst = e, (n, float(vy))
    return _result(f"{model} vs oracle", err, tol, worst=worst)


def check_transitions(n: int = 10, chi: float = 0.75, model: str = "freefermion",
                      steps: int = 400, tol: float = 1e-8) -> CheckResult:
    spec = _chain(n, chi, model)
    b_s = factorization_point(spec).b_s
    grid = np.linspace(1e-6, spec.b_c, steps)
    gap = model_gap(spec, model)
    found = find_transitions(gap, grid)
    count_ok = len(found) == n // 2
    last_err = abs(found[-1] - b_s) if found else math.inf
    residual = max((abs(gap(t)) for t in found), default=math.inf)
    err = last_err if count_ok and residual < 1e-10 else math.inf
    return _result(
        f"transitions {model} n={n} chi={chi}", err, tol,
        count=len(found), expected=n // 2, fields=found, gap_residual=residual,
    )


def check_magnetization_jump(n: int = 10, chi: float = 0.75, model: str = "freefermion",
                             tol: float = 1e-9, slope_tol: float = 1e-4, h: float = 1e-6) -> CheckResult:
    spec = _chain(n, chi, model)
    b_s = factorization_point(spec).b_s
    dM = side_limits(chi, n).dM
    plus, minus = model_grids(spec, model, [b_s], [1])
    jump = float(minus.magnetization[0] - plus.magnetization[0])
    gap = model_gap(spec, model)
    # d(E_+ - E_-)/db = M_+ - M_- by Hellmann-Feynman
    slope = (gap(b_s + h) - gap(b_s - h)) / (2 * h)
    ok = abs(jump - dM) < tol and abs(-slope - dM) < slope_tol
    return CheckResult(
        f"magnetization jump {model} n={n} chi={chi}", ok, abs(jump - dM), tol,
        {"dM": dM, "jump": jump, "slope": -slope},
    )


def check_asymptotics(n: int = 10_000, deltas=(0.5, 1.0, 2.5, 5.0), tol: float = 1e-3) -> CheckResult:
    err = 0.0
    for d in deltas:
        sl = side_limits(1.0 - d / n, n)
        finite = np.array([n * sl.C_plus, n * sl.C_minus, n * sl.C_zero, sl.dM])
        asym = np.array(rescaled_asymptotics(d))
        err = max(err, float(np.max(np.abs(finite / asym - 1.0))))
    return _result(f"large-n asymptotics n={n}", err, tol)


def run_all(quick: bool = False) -> list[CheckResult]:
    sizes = range(3, 9) if quick else range(3, 13)
    out = [check_factorization(count=10 if quick else 50)]
    out.append(check_side_limits())
    out.append(check_model_equivalence("freefermion", sizes))
    out.append(check_model_equivalence("collective", sizes))
    for chi in (0.5, 0.75):
        for model in ("freefermion", "collective"):
            out.append(check_transitions(chi=chi, model=model))
    out.append(check_magnetization_jump())
    out.append(check_magnetization_jump(model="collective"))
    out.append(check_asymptotics())
    return out
