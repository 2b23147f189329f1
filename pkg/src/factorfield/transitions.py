"""Location of ground-state parity transitions (sector level crossings)."""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

XTOL = 1e-13


def find_transitions(gap, grid, gap_values=None) -> list[float]:
    """Fields where ``gap(b) = E_+(b) - E_-(b)`` changes sign, refined by Brent's method.

    ``gap_values`` may carry the gap already evaluated on ``grid``. A grid
    point where the gap vanishes exactly counts as one crossing.
    """
    grid = np.asarray(grid, dtype=float)
    vals = np.array([gap(x) for x in grid]) if gap_values is None else np.asarray(gap_values)
    sign = np.sign(vals)
    roots = []
    i = 0
    while i < len(grid) - 1:
        if sign[i] == 0:
            roots.append(float(grid[i]))
            i += 1
            continue
        j = i + 1
        if sign[j] == 0:
            # crossing exactly on the grid: count only if the sign actually flips
            k = j
            while k < len(grid) - 1 and sign[k] == 0:
                k += 1
            if sign[k] != sign[i] and sign[k] != 0:
                roots.append(float(grid[j]))
            i = k
            continue
        if sign[i] != sign[j]:
            roots.append(float(brentq(gap, grid[i], grid[j], xtol=XTOL, rtol=4 * np.finfo(float).eps)))
        i = j
    return roots
