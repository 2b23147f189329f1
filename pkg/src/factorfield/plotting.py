"""Matplotlib rendering of field scans and large-n side-limit curves to image files."""

from __future__ import annotations

from collections import defaultdict
from math import sqrt
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

golden_mean = (sqrt(5.0) - 1.0) / 2.0
fig_width = 6.4

RC = {
    "axes.labelsize": 10,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "font.family": "serif",
    "lines.linewidth": 1.0,
    "svg.hashsalt": "factorfield",
    "svg.fonttype": "none",
}

SECTOR_TITLES = {
    "+": "even parity ground state",
    "-": "odd parity ground state",
    "global": "global ground state",
    "thermal": "thermal state",
}


def _save(fig, path):
    path = Path(path)
    meta = {"Date": None} if path.suffix.lower() == ".svg" else {}
    fig.savefig(path, metadata=meta, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_scan(records, path, metadata=None, rescaled=True):
    """One panel per sector, one line per separation, concurrence against field."""
    series = defaultdict(lambda: ([], []))
    n = records[0].n if records else 1
    for r in records:
        xs, ys = series[(r.sector, r.l)]
        xs.append(r.b)
        ys.append(r.concurrence * (n if rescaled else 1))
    sectors = [s for s in ("+", "-", "global", "thermal") if any(k[0] == s for k in series)]
    with plt.rc_context(RC):
        fig, axes = plt.subplots(
            len(sectors) or 1, 1, sharex=True, squeeze=False,
            figsize=(fig_width, fig_width * golden_mean * max(1, len(sectors)) / 1.6),
        )
        ls = sorted({k[1] for k in series})
        cmap = plt.get_cmap("viridis", max(len(ls), 2))
        b_s = None
        limits = []
        if metadata:
            fp = metadata.get("factorization") or {}
            b_s = fp.get("b_s")
            sl = (metadata.get("side_limits") or {}).get("closed_form")
            if sl:
                scale = n if rescaled else 1
                limits = [scale * sl["C_plus"], scale * sl["C_minus"], scale * sl["C_zero"]]
        for ax, sector in zip(axes[:, 0], sectors):
            for i, l in enumerate(ls):
                if (sector, l) not in series:
                    continue
                xs, ys = series[(sector, l)]
                ax.plot(xs, ys, color=cmap(i), label=f"l={l}")
            for y in limits:
                ax.axhline(y, color="0.5", ls=":", lw=0.8)
            if b_s is not None:
                ax.axvline(b_s, color="k", ls="--", lw=0.6)
            ax.set_ylabel(r"$n\,C_l$" if rescaled else r"$C_l$")
            ax.set_title(SECTOR_TITLES.get(sector, sector), fontsize=9)
            if len(ls) <= 12:
                ax.legend(frameon=False, ncol=2)
        axes[-1, 0].set_xlabel(r"$b$")
        return _save(fig, path)


def plot_fig1(records, path):
    d = [r.delta for r in records]
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(fig_width, fig_width * golden_mean))
        ax.plot(d, [r.c_minus for r in records], "r-", label=r"$c_-$")
        ax.plot(d, [r.c_zero for r in records], "r--", label=r"$c_0$")
        ax.plot(d, [r.c_plus for r in records], "b-", label=r"$c_+$")
        ax.plot(d, [r.dM for r in records], "k:", label=r"$\Delta M$")
        ax.set_xlabel(r"$\delta$")
        ax.set_ylabel("rescaled concurrence")
        ax.set_xlim(min(d), max(d))
        ax.set_ylim(bottom=0)
        ax.legend(frameon=False)
        return _save(fig, path)
