"""Figures for subdivisions and the agreement-density experiment.

Exact rationals are converted to floats here and nowhere else.
"""
from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .subdivision import Subdivision  # noqa: E402

COLORS = ("tab:red", "tab:green", "tab:blue", "tab:orange")


def _style():
    plt.rcParams.update({
        "font.size": 9,
        "axes.linewidth": 0.6,
        "lines.linewidth": 0.8,
        "savefig.bbox": "tight",
        "savefig.dpi": 150,
    })


def _corners(n: int) -> list[tuple[float, float]]:
    if n == 1:
        return [(0.0, 0.0)]
    if n == 2:
        return [(0.0, 0.0), (1.0, 0.0)]
    return [(math.cos(math.pi / 2 + 2 * math.pi * k / n), math.sin(math.pi / 2 + 2 * math.pi * k / n))
            for k in range(n)]


def _planar(S: Subdivision):
    """2-d coordinates for each vertex; every base facet gets its own panel offset."""
    base_facets = list(S.base.facets)
    xy = {}
    for i, F in enumerate(base_facets):
        cs = _corners(len(F))
        off = 2.4 * i
        for v in S.complex.vertices:
            p = S.embedding[v]
            if set(p.support) <= set(F) and v not in xy:
                x = sum(float(p.weight(u)) * cs[j][0] for j, u in enumerate(F)) + off
                y = sum(float(p.weight(u)) * cs[j][1] for j, u in enumerate(F))
                xy[v] = (x, y)
    return xy


def plot_subdivision(S: Subdivision, path: str | Path, title: str = "") -> Path:
    _style()
    xy = _planar(S)
    fig, ax = plt.subplots(figsize=(4.5 * max(1, len(S.base.facets)) ** 0.5, 4))
    for g in S.complex.faces:
        if len(g) == 2 and all(v in xy for v in g):
            (x0, y0), (x1, y1) = xy[g[0]], xy[g[1]]
            ax.plot([x0, x1], [y0, y1], color="0.4", lw=0.5, zorder=1)
    for v, (x, y) in xy.items():
        c = S.complex.color(v)
        ax.scatter([x], [y], s=10, color=COLORS[c % len(COLORS)], zorder=2)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(title or f"{len(S.complex.facets)} facets")
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_density(report, path: str | Path) -> Path:
    """Per mixed edge: both processes' outputs along the edge, exact agreement shaded."""
    _style()
    names = [n for n in ("sigma2", "sigma3") if n in report.per_facet]
    fig, axes = plt.subplots(len(names), 1, figsize=(6, 2.2 * len(names)), sharex=True, squeeze=False)
    for ax, name in zip(axes[:, 0], names):
        rows = [r for r in report.rows if r["facet"] == name]
        n = len(rows)
        for r in rows:
            i = r["index"]
            a, b = float(Fraction(r["p1"])), float(Fraction(r["p2"]))
            if a == b:
                ax.axvspan(i / n, (i + 1) / n, color="0.9", lw=0)
            ax.plot([i / n, (i + 1) / n], [a, a], color=COLORS[0], label="p1" if i == 0 else None)
            ax.plot([i / n, (i + 1) / n], [b, b], color=COLORS[1], ls="--",
                    label="p2" if i == 0 else None)
        agree, total = report.per_facet[name]
        ax.set_ylabel("output")
        ax.set_yticks([0, 1 / 3, 2 / 3, 1], ["0", "1/3", "2/3", "1"])
        ax.legend(loc="upper left", frameon=False, fontsize=7)
        ax.set_title(f"{name}: exact agreement on {agree}/{total} facets", fontsize=9)
    axes[-1, 0].set_xlabel("position along the input edge")
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path
