"""The three figure renderers: family violins of average resourcefulness,
the witness pair grid, and the PCA projection with loading arrows.

Renders are deterministic: Agg backend, fixed colors, fixed svg hash salt,
no embedded dates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import FAMILY_COLORS, FAMILY_ORDER, WITNESS_IDS, read_dataset

plt.rcParams["svg.hashsalt"] = "qrtplots"

FIGURE_IDS = ("averages", "pairgrid", "pca")


@dataclass(frozen=True)
class PlotSpec:
    figure_id: str
    inputs: tuple
    output: str
    colors: dict = field(default_factory=lambda: dict(FAMILY_COLORS))

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(f"unknown figure {self.figure_id!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV required")


def _save(fig, output):
    path = Path(output)
    kwargs = {"metadata": {"Date": None}} if path.suffix == ".svg" else {}
    fig.savefig(path, dpi=150, **kwargs)
    plt.close(fig)


def _families_present(fams):
    return [f for f in FAMILY_ORDER if f in set(fams.tolist())]


def render_averages(spec: PlotSpec):
    """One violin per (family, dataset): distribution over states of the mean
    of the eight witness values, dashed line at the median."""
    datasets = [read_dataset(p) for p in spec.inputs]
    fig, ax = plt.subplots(figsize=(9, 4.2))
    n_sets = len(datasets)
    width = 0.8 / n_sets
    cmap = plt.get_cmap("viridis")
    all_fams = sorted(
        {f for fams, _, _ in datasets for f in fams.tolist()},
        key=lambda f: FAMILY_ORDER.index(f) if f in FAMILY_ORDER else 99,
    )
    for di, (fams, ns, vals) in enumerate(datasets):
        shade = cmap(0.15 + 0.7 * di / max(1, n_sets - 1)) if n_sets > 1 else cmap(0.4)
        means = vals.mean(axis=1)
        positions, data = [], []
        for fi, f in enumerate(all_fams):
            sel = fams == f
            if sel.any():
                positions.append(fi + (di - (n_sets - 1) / 2) * width)
                data.append(means[sel])
        parts = ax.violinplot(
            data, positions=positions, widths=width * 0.95, showmedians=True,
            showextrema=False,
        )
        for body in parts["bodies"]:
            body.set_facecolor(shade)
            body.set_alpha(0.75)
        parts["cmedians"].set_color("black")
        parts["cmedians"].set_linestyle("--")
        label_n = ns[0] if ns.size else "?"
        ax.plot([], [], color=shade, label=f"n = {label_n}")
    ax.set_xticks(range(len(all_fams)))
    ax.set_xticklabels(all_fams)
    ax.set_ylabel("mean witness value")
    ax.set_xlabel("state family")
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title("Average resourcefulness by family")
    fig.tight_layout()
    _save(fig, spec.output)


def render_pairgrid(spec: PlotSpec):
    """8x8 witness-vs-witness scatter; with two inputs the second dataset
    fills the upper triangle, mirrored across the diagonal."""
    first = read_dataset(spec.inputs[0])
    second = read_dataset(spec.inputs[1]) if len(spec.inputs) > 1 else first
    k = len(WITNESS_IDS)
    fig, axes = plt.subplots(k, k, figsize=(13, 13))
    for i in range(k):
        for j in range(k):
            ax = axes[i, j]
            if i == j:
                ax.text(0.5, 0.5, WITNESS_IDS[i], ha="center", va="center",
                        fontsize=11)
                ax.set_xticks([])
                ax.set_yticks([])
                continue
            fams, _, vals = first if i > j else second
            for f in _families_present(fams):
                sel = fams == f
                ax.scatter(vals[sel, j], vals[sel, i], s=2.5,
                           color=spec.colors[f], label=f, linewidths=0)
            ax.set_xlim(-0.05, 1.05)
            ax.set_ylim(-0.05, 1.05)
            ax.set_xticks([])
            ax.set_yticks([])
    handles = [
        plt.Line2D([], [], marker="o", linestyle="", color=spec.colors[f], label=f)
        for f in FAMILY_ORDER
    ]
    fig.legend(handles=handles, loc="lower center", ncol=9, fontsize=8)
    fig.suptitle("Witness vs witness by family", y=0.995)
    fig.tight_layout(rect=(0, 0.03, 1, 0.99))
    _save(fig, spec.output)


def render_pca(spec: PlotSpec, loadings_path=None, arrow_scale: float = 2.0):
    """Projection scatter onto the first two components with loading arrows."""
    from .io import read_loadings, read_projections

    fams, pts = read_projections(spec.inputs[0])
    fig, ax = plt.subplots(figsize=(6.5, 5.5))
    for f in _families_present(fams):
        sel = fams == f
        ax.scatter(pts[sel, 0], pts[sel, 1], s=6, color=spec.colors[f], label=f,
                   linewidths=0)
    if loadings_path:
        names, rows = read_loadings(loadings_path)
        for name, row in zip(names, rows):
            dx, dy = arrow_scale * row[0], arrow_scale * row[1]
            ax.annotate(
                "", xy=(dx, dy), xytext=(0, 0),
                arrowprops={"arrowstyle": "->", "color": "black", "lw": 1.2},
            )
            ax.text(dx * 1.08, dy * 1.08, name, fontsize=9, ha="center")
    ax.set_xlabel("first principal component")
    ax.set_ylabel("second principal component")
    ax.legend(loc="best", fontsize=8)
    ax.set_title("Principal component projection")
    fig.tight_layout()
    _save(fig, spec.output)


def render(spec: PlotSpec, loadings=None):
    if spec.figure_id == "averages":
        render_averages(spec)
    elif spec.figure_id == "pairgrid":
        render_pairgrid(spec)
    else:
        render_pca(spec, loadings_path=loadings)
    return spec.output
