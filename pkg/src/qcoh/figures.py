"""Matplotlib renderings of experiment results, saved next to the CSV.

matplotlib is imported lazily so the CLI stays fast when no figures are
requested.
"""

import itertools
from pathlib import Path

import numpy as np

_RC = {
    "figure.dpi": 120,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams.update(_RC)
    return plt


def _stem(out) -> Path:
    out = Path(out)
    return out.with_name(out.stem)


PANEL_TITLES = {
    "a": "C_l1^2/(d-1)^2 + S/ln d",
    "b": "C_l1^2/(d-1)^2 + M_g",
    "c": "C_r/ln d + M_l",
    "d": "C_r/ln d + M_g",
}


def render_histograms(result, out) -> list:
    """One 2x2 panel grid per qubit number; returns written paths."""
    plt = _pyplot()
    rows = result.rows
    n_values = sorted({row[2] for row in rows})
    ranks = sorted({row[1] for row in rows})
    written = []
    for n in n_values:
        fig, axes = plt.subplots(2, 2, figsize=(7.2, 5.4))
        for ax, label in zip(axes.flat, "abcd"):
            for rank, color in zip(ranks, itertools.cycle(
                    ("0.55", "white", "tab:blue", "tab:orange"))):
                sel = [(lo, hi, f) for (p, r, nn, lo, hi, f) in rows
                       if p == label and r == rank and nn == n]
                if not sel:
                    continue
                lo = np.array([s[0] for s in sel])
                hi = np.array([s[1] for s in sel])
                freq = np.array([s[2] for s in sel])
                ax.bar(lo, freq, width=hi - lo, align="edge",
                       facecolor=color, edgecolor="black", linewidth=0.4,
                       alpha=0.85, label=f"rank {rank}")
            ax.axvline(1.0, color="red", linewidth=0.8, linestyle="--")
            ax.set_title(f"({label}) {PANEL_TITLES[label]}")
            ax.set_xlabel("trade-off value")
            ax.set_ylabel("rel. freq.")
            ax.legend()
        fig.suptitle(f"coherence/mixedness trade-offs, {n}-qubit states")
        fig.tight_layout()
        path = Path(f"{_stem(out)}_hist_{n}q.png")
        fig.savefig(path)
        plt.close(fig)
        written.append(path)
    return written


def render_dicke_curves(result, out) -> list:
    """Normalized additivity score versus excitation number."""
    plt = _pyplot()
    rows = [row for row in result.rows if row[3]]  # normalized only
    n_values = sorted({row[0] for row in rows})
    fig, axes = plt.subplots(2, 1, figsize=(6.0, 6.4), sharex=True)
    for ax, measure in zip(axes, ("C_l1", "C_r")):
        for n in n_values:
            pts = sorted((r, direct) for (nn, r, m, _, _, direct) in rows
                         if nn == n and m == measure)
            if pts:
                ax.plot([p[0] for p in pts], [p[1] for p in pts],
                        marker="o", markersize=3, label=f"n={n}")
        ax.axhline(0.0, color="black", linewidth=0.8)
        ax.set_ylabel(f"normalized {measure} score")
        ax.legend(ncols=2)
    axes[1].set_xlabel("excitations r")
    fig.suptitle("Dicke-state additivity scores")
    fig.tight_layout()
    path = Path(f"{_stem(out)}_curves.png")
    fig.savefig(path)
    plt.close(fig)
    return [path]


def render_table(result, out) -> list:
    """Grouped bars of satisfaction percentages per measure."""
    plt = _pyplot()
    percent = result.extras["percent"]
    measures = sorted({(k[2], k[3]) for k in percent})
    ranks = sorted({k[0] for k in percent})
    n_values = sorted({k[1] for k in percent})
    fig, axes = plt.subplots(1, len(measures),
                             figsize=(2.3 * len(measures) + 1, 3.4),
                             sharey=True)
    axes = np.atleast_1d(axes)
    width = 0.8 / max(1, len(n_values))
    for ax, (family, power) in zip(axes, measures):
        for j, n in enumerate(n_values):
            vals = [percent.get((r, n, family, power), np.nan) for r in ranks]
            ax.bar(np.arange(len(ranks)) + j * width, vals, width=width,
                   label=f"n={n}")
        ax.set_xticks(np.arange(len(ranks)) + 0.4 - width / 2)
        ax.set_xticklabels([str(r) for r in ranks])
        ax.set_xlabel("rank")
        suffix = f"^{power}" if power > 1 else ""
        ax.set_title(f"{family}{suffix}")
    axes[0].set_ylabel("% satisfying additivity")
    axes[-1].legend()
    fig.tight_layout()
    path = Path(f"{_stem(out)}_table.png")
    fig.savefig(path)
    plt.close(fig)
    return [path]


def render(result, out) -> list:
    """Dispatch to the renderer matching the experiment."""
    renderer = {
        "tradeoff_histograms": render_histograms,
        "additivity_table": render_table,
        "dicke_curves": render_dicke_curves,
    }.get(result.experiment)
    if renderer is None:
        return []
    return renderer(result, out)
