"""Figures written next to the CSV outputs (``--plot``)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "legend.fontsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}

MODE_COLORS = {"snap": "#1b6ca8", "xor-only": "#d1495b", "solver-only": "#66a182"}


def plot_cx_histogram(edges, counts, path: str | Path, title: str = "") -> Path:
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(3.4, 2.4))
        widths = [hi - lo for lo, hi in zip(edges[:-1], edges[1:])]
        ax.bar(edges[:-1], counts, width=widths, align="edge", color="#1b6ca8",
               edgecolor="white", linewidth=0.5)
        # x axis pinned at 0 so near-zero C(x) would be visible
        ax.set_xlim(left=0, right=float(edges[-1]) * 1.05 or 1.0)
        ax.set_xlabel("C(x) [bytes]")
        ax.set_ylabel("members")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_compare(rows: Sequence[dict], path: str | Path,
                 metrics: Sequence[str] = ("credibility", "uniqueness", "ncd", "entropy_mean")) -> Path:
    """Grouped bars per instance, one panel per metric."""
    path = Path(path)
    instances = sorted({r["instance"] for r in rows})
    modes = [m for m in MODE_COLORS if any(r["mode"] == m for r in rows)]
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, len(metrics), figsize=(2.6 * len(metrics), 2.9), squeeze=False)
        width = 0.8 / max(len(modes), 1)
        for ax, metric in zip(axes[0], metrics):
            for j, mode in enumerate(modes):
                ys = []
                for inst in instances:
                    hit = [r for r in rows if r["instance"] == inst and r["mode"] == mode]
                    val = hit[0].get(metric) if hit else ""
                    ys.append(float(val) if val not in ("", None) else 0.0)
                xs = [i + j * width for i in range(len(instances))]
                ax.bar(xs, ys, width=width, color=MODE_COLORS[mode], label=mode)
            ax.set_xticks([i + 0.4 - width / 2 for i in range(len(instances))])
            ax.set_xticklabels(instances, rotation=45, ha="right")
            ax.set_title(metric)
        handles, labels = axes[0][0].get_legend_handles_labels()
        fig.legend(handles, labels, loc="upper center", ncol=len(modes), frameon=False)
        fig.tight_layout(rect=(0, 0, 1, 0.88))
        fig.savefig(path)
        plt.close(fig)
    return path
