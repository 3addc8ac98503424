"""Figures for segmentation runs, written straight to files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.labelsize": 10,
    "font.size": 9,
    "legend.fontsize": 8,
    "legend.frameon": False,
}

METHOD_COLORS = {"lsm": "#1f4e79", "random": "#a6a6a6", "combined": "#c55a11", "external": "#548235"}


def _save(fig, path, metadata=None):
    fig.tight_layout()
    fig.savefig(path, metadata=metadata)
    plt.close(fig)
    return path


def plot_trace(trace, path, reference=(), title=None, metadata=None):
    """Link-set medians and median jumps for one document.

    Reference section starts are dashed lines, inserted boundaries are
    markers on the jump series, and the mean jump is the threshold line.
    """
    with plt.rc_context(STYLE):
        fig, (ax_m, ax_d) = plt.subplots(2, 1, sharex=True, figsize=(7, 4.5))
        n = len(trace.medians)
        x = np.arange(1, n + 1)
        med = np.array([np.nan if v is None else float(v) for v in trace.medians.values])
        ax_m.plot(x, med, "o-", ms=3, lw=1, color=METHOD_COLORS["lsm"])
        ax_m.set_ylabel("link set median")

        dx = np.arange(2, n + 1)
        diffs = np.array([np.nan if d is None else float(d) for d in trace.diffs])
        ax_d.bar(dx, diffs, width=0.8, color="#9dc3e6")
        if trace.mean_diff is not None:
            ax_d.axhline(float(trace.mean_diff), color="k", lw=0.8, label="mean difference")
        b = np.array(trace.boundaries, dtype=int)
        if b.size:
            ax_d.plot(b, diffs[b - 2], "v", color=METHOD_COLORS["combined"], label="boundary")
        ax_d.set_ylabel("median difference")
        ax_d.set_xlabel("sentence")
        for ax in (ax_m, ax_d):
            for r in reference:
                ax.axvline(r - 0.5, ls="--", lw=0.8, color="0.4")
        ax_d.legend(loc="upper right")
        if title:
            ax_m.set_title(title)
        return _save(fig, path, metadata)


def plot_summary(summary, path, measures=("recall", "precision"), metadata=None):
    """Mean recall and precision per link level, one bar group per method."""
    levels = sorted({lvl for _, _, lvl in summary.cells if lvl is not None})
    methods = sorted({m for _, m, _ in summary.cells},
                     key=lambda m: list(METHOD_COLORS).index(m) if m in METHOD_COLORS else 9)
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, len(measures), figsize=(4 * len(measures), 3.2), squeeze=False)
        width = 0.8 / max(len(methods), 1)
        for ax, measure in zip(axes[0], measures):
            for k, method in enumerate(methods):
                vals = []
                for lvl in levels:
                    cell = [v[measure] for (g, m, lv), v in summary.cells.items()
                            if m == method and lv == lvl and v[measure] is not None]
                    vals.append(np.mean(cell) if cell else np.nan)
                pos = np.arange(len(levels)) + (k - (len(methods) - 1) / 2) * width
                ax.bar(pos, vals, width, label=method, color=METHOD_COLORS.get(method, "0.5"))
            ax.set_xticks(np.arange(len(levels)))
            ax.set_xticklabels([str(lvl) for lvl in levels])
            ax.set_xlabel("link level")
            ax.set_ylabel(f"mean {measure}")
            ax.set_ylim(0, 1)
        axes[0][0].legend(loc="upper right")
        return _save(fig, path, metadata)
