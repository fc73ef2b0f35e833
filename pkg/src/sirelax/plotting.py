"""SVG figures for solution curves.

Output is byte-for-byte reproducible: the SVG id salt is fixed, text is kept
as ``<text>`` elements and the date stamp is dropped.  Each curve sits in a
group whose id is ``series-<column>``.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["STYLE", "COLORS", "plot_columns", "plot_iterates"]

STYLE = {
    "svg.hashsalt": "sirelax",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
}

COLORS = {"S": "#1f77b4", "I": "#d62728", "R": "#2ca02c", "D": "#7f7f7f", "N": "#000000"}
LABELS = {"S": "susceptible", "I": "infective", "R": "removed", "D": "deceased", "N": "total"}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_columns(columns, path, title=None):
    """Draw every compartment column against ``t`` and write an SVG."""
    t = np.asarray(columns["t"], dtype=float)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        for name, values in columns.items():
            if name == "t":
                continue
            style = "--" if name == "N" else "-"
            (line,) = ax.plot(t, values, style, color=COLORS.get(name), lw=1.5,
                              label=f"{name} ({LABELS.get(name, name)})")
            line.set_gid(f"series-{name}")
        ax.set_xlabel("time (days)")
        ax.set_ylabel("persons")
        ax.set_xlim(t[0], t[-1])
        if title:
            ax.set_title(title)
        ax.legend(loc="best")
        fig.tight_layout()
        _save(fig, path)


def plot_iterates(sequence, path, every=1):
    """Removals iterates ``R_k`` on one axis, darker for later ``k``."""
    t = sequence.grid.points
    K = sequence.K
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        cmap = plt.get_cmap("viridis")
        for k in range(1, K + 1, every):
            (line,) = ax.plot(t, sequence[k], color=cmap(k / max(K, 1)), lw=1.0)
            line.set_gid(f"iterate-{k}")
        ax.set_xlabel("time (days)")
        ax.set_ylabel("removals iterate")
        fig.tight_layout()
        _save(fig, path)
