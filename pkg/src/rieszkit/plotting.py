"""Figure output for the CLI report path.

Figures are written with the Agg backend and a fixed SVG hash salt and no
date metadata, so repeated runs produce identical files.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 4.2),
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.frameon": False,
    "svg.hashsalt": "rieszkit",
    "svg.fonttype": "path",
}

MARKERS = "osD^v<>ph*"


def plot_roots(rows, path, fmt="svg"):
    """Scatter of root value against delta, one series per root index.

    ``rows`` are dicts with at least ``delta``, ``root_index`` and ``mu``.
    """
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for k in sorted({r["root_index"] for r in rows}):
            pts = [(r["delta"], r["mu"]) for r in rows if r["root_index"] == k]
            ax.plot([p[0] for p in pts], [p[1] for p in pts], MARKERS[k % len(MARKERS)],
                    ms=5, label=f"root {k + 1}")
        ax.set_xlabel(r"$\delta$")
        ax.set_ylabel(r"$\mu$")
        ax.set_ylim(0, 1)
        ax.set_title(r"Roots of $\sum_{n\geq1} n^{-\delta}/(1-n\mu)=0$")
        ax.legend(loc="upper right", ncol=2)
        fig.tight_layout()
        meta = {"Date": None} if fmt == "svg" else {}
        fig.savefig(path, format=fmt, metadata=meta)
        plt.close(fig)
