"""Report figures written to files next to the delimited outputs."""

from __future__ import annotations

from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .model import LogFit  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
    "figure.figsize": (4.5, 3.0),
    "savefig.dpi": 150,
    "svg.hashsalt": "thvg",
}

# Drop version/date stamps so re-runs write identical files.
_META = {
    "png": {"Software": None},
    "svg": {"Creator": None, "Date": None},
    "pdf": {"Creator": None, "Producer": None, "CreationDate": None},
}


def _save(fig, path: str) -> None:
    fmt = path.rsplit(".", 1)[-1].lower()
    fig.savefig(path, bbox_inches="tight", metadata=_META.get(fmt))
    plt.close(fig)


def plot_density_sweep(points: Sequence[tuple[int, float]], path: str,
                       fit: Optional[LogFit] = None, title: Optional[str] = None) -> str:
    """Density against source count, with the logarithmic fit when given."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        n = np.array([p[0] for p in points], dtype=float)
        d = np.array([p[1] for p in points], dtype=float)
        ax.plot(n, d, "o", color="0.2", ms=4, label="network density")
        if fit is not None:
            xs = np.linspace(n.min(), n.max(), 200)
            ax.plot(xs, fit.predict(xs), "--", color="C3", lw=1,
                    label=f"{fit.a:.4g} ln(n) + {fit.b:.4g}  (R² = {fit.r_squared:.3f})")
            ax.legend(loc="upper right")
        ax.set_xlabel("number of sources n")
        ax.set_ylabel("density D")
        if title:
            ax.set_title(title)
        _save(fig, path)
    return path


def plot_degree_histogram(histogram: dict[int, int], path: str, title: Optional[str] = None) -> str:
    """Undirected degree distribution on log-scaled counts."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        ks = sorted(histogram)
        total = sum(histogram.values()) or 1
        ax.bar(ks, [histogram[k] / total for k in ks], width=0.8, color="0.4")
        ax.set_yscale("log")
        ax.set_xlabel("degree k")
        ax.set_ylabel("P(k)")
        if title:
            ax.set_title(title)
        _save(fig, path)
    return path
