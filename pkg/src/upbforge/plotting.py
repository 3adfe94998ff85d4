"""Figures written next to the JSON/CSV reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from .states import UpbCandidate  # noqa: E402

__all__ = ["plot_table1", "plot_tiles", "plot_spectrum"]

_CMAP = "viridis"


def _support(v) -> list[int]:
    return [i for i, c in enumerate(v.entries) if c]


def plot_table1(report, path, max_dim: int = 14):
    """Heat map of how many missing numbers each cell reaches.

    Cells where the closure misses a table value get a red frame; cells with
    values beyond the table get a dot.
    """
    dims = range(3, max_dim + 1)
    grid = np.full((len(dims), len(dims)), np.nan)
    fig, ax = plt.subplots(figsize=(7.5, 6.5))
    for (m, n), cell in report.cells.items():
        grid[m - 3, n - 3] = len(cell["closure"])
    im = ax.imshow(grid, cmap=_CMAP, origin="upper")
    for (m, n), cell in report.cells.items():
        top = max(cell["closure"]) if cell["closure"] else 0
        ax.text(n - 3, m - 3, str(top), ha="center", va="center", fontsize=7, color="w")
        if cell["missed"]:
            ax.add_patch(Rectangle((n - 3.5, m - 3.5), 1, 1, fill=False, ec="red", lw=2))
        if cell["extra"]:
            ax.plot(n - 3 + 0.3, m - 3 - 0.3, "o", color="orange", ms=3)
    ax.set_xticks(range(len(dims)), [str(d) for d in dims])
    ax.set_yticks(range(len(dims)), [str(d) for d in dims])
    ax.set_xlabel("n")
    ax.set_ylabel("m")
    ax.set_title("reachable missing numbers (label: largest)")
    fig.colorbar(im, ax=ax, label="count")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_tiles(u: UpbCandidate, path):
    """Draw a bipartite UPB as tiles on the ``m x n`` grid of ``|ij>``.

    Each state covers the rectangle (A support) x (B support). States spread
    over more than two rows and columns (stoppers) are only counted in the title.
    """
    if u.dims.parties != 2:
        raise ValueError("tile plots need a bipartite UPB")
    m, n = u.dims.dims
    fig, ax = plt.subplots(figsize=(0.6 * n + 1.5, 0.6 * m + 1.2))
    colors = plt.get_cmap("tab20")
    hidden = 0
    for idx, s in enumerate(u.states):
        ra, rb = _support(s.factors[0]), _support(s.factors[1])
        if len(ra) > 2 and len(rb) > 2:
            hidden += 1
            continue
        for i in ra:
            for j in rb:
                ax.add_patch(Rectangle((j, i), 1, 1, color=colors(idx % 20), alpha=0.6))
        ax.text(np.mean(rb) + 0.5, np.mean(ra) + 0.5, str(idx), ha="center", va="center",
                fontsize=8)
    ax.set_xlim(0, n)
    ax.set_ylim(m, 0)
    ax.set_xticks(np.arange(n) + 0.5, [str(j) for j in range(n)])
    ax.set_yticks(np.arange(m) + 0.5, [str(i) for i in range(m)])
    ax.set_xticks(range(n + 1), minor=True)
    ax.set_yticks(range(m + 1), minor=True)
    ax.grid(which="minor", color="k", lw=0.5)
    ax.tick_params(which="minor", length=0)
    ax.set_aspect("equal")
    ax.set_title(f"{u.label or 'UPB'} ({hidden} wide states not drawn)", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_spectrum(eigs: dict, path):
    """Sorted eigenvalues per operator, e.g. ``{"rho": ev, "PT[0]": ev}``."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for name, ev in eigs.items():
        ax.plot(np.sort(np.asarray(ev)), ".-", label=name, ms=4)
    ax.axhline(0, color="k", lw=0.5)
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
