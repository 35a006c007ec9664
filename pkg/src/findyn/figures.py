"""Matplotlib renderings written next to the CSV/JSON outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _fmt(v):
    return str(v)


def verdict_grid_figure(rows, path, xlabel="epsilon", ylabel="delta", title=None):
    """Heat map of boolean verdicts from ``(y, x, verdict)`` rows."""
    ys = sorted({r[0] for r in rows})
    xs = sorted({r[1] for r in rows})
    grid = [[float("nan")] * len(xs) for _ in ys]
    for y, x, v in rows:
        grid[ys.index(y)][xs.index(x)] = 1.0 if v else 0.0
    fig, ax = plt.subplots(figsize=(1 + 0.5 * len(xs), 1 + 0.4 * len(ys)))
    ax.imshow(grid, cmap="RdYlGn", vmin=0, vmax=1, origin="lower", aspect="auto")
    ax.set_xticks(range(len(xs)))
    ax.set_xticklabels([_fmt(x) for x in xs], rotation=90, fontsize=7)
    ax.set_yticks(range(len(ys)))
    ax.set_yticklabels([_fmt(y) for y in ys], fontsize=7)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def verdict_line_figure(rows, path, xlabel="c", title=None):
    """Step plot of a boolean verdict against one parameter, rows ``(x, verdict)``."""
    xs = [float(r[0]) for r in rows]
    vs = [1 if r[1] else 0 for r in rows]
    fig, ax = plt.subplots(figsize=(5, 2.5))
    ax.step(xs, vs, where="post", marker="o")
    ax.set_yticks([0, 1])
    ax.set_yticklabels(["false", "true"])
    ax.set_xlabel(xlabel)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
