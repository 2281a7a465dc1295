"""Matplotlib figures written next to the JSON/DOT artifacts."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from .dynamics import MorseRepresentation  # noqa: E402
from .order_core import iter_bits  # noqa: E402
from .pipeline import PipelineResult  # noqa: E402

# PNG metadata would otherwise embed the matplotlib version
_SAVE = {"dpi": 100, "metadata": {"Software": None}}


def _spans(grid, mask: int) -> list:
    """Maximal runs of consecutive cells as ``(left, right)`` floats."""
    out = []
    cells = list(iter_bits(mask))
    start = prev = None
    for c in cells:
        if start is None:
            start = prev = c
        elif c == prev + 1:
            prev = c
        else:
            out.append((float(grid.breakpoints[start]), float(grid.breakpoints[prev + 1])))
            start = prev = c
    if start is not None:
        out.append((float(grid.breakpoints[start]), float(grid.breakpoints[prev + 1])))
    return out


def plot_pipeline(result: PipelineResult, path) -> None:
    """Map graph over the outer approximation, and the tiles with their Morse sets."""
    oa = result.approximation
    grid, F = oa.grid, result.relation
    lo, hi = (float(x) for x in grid.space)
    fig, (ax, bx) = plt.subplots(1, 2, figsize=(10, 4.5))

    for i in range(grid.n):
        x0, x1 = (float(x) for x in grid.cell(i))
        for y0, y1 in _spans(grid, F.forward[i]):
            ax.add_patch(Rectangle((x0, y0), x1 - x0, y1 - y0, facecolor="tab:blue",
                                   alpha=0.25, edgecolor="tab:blue", linewidth=0.5))
    xs = [float(x) for x in oa.map.breakpoints]
    ax.plot(xs, [float(oa.map(x)) for x in oa.map.breakpoints], color="black", linewidth=1.5)
    ax.plot([lo, hi], [lo, hi], color="grey", linestyle=":", linewidth=1)
    ax.set_xlim(lo, hi)
    ax.set_ylim(lo, hi)
    ax.set_aspect("equal")
    ax.set_title("map and outer approximation")

    tmd = result.decomposition
    tiles = tmd.tessellation.tiles
    cmap = plt.get_cmap("tab10")
    for k, t in enumerate(tiles):
        for x0, x1 in _spans(grid, t):
            bx.add_patch(Rectangle((x0, 0), x1 - x0, 1, facecolor=cmap(k % 10), alpha=0.35))
    for m in tmd.morse.sets:
        for x0, x1 in _spans(grid, m):
            bx.add_patch(Rectangle((x0, 0.35), x1 - x0, 0.3, facecolor="black", alpha=0.8))
    bx.set_xlim(lo, hi)
    bx.set_ylim(0, 1)
    bx.set_yticks([])
    bx.set_title(f"{len(tiles)} tiles, {len(tmd.morse.sets)} Morse sets")
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def plot_morse_graph(M: MorseRepresentation, path) -> None:
    """Hasse diagram of a Morse representation, one row per height."""
    F = M.relation
    heights = M.order.heights()
    rows: dict = {}
    for i, h in enumerate(heights):
        rows.setdefault(h, []).append(i)
    pos = {}
    for h, idx in rows.items():
        idx.sort(key=lambda i: F.labels(M.sets[i]))
        for k, i in enumerate(idx):
            pos[i] = (k - (len(idx) - 1) / 2, h)
    fig, ax = plt.subplots(figsize=(4, 1.5 + 1.2 * (max(heights, default=0) + 1)))
    for i, j in M.order.covers():
        (x0, y0), (x1, y1) = pos[i], pos[j]
        ax.plot([x0, x1], [y0, y1], color="black", linewidth=1)
    for i, (x, y) in pos.items():
        ax.text(x, y, "{" + ",".join(F.labels(M.sets[i])) + "}", ha="center", va="center",
                bbox={"boxstyle": "round", "facecolor": "white"})
    ax.set_xlim(-2, 2)
    ax.set_ylim(-0.7, max(heights, default=0) + 0.7)
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)
