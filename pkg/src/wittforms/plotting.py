"""Figures written next to the CLI's delimited output.

Only the Agg backend is used, so nothing here needs a display.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def cayley_heatmap(labels: Sequence[str], cells: Sequence[Sequence[int | None]], path, title: str = "") -> Path:
    """Heatmap of a Cayley table whose entries index into ``labels``.

    ``None`` marks a product that falls outside the listed classes.
    """
    n = len(labels)
    size = max(4.0, 0.45 * n + 2)
    fig, ax = plt.subplots(figsize=(size, size))
    data = [[-1 if v is None else v for v in row] for row in cells]
    im = ax.imshow(data, cmap="viridis", vmin=-1, vmax=max(n - 1, 0), interpolation="nearest")
    ax.set_xticks(range(n))
    ax.set_yticks(range(n))
    ax.set_xticklabels(labels, rotation=90, fontsize=7)
    ax.set_yticklabels(labels, fontsize=7)
    if n <= 16:
        for i, row in enumerate(cells):
            for j, v in enumerate(row):
                ax.text(j, i, "-" if v is None else str(v), ha="center", va="center", fontsize=6, color="w")
    ax.set_title(title)
    fig.colorbar(im, ax=ax, fraction=0.046, pad=0.04, label="result class index (-1: outside table)")
    return _finish(fig, path)


def check_summary_chart(rows: Sequence[tuple[str, str, float]], path, title: str = "checks") -> Path:
    """Horizontal bars of elapsed time per check, colored by verdict."""
    rows = list(rows)
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(rows) + 1.5))
    names = [r[0] for r in rows]
    colors = ["tab:green" if r[1] == "pass" else "tab:red" for r in rows]
    ax.barh(range(len(rows)), [r[2] for r in rows], color=colors)
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("elapsed (s)")
    ax.set_title(title)
    return _finish(fig, path)
