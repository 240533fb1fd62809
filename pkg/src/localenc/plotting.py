"""Figures written next to the delimited report files.

The CSV/JSON/table outputs stay primary; these PNGs are a visual aid.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .audit import AuditReport, N_RANGE  # noqa: E402

_STATUS_COLOR = {
    "encoded": 0,
    "encoded (search)": 0,
    "no passing construction": 1,
    "no Pauli subgroup encoder": 1,
    "open (no construction)": 2,
}
_METADATA = {"Software": None}


def gram_heatmap(gram: np.ndarray, path: str | Path, title: str = "") -> Path:
    """``|<psi|v_i^dagger v_j|psi>|`` as an image; the ideal is the identity."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(4.5, 4))
    im = ax.imshow(gram, cmap="viridis", vmin=0.0, vmax=1.0, interpolation="nearest")
    ax.set_xlabel("j")
    ax.set_ylabel("i")
    if title:
        ax.set_title(title, fontsize=9)
    fig.colorbar(im, ax=ax, fraction=0.046, pad=0.04, label="|overlap|")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_METADATA)
    plt.close(fig)
    return path


def audit_figure(report: AuditReport, path: str | Path) -> Path:
    """Grid over (n, m): color by outcome, text for claimed regions and disagreements."""
    path = Path(path)
    ns = list(N_RANGE)
    width = max(ns) + 1
    grid = np.full((len(ns), width), np.nan)
    states = report.states()
    for st in states:
        grid[ns.index(st["n"]), st["m"]] = _STATUS_COLOR[st["status"]]
    cmap = matplotlib.colors.ListedColormap(["#9fd89f", "#f2a7a7", "#d9d9d9"])
    fig, ax = plt.subplots(figsize=(7, 3.6))
    ax.imshow(np.ma.masked_invalid(grid), cmap=cmap, vmin=-0.5, vmax=2.5, aspect="auto")
    short = {"dashed": "D", "triangle": "T", "circle": "C", "open": "open", "none": ""}
    for st in states:
        r, c = ns.index(st["n"]), st["m"]
        label = "+".join(short[p] for p in st["region"].split("+") if short[p])
        if st["disagreements"]:
            label += "\n!"
        if st["status"] == "no Pauli subgroup encoder":
            label += "\nnone"
        ax.text(c, r, label, ha="center", va="center", fontsize=8)
    ax.set_xticks(range(width))
    ax.set_yticks(range(len(ns)))
    ax.set_yticklabels([f"n={n}" for n in ns])
    ax.set_xlabel("m")
    ax.set_title("green: encoded, red: no passing construction, grey: open\n"
                 "D/T/C: claimed region, !: claim disagrees with oracle, none: exhaustive subgroup search empty",
                 fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_METADATA)
    plt.close(fig)
    return path
