"""Figures for suite runs, written as PNG files next to the JSON output."""

from __future__ import annotations

import os
from collections import Counter
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .boolalg import BoolAlg  # noqa: E402
from .evaluator import EvalContext  # noqa: E402
from .lab import CheckReport, LabConfig  # noqa: E402
from .universe import UniverseStore, enumerate_rank  # noqa: E402

_VERDICTS = ("pass", "vacuous", "fail")
_COLORS = {"pass": "#4c9a2a", "vacuous": "#b0b0b0", "fail": "#c0392b"}


def verdict_figure(reports: Sequence[CheckReport], path: str) -> str:
    names = list(dict.fromkeys(r.check for r in reports))
    counts = {v: Counter(r.check for r in reports if r.verdict == v) for v in _VERDICTS}
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(names) + 1.2))
    left = np.zeros(len(names))
    for v in _VERDICTS:
        widths = np.array([counts[v][n] for n in names], dtype=float)
        ax.barh(names, widths, left=left, color=_COLORS[v], label=v)
        left += widths
    ax.invert_yaxis()
    ax.set_xlabel("reports")
    ax.legend(loc="lower right", frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def equality_matrix(cfg: LabConfig, rank: int) -> tuple[np.ndarray, np.ndarray]:
    """First and second coordinates of [[u = v]] over the rank-bounded universe, as popcounts."""
    store = UniverseStore(BoolAlg(cfg.atoms))
    elems = enumerate_rank(store, rank, cfg.budget)
    ctx = EvalContext(store, cfg.semantics, elems)
    k = len(elems)
    first = np.zeros((k, k), dtype=np.int32)
    second = np.zeros((k, k), dtype=np.int32)
    for i, u in enumerate(elems):
        for j, v in enumerate(elems):
            val = ctx.val_eq(u, v)
            first[i, j] = bin(val.z1).count("1")
            second[i, j] = bin(val.z2).count("1")
    return first, second


def equality_figure(cfg: LabConfig, path: str, rank: int | None = None) -> str:
    rank = min(cfg.rank, 3 if cfg.atoms == 1 else 2) if rank is None else rank
    first, second = equality_matrix(cfg, rank)
    fig, axes = plt.subplots(1, 2, figsize=(9, 4.2))
    for ax, data, title in ((axes[0], first, "first coordinate"), (axes[1], second, "second coordinate")):
        im = ax.imshow(data, cmap="viridis", vmin=0, vmax=cfg.atoms, interpolation="nearest")
        ax.set_title(title)
        ax.set_xlabel("v")
        ax.set_ylabel("u")
        fig.colorbar(im, ax=ax, fraction=0.046, label="atoms")
    fig.suptitle(f"[[u = v]], n={cfg.atoms}, {cfg.semantics.value}, rank <= {rank}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_figures(reports: Sequence[CheckReport], cfg: LabConfig, outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    return [
        verdict_figure(reports, os.path.join(outdir, "verdicts.png")),
        equality_figure(cfg, os.path.join(outdir, "equality.png")),
    ]
