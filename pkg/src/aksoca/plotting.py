"""Heatmaps of pole, order and realizability matrices written to image files."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .aks import AbstractKrivineStructure  # noqa: E402
from .oca import FiniteOca, realizer_table  # noqa: E402
from .polarity import RealizabilityLattice  # noqa: E402


def _heatmap(matrix: np.ndarray, title: str, xlabel: str, ylabel: str, path: Path,
             xticks=None, yticks=None) -> Path:
    fig, ax = plt.subplots(figsize=(max(3.0, 0.35 * matrix.shape[1] + 1.5), max(3.0, 0.35 * matrix.shape[0] + 1.2)))
    ax.imshow(np.asarray(matrix, dtype=float), cmap="Greys", vmin=0, vmax=1, interpolation="nearest")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    for ticks, setter, labeler in ((xticks, ax.set_xticks, ax.set_xticklabels),
                                   (yticks, ax.set_yticks, ax.set_yticklabels)):
        if ticks is not None and len(ticks) <= 32:
            setter(range(len(ticks)))
            labeler(ticks, fontsize=7, rotation=90 if setter == ax.set_xticks else 0)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_figures(instance, directory: str | Path, stem: str = "instance") -> list[Path]:
    """Write the pole heatmap of a lattice or structure, or the order and realizability heatmaps of an algebra."""
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    rl = instance.rl if isinstance(instance, AbstractKrivineStructure) else instance
    if isinstance(rl, RealizabilityLattice):
        written.append(_heatmap(rl.pole, "pole", "stack", "term", out_dir / f"{stem}_pole.png",
                                rl.stacks.labels, rl.terms.labels))
    if isinstance(instance, FiniteOca):
        labels = instance.carrier.labels
        written.append(_heatmap(instance.leq, "order (row below column)", "element", "element",
                                out_dir / f"{stem}_order.png", labels, labels))
        written.append(_heatmap(realizer_table(instance) >= 0, "realizability order", "element", "element",
                                out_dir / f"{stem}_realizability.png", labels, labels))
    return written
