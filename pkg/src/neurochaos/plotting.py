"""PNG figures written next to the CLI's CSV reports."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def low_sample_curves(reports, outdir, stem):
    """Mean and standard deviation of macro F1 against samples per class.

    One line per report (for example ChaosFEX and its SVM baseline).
    Returns the two written paths.
    """
    paths = []
    for idx, label in ((0, "Average macro F1-score"), (1, "Std. dev. of macro F1-scores")):
        fig, ax = plt.subplots(figsize=(6, 4))
        for rep in reports:
            per = rep.by_count()
            counts = list(per)
            ax.plot(counts, [per[c][idx] for c in counts], marker="o", ms=3, label=rep.name)
        ax.set_xlabel("Training samples per class")
        ax.set_ylabel(label)
        ax.grid(alpha=0.3)
        ax.legend()
        fig.tight_layout()
        path = os.path.join(outdir, f"{stem}_{'mean' if idx == 0 else 'std'}_f1.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths


def grid_curve(xs, scores, xlabel, outdir, stem):
    """Mean macro F1 over a one-dimensional hyperparameter sweep."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, scores, lw=1)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("Mean macro F1-score")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    path = os.path.join(outdir, f"{stem}.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
