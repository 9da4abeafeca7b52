"""Concentric-circle datasets.

Class ``i`` lies on a circle of radius ``r_i`` with additive Gaussian noise of
amplitude ``alpha``:

    f1 = r_i cos(theta) + alpha * eta1
    f2 = r_i sin(theta) + alpha * eta2

CCD uses ``alpha = 0.01``, OCCD ``alpha = 0.1``.  Angles sweep [0, 360)
degrees evenly; ``eta1`` and ``eta2`` are independent standard normals.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ArgumentError, DataError

RADII = (0.6, 0.4)
CCD_ALPHA = 0.01
OCCD_ALPHA = 0.1
TRAIN_SIZES = (2513, 2527)
TEST_SIZES = (1087, 1073)


@dataclass(frozen=True)
class CircleGenConfig:
    alpha: float
    samples_per_class: tuple = TRAIN_SIZES
    seed: int = 0
    radii: tuple = RADII

    def __post_init__(self):
        object.__setattr__(self, "samples_per_class", tuple(int(n) for n in self.samples_per_class))
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if len(self.radii) != len(self.samples_per_class):
            raise ArgumentError("radii and samples_per_class must have equal length")
        if any(r <= 0 for r in self.radii):
            raise ArgumentError(f"radii must be positive, got {self.radii}")
        if not self.alpha >= 0:
            raise ArgumentError(f"alpha must be non-negative, got {self.alpha}")
        if any(n < 1 for n in self.samples_per_class):
            raise ArgumentError(f"samples_per_class must be >= 1, got {self.samples_per_class}")

    def to_dict(self):
        d = asdict(self)
        d["samples_per_class"] = list(self.samples_per_class)
        d["radii"] = list(self.radii)
        return d


def ccd(sizes=TRAIN_SIZES, seed=0):
    return CircleGenConfig(alpha=CCD_ALPHA, samples_per_class=sizes, seed=seed)


def occd(sizes=TRAIN_SIZES, seed=0):
    return CircleGenConfig(alpha=OCCD_ALPHA, samples_per_class=sizes, seed=seed)


def generate(config):
    """Draw a dataset; returns ``(data, labels)`` with data of shape ``(m, 2)``.

    Rows are ordered by class, then by angle.
    """
    rng = np.random.default_rng(config.seed)
    blocks, labels = [], []
    for label, (r, n) in enumerate(zip(config.radii, config.samples_per_class)):
        theta = 2.0 * np.pi * np.arange(n) / n
        noise = rng.standard_normal((n, 2))
        pts = np.column_stack([r * np.cos(theta), r * np.sin(theta)]) + config.alpha * noise
        blocks.append(pts)
        labels.append(np.full(n, label, dtype=np.int64))
    return np.vstack(blocks), np.concatenate(labels)


def quadrant(data):
    """Quadrant index 0..3 of each 2-D point (counter-clockwise from +x,+y).

    Points on an axis go to the quadrant on their counter-clockwise side.
    """
    x, y = data[:, 0], data[:, 1]
    q = np.where(x > 0, np.where(y >= 0, 0, 3), np.where(y > 0, 1, 2))
    q[(x == 0) & (y == 0)] = 0
    return q


def reduce_for_low_sample(data, labels, fraction=0.3):
    """Drop the longest ``ceil(fraction * count)`` points of every
    (class, quadrant) cell.

    Ties in length keep the earlier row.  Returns ``(data, labels)`` in the
    original row order.
    """
    data = np.asarray(data, dtype=np.float64)
    labels = np.asarray(labels)
    if data.ndim != 2 or data.shape[1] != 2:
        raise DataError(f"expected 2-D points, got shape {data.shape}")
    quad = quadrant(data)
    length = np.hypot(data[:, 0], data[:, 1])
    keep = np.ones(len(data), dtype=bool)
    for c in np.unique(labels):
        for qd in range(4):
            idx = np.flatnonzero((labels == c) & (quad == qd))
            if idx.size == 0:
                continue
            n_drop = math.ceil(round(fraction * idx.size, 9))
            # stable sort, longest first; equal lengths keep index order
            order = idx[np.argsort(-length[idx], kind="stable")]
            keep[order[:n_drop]] = False
    return data[keep], labels[keep]


def overlap_fraction(data, labels, coverage=0.9):
    """Share of class-0 points lying inside the class-1 radial band.

    The band spans the central ``coverage`` quantile range of class-1 radii.
    """
    data = np.asarray(data, dtype=np.float64)
    r = np.hypot(data[:, 0], data[:, 1])
    r1 = r[labels == 1]
    lo, hi = np.quantile(r1, [(1 - coverage) / 2, (1 + coverage) / 2])
    r0 = r[labels == 0]
    return float(np.mean((r0 >= lo) & (r0 <= hi)))


def write_dataset_csv(path, data, labels):
    """Write ``f1, f2, ..., label`` rows with round-trip float formatting."""
    data = np.asarray(data, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"f{k + 1}" for k in range(data.shape[1])] + ["label"])
        for row, lab in zip(data.tolist(), np.asarray(labels).tolist()):
            w.writerow([repr(v) for v in row] + [str(int(lab))])


def read_dataset_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][-1] != "label":
        raise DataError(f"{path}: expected a header ending in 'label'")
    try:
        data = np.array([[float(v) for v in r[:-1]] for r in rows[1:]], dtype=np.float64)
        labels = np.array([int(r[-1]) for r in rows[1:]], dtype=np.int64)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
    return data.reshape(len(rows) - 1, len(rows[0]) - 1), labels
