"""ChaosFEX: four features per neuron from its firing trajectory.

For a trajectory ``A(0..N)`` and threshold ``b``:

* firing time  ``N``
* firing rate  fraction of samples with ``A(t) >= b``
* energy       ``sum(A(t) ** 2)``
* entropy      Shannon entropy (bits) of the binary symbol sequence
  ``A(t) >= b``

An ``m x n`` stimulus matrix becomes an ``m x 4n`` feature matrix; the four
features of input column ``k`` occupy columns ``4k .. 4k+3``.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DataError, NormalizationError
from .gls import GlsParams, fire, firing_times, orbit

FEATURE_NAMES = ("time", "rate", "energy", "entropy")
N_FEATURES = len(FEATURE_NAMES)


@dataclass(frozen=True)
class ChaosFeatures:
    firing_time: int
    firing_rate: float
    energy: float
    entropy: float
    fired: bool = True

    def as_tuple(self):
        return (self.firing_time, self.firing_rate, self.energy, self.entropy)


@dataclass
class TransformDiagnostics:
    n_cells: int = 0
    n_not_fired: int = 0
    not_fired: list = field(default_factory=list)  # (row, col) pairs


def binary_entropy(p):
    """Entropy in bits of a two-symbol distribution, with 0 log 0 = 0."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def first_order_entropy(symbols):
    """Entropy of the empirical symbol distribution of a 0/1 sequence."""
    symbols = np.asarray(symbols)
    return binary_entropy(int(np.count_nonzero(symbols)) / symbols.size)


def extract_features(stimulus, params, entropy_fn=first_order_entropy):
    """Fire one neuron at ``stimulus`` and summarise its trajectory.

    A neuron that does not fire within ``params.max_iters`` is summarised over
    its capped trajectory and flagged with ``fired=False``.
    """
    traj = fire(stimulus, params)
    samples = traj.samples
    energy = 0.0
    ones = 0
    for a in samples.tolist():
        energy += a * a
        if a >= params.b:
            ones += 1
    length = len(samples)
    rate = ones / length
    if entropy_fn is first_order_entropy:
        entropy = binary_entropy(rate)
    else:
        entropy = float(entropy_fn(samples >= params.b))
    return ChaosFeatures(traj.firing_time, rate, energy, entropy, traj.fired)


@lru_cache(maxsize=32)
def _prefix_tables(params):
    a = orbit(params)
    energy = np.cumsum(a * a)
    ones = np.cumsum(a >= params.b)
    return energy, ones


def _validate(data):
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 2:
        raise DataError(f"expected a 2-D matrix, got shape {x.shape}")
    bad = ~((x >= 0.0) & (x <= 1.0))
    if bad.any():
        r, c = np.argwhere(bad)[0]
        raise NormalizationError(
            f"entry at row {r}, col {c} is {x[r, c]!r}; stimuli must lie in [0, 1]"
        )
    return x


def _transform_block(x, params, entropy_fn):
    times = firing_times(x, params)
    not_fired = times < 0
    times = np.where(not_fired, params.max_iters, times)
    energy, ones = _prefix_tables(params)
    uniq, inverse = np.unique(times, return_inverse=True)
    table = np.empty((uniq.size, N_FEATURES))
    if entropy_fn is not first_order_entropy:
        symbols = orbit(params) >= params.b
    for i, n in enumerate(uniq.tolist()):
        rate = int(ones[n]) / (n + 1)
        if entropy_fn is first_order_entropy:
            ent = binary_entropy(rate)
        else:
            ent = float(entropy_fn(symbols[:n + 1]))
        table[i] = (n, rate, energy[n], ent)
    feats = table[inverse.reshape(-1)].reshape(x.shape[0], x.shape[1] * N_FEATURES)
    return feats, not_fired


def transform(data, params, *, threads=1, return_diagnostics=False,
              entropy_fn=first_order_entropy):
    """Map an ``m x n`` matrix of stimuli to its ``m x 4n`` ChaosFEX matrix.

    Parameters
    ----------
    data : array_like, shape (m, n)
        Stimuli, already normalised to [0, 1].
    params : GlsParams
    threads : int
        Row chunks evaluated concurrently; the result does not depend on it.
    return_diagnostics : bool
        Also return a :class:`TransformDiagnostics` counting neurons that hit
        ``max_iters`` without firing.
    entropy_fn : callable
        Maps a boolean symbol sequence to an entropy value.
    """
    x = _validate(data)
    m, n = x.shape
    if m == 0 or n == 0:
        out = np.zeros((m, n * N_FEATURES))
        return (out, TransformDiagnostics()) if return_diagnostics else out
    if threads > 1 and m > 1:
        chunks = np.array_split(np.arange(m), min(threads, m))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda idx: _transform_block(x[idx], params, entropy_fn), chunks))
        feats = np.vstack([p[0] for p in parts])
        not_fired = np.vstack([p[1] for p in parts])
    else:
        feats, not_fired = _transform_block(x, params, entropy_fn)
    if not return_diagnostics:
        return feats
    cells = [tuple(int(v) for v in rc) for rc in np.argwhere(not_fired)]
    return feats, TransformDiagnostics(n_cells=m * n, n_not_fired=len(cells), not_fired=cells)


def feature_names(n_inputs):
    return [f"f{k}_{name}" for k in range(n_inputs) for name in FEATURE_NAMES]


def write_feature_csv(path, features, labels=None, ids=None):
    """Write a feature matrix with a ``f{k}_{time|rate|energy|entropy}`` header.

    Optional ``ids`` become a leading ``id`` column, ``labels`` a trailing
    ``label`` column.  Values are written with ``repr`` so files round-trip
    exactly.
    """
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] % N_FEATURES:
        raise DataError(f"feature matrix must have 4n columns, got shape {features.shape}")
    header = feature_names(features.shape[1] // N_FEATURES)
    if ids is not None:
        header = ["id"] + header
    if labels is not None:
        header = header + ["label"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, row in enumerate(features.tolist()):
            out = [repr(v) for v in row]
            if ids is not None:
                out.insert(0, ids[i])
            if labels is not None:
                out.append(str(int(labels[i])))
            w.writerow(out)


def read_feature_csv(path):
    """Inverse of :func:`write_feature_csv`; returns ``(features, labels, ids)``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty feature file")
    header, body = rows[0], rows[1:]
    has_id = header[0] == "id"
    has_label = header[-1] == "label"
    lo = 1 if has_id else 0
    hi = len(header) - (1 if has_label else 0)
    try:
        feats = np.array([[float(v) for v in r[lo:hi]] for r in body], dtype=np.float64)
        labels = np.array([int(r[-1]) for r in body]) if has_label else None
    except (ValueError, IndexError) as exc:
        raise DataError(f"{path}: {exc}") from None
    ids = [r[0] for r in body] if has_id else None
    return feats.reshape(len(body), hi - lo), labels, ids


__all__ = [
    "ChaosFeatures", "TransformDiagnostics", "GlsParams", "binary_entropy",
    "extract_features", "feature_names", "first_order_entropy", "read_feature_csv",
    "transform", "write_feature_csv",
]
