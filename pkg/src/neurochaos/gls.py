"""Skew-tent GLS neurons.

A neuron starts at the initial activity ``q`` and iterates the skew-tent map
until its trajectory comes within ``epsilon`` of the stimulus.  Every neuron
shares the same map and start value, so all trajectories are prefixes of one
orbit; :func:`orbit` caches it and :func:`firing_times` searches it for many
stimuli at once.  :func:`fire` is the plain one-neuron loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ApproximationError, ArgumentError

DEFAULT_MAX_ITERS = 10_000


@dataclass(frozen=True)
class GlsParams:
    """Hyperparameters shared by every neuron of a layer.

    Parameters
    ----------
    q : float
        Initial neural activity, in [0, 1].
    b : float
        Discrimination threshold (skew of the map), in (0, 1).
    epsilon : float
        Half-width of the firing neighbourhood, in (0, 1).
    max_iters : int
        Hard cap on trajectory length; a neuron that has not fired after
        this many iterations is reported as not fired.
    """

    q: float
    b: float
    epsilon: float
    max_iters: int = DEFAULT_MAX_ITERS

    def __post_init__(self):
        for name in ("q", "b", "epsilon"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ArgumentError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ArgumentError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if not 0.0 <= self.q <= 1.0:
            raise ArgumentError(f"q must lie in [0, 1], got {self.q}")
        if not 0.0 < self.b < 1.0:
            raise ArgumentError(f"b must lie in (0, 1), got {self.b}")
        if not 0.0 < self.epsilon < 1.0:
            raise ArgumentError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if isinstance(self.max_iters, bool) or not isinstance(self.max_iters, (int, np.integer)):
            raise ArgumentError(f"max_iters must be an integer, got {self.max_iters!r}")
        if self.max_iters < 1:
            raise ArgumentError(f"max_iters must be >= 1, got {self.max_iters}")
        object.__setattr__(self, "max_iters", int(self.max_iters))

    def to_dict(self):
        return {"q": self.q, "b": self.b, "epsilon": self.epsilon, "max_iters": self.max_iters}

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - {"q", "b", "epsilon", "max_iters"}
        if unknown:
            raise ArgumentError(f"unknown GLS parameter(s): {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ArgumentError(str(exc)) from None


@dataclass(frozen=True)
class Trajectory:
    """Firing trajectory of one neuron.

    ``samples[0]`` is ``q``; ``firing_time`` is ``len(samples) - 1``.
    """

    samples: np.ndarray = field(repr=False)
    fired: bool

    @property
    def firing_time(self):
        return len(self.samples) - 1


def _check_unit(name, x):
    if not (0.0 <= x <= 1.0):
        raise ArgumentError(f"{name} must lie in [0, 1], got {x!r}")


def skew_tent_step(x, b):
    """One application of the skew-tent map on the closed interval [0, 1].

    ``x / b`` below the threshold, ``(1 - x) / (1 - b)`` at or above it, so
    ``x = 1`` maps to 0 and every orbit stays inside [0, 1].
    """
    _check_unit("x", x)
    if not 0.0 < b < 1.0:
        raise ArgumentError(f"b must lie in (0, 1), got {b!r}")
    if x < b:
        return x / b
    return (1.0 - x) / (1.0 - b)


def fire(stimulus, params):
    """Iterate a neuron from ``params.q`` until it enters the stimulus'
    open ``epsilon`` neighbourhood, or ``params.max_iters`` is reached."""
    _check_unit("stimulus", stimulus)
    b, eps = params.b, params.epsilon
    x = params.q
    samples = [x]
    fired = abs(x - stimulus) < eps
    while not fired and len(samples) <= params.max_iters:
        x = x / b if x < b else (1.0 - x) / (1.0 - b)
        samples.append(x)
        fired = abs(x - stimulus) < eps
    arr = np.array(samples, dtype=np.float64)
    arr.flags.writeable = False
    return Trajectory(samples=arr, fired=fired)


@lru_cache(maxsize=32)
def _orbit(q, b, n):
    out = np.empty(n + 1, dtype=np.float64)
    x = q
    for t in range(n + 1):
        out[t] = x
        x = x / b if x < b else (1.0 - x) / (1.0 - b)
    out.flags.writeable = False
    return out


def orbit(params):
    """The shared orbit ``A(0..max_iters)`` starting at ``q`` (read-only)."""
    return _orbit(params.q, params.b, params.max_iters)


def firing_times(stimuli, params):
    """Firing time for every stimulus in an array; -1 marks no firing.

    Equivalent to ``fire(x, params).firing_time`` per element, searching the
    cached orbit block by block.
    """
    x = np.asarray(stimuli, dtype=np.float64)
    flat = x.ravel()
    if flat.size and not (np.all(flat >= 0.0) and np.all(flat <= 1.0)):
        raise ArgumentError("stimuli must lie in [0, 1]")
    uniq, inverse = np.unique(flat, return_inverse=True)
    a = orbit(params)
    eps = params.epsilon
    result = np.full(uniq.size, -1, dtype=np.int64)
    pending = np.arange(uniq.size)
    start, block = 0, 32
    while pending.size and start < a.size:
        # bound the temporary (pending x block) comparison matrix
        block = max(1, min(block, 4_000_000 // pending.size))
        seg = a[start:start + block]
        near = np.abs(seg[None, :] - uniq[pending, None]) < eps
        hit = near.any(axis=1)
        result[pending[hit]] = start + near[hit].argmax(axis=1)
        pending = pending[~hit]
        start += seg.size
        block *= 2
    return result[inverse].reshape(x.shape)


def approximate_function(f, params):
    """Approximate a finite-support discrete function with one neuron per sample.

    Neuron ``i`` fires at stimulus ``f[i]``; its approximation is the last
    trajectory sample.  Choose ``params.epsilon < total_error / (2 * len(f))``
    for a target total error.

    Returns
    -------
    approximations : list of float
    total_error : float
        Sum of absolute differences between ``f`` and the approximations.

    Raises
    ------
    ApproximationError
        If any neuron fails to fire within ``params.max_iters``.
    """
    approximations, total, _ = approximate_with_firing_times(f, params)
    return approximations, total


def approximate_with_firing_times(f, params):
    """Like :func:`approximate_function`, also returning per-neuron firing times."""
    values = [float(v) for v in f]
    if not values:
        raise ArgumentError("function must have at least one sample")
    for i, v in enumerate(values):
        if not 0.0 <= v <= 1.0:
            raise ArgumentError(f"f[{i}] = {v} is outside [0, 1]")
    times = firing_times(np.array(values), params)
    failed = np.flatnonzero(times < 0).tolist()
    if failed:
        raise ApproximationError(failed)
    a = orbit(params)
    approximations = [float(a[t]) for t in times]
    total = math.fsum(abs(v - c) for v, c in zip(values, approximations))
    return approximations, total, [int(t) for t in times]
