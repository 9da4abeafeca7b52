"""Experiment configuration: parsing, validation and JSON round-trip.

A config is a JSON object::

    {
      "name": "table7-chaosfex",
      "seed": 0,
      "dataset":  {"kind": "circles", "train": {"alpha": 0.1, "sizes": [2513, 2527], "seed_offset": 0},
                                      "test":  {"alpha": 0.1, "sizes": [1087, 1073], "seed_offset": 1}},
      "pipeline": {"kind": "chaosfex", "q": 0.22, "b": 0.96, "epsilon": 0.018},
      "classifier": {"kind": "linear", "C": 1.0, "epochs": 200},
      "protocol": {"kind": "holdout"},
      "normalization": "train",
      "standardize": false
    }

Dataset kinds: ``circles`` (generated), ``csv`` (``train``/``test`` paths to
``f1, ..., label`` files), ``fasta`` (``files`` mapping label -> FASTA path,
plus ``l_max``).  Pipelines: ``raw`` or ``chaosfex`` (with GLS parameters).
Classifiers: ``linear`` {C, epochs} or ``rbf`` {C, gamma}.  Protocols:
``holdout``, ``stratified_kfold`` {k}, ``random_trials`` {counts, n_trials,
quadrant_balanced, reduce_pool}.  ``normalization`` is ``train`` (min-max
fitted on the training split, test clipped), ``independent`` (each split
rescaled on its own) or ``none``.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field

from .errors import ArgumentError
from .gls import DEFAULT_MAX_ITERS, GlsParams

NORMALIZATIONS = ("train", "independent", "none")


def _fail(path, msg):
    raise ArgumentError(f"{path}: {msg}")


def _get(d, key, path, default=None, required=False):
    if not isinstance(d, dict):
        _fail(path, "must be an object")
    if key not in d:
        if required:
            _fail(f"{path}.{key}", "is required")
        return default
    return d[key]


def _number(v, path, positive=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(path, f"must be a number, got {v!r}")
    if positive and not v > 0:
        _fail(path, f"must be positive, got {v!r}")
    return v


def _int(v, path, minimum=None):
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(path, f"must be an integer, got {v!r}")
    if minimum is not None and v < minimum:
        _fail(path, f"must be >= {minimum}, got {v}")
    return v


def _check_keys(d, allowed, path):
    extra = set(d) - set(allowed)
    if extra:
        _fail(path, f"unknown field(s) {sorted(extra)}")


@dataclass
class ExperimentConfig:
    name: str
    dataset: dict
    pipeline: dict = field(default_factory=lambda: {"kind": "raw"})
    classifier: dict = field(default_factory=lambda: {"kind": "linear", "C": 1.0, "epochs": 200})
    protocol: dict = field(default_factory=lambda: {"kind": "holdout"})
    normalization: str = "train"
    standardize: bool = False
    seed: int = 0

    def __post_init__(self):
        validate(self)

    @property
    def gls_params(self):
        if self.pipeline["kind"] != "chaosfex":
            return None
        p = self.pipeline
        return GlsParams(p["q"], p["b"], p["epsilon"], p.get("max_iters", DEFAULT_MAX_ITERS))

    def to_dict(self):
        return {
            "name": self.name, "seed": self.seed,
            "dataset": copy.deepcopy(self.dataset),
            "pipeline": copy.deepcopy(self.pipeline),
            "classifier": copy.deepcopy(self.classifier),
            "protocol": copy.deepcopy(self.protocol),
            "normalization": self.normalization,
            "standardize": self.standardize,
        }

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ArgumentError("config: must be a JSON object")
        _check_keys(d, ("name", "seed", "dataset", "pipeline", "classifier", "protocol",
                        "normalization", "standardize"), "config")
        if "dataset" not in d:
            _fail("config.dataset", "is required")
        kwargs = {k: copy.deepcopy(v) for k, v in d.items()}
        kwargs.setdefault("name", "experiment")
        return cls(**kwargs)

    def replace(self, **changes):
        d = self.to_dict()
        d.update(changes)
        return ExperimentConfig.from_dict(d)


def validate(cfg):
    if not isinstance(cfg.name, str) or not cfg.name:
        _fail("config.name", "must be a non-empty string")
    _int(cfg.seed, "config.seed", minimum=0)
    if cfg.normalization not in NORMALIZATIONS:
        _fail("config.normalization", f"must be one of {list(NORMALIZATIONS)}, got {cfg.normalization!r}")
    if not isinstance(cfg.standardize, bool):
        _fail("config.standardize", "must be true or false")
    _validate_dataset(cfg.dataset)
    _validate_pipeline(cfg.pipeline)
    _validate_classifier(cfg.classifier)
    _validate_protocol(cfg.protocol)


def _validate_dataset(ds):
    path = "config.dataset"
    kind = _get(ds, "kind", path, required=True)
    if kind == "circles":
        _check_keys(ds, ("kind", "train", "test"), path)
        for split in ("train", "test"):
            sub = _get(ds, split, path, required=(split == "train"))
            if sub is None:
                continue
            sp = f"{path}.{split}"
            _check_keys(sub, ("alpha", "sizes", "seed_offset"), sp)
            _number(_get(sub, "alpha", sp, required=True), f"{sp}.alpha")
            if sub["alpha"] < 0:
                _fail(f"{sp}.alpha", "must be >= 0")
            sizes = _get(sub, "sizes", sp, required=True)
            if not isinstance(sizes, list) or len(sizes) != 2:
                _fail(f"{sp}.sizes", "must be a list of two class sizes")
            for i, n in enumerate(sizes):
                _int(n, f"{sp}.sizes[{i}]", minimum=1)
            _int(sub.get("seed_offset", 0), f"{sp}.seed_offset", minimum=0)
    elif kind == "csv":
        _check_keys(ds, ("kind", "train", "test"), path)
        for split in ("train", "test"):
            v = _get(ds, split, path, required=(split == "train"))
            if v is not None and not isinstance(v, str):
                _fail(f"{path}.{split}", "must be a file path")
    elif kind == "fasta":
        _check_keys(ds, ("kind", "files", "l_max"), path)
        files = _get(ds, "files", path, required=True)
        if not isinstance(files, dict) or not files:
            _fail(f"{path}.files", "must map class labels to FASTA paths")
        for label, p in files.items():
            try:
                int(label)
            except ValueError:
                _fail(f"{path}.files", f"label {label!r} is not an integer")
            if not isinstance(p, (str, list)):
                _fail(f"{path}.files.{label}", "must be a path or list of paths")
        _int(_get(ds, "l_max", path, required=True), f"{path}.l_max", minimum=1)
    else:
        _fail(f"{path}.kind", f"unknown dataset kind {kind!r}")


def _validate_pipeline(p):
    path = "config.pipeline"
    kind = _get(p, "kind", path, required=True)
    if kind == "raw":
        _check_keys(p, ("kind",), path)
    elif kind == "chaosfex":
        _check_keys(p, ("kind", "q", "b", "epsilon", "max_iters"), path)
        for key in ("q", "b", "epsilon"):
            _number(_get(p, key, path, required=True), f"{path}.{key}")
        _int(p.get("max_iters", DEFAULT_MAX_ITERS), f"{path}.max_iters", minimum=1)
        try:
            GlsParams(p["q"], p["b"], p["epsilon"], p.get("max_iters", DEFAULT_MAX_ITERS))
        except ArgumentError as exc:
            _fail(path, str(exc))
    else:
        _fail(f"{path}.kind", f"unknown pipeline {kind!r}")


def _validate_classifier(c):
    path = "config.classifier"
    kind = _get(c, "kind", path, required=True)
    if kind == "linear":
        _check_keys(c, ("kind", "C", "epochs"), path)
        _number(c.get("C", 1.0), f"{path}.C", positive=True)
        _int(c.get("epochs", 200), f"{path}.epochs", minimum=1)
    elif kind == "rbf":
        _check_keys(c, ("kind", "C", "gamma"), path)
        _number(c.get("C", 1.0), f"{path}.C", positive=True)
        g = c.get("gamma", "scale")
        if g != "scale":
            _number(g, f"{path}.gamma", positive=True)
    else:
        _fail(f"{path}.kind", f"unknown classifier {kind!r}")


def _validate_protocol(p):
    path = "config.protocol"
    kind = _get(p, "kind", path, required=True)
    if kind == "holdout":
        _check_keys(p, ("kind",), path)
    elif kind == "stratified_kfold":
        _check_keys(p, ("kind", "k"), path)
        _int(_get(p, "k", path, required=True), f"{path}.k", minimum=2)
    elif kind == "random_trials":
        _check_keys(p, ("kind", "counts", "n_trials", "quadrant_balanced", "reduce_pool"), path)
        counts = _get(p, "counts", path, required=True)
        if not isinstance(counts, list) or not counts:
            _fail(f"{path}.counts", "must be a non-empty list")
        for i, n in enumerate(counts):
            _int(n, f"{path}.counts[{i}]", minimum=1)
        if any(b <= a for a, b in zip(counts, counts[1:])):
            _fail(f"{path}.counts", "must be strictly increasing")
        _int(_get(p, "n_trials", path, required=True), f"{path}.n_trials", minimum=1)
        for flag in ("quadrant_balanced", "reduce_pool"):
            if not isinstance(p.get(flag, False), bool):
                _fail(f"{path}.{flag}", "must be true or false")
    else:
        _fail(f"{path}.kind", f"unknown protocol {kind!r}")


def load_config(path):
    """Read a config file holding one config object or a list of them."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"{path}: invalid JSON ({exc})") from None
    if isinstance(raw, list):
        return [ExperimentConfig.from_dict(d) for d in raw]
    return [ExperimentConfig.from_dict(raw)]
