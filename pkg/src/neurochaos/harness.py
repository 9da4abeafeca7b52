"""Experiment protocols: holdout, stratified k-fold, random low-sample
trials, grid search and the noise-robustness suite.

Every protocol reduces to :func:`fit_evaluate` on a train/test pair:
normalise, optionally map through ChaosFEX, optionally standardise, train,
predict, score.
"""

from __future__ import annotations

import csv
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__, chaosfex, datagen, genome, svm
from .config import ExperimentConfig
from .errors import ArgumentError, DataError, NeurochaosError, ProtocolError
from .metrics import ClassificationReport, report

log = logging.getLogger(__name__)


# -------------------------------------------------------------- scaling ---

class MinMaxScaler:
    """Per-feature min-max rescaling to [0, 1]; values outside the fitted
    range are clipped.  Constant features map to 0."""

    def fit(self, x):
        x = np.asarray(x, dtype=np.float64)
        self.min_ = x.min(axis=0)
        span = x.max(axis=0) - self.min_
        self.scale_ = np.where(span > 0, span, 1.0)
        return self

    def transform(self, x):
        out = (np.asarray(x, dtype=np.float64) - self.min_) / self.scale_
        return np.clip(out, 0.0, 1.0, out=out)

    def fit_transform(self, x):
        return self.fit(x).transform(x)


# ---------------------------------------------------------------- core ---

@dataclass
class UnitResult:
    """One train/evaluate unit (a holdout run, a fold, or a trial)."""

    unit: str
    n_train: int
    n_test: int
    report: ClassificationReport
    count: int | None = None
    trial: int | None = None
    not_fired: int = 0

    def to_dict(self):
        d = {"unit": self.unit, "n_train": self.n_train, "n_test": self.n_test,
             "not_fired": self.not_fired, "report": self.report.to_dict()}
        if self.count is not None:
            d["count"] = self.count
            d["trial"] = self.trial
        return d


@dataclass
class ExperimentReport:
    name: str
    config: dict
    units: list
    timings: dict = field(default_factory=dict)

    @property
    def f1_scores(self):
        return np.array([u.report.macro_f1 for u in self.units])

    @property
    def mean_f1(self):
        return float(np.mean(self.f1_scores))

    @property
    def std_f1(self):
        return float(np.std(self.f1_scores))

    def by_count(self):
        """``{count: (mean F1, std F1, n_trials)}`` for random-trial reports."""
        out = {}
        for c in sorted({u.count for u in self.units if u.count is not None}):
            f = np.array([u.report.macro_f1 for u in self.units if u.count == c])
            out[c] = (float(f.mean()), float(f.std()), int(f.size))
        return out

    def aggregate(self):
        agg = {"mean_macro_f1": self.mean_f1, "std_macro_f1": self.std_f1,
               "n_units": len(self.units)}
        per_count = self.by_count()
        if per_count:
            agg["per_count"] = [{"count": c, "mean_macro_f1": m, "std_macro_f1": s, "n_trials": n}
                                for c, (m, s, n) in per_count.items()]
        return agg

    def to_dict(self):
        return {"name": self.name, "version": __version__, "config": self.config,
                "aggregate": self.aggregate(), "units": [u.to_dict() for u in self.units],
                "timings": self.timings}

    def write(self, outdir):
        """Write ``<name>.json`` (with timings) and ``<name>.csv`` (without)."""
        import os

        os.makedirs(outdir, exist_ok=True)
        with open(os.path.join(outdir, f"{self.name}.json"), "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")
        with open(os.path.join(outdir, f"{self.name}.csv"), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["unit", "count", "trial", "n_train", "n_test", "accuracy",
                        "macro_precision", "macro_recall", "macro_f1", "not_fired"])
            for u in self.units:
                r = u.report
                w.writerow([u.unit, "" if u.count is None else u.count,
                            "" if u.trial is None else u.trial, u.n_train, u.n_test,
                            repr(r.accuracy), repr(r.macro_precision), repr(r.macro_recall),
                            repr(r.macro_f1), u.not_fired])
        per_count = self.by_count()
        if per_count:
            with open(os.path.join(outdir, f"{self.name}_summary.csv"), "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["count", "mean_macro_f1", "std_macro_f1", "n_trials"])
                for c, (m, s, n) in per_count.items():
                    w.writerow([c, repr(m), repr(s), n])


def _train(cfg, x, y, seed):
    c = cfg.classifier
    if c["kind"] == "linear":
        return svm.train_linear(x, y, C=c.get("C", 1.0), epochs=c.get("epochs", 200), seed=seed)
    return svm.train_rbf(x, y, C=c.get("C", 1.0), gamma=c.get("gamma", "scale"), seed=seed)


@dataclass
class FittedPipeline:
    """Normaliser, optional ChaosFEX map and standardiser plus a trained model."""

    config: ExperimentConfig
    scaler: MinMaxScaler | None
    std: tuple | None
    model: object

    def features(self, x):
        """Map raw inputs to classifier inputs; also returns the non-fired count."""
        x = np.asarray(x, dtype=np.float64)
        mode = self.config.normalization
        if mode == "train":
            x = self.scaler.transform(x)
        elif mode == "independent":
            x = MinMaxScaler().fit_transform(x)
        not_fired = 0
        params = self.config.gls_params
        if params is not None:
            x, diag = chaosfex.transform(x, params, return_diagnostics=True)
            not_fired = diag.n_not_fired
        if self.std is not None:
            x = (x - self.std[0]) / self.std[1]
        return x, not_fired

    def predict(self, x):
        return svm.predict(self.model, self.features(x)[0])

    def to_dict(self):
        return {
            "version": __version__,
            "config": self.config.to_dict(),
            "scaler": None if self.scaler is None else
            {"min": self.scaler.min_.tolist(), "scale": self.scaler.scale_.tolist()},
            "standardize": None if self.std is None else [a.tolist() for a in self.std],
            "model": svm.model_to_dict(self.model),
        }

    @classmethod
    def from_dict(cls, d):
        try:
            scaler = None
            if d["scaler"] is not None:
                scaler = MinMaxScaler()
                scaler.min_ = np.array(d["scaler"]["min"], dtype=np.float64)
                scaler.scale_ = np.array(d["scaler"]["scale"], dtype=np.float64)
            std = None if d["standardize"] is None else tuple(np.array(a) for a in d["standardize"])
            return cls(ExperimentConfig.from_dict(d["config"]), scaler, std,
                       svm.model_from_dict(d["model"]))
        except (KeyError, TypeError) as exc:
            raise DataError(f"malformed pipeline file: {exc}") from None


def fit_pipeline(cfg, x_train, y_train, seed=None):
    """Fit the configured pipeline on one training split.

    Returns ``(FittedPipeline, not_fired_count)``.
    """
    seed = cfg.seed if seed is None else seed
    x_train = np.asarray(x_train, dtype=np.float64)
    scaler = MinMaxScaler().fit(x_train) if cfg.normalization == "train" else None
    fitted = FittedPipeline(cfg, scaler, None, None)
    tr, not_fired = fitted.features(x_train)
    if cfg.standardize:
        # constant columns centre exactly to zero; their float std is not exact
        const = tr.max(axis=0) == tr.min(axis=0)
        mu = np.where(const, tr[0], tr.mean(axis=0))
        sd = np.where(const, 1.0, tr.std(axis=0))
        fitted.std = (mu, sd)
        tr = (tr - fitted.std[0]) / fitted.std[1]
    fitted.model = _train(cfg, tr, y_train, seed)
    return fitted, not_fired


def fit_evaluate(cfg, x_train, y_train, x_test, y_test, seed=None, classes=None):
    """Normalise, extract features, train and score one train/test pair.

    Returns ``(ClassificationReport, not_fired_count)``.
    """
    y_train = np.asarray(y_train)
    y_test = np.asarray(y_test)
    if classes is None:
        classes = np.unique(np.concatenate([y_train, y_test]))
    missing = sorted(set(int(c) for c in classes) - set(int(c) for c in np.unique(y_train)))
    if missing:
        raise ProtocolError(f"class(es) {missing} absent from the training split")
    fitted, nf_train = fit_pipeline(cfg, x_train, y_train, seed)
    te, nf_test = fitted.features(x_test)
    return report(y_test, svm.predict(fitted.model, te), classes), nf_train + nf_test


def _map(fn, items, threads):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


# ----------------------------------------------------------- protocols ---

def run_holdout(cfg, train, test):
    t0 = time.perf_counter()
    (xtr, ytr), (xte, yte) = train, test
    rep, nf = fit_evaluate(cfg, xtr, ytr, xte, yte)
    unit = UnitResult("holdout", len(ytr), len(yte), rep, not_fired=nf)
    return ExperimentReport(cfg.name, cfg.to_dict(), [unit],
                            {"total_seconds": time.perf_counter() - t0})


def stratified_folds(labels, k, seed):
    """Validation index arrays for ``k`` stratified folds.

    Each class's indices are shuffled and cut into ``k`` chunks whose sizes
    differ by at most one; fold ``f`` validates on chunk ``f`` of every class.
    """
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(k)]
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if idx.size < k:
            raise ProtocolError(f"class {int(c)} has {idx.size} samples, fewer than k={k}")
        idx = rng.permutation(idx)
        for f, chunk in enumerate(np.array_split(idx, k)):
            folds[f].append(chunk)
    return [np.sort(np.concatenate(parts)) for parts in folds]


def run_stratified_kfold(cfg, data, labels, k, threads=1):
    t0 = time.perf_counter()
    data = np.asarray(data, dtype=np.float64)
    labels = np.asarray(labels)
    folds = stratified_folds(labels, k, cfg.seed)
    classes = np.unique(labels)

    def one(f):
        val = folds[f]
        train = np.setdiff1d(np.arange(len(labels)), val, assume_unique=True)
        rep, nf = fit_evaluate(cfg, data[train], labels[train], data[val], labels[val],
                               classes=classes)
        return UnitResult(f"fold-{f + 1}", train.size, val.size, rep, not_fired=nf)

    units = _map(one, range(k), threads)
    return ExperimentReport(cfg.name, cfg.to_dict(), units,
                            {"total_seconds": time.perf_counter() - t0})


def _trial_rng(seed, count, trial):
    return np.random.default_rng(np.random.SeedSequence([seed, count, trial]))


def draw_per_class(labels, count, rng, data=None, quadrant_balanced=False):
    """Indices of ``count`` samples per class, drawn without replacement.

    With ``quadrant_balanced`` (2-D data only) each class draws
    ``count // 4`` points from every quadrant and one extra point from each
    of ``count % 4`` quadrants picked by a seeded shuffle.
    """
    labels = np.asarray(labels)
    chosen = []
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if not quadrant_balanced:
            if idx.size < count:
                raise ProtocolError(f"class {int(c)} pool has {idx.size} samples, need {count}")
            chosen.append(rng.choice(idx, size=count, replace=False))
            continue
        quads = datagen.quadrant(data[idx])
        extra = rng.permutation(4)[: count % 4]
        for qd in range(4):
            want = count // 4 + int(qd in extra)
            cell = idx[quads == qd]
            if cell.size < want:
                raise ProtocolError(
                    f"class {int(c)} quadrant {qd} pool has {cell.size} samples, need {want}")
            if want:
                chosen.append(rng.choice(cell, size=want, replace=False))
    return np.sort(np.concatenate(chosen))


def run_low_sample_trials(cfg, pool, test, counts, n_trials, *, quadrant_balanced=False,
                          threads=1):
    """Random-trial training at several per-class sample counts.

    ``test=None`` evaluates every trial on the pool samples it did not draw.
    Trial ``t`` at count ``c`` uses generator ``SeedSequence([seed, c, t])``,
    so results do not depend on execution order.
    """
    t0 = time.perf_counter()
    x_pool, y_pool = (np.asarray(a) for a in pool)
    x_pool = x_pool.astype(np.float64)
    classes = np.unique(y_pool)
    jobs = [(c, t) for c in counts for t in range(n_trials)]

    def one(job):
        c, t = job
        rng = _trial_rng(cfg.seed, c, t)
        drawn = draw_per_class(y_pool, c, rng, x_pool, quadrant_balanced)
        if test is None:
            rest = np.setdiff1d(np.arange(len(y_pool)), drawn, assume_unique=True)
            x_te, y_te = x_pool[rest], y_pool[rest]
        else:
            x_te, y_te = test
        trial_seed = int(rng.integers(2**31))
        rep, nf = fit_evaluate(cfg, x_pool[drawn], y_pool[drawn], x_te, y_te,
                               seed=trial_seed, classes=classes)
        return UnitResult(f"count-{c}-trial-{t}", drawn.size, len(y_te), rep,
                          count=c, trial=t, not_fired=nf)

    units = _map(one, jobs, threads)
    return ExperimentReport(cfg.name, cfg.to_dict(), units,
                            {"total_seconds": time.perf_counter() - t0})


@dataclass
class GridCell:
    config: ExperimentConfig
    score: float | None
    error: str | None = None


def grid_search(configs, data, labels, protocol=None, threads=1):
    """Score every config and rank by mean macro F1, best first.

    ``protocol`` overrides each config's own protocol (``holdout`` is not
    meaningful without a separate test set, so k-fold is expected).  Ties
    keep grid order; failed cells are kept with ``score=None`` and ranked
    last.
    """
    if not configs:
        raise ArgumentError("grid must contain at least one config")

    def one(cfg):
        if protocol is not None:
            cfg = cfg.replace(protocol=protocol)
        p = cfg.protocol
        try:
            if p["kind"] != "stratified_kfold":
                raise ProtocolError("grid search needs a stratified_kfold protocol")
            rep = run_stratified_kfold(cfg, data, labels, p["k"])
            return GridCell(cfg, rep.mean_f1)
        except NeurochaosError as exc:
            log.warning("grid cell %s failed: %s", cfg.name, exc)
            return GridCell(cfg, None, str(exc))

    cells = _map(one, configs, threads)
    order = sorted(range(len(cells)),
                   key=lambda i: (cells[i].score is None, -(cells[i].score or 0.0), i))
    return [cells[i] for i in order]


# ------------------------------------------------------------- datasets ---

def _circles(spec, seed):
    cfg = datagen.CircleGenConfig(alpha=spec["alpha"], samples_per_class=tuple(spec["sizes"]),
                                  seed=seed + spec.get("seed_offset", 0))
    return datagen.generate(cfg)


def load_fasta_dataset(ds):
    """Records and labels from a ``{"files": {label: path(s)}}`` spec."""
    records, labels = [], []
    for label, paths in sorted(ds["files"].items(), key=lambda kv: int(kv[0])):
        for p in [paths] if isinstance(paths, str) else paths:
            recs = genome.read_fasta(p)
            if not recs:
                raise DataError(f"{p}: no FASTA records")
            records.extend(recs)
            labels.extend([int(label)] * len(recs))
    return records, np.array(labels, dtype=np.int64)


def load_dataset(cfg):
    """``(train, test)`` pairs for a config; ``test`` may be ``None``."""
    ds = cfg.dataset
    if ds["kind"] == "circles":
        train = _circles(ds["train"], cfg.seed)
        test = _circles(ds["test"], cfg.seed) if ds.get("test") else None
        return train, test
    if ds["kind"] == "csv":
        train = datagen.read_dataset_csv(ds["train"])
        test = datagen.read_dataset_csv(ds["test"]) if ds.get("test") else None
        return train, test
    records, labels = load_fasta_dataset(ds)
    return (genome.preprocess(records, ds["l_max"]), labels), None


def run_experiment(cfg, threads=1):
    """Load the configured dataset and run the configured protocol."""
    train, test = load_dataset(cfg)
    p = cfg.protocol
    if p["kind"] == "holdout":
        if test is None:
            raise ProtocolError("holdout protocol needs a test split")
        return run_holdout(cfg, train, test)
    if p["kind"] == "stratified_kfold":
        return run_stratified_kfold(cfg, *train, p["k"], threads=threads)
    pool = train
    if p.get("reduce_pool", False):
        pool = datagen.reduce_for_low_sample(*train)
    return run_low_sample_trials(cfg, pool, test, p["counts"], p["n_trials"],
                                 quadrant_balanced=p.get("quadrant_balanced", False),
                                 threads=threads)


def run_noise_suite(seed=0, threads=1):
    """The four train-noisy / train-clean experiments, in order Expt-1..4."""
    from .presets import noise_suite

    return [run_experiment(cfg, threads=threads) for cfg in noise_suite(seed)]
