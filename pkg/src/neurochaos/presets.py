"""Named experiment configurations for every reported table and figure.

A preset builder takes a seed (and, for genome presets, a mapping from
class label to FASTA path) and returns a list of :class:`ExperimentConfig`:
the ChaosFEX pipeline first, then its SVM baseline.
"""

from __future__ import annotations

import numpy as np

from .config import ExperimentConfig
from .datagen import CCD_ALPHA, OCCD_ALPHA, TEST_SIZES, TRAIN_SIZES
from .errors import ArgumentError
from .genome import DEFAULT_L_MAX, SARS2_VS_SARS1_L_MAX

OCCD_PARAMS = {"q": 0.22, "b": 0.96, "epsilon": 0.018}
NOISE_PARAMS = {"q": 0.34, "b": 0.499, "epsilon": 0.18}
GENOME_PARAMS = {"q": 0.34, "b": 0.499, "epsilon": 0.183}

LINEAR = {"kind": "linear", "C": 1.0, "epochs": 200}
RBF_SCALE = {"kind": "rbf", "C": 1.0, "gamma": "scale"}
RBF_NOISE = {"kind": "rbf", "C": 1.0, "gamma": 0.1}

FIG7_COUNTS = list(range(4, 725, 16))
FIG7_REDUCED_COUNTS = [4, 36, 132, 388, 724]

# Seed offsets keep every generated split independent while letting
# experiments that share a split regenerate it identically.
_OCCD_TRAIN, _OCCD_TEST, _CCD_TRAIN, _CCD_TEST, _CCD_VAL = 0, 1, 2, 3, 4


def _split(alpha, sizes, offset):
    return {"alpha": alpha, "sizes": list(sizes), "seed_offset": offset}


def _chaosfex(params):
    return {"kind": "chaosfex", **params}


OCCD_HOLDOUT = {"kind": "circles",
                "train": _split(OCCD_ALPHA, TRAIN_SIZES, _OCCD_TRAIN),
                "test": _split(OCCD_ALPHA, TEST_SIZES, _OCCD_TEST)}


def table7(seed=0, **_):
    return [
        ExperimentConfig("table7-chaosfex", OCCD_HOLDOUT, _chaosfex(OCCD_PARAMS), LINEAR, seed=seed),
        ExperimentConfig("table7-rbf", OCCD_HOLDOUT, {"kind": "raw"}, RBF_SCALE, seed=seed),
    ]


def noise_suite(seed=0, **_):
    """Expt-1..4: noisy or clean training, clean testing.

    Each split is rescaled on its own (``normalization="independent"``);
    see the decisions ledger for why this suite departs from train-fitted
    scaling.
    """
    noisy = {"kind": "circles", "train": _split(OCCD_ALPHA, TRAIN_SIZES, _OCCD_TRAIN),
             "test": _split(CCD_ALPHA, TRAIN_SIZES, _CCD_VAL)}
    clean = {"kind": "circles", "train": _split(CCD_ALPHA, TRAIN_SIZES, _CCD_TRAIN),
             "test": _split(CCD_ALPHA, TEST_SIZES, _CCD_TEST)}
    common = {"normalization": "independent", "seed": seed}
    return [
        ExperimentConfig("expt1-noisy-chaosfex", noisy, _chaosfex(NOISE_PARAMS), LINEAR, **common),
        ExperimentConfig("expt2-clean-chaosfex", clean, _chaosfex(NOISE_PARAMS), LINEAR, **common),
        ExperimentConfig("expt3-noisy-rbf", noisy, {"kind": "raw"}, RBF_NOISE, **common),
        ExperimentConfig("expt4-clean-rbf", clean, {"kind": "raw"}, RBF_NOISE, **common),
    ]


def expt2_optimum(seed=0, **_):
    clean = {"kind": "circles", "train": _split(CCD_ALPHA, TRAIN_SIZES, _CCD_TRAIN),
             "test": _split(CCD_ALPHA, TEST_SIZES, _CCD_TEST)}
    return [ExperimentConfig("expt2-optimum", clean, _chaosfex(OCCD_PARAMS), LINEAR,
                             normalization="independent", seed=seed)]


def _fig7(seed, counts, n_trials, suffix):
    protocol = {"kind": "random_trials", "counts": counts, "n_trials": n_trials,
                "quadrant_balanced": True, "reduce_pool": True}
    return [
        ExperimentConfig(f"fig7{suffix}-chaosfex", OCCD_HOLDOUT, _chaosfex(OCCD_PARAMS), LINEAR,
                         protocol, seed=seed),
        ExperimentConfig(f"fig7{suffix}-rbf", OCCD_HOLDOUT, {"kind": "raw"}, RBF_SCALE,
                         protocol, seed=seed),
    ]


def fig7_lowsample(seed=0, **_):
    return _fig7(seed, FIG7_REDUCED_COUNTS, 50, "-lowsample")


def fig7_lowsample_full(seed=0, **_):
    return _fig7(seed, FIG7_COUNTS, 200, "-lowsample-full")


def _fasta_dataset(fasta, l_max, n_classes=None):
    if not fasta:
        raise ArgumentError("genome presets need FASTA inputs: --fasta LABEL=PATH (repeatable)")
    if n_classes is not None and len(fasta) != n_classes:
        raise ArgumentError(f"preset expects {n_classes} classes, got {len(fasta)} --fasta labels")
    return {"kind": "fasta", "files": {str(k): v for k, v in fasta.items()}, "l_max": l_max}


def _genome(name, seed, fasta, l_max, protocol, n_classes=None, params=GENOME_PARAMS):
    # Spectra are already rescaled to [0, 1] per record.  Thousands of
    # near-constant feature columns slow the sub-gradient solver badly, so
    # classifier inputs are standardised.
    ds = _fasta_dataset(fasta, l_max, n_classes)
    common = {"normalization": "none", "standardize": True, "seed": seed}
    return [
        ExperimentConfig(f"{name}-chaosfex", ds, _chaosfex(params), LINEAR, protocol, **common),
        ExperimentConfig(f"{name}-linear", ds, {"kind": "raw"}, LINEAR, protocol, **common),
    ]


FIVEFOLD = {"kind": "stratified_kfold", "k": 5}


def fivefold_binary(seed=0, fasta=None, l_max=DEFAULT_L_MAX, **_):
    return _genome("fivefold-binary", seed, fasta, l_max, FIVEFOLD, 2)


def fivefold_multiclass(seed=0, fasta=None, l_max=DEFAULT_L_MAX, **_):
    return _genome("fivefold-multiclass", seed, fasta, l_max, FIVEFOLD)


def sars2_vs_sars1(seed=0, fasta=None, l_max=SARS2_VS_SARS1_L_MAX, **_):
    return _genome("sars2-vs-sars1", seed, fasta, l_max, FIVEFOLD, 2)


def fig9_lowsample(seed=0, fasta=None, l_max=DEFAULT_L_MAX, **_):
    protocol = {"kind": "random_trials", "counts": list(range(1, 7)), "n_trials": 200}
    return _genome("fig9-lowsample", seed, fasta, l_max, protocol)


def fig10_lowsample(seed=0, fasta=None, l_max=SARS2_VS_SARS1_L_MAX, **_):
    protocol = {"kind": "random_trials", "counts": list(range(1, 21)), "n_trials": 1000}
    return _genome("fig10-lowsample", seed, fasta, l_max, protocol, 2)


def occd_eps_grid(seed=0, **_):
    """q=0.22, b=0.96 and epsilon from 0.01 to 0.2 in steps of 0.001, 3-fold."""
    ds = {"kind": "circles", "train": _split(OCCD_ALPHA, TRAIN_SIZES, _OCCD_TRAIN)}
    protocol = {"kind": "stratified_kfold", "k": 3}
    eps = np.round(np.arange(0.010, 0.2005, 0.001), 3)
    return [ExperimentConfig(f"eps-{e:.3f}", ds, _chaosfex({**OCCD_PARAMS, "epsilon": float(e)}),
                             LINEAR, protocol, seed=seed) for e in eps]


def rbf_grid(seed=0, **_):
    """C in 1e-2..1e3 and gamma in 1e-9..1e3 (decades), 3-fold on OCCD."""
    ds = {"kind": "circles", "train": _split(OCCD_ALPHA, TRAIN_SIZES, _OCCD_TRAIN)}
    protocol = {"kind": "stratified_kfold", "k": 3}
    out = []
    for c in 10.0 ** np.arange(-2, 4):
        for g in 10.0 ** np.arange(-9, 4):
            out.append(ExperimentConfig(f"rbf-C{c:g}-gamma{g:g}", ds, {"kind": "raw"},
                                        {"kind": "rbf", "C": float(c), "gamma": float(g)},
                                        protocol, normalization="independent", seed=seed))
    return out


PRESETS = {
    "table7": table7,
    "noise-suite": noise_suite,
    "expt2-optimum": expt2_optimum,
    "fig7-lowsample": fig7_lowsample,
    "fig7-lowsample-full": fig7_lowsample_full,
    "fivefold-binary": fivefold_binary,
    "binary-sarscov2-vs-others": fivefold_binary,
    "fivefold-multiclass": fivefold_multiclass,
    "multiclass": fivefold_multiclass,
    "sars2-vs-sars1": sars2_vs_sars1,
    "fig9-lowsample": fig9_lowsample,
    "fig10-lowsample": fig10_lowsample,
}

GRID_PRESETS = {
    "occd-eps-grid": occd_eps_grid,
    "rbf-grid": rbf_grid,
}

GENOME_PRESETS = frozenset({"fivefold-binary", "binary-sarscov2-vs-others", "fivefold-multiclass",
                            "multiclass", "sars2-vs-sars1", "fig9-lowsample", "fig10-lowsample"})


def get_preset(name, seed=0, fasta=None, l_max=None):
    table = PRESETS if name in PRESETS else GRID_PRESETS
    if name not in table:
        known = ", ".join(sorted({**PRESETS, **GRID_PRESETS}))
        raise ArgumentError(f"unknown preset {name!r}; known presets: {known}")
    kwargs = {"seed": seed, "fasta": fasta}
    if l_max is not None:
        kwargs["l_max"] = l_max
    return table[name](**kwargs)
