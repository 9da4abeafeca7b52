"""Command-line entry point.

Subcommands: ``gen-data``, ``extract``, ``train``, ``predict``,
``experiment``, ``grid`` and ``uat``.  Every subcommand that writes files
also writes ``resolved_config.json`` and ``version.json`` into its output
directory.

Exit codes: 0 success, 1 usage error, 2 data error, 3 protocol error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import platform
import sys

import numpy as np

from . import __version__, chaosfex, datagen, genome, harness, presets
from .config import load_config
from .errors import ArgumentError, DataError, NeurochaosError
from .gls import DEFAULT_MAX_ITERS, GlsParams, approximate_with_firing_times
from .metrics import format_fold_table, report

log = logging.getLogger("neurochaos")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(f"{self.prog}: {message}")


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _prepare_outdir(outdir, resolved):
    os.makedirs(outdir, exist_ok=True)
    _write_json(os.path.join(outdir, "resolved_config.json"), resolved)
    _write_json(os.path.join(outdir, "version.json"), {
        "neurochaos": __version__, "python": platform.python_version(), "numpy": np.__version__,
    })


def _parse_fasta_args(items):
    if not items:
        return None
    out = {}
    for item in items:
        label, sep, path = item.partition("=")
        if not sep or not path:
            raise ArgumentError(f"--fasta expects LABEL=PATH, got {item!r}")
        try:
            int(label)
        except ValueError:
            raise ArgumentError(f"--fasta label {label!r} is not an integer") from None
        out.setdefault(label, []).append(path)
    return out


def _configs(args):
    if bool(args.preset) == bool(args.config):
        raise ArgumentError("give exactly one of --preset or --config")
    if args.preset:
        cfgs = presets.get_preset(args.preset, seed=args.seed or 0,
                                  fasta=_parse_fasta_args(getattr(args, "fasta", None)),
                                  l_max=getattr(args, "l_max", None))
    else:
        cfgs = load_config(args.config)
        if args.seed is not None:
            cfgs = [c.replace(seed=args.seed) for c in cfgs]
    return cfgs


def _gls_from_args(args):
    return GlsParams(args.q, args.b, args.epsilon, args.max_iters)


# ------------------------------------------------------------ commands ---

def cmd_gen_data(args):
    seed = args.seed or 0
    sizes = datagen.TRAIN_SIZES if args.split == "train" else datagen.TEST_SIZES
    make = datagen.ccd if args.preset == "ccd" else datagen.occd
    cfg = make(sizes=sizes, seed=seed)
    data, labels = datagen.generate(cfg)
    _prepare_outdir(args.output, {"command": "gen-data", "preset": args.preset,
                                  "split": args.split, "generator": cfg.to_dict()})
    path = os.path.join(args.output, f"{args.preset}.csv")
    datagen.write_dataset_csv(path, data, labels)
    _write_json(os.path.join(args.output, f"{args.preset}_manifest.json"), {
        "preset": args.preset, "split": args.split, **cfg.to_dict(), "rows": int(len(labels)),
        "overlap_fraction": datagen.overlap_fraction(data, labels),
    })
    print(f"wrote {path} ({len(labels)} rows)")


def cmd_extract(args):
    params = _gls_from_args(args)
    ids = None
    if args.fasta_input:
        records = genome.read_fasta(args.input)
        if not records:
            raise DataError(f"{args.input}: no FASTA records")
        x = genome.preprocess(records, args.l_max, threads=args.threads)
        ids = [r.id for r in records]
        labels = None if args.label is None else np.full(len(records), args.label)
    else:
        x, labels = datagen.read_dataset_csv(args.input)
        if args.normalize:
            x = harness.MinMaxScaler().fit_transform(x)
    _prepare_outdir(args.output, {"command": "extract", "input": args.input,
                                  "fasta": bool(args.fasta_input), "l_max": args.l_max,
                                  "normalize": args.normalize, "params": params.to_dict()})
    if args.fasta_input:
        _write_json(os.path.join(args.output, "manifest.json"), genome.manifest(records, args.l_max))
    feats, diag = chaosfex.transform(x, params, threads=args.threads, return_diagnostics=True)
    path = os.path.join(args.output, "features.csv")
    chaosfex.write_feature_csv(path, feats, labels=labels, ids=ids)
    if diag.n_not_fired:
        log.warning("%d of %d neurons did not fire", diag.n_not_fired, diag.n_cells)
    print(f"wrote {path} ({feats.shape[0]} rows, {feats.shape[1]} features)")


def cmd_train(args):
    cfg = _configs(args)[0]
    train, _ = harness.load_dataset(cfg)
    fitted, not_fired = harness.fit_pipeline(cfg, *train)
    _prepare_outdir(args.output, cfg.to_dict())
    path = os.path.join(args.output, "model.json")
    _write_json(path, fitted.to_dict())
    print(f"wrote {path} ({cfg.name}, {len(train[1])} training samples, {not_fired} not fired)")


def cmd_predict(args):
    try:
        with open(args.model) as fh:
            fitted = harness.FittedPipeline.from_dict(json.load(fh))
    except json.JSONDecodeError as exc:
        raise DataError(f"{args.model}: invalid JSON ({exc})") from None
    x, labels = datagen.read_dataset_csv(args.input)
    pred = fitted.predict(x)
    _prepare_outdir(args.output, {"command": "predict", "model": args.model, "input": args.input,
                                  "pipeline": fitted.config.to_dict()})
    path = os.path.join(args.output, "predictions.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "prediction", "label"])
        for i, (p, y) in enumerate(zip(pred.tolist(), labels.tolist())):
            w.writerow([i, int(p), int(y)])
    rep = report(labels, pred, np.array(fitted.model.classes))
    _write_json(os.path.join(args.output, "report.json"), rep.to_dict())
    print(f"wrote {path}; macro F1 {rep.macro_f1:.4f}, accuracy {rep.accuracy:.2f}%")


def _summary_line(rep):
    per = rep.by_count()
    if per:
        first, last = min(per), max(per)
        return (f"{rep.name}: mean macro F1 {per[first][0]:.4f} at {first} -> "
                f"{per[last][0]:.4f} at {last} samples/class")
    return f"{rep.name}: mean macro F1 {rep.mean_f1:.4f} (std {rep.std_f1:.4f}, {len(rep.units)} unit(s))"


def cmd_experiment(args):
    from . import plotting

    cfgs = _configs(args)
    _prepare_outdir(args.output, [c.to_dict() for c in cfgs])
    reports = []
    for cfg in cfgs:
        rep = harness.run_experiment(cfg, threads=args.threads)
        rep.write(args.output)
        reports.append(rep)
        if cfg.protocol["kind"] == "stratified_kfold":
            with open(os.path.join(args.output, f"{cfg.name}_folds.txt"), "w") as fh:
                fh.write(format_fold_table([u.report for u in rep.units]))
        print(_summary_line(rep))
    trials = [r for r in reports if r.by_count()]
    if trials and not args.no_plots:
        stem = args.preset or os.path.splitext(os.path.basename(args.config))[0]
        plotting.low_sample_curves(trials, args.output, stem)


def cmd_grid(args):
    from . import plotting

    cfgs = _configs(args)
    train, _ = harness.load_dataset(cfgs[0])
    if any(c.dataset != cfgs[0].dataset for c in cfgs):
        raise ArgumentError("all grid configs must share one dataset")
    _prepare_outdir(args.output, [c.to_dict() for c in cfgs])
    ranked = harness.grid_search(cfgs, *train, threads=args.threads)
    path = os.path.join(args.output, "grid.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rank", "name", "mean_macro_f1", "error"])
        for i, cell in enumerate(ranked, start=1):
            w.writerow([i, cell.config.name, "" if cell.score is None else repr(cell.score),
                        cell.error or ""])
    best = ranked[0]
    print(f"best: {best.config.name} mean macro F1 "
          f"{'failed' if best.score is None else f'{best.score:.4f}'}")
    eps = [c for c in ranked if c.score is not None and c.config.gls_params is not None]
    if len(eps) > 1 and not args.no_plots:
        eps.sort(key=lambda c: c.config.gls_params.epsilon)
        plotting.grid_curve([c.config.gls_params.epsilon for c in eps], [c.score for c in eps],
                            "epsilon", args.output, "grid")


def cmd_uat(args):
    if not args.epsilon_total > 0:
        raise ArgumentError(f"--epsilon-total must be positive, got {args.epsilon_total}")
    if args.values:
        f = [float(v) for v in args.values.split(",")]
    else:
        if args.length < 1:
            raise ArgumentError(f"-L must be >= 1, got {args.length}")
        f = np.random.default_rng(args.seed or 0).random(args.length).tolist()
    eps = args.epsilon_total / (2 * len(f))
    params = GlsParams(args.q, args.b, eps, args.max_iters)
    approx, total, times = approximate_with_firing_times(f, params)
    out = {"L": len(f), "epsilon_total": args.epsilon_total, "params": params.to_dict(),
           "function": f, "approximation": approx, "firing_times": times,
           "total_error": total, "within_bound": total < args.epsilon_total}
    if args.output:
        _prepare_outdir(args.output, {"command": "uat", "seed": args.seed or 0,
                                      "epsilon_total": args.epsilon_total,
                                      "params": params.to_dict()})
        _write_json(os.path.join(args.output, "uat.json"), out)
    print(f"L={len(f)} epsilon={eps:.6g} total error {total:.6g} "
          f"(bound {args.epsilon_total}): {'ok' if out['within_bound'] else 'EXCEEDED'}")
    print("firing times N_i: " + " ".join(str(t) for t in times))


# -------------------------------------------------------------- parser ---

def build_parser():
    p = _Parser(prog="neurochaos", description="Neurochaos learning experiments.")
    p.add_argument("--version", action="version", version=f"neurochaos {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, output_required=True):
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("-o", "--output", required=output_required, default=None)

    def gls(sp, q=0.34, b=0.499, epsilon=0.183):
        sp.add_argument("--q", type=float, default=q)
        sp.add_argument("--b", type=float, default=b)
        sp.add_argument("--epsilon", type=float, default=epsilon)
        sp.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)

    def configured(sp):
        sp.add_argument("--preset")
        sp.add_argument("--config")
        sp.add_argument("--fasta", action="append", metavar="LABEL=PATH",
                        help="FASTA file for a class label (genome presets; repeatable)")
        sp.add_argument("--l-max", type=int, default=None)

    sp = sub.add_parser("gen-data", help="generate a concentric-circle dataset")
    sp.add_argument("--preset", choices=("ccd", "occd"), required=True)
    sp.add_argument("--split", choices=("train", "test"), default="train")
    common(sp)
    sp.set_defaults(func=cmd_gen_data)

    sp = sub.add_parser("extract", help="map a dataset CSV or FASTA file to ChaosFEX features")
    sp.add_argument("input")
    sp.add_argument("--fasta-input", action="store_true", help="treat input as FASTA")
    sp.add_argument("--label", type=int, default=None, help="class label for FASTA records")
    sp.add_argument("--l-max", type=int, default=genome.DEFAULT_L_MAX)
    sp.add_argument("--no-normalize", dest="normalize", action="store_false",
                    help="CSV input is already in [0, 1]")
    gls(sp)
    common(sp)
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("train", help="fit a pipeline on a config's training split")
    configured(sp)
    common(sp)
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("predict", help="apply a trained pipeline to a dataset CSV")
    sp.add_argument("--model", required=True)
    sp.add_argument("input")
    common(sp)
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("experiment", help="run a preset or config file")
    configured(sp)
    sp.add_argument("--no-plots", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("grid", help="rank a grid of configs by k-fold macro F1")
    configured(sp)
    sp.add_argument("--no-plots", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_grid)

    sp = sub.add_parser("uat", help="approximate a discrete function with GLS neurons")
    sp.add_argument("-L", "--length", type=int, default=16)
    sp.add_argument("--epsilon-total", type=float, default=0.1)
    sp.add_argument("--values", help="comma-separated function values in [0, 1]")
    sp.add_argument("--q", type=float, default=0.34)
    sp.add_argument("--b", type=float, default=0.499)
    sp.add_argument("--max-iters", type=int, default=1_000_000)
    common(sp, output_required=False)
    sp.set_defaults(func=cmd_uat)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if args.threads < 1:
            raise ArgumentError(f"--threads must be >= 1, got {args.threads}")
        args.func(args)
    except NeurochaosError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DataError.exit_code
    return 0
