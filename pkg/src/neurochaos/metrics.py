"""Accuracy and per-class / macro-averaged precision, recall and F1."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError


@dataclass(frozen=True)
class ClassificationReport:
    classes: tuple
    precision: tuple
    recall: tuple
    f1: tuple
    support: tuple
    confusion: tuple  # rows: true class, columns: predicted class
    accuracy: float   # percent

    @property
    def macro_precision(self):
        return float(np.mean(self.precision))

    @property
    def macro_recall(self):
        return float(np.mean(self.recall))

    @property
    def macro_f1(self):
        return float(np.mean(self.f1))

    def to_dict(self):
        return {
            "classes": list(self.classes),
            "precision": list(self.precision),
            "recall": list(self.recall),
            "f1": list(self.f1),
            "support": list(self.support),
            "confusion": [list(r) for r in self.confusion],
            "accuracy": self.accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(classes=tuple(d["classes"]), precision=tuple(d["precision"]),
                   recall=tuple(d["recall"]), f1=tuple(d["f1"]), support=tuple(d["support"]),
                   confusion=tuple(tuple(r) for r in d["confusion"]), accuracy=d["accuracy"])


def _ratio(num, den):
    return num / den if den else 0.0


def report(y_true, y_pred, classes=None):
    """Build a :class:`ClassificationReport`.

    Undefined precision or recall (zero denominator) is reported as 0, and so
    is F1 when precision and recall are both 0.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ArgumentError(f"label vectors differ in shape: {y_true.shape} vs {y_pred.shape}")
    if classes is None:
        classes = np.unique(np.concatenate([y_true, y_pred]))
    classes = tuple(int(c) for c in classes)
    index = {c: i for i, c in enumerate(classes)}
    k = len(classes)
    cm = np.zeros((k, k), dtype=np.int64)
    try:
        for t, p in zip(y_true.tolist(), y_pred.tolist()):
            cm[index[int(t)], index[int(p)]] += 1
    except KeyError as exc:
        raise ArgumentError(f"label {exc.args[0]} not in classes {list(classes)}") from None
    tp = np.diag(cm)
    precision, recall, f1 = [], [], []
    for i in range(k):
        p = _ratio(tp[i], cm[:, i].sum())
        r = _ratio(tp[i], cm[i, :].sum())
        precision.append(float(p))
        recall.append(float(r))
        f1.append(float(_ratio(2 * p * r, p + r)))
    total = cm.sum()
    acc = 100.0 * _ratio(int(np.trace(cm)), int(total))
    return ClassificationReport(
        classes=classes, precision=tuple(precision), recall=tuple(recall), f1=tuple(f1),
        support=tuple(int(s) for s in cm.sum(axis=1)),
        confusion=tuple(tuple(int(v) for v in row) for row in cm),
        accuracy=float(acc),
    )


def format_fold_table(reports, digits=2):
    """Fixed-width table with Pr / Re / F1 per class and fold plus a macro row."""
    if not reports:
        return ""
    classes = reports[0].classes
    cell = max(digits + 3, 4)
    head1 = "Folds".ljust(10) + "".join(f"Fold-{i + 1}".center(3 * cell + 2) for i in range(len(reports)))
    head2 = "Metric".ljust(10) + "".join(
        "".join(m.rjust(cell) for m in ("Pr", "Re", "F1")) + "  " for _ in reports)

    def fmt(v):
        return f"{v:.{digits}f}".rstrip("0").rstrip(".") if v not in (0.0, 1.0) else str(int(v))

    lines = [head1, head2]
    for ci, c in enumerate(classes):
        row = f"Class-{c}".ljust(10)
        for rep in reports:
            row += "".join(fmt(v).rjust(cell) for v in (rep.precision[ci], rep.recall[ci], rep.f1[ci])) + "  "
        lines.append(row.rstrip())
    row = "Macro".ljust(10)
    for rep in reports:
        row += "".join(fmt(v).rjust(cell) for v in
                       (rep.macro_precision, rep.macro_recall, rep.macro_f1)) + "  "
    lines.append(row.rstrip())
    return "\n".join(lines) + "\n"
