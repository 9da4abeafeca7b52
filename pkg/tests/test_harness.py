import json

import numpy as np
import pytest

from neurochaos import datagen, harness
from neurochaos.config import ExperimentConfig
from neurochaos.errors import ProtocolError
from neurochaos.harness import (FittedPipeline, MinMaxScaler, draw_per_class, fit_pipeline,
                                grid_search, run_low_sample_trials, run_stratified_kfold,
                                stratified_folds)

DUMMY = {"kind": "circles", "train": {"alpha": 0.0, "sizes": [4, 4]}}


def make_cfg(**kw):
    base = {"name": "toy", "dataset": DUMMY,
            "classifier": {"kind": "linear", "C": 1.0, "epochs": 50}}
    base.update(kw)
    return ExperimentConfig.from_dict(base)


def separable(n_per=20, seed=0):
    rng = np.random.default_rng(seed)
    x = np.vstack([rng.uniform(0.0, 0.3, (n_per, 2)), rng.uniform(0.7, 1.0, (n_per, 2))])
    return x, np.repeat([0, 1], n_per)


class TestScaler:
    def test_fit_and_clip(self):
        s = MinMaxScaler().fit([[0.0, 5.0], [2.0, 5.0]])
        assert s.transform([[1.0, 5.0], [4.0, 7.0], [-1.0, 0.0]]).tolist() == \
            [[0.5, 0.0], [1.0, 1.0], [0.0, 0.0]]

    def test_leakage_guard(self):
        x, y = separable()
        cfg = make_cfg()
        fitted, _ = fit_pipeline(cfg, x, y)
        before = (fitted.scaler.min_.copy(), fitted.scaler.scale_.copy())
        fitted.predict(np.full((3, 2), 50.0))
        assert np.array_equal(before[0], fitted.scaler.min_)
        assert np.array_equal(before[1], fitted.scaler.scale_)


class TestFolds:
    def test_balanced_sizes(self):
        folds = stratified_folds(np.repeat([0, 1], 10), 5, seed=0)
        labels = np.repeat([0, 1], 10)
        for f in folds:
            assert np.bincount(labels[f]).tolist() == [2, 2]

    def test_unbalanced(self):
        labels = np.array([0] * 45 + [1] * 339)
        folds = stratified_folds(labels, 5, seed=3)
        for f in folds:
            assert np.sum(labels[f] == 0) == 9
            assert np.sum(labels[f] == 1) in (67, 68)

    def test_partition(self):
        labels = np.random.default_rng(0).integers(0, 3, 101)
        folds = stratified_folds(labels, 4, seed=1)
        allidx = np.concatenate(folds)
        assert np.array_equal(np.sort(allidx), np.arange(101))

    def test_too_small(self):
        with pytest.raises(ProtocolError, match="fewer than k=5"):
            stratified_folds(np.array([0] * 10 + [1] * 3), 5, seed=0)

    def test_kfold_report(self):
        x, y = separable()
        rep = run_stratified_kfold(make_cfg(), x, y, 5)
        assert [u.unit for u in rep.units] == [f"fold-{i}" for i in range(1, 6)]
        assert rep.mean_f1 == 1.0
        scores = [u.report.macro_f1 for u in rep.units]
        assert rep.mean_f1 == pytest.approx(np.mean(scores), abs=1e-12)

    def test_deterministic_and_threads(self):
        x, y = separable(seed=2)
        cfg = make_cfg(pipeline={"kind": "chaosfex", "q": 0.34, "b": 0.499, "epsilon": 0.05})
        a = run_stratified_kfold(cfg, x, y, 4)
        b = run_stratified_kfold(cfg, x, y, 4, threads=3)
        assert [u.to_dict() for u in a.units] == [u.to_dict() for u in b.units]


class TestTrials:
    def test_quadrant_balanced_draw(self):
        x, y = datagen.generate(datagen.occd(sizes=(200, 200), seed=0))
        rng = np.random.default_rng(0)
        idx = draw_per_class(y, 6, rng, x, quadrant_balanced=True)
        for c in (0, 1):
            q = datagen.quadrant(x[idx][y[idx] == c])
            counts = np.bincount(q, minlength=4)
            assert counts.sum() == 6 and counts.min() >= 1 and counts.max() <= 2

    def test_draw_without_replacement(self):
        y = np.repeat([0, 1], 5)
        idx = draw_per_class(y, 5, np.random.default_rng(0))
        assert idx.tolist() == list(range(10))
        with pytest.raises(ProtocolError):
            draw_per_class(y, 6, np.random.default_rng(0))

    def test_toy_trials(self):
        x, y = separable(n_per=30)
        rep = run_low_sample_trials(make_cfg(), (x, y), None, [1, 3], 4)
        assert len(rep.units) == 8
        assert set(rep.by_count()) == {1, 3}
        assert rep.by_count()[3][0] == 1.0
        assert all(u.n_test == 60 - u.n_train for u in rep.units)

    def test_order_independent(self):
        x, y = separable(n_per=30, seed=4)
        cfg = make_cfg()
        a = run_low_sample_trials(cfg, (x, y), None, [2, 5], 3)
        b = run_low_sample_trials(cfg, (x, y), None, [5], 3, threads=2)
        tail = [u.to_dict() for u in a.units if u.count == 5]
        assert tail == [u.to_dict() for u in b.units]

    def test_write_outputs(self, tmp_path):
        x, y = separable(n_per=10)
        rep = run_low_sample_trials(make_cfg(), (x, y), None, [2], 2)
        rep.write(tmp_path)
        assert (tmp_path / "toy_summary.csv").read_text().startswith("count,mean_macro_f1")
        data = json.loads((tmp_path / "toy.json").read_text())
        assert data["aggregate"]["n_units"] == 2 and "timings" in data
        assert "seconds" not in (tmp_path / "toy.csv").read_text()


class TestGrid:
    def test_ranking_and_failures(self):
        x, y = separable()
        good = make_cfg(name="good")
        bad = make_cfg(name="bad", pipeline={"kind": "chaosfex", "q": 0.0, "b": 0.5, "epsilon": 0.01,
                                            "max_iters": 5})
        cells = grid_search([bad, good, good.replace(name="good2")], x, y,
                            protocol={"kind": "stratified_kfold", "k": 3})
        assert [c.config.name for c in cells][:2] == ["good", "good2"]
        assert cells[0].score == cells[1].score == 1.0

    def test_failed_cell_kept_last(self):
        x, y = separable(n_per=2)
        cells = grid_search([make_cfg(name="a")], x, y, protocol={"kind": "stratified_kfold", "k": 3})
        assert cells[0].score is None and "fewer than k" in cells[0].error


class TestPipeline:
    def test_round_trip(self):
        x, y = separable(seed=5)
        cfg = make_cfg(pipeline={"kind": "chaosfex", "q": 0.34, "b": 0.499, "epsilon": 0.05},
                       standardize=True)
        fitted, _ = fit_pipeline(cfg, x, y)
        again = FittedPipeline.from_dict(json.loads(json.dumps(fitted.to_dict())))
        assert np.array_equal(fitted.predict(x), again.predict(x))

    def test_constant_columns_centre_to_zero(self):
        x = np.column_stack([np.linspace(0, 1, 10), np.full(10, 0.3)])
        y = np.repeat([0, 1], 5)
        fitted, _ = fit_pipeline(make_cfg(standardize=True, normalization="none"), x, y)
        z, _ = fitted.features(x)
        assert np.all(z[:, 1] == 0.0)

    def test_missing_class_in_train(self):
        x, y = separable()
        with pytest.raises(ProtocolError, match="absent"):
            harness.fit_evaluate(make_cfg(), x[:20], y[:20], x, y)
