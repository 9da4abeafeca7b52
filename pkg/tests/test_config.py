import json

import pytest

from neurochaos.config import ExperimentConfig, load_config
from neurochaos.errors import ArgumentError

BASE = {
    "name": "t", "seed": 3,
    "dataset": {"kind": "circles", "train": {"alpha": 0.1, "sizes": [10, 10]},
                "test": {"alpha": 0.1, "sizes": [5, 5], "seed_offset": 1}},
    "pipeline": {"kind": "chaosfex", "q": 0.22, "b": 0.96, "epsilon": 0.018},
    "classifier": {"kind": "rbf", "C": 1.0, "gamma": "scale"},
    "protocol": {"kind": "stratified_kfold", "k": 5},
}


def with_change(path, value):
    d = json.loads(json.dumps(BASE))
    *head, last = path.split(".")
    node = d
    for key in head:
        node = node[key]
    node[last] = value
    return d


def test_round_trip():
    cfg = ExperimentConfig.from_dict(BASE)
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg
    assert cfg.gls_params.q == 0.22 and cfg.gls_params.max_iters == 10000


@pytest.mark.parametrize("path,value,field", [
    ("protocol.k", 1, "config.protocol.k"),
    ("pipeline.epsilon", 0.0, "config.pipeline"),
    ("pipeline.kind", "wavelet", "config.pipeline.kind"),
    ("classifier.C", -1, "config.classifier.C"),
    ("classifier.gamma", "auto", "config.classifier.gamma"),
    ("dataset.train.alpha", -0.5, "config.dataset.train.alpha"),
    ("dataset.train.sizes", [10], "config.dataset.train.sizes"),
    ("normalization", "zscore", "config.normalization"),
    ("seed", -1, "config.seed"),
    ("standardize", "yes", "config.standardize"),
])
def test_validation_names_field(path, value, field):
    with pytest.raises(ArgumentError, match=field.replace(".", r"\.")):
        ExperimentConfig.from_dict(with_change(path, value))


def test_unknown_keys():
    with pytest.raises(ArgumentError, match="unknown"):
        ExperimentConfig.from_dict({**BASE, "extra": 1})
    with pytest.raises(ArgumentError, match="config.protocol"):
        ExperimentConfig.from_dict(with_change("protocol.folds", 3))


def test_trials_counts_increasing():
    d = with_change("protocol", {"kind": "random_trials", "counts": [4, 4], "n_trials": 2})
    with pytest.raises(ArgumentError, match="increasing"):
        ExperimentConfig.from_dict(d)


def test_replace_revalidates():
    cfg = ExperimentConfig.from_dict(BASE)
    assert cfg.replace(seed=9).seed == 9
    with pytest.raises(ArgumentError):
        cfg.replace(seed="x")


def test_load_config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps([BASE, {**BASE, "name": "u"}]))
    assert [c.name for c in load_config(p)] == ["t", "u"]
    p.write_text(json.dumps(BASE))
    assert len(load_config(p)) == 1
    p.write_text("{not json")
    with pytest.raises(ArgumentError, match="invalid JSON"):
        load_config(p)
