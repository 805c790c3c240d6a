import json

import numpy as np
import pytest

from nestdich.dichotomy import SplitterSpec, build_nd
from nestdich.ensemble import EnsembleSpec, train_adaboost, train_bagging
from nestdich.errors import DataError
from nestdich.persist import FORMAT_VERSION, dumps, load_model, save_model


def _random_rows(d, n=100, seed=0):
    rng = np.random.default_rng(seed)
    rows = np.empty((n, len(d.attributes)))
    for j, att in enumerate(d.attributes):
        if att.kind == "numeric":
            rows[:, j] = rng.normal(scale=3, size=n)
        else:
            rows[:, j] = rng.integers(0, len(att.values), size=n)
    rows[rng.random(rows.shape) < 0.05] = np.nan
    return rows


@pytest.mark.parametrize("strategy", ["random", "balanced", "random_pair"])
def test_nd_round_trip(tmp_path, mixed3, strategy):
    nd = build_nd(mixed3, SplitterSpec(strategy, 2, seed=1))
    path = tmp_path / "m.json"
    save_model(nd, path, "class", {"seed": 1})
    loaded = load_model(path)
    rows = _random_rows(mixed3)
    np.testing.assert_array_equal(loaded.model.predict_proba(rows), nd.predict_proba(rows))
    assert loaded.provenance["seed"] == 1
    assert dumps(loaded.model) == dumps(nd)


def test_ensemble_file_holds_every_member(tmp_path, small4):
    ens = train_bagging(small4, EnsembleSpec("bagging", 10, SplitterSpec("balanced"), seed=2))
    path = tmp_path / "e.json"
    save_model(ens, path)
    doc = json.loads(path.read_text())
    assert doc["model"]["kind"] == "bagging"
    assert len(doc["model"]["members"]) == 10 and len(doc["model"]["weights"]) == 10
    assert set(doc) == {"format_version", "schema", "model", "provenance"}
    assert set(doc["schema"]) >= {"attributes", "classes", "encoding"}
    rows = _random_rows(small4)
    np.testing.assert_array_equal(load_model(path).model.predict_proba(rows), ens.predict_proba(rows))


def test_adaboost_round_trip(tmp_path, small4):
    ens = train_adaboost(small4, EnsembleSpec("adaboost", 3, SplitterSpec("random"), seed=2))
    path = tmp_path / "a.json"
    save_model(ens, path)
    loaded = load_model(path).model
    assert loaded.weights == ens.weights
    rows = _random_rows(small4)
    np.testing.assert_array_equal(loaded.predict_proba(rows), ens.predict_proba(rows))


def test_unknown_version(tmp_path, small4):
    doc = json.loads(dumps(build_nd(small4, SplitterSpec())))
    doc["format_version"] = 999
    path = tmp_path / "v.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(DataError, match="999"):
        load_model(path)
    assert FORMAT_VERSION != 999


def test_truncated_document(tmp_path, small4):
    text = dumps(build_nd(small4, SplitterSpec()))
    path = tmp_path / "t.json"
    path.write_text(text[: len(text) // 2])
    with pytest.raises(DataError):
        load_model(path)
    doc = json.loads(text)
    del doc["model"]["tree"]
    path.write_text(json.dumps(doc))
    with pytest.raises(DataError):
        load_model(path)
