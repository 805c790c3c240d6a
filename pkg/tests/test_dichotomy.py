import itertools
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from nestdich import _random
from nestdich.data import Attribute, Dataset, EncodedDataset, encode, fit_encoder
from nestdich.dichotomy import (
    ClassSplit,
    Internal,
    Leaf,
    NestedDichotomy,
    SplitterSpec,
    build_from_encoded,
    build_nd,
    evaluate_split,
    nd_predict,
    random_pair_split,
    sample_balanced_split,
    sample_random_split,
    sample_tree,
    select_split,
    split_from_pair,
)
from nestdich.errors import UsageError
from nestdich.evaluation import rmse
from nestdich.learner import BinaryModel, LearnerConfig

from oracles import all_trees, root_split_probabilities


def _freq(draw, classes, n, seed=0):
    rng = np.random.default_rng(seed)
    return Counter(draw(classes, rng).key() for _ in range(n))


def test_random_split_two_classes():
    assert set(_freq(sample_random_split, (3, 7), 50)) == {
        frozenset([frozenset([3]), frozenset([7])])
    }


@pytest.mark.parametrize("n", [3, 4, 5])
def test_random_split_matches_uniform_tree_oracle(n):
    expected = root_split_probabilities(range(n))
    draws = 20000
    counts = _freq(sample_random_split, tuple(range(n)), draws, seed=n)
    assert set(counts) == set(expected)
    keys = sorted(expected, key=repr)
    chi = stats.chisquare([counts[k] for k in keys], [expected[k] * draws for k in keys])
    assert chi.pvalue > 0.001


def test_root_split_oracle_n4():
    # brute force: 15 trees; each singleton split roots 3 of them, each balanced split 1
    probs = root_split_probabilities(range(4))
    assert len(all_trees(range(4))) == 15
    for key, p in probs.items():
        sizes = sorted(len(s) for s in key)
        assert p == pytest.approx(3 / 15 if sizes == [1, 3] else 1 / 15)


@pytest.mark.parametrize("n, n_splits", [(2, 1), (4, 3), (5, 10)])
def test_balanced_split_uniform(n, n_splits):
    draws = 10000
    counts = _freq(sample_balanced_split, tuple(range(n)), draws, seed=n)
    assert len(counts) == n_splits
    for key in counts:
        assert abs(len(list(key)[0]) - len(list(key)[1])) <= 1
    if n_splits > 1:
        assert stats.chisquare(list(counts.values())).pvalue > 0.001


def test_split_validation():
    with pytest.raises(UsageError):
        sample_random_split((1,), np.random.default_rng(0))
    with pytest.raises(UsageError):
        ClassSplit((1, 2), (2, 3))
    with pytest.raises(UsageError):
        SplitterSpec(lam=0)
    with pytest.raises(UsageError):
        SplitterSpec(strategy="clustered")


# random-pair


def _node_1d(points_by_class):
    x, labels = [], []
    for c, pts in points_by_class.items():
        x.extend(pts)
        labels.extend([c] * len(pts))
    x = np.array(x, dtype=float)[:, None]
    return EncodedDataset(x, None, np.array(labels), np.ones(len(labels)), ("a", "b", "c", "d"))


def test_random_pair_groups_with_confused_member():
    node = _node_1d({1: [-2.0, -2.5, -1.5], 2: [2.0, 2.5, 1.5], 3: [-3.0, -2.2]})
    split = split_from_pair((1, 2, 3), 1, 2, node)
    assert split == ClassSplit((1, 3), (2,))


def test_random_pair_tie_goes_to_first_member():
    node = _node_1d({1: [-2.0, -2.5], 2: [2.0, 2.5], 3: [-1.0, 1.0]})
    assert split_from_pair((1, 2, 3), 2, 1, node) == ClassSplit((2, 3), (1,))
    assert split_from_pair((1, 2, 3), 1, 2, node) == ClassSplit((1, 3), (2,))


def test_random_pair_two_classes_trains_nothing():
    split = random_pair_split((4, 9), None, LearnerConfig(), np.random.default_rng(0))
    assert split.key() == frozenset([frozenset([4]), frozenset([9])])


def test_random_pair_split_partitions_classes():
    node = _node_1d({0: [0.0, 0.1], 1: [1.0, 1.1], 2: [2.0, 2.1], 3: [3.0, 3.1]})
    rng = np.random.default_rng(1)
    seen = set()
    for _ in range(40):
        s = random_pair_split((0, 1, 2, 3), node, LearnerConfig(), rng)
        assert sorted(s.left + s.right) == [0, 1, 2, 3]
        seen.add(s.key())
    assert len(seen) > 1


# evaluation and selection


def _encoded(d):
    return encode(d)


def test_evaluate_split_uninformative_features():
    ed = EncodedDataset(np.zeros((6, 1)), None, np.array([0, 0, 0, 1, 1, 1]), np.ones(6), ("a", "b"))
    model, err = evaluate_split(ed, ClassSplit((0,), (1,)), LearnerConfig())
    assert model.predict(np.zeros(1)) == pytest.approx(0.5)
    assert err == pytest.approx(0.5)


def test_evaluate_split_deterministic(small4):
    ed = _encoded(small4)
    split = ClassSplit((0, 3), (1, 2))
    (m1, e1), (m2, e2) = evaluate_split(ed, split, LearnerConfig()), evaluate_split(ed, split, LearnerConfig())
    assert e1 == e2 and np.array_equal(m1.coefficients, m2.coefficients)


@pytest.mark.parametrize("strategy", ["random", "balanced", "random_pair"])
def test_select_split_argmin_contract(gauss8, strategy):
    ed = _encoded(gauss8)
    for seed in range(4):
        choice = select_split(ed, tuple(range(8)), SplitterSpec(strategy, 5, seed=seed))
        assert len(choice.candidates) == 5
        errs = [e for _, e in choice.candidates]
        assert choice.rmse == min(errs)
        first_min = errs.index(min(errs))
        assert choice.split == choice.candidates[first_min][0]


def test_select_split_class_threshold(small4):
    ed = _encoded(small4)
    choice = select_split(ed.subset(np.isin(ed.labels, (0, 1))), (0, 1),
                          SplitterSpec("random", 5, class_threshold=3))
    assert len(choice.candidates) == 1
    choice = select_split(ed, (0, 1, 2, 3), SplitterSpec("random", 5, class_threshold=5))
    assert len(choice.candidates) == 1


def test_lambda_one_uses_raw_strategy_stream(small4):
    ed = _encoded(small4)
    spec = SplitterSpec("random", 1, seed=17)
    choice = select_split(ed, (0, 1, 2, 3), spec)
    expected = sample_random_split((0, 1, 2, 3), _random.stream(17, _random.NODE, _random.ROOT_PATH, 0))
    assert choice.split == expected


def test_select_split_worker_independent(gauss8):
    ed = _encoded(gauss8)
    spec = SplitterSpec("random_pair", 4, seed=3)
    a = select_split(ed, tuple(range(8)), spec, workers=1)
    b = select_split(ed, tuple(range(8)), spec, workers=3)
    assert a.split == b.split and a.rmse == b.rmse


# trees


def _check_structure(nd):
    assert sorted(nd.leaves()) == list(range(nd.n_classes))
    assert len(nd.internal_nodes()) == nd.n_classes - 1
    for node in nd.internal_nodes():
        assert set(node.left.classes) == set(node.split.left)
        assert set(node.right.classes) == set(node.split.right)


@pytest.mark.parametrize("strategy", ["random", "balanced", "random_pair"])
@pytest.mark.parametrize("lam", [1, 3])
def test_build_structure(gauss8, strategy, lam):
    nd = build_nd(gauss8, SplitterSpec(strategy, lam, seed=5))
    _check_structure(nd)
    p = nd.predict_proba(gauss8.rows[:50])
    np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-9)


def test_two_classes():
    d = Dataset((Attribute("x", "numeric"),), [[0.0], [1.0], [2.0], [3.0]], np.array([0, 0, 1, 1]), ("a", "b"))
    nd = build_nd(d, SplitterSpec("random"))
    assert len(nd.internal_nodes()) == 1 and sorted(nd.leaves()) == [0, 1]


def test_balanced_depth(gauss8):
    assert build_nd(gauss8, SplitterSpec("balanced", seed=2)).depth() == 3


def test_node_models_see_only_their_classes(small4):
    ed = _encoded(small4)
    seen = []
    import nestdich.dichotomy as dich

    original = dich.select_split

    def spy(node, classes, *a, **k):
        seen.append((set(np.unique(node.labels)), set(classes)))
        return original(node, classes, *a, **k)

    dich.select_split = spy
    try:
        build_from_encoded(ed, SplitterSpec("random", 2, seed=1))
    finally:
        dich.select_split = original
    assert len(seen) == 3
    assert all(a == b for a, b in seen)


def test_build_deterministic_and_worker_independent(gauss8):
    spec = SplitterSpec("random", 3, seed=9)
    a = build_nd(gauss8, spec, workers=1)
    b = build_nd(gauss8, spec, workers=4)
    assert a.tree_to_dict() == b.tree_to_dict()


def test_absent_classes_are_attached(small4):
    keep = small4.labels != 2
    d = small4.subset(np.flatnonzero(keep))
    nd = build_nd(d, SplitterSpec("random", seed=4))
    _check_structure(nd)
    assert any(n.model.degenerate_probability == 0.5 for n in nd.internal_nodes())
    p = nd.predict_proba(small4.rows)
    np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)


def test_single_present_class():
    d = Dataset((Attribute("x", "numeric"),), [[0.0], [1.0]], np.array([1, 1]), ("a", "b", "c"))
    nd = build_nd(d, SplitterSpec("balanced"))
    _check_structure(nd)
    np.testing.assert_allclose(nd.predict_proba([[0.5]]).sum(), 1.0)


def _const(p, width=1):
    return BinaryModel(np.zeros(width), 0.0, "left", p)


def test_predict_half_models_balanced_tree():
    tree = Internal(
        ClassSplit((0, 1), (2, 3)), _const(0.5),
        Internal(ClassSplit((0,), (1,)), _const(0.5), Leaf(0), Leaf(1)),
        Internal(ClassSplit((2,), (3,)), _const(0.5), Leaf(2), Leaf(3)),
    )
    enc = fit_encoder(Dataset((Attribute("x", "numeric"),), [[0.0], [1.0]], np.array([0, 1]), "abcd"))
    nd = NestedDichotomy(tree, enc, tuple("abcd"))
    np.testing.assert_allclose(nd_predict(nd, [0.3]), [0.25] * 4)


def test_predict_is_product_along_path():
    tree = Internal(
        ClassSplit((0, 1), (2,)), _const(0.9),
        Internal(ClassSplit((0,), (1,)), _const(0.8), Leaf(0), Leaf(1)),
        Leaf(2),
    )
    enc = fit_encoder(Dataset((Attribute("x", "numeric"),), [[0.0], [1.0]], np.array([0, 1]), "abc"))
    p = nd_predict(NestedDichotomy(tree, enc, tuple("abc")), [0.0])
    assert p[0] == pytest.approx(0.72)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)


def test_predict_schema_mismatch(small4):
    nd = build_nd(small4, SplitterSpec())
    with pytest.raises(UsageError):
        nd_predict(nd, [1.0, 2.0, 3.0])


def test_sample_tree_uniform_n4():
    rng = np.random.default_rng(0)
    counts = Counter(sample_tree(range(4), rng) for _ in range(15000))
    assert len(counts) == 15
    assert stats.chisquare(list(counts.values())).pvalue > 0.001


def test_balanced_trees_cover_growth_balanced():
    rng = np.random.default_rng(0)
    seen = {sample_tree(range(5), rng, "balanced") for _ in range(3000)}
    assert len(seen) == 30


@pytest.mark.slow
def test_multiple_subset_evaluation_lowers_training_error(gauss8):
    ed = _encoded(gauss8)
    diffs = []
    for seed in range(50):
        errs = []
        for lam in (1, 5):
            nd = build_from_encoded(ed, SplitterSpec("random", lam, seed=seed))
            errs.append(rmse(nd.predict_proba_encoded(ed.matrix), ed.labels))
        diffs.append(errs[1] - errs[0])
    assert stats.ttest_1samp(diffs, 0.0, alternative="less").pvalue < 0.05
