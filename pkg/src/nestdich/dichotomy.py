"""Nested dichotomies with multiple subset evaluation.

At every internal node the class set is split in two by a selection strategy.
With ``lam > 1`` the node draws ``lam`` candidate splits, fits a binary model
to each and keeps the one with the lowest training RMSE.

Random-pair convention: the pair classifier separates ``c1`` from ``c2``; a
remaining class joins ``c1``'s side when its instances are predicted as ``c1``
at least as often as ``c2``. This groups each class with the pair member it
resembles. Only instances of the non-pair classes are classified.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _random
from ._parallel import parallel_map
from .analysis.growth import BALANCED, RANDOM, RANDOM_PAIR, growth_random, split_shapes
from .data import encode
from .errors import UsageError
from .evaluation import binary_rmse
from .learner import BinaryModel, LearnerConfig, train_binary

STRATEGIES = (RANDOM, BALANCED, RANDOM_PAIR)


@dataclass(frozen=True)
class SplitterSpec:
    strategy: str = RANDOM
    lam: int = 1
    class_threshold: int = 1
    seed: int = 42

    def __post_init__(self):
        strategy = self.strategy.replace("-", "_")
        if strategy not in STRATEGIES:
            raise UsageError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        object.__setattr__(self, "strategy", strategy)
        if int(self.lam) < 1:
            raise UsageError(f"lambda must be >= 1, got {self.lam}")
        if int(self.class_threshold) < 1:
            raise UsageError(f"class threshold must be >= 1, got {self.class_threshold}")
        if int(self.seed) < 0:
            raise UsageError(f"seed must be non-negative, got {self.seed}")

    def with_seed(self, seed):
        return SplitterSpec(self.strategy, self.lam, self.class_threshold, seed)

    def to_dict(self):
        return {
            "strategy": self.strategy,
            "lambda": self.lam,
            "class_threshold": self.class_threshold,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class ClassSplit:
    left: tuple
    right: tuple

    def __post_init__(self):
        left, right = tuple(self.left), tuple(self.right)
        if not left or not right:
            raise UsageError("both sides of a split must be non-empty")
        if len(set(left) | set(right)) != len(left) + len(right):
            raise UsageError("split sides must be disjoint and duplicate-free")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @property
    def classes(self):
        return tuple(sorted(self.left + self.right))

    def key(self):
        """Identity of the split regardless of side order."""
        return frozenset([frozenset(self.left), frozenset(self.right)])


def _check_classes(classes):
    classes = tuple(int(c) for c in classes)
    if len(classes) < 2:
        raise UsageError("a split needs at least 2 classes")
    if len(set(classes)) != len(classes):
        raise UsageError("class set contains duplicates")
    return classes


def _split_by_positions(classes, positions):
    chosen = set(int(i) for i in positions)
    left = tuple(c for i, c in enumerate(classes) if i in chosen)
    right = tuple(c for i, c in enumerate(classes) if i not in chosen)
    return ClassSplit(left, right)


def sample_random_split(classes, rng):
    """Root split of a tree drawn uniformly from all nested dichotomies over ``classes``.

    A split with sides of size a and b is chosen with probability
    T(a) T(b) / T(n): first the shape, weighted by its split count times the
    subtree counts, then a uniform subset of the smaller size.
    """
    classes = _check_classes(classes)
    n = len(classes)
    r = _random.randbelow(rng, growth_random(n))
    for a, b, count in split_shapes(n, RANDOM):
        w = count * growth_random(a) * growth_random(b)
        if r < w:
            break
        r -= w
    return _split_by_positions(classes, rng.choice(n, size=a, replace=False))


def sample_balanced_split(classes, rng):
    """Uniform split among those whose side sizes differ by at most one."""
    classes = _check_classes(classes)
    n = len(classes)
    return _split_by_positions(classes, rng.choice(n, size=(n + 1) // 2, replace=False))


def confusion_counts(model, x, labels, others):
    """2 x k table: row 0 counts instances of each class predicted as ``c1``, row 1 as ``c2``."""
    counts = np.zeros((2, len(others)), dtype=np.int64)
    for j, c in enumerate(others):
        mask = labels == c
        if mask.any():
            as_c1 = int(np.sum(model.predict(x[mask]) >= 0.5))
            counts[0, j] = as_c1
            counts[1, j] = int(mask.sum()) - as_c1
    return counts


def random_pair_split(classes, node, config, rng):
    """Grow a split from a random pair of classes.

    ``node`` is an :class:`~nestdich.data.EncodedDataset` holding the
    instances of ``classes``.
    """
    classes = _check_classes(classes)
    i1, i2 = rng.choice(len(classes), size=2, replace=False)
    return split_from_pair(classes, classes[i1], classes[i2], node, config)


def split_from_pair(classes, c1, c2, node, config=LearnerConfig()):
    """Split seeded by the pair (c1, c2).

    A classifier trained on the pair classifies the instances of the
    remaining classes; each class joins the side it is predicted as more
    often, ties going to ``c1``.
    """
    if len(classes) == 2:
        return ClassSplit((c1,), (c2,))
    pair = np.isin(node.labels, (c1, c2))
    model = train_binary(
        node.matrix[pair], (node.labels[pair] == c1).astype(float), node.weights[pair], config
    )
    others = [c for c in classes if c not in (c1, c2)]
    counts = confusion_counts(model, node.matrix, node.labels, others)
    left = {c1} | {c for j, c in enumerate(others) if counts[0, j] >= counts[1, j]}
    return ClassSplit(
        tuple(c for c in classes if c in left), tuple(c for c in classes if c not in left)
    )


def draw_split(strategy, classes, node, config, rng):
    if strategy == RANDOM:
        return sample_random_split(classes, rng)
    if strategy == BALANCED:
        return sample_balanced_split(classes, rng)
    if strategy == RANDOM_PAIR:
        return random_pair_split(classes, node, config, rng)
    raise UsageError(f"unknown strategy {strategy!r}")


def evaluate_split(node, split, config):
    """Fit the left-vs-right model on ``node`` and return it with its training RMSE."""
    y = np.isin(node.labels, split.left).astype(float)
    model = train_binary(node.matrix, y, node.weights, config)
    return model, binary_rmse(model.predict(node.matrix), y, node.weights)


@dataclass
class SplitChoice:
    split: ClassSplit
    model: BinaryModel
    rmse: float
    candidates: list = field(default_factory=list)  # (split, rmse) in draw order


def n_candidates(n_classes, spec):
    return spec.lam if n_classes >= spec.class_threshold else 1


def select_split(node, classes, spec, config=LearnerConfig(), path=_random.ROOT_PATH, workers=1):
    """Draw candidate splits for ``classes`` and keep the one with the lowest training RMSE.

    Candidate ``i`` at node ``path`` draws from its own stream, so the result
    is the same for any ``workers``. Ties keep the earliest draw. Repeated
    draws of the same split reuse the first evaluation.
    """
    classes = _check_classes(classes)
    k = n_candidates(len(classes), spec)

    def draw(i):
        rng = _random.stream(spec.seed, _random.NODE, path, i)
        return draw_split(spec.strategy, classes, node, config, rng)

    splits = parallel_map(draw, range(k), workers)
    unique = {}
    for s in splits:
        unique.setdefault(s.key(), s)
    fitted = dict(
        zip(unique, parallel_map(lambda s: evaluate_split(node, s, config), unique.values(), workers))
    )
    candidates = [(s, fitted[s.key()][1]) for s in splits]
    best = min(range(k), key=lambda i: (candidates[i][1], i))
    split = splits[best]
    model, err = fitted[split.key()]
    return SplitChoice(split, model, err, candidates)


# ---------------------------------------------------------------------------
# trees


@dataclass(frozen=True, eq=False)
class Leaf:
    label: int

    @property
    def classes(self):
        return (self.label,)


@dataclass(frozen=True, eq=False)
class Internal:
    split: ClassSplit
    model: BinaryModel
    left: object
    right: object
    train_rmse: float = float("nan")

    @property
    def classes(self):
        return self.split.classes


def _iter_nodes(node):
    stack = [node]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Internal):
            stack.extend((node.right, node.left))


def tree_depth(node):
    if isinstance(node, Leaf):
        return 0
    return 1 + max(tree_depth(node.left), tree_depth(node.right))


def tree_key(node):
    """Canonical structure: nested frozensets, independent of side order."""
    if isinstance(node, Leaf):
        return node.label
    return frozenset([tree_key(node.left), tree_key(node.right)])


def _node_to_dict(node):
    if isinstance(node, Leaf):
        return {"leaf": node.label}
    return {
        "left_classes": list(node.split.left),
        "right_classes": list(node.split.right),
        "model": node.model.to_dict(),
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def _node_from_dict(d):
    if "leaf" in d:
        return Leaf(int(d["leaf"]))
    return Internal(
        ClassSplit(tuple(d["left_classes"]), tuple(d["right_classes"])),
        BinaryModel.from_dict(d["model"]),
        _node_from_dict(d["left"]),
        _node_from_dict(d["right"]),
    )


def _fill_proba(node, x, mass, out):
    if isinstance(node, Leaf):
        out[:, node.label] = mass
        return
    p = node.model.predict(x)
    _fill_proba(node.left, x, mass * p, out)
    _fill_proba(node.right, x, mass * (1.0 - p), out)


@dataclass(frozen=True, eq=False)
class NestedDichotomy:
    root: object
    encoder: object
    classes: tuple

    @property
    def n_classes(self):
        return len(self.classes)

    def internal_nodes(self):
        return [n for n in _iter_nodes(self.root) if isinstance(n, Internal)]

    def leaves(self):
        return [n.label for n in _iter_nodes(self.root) if isinstance(n, Leaf)]

    def depth(self):
        return tree_depth(self.root)

    def structure(self):
        return tree_key(self.root)

    def predict_proba_encoded(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros((x.shape[0], self.n_classes))
        _fill_proba(self.root, x, np.ones(x.shape[0]), out)
        return out

    def predict_proba(self, rows):
        """Class probability matrix for raw attribute rows."""
        return self.predict_proba_encoded(self.encoder.transform(rows))

    def tree_to_dict(self):
        return _node_to_dict(self.root)

    @classmethod
    def from_tree_dict(cls, d, encoder, classes):
        return cls(_node_from_dict(d), encoder, tuple(classes))


def nd_predict(nd, instance):
    """Probability vector for a single raw instance."""
    row = np.asarray(instance, dtype=float)
    if row.ndim != 1:
        raise UsageError("nd_predict takes a single instance")
    return nd.predict_proba(row[None, :])[0]


def _degenerate_model(width):
    return BinaryModel(np.zeros(width), 0.0, "left", 0.5)


def _attach_absent(root, absent, present, width):
    """Hang each class without training data next to the nearest present class.

    "Nearest" is by class index, ties to the lower index. The new node splits
    that leaf from the absent class with a constant 0.5 model.
    """
    for k in absent:
        target = min(present, key=lambda c: (abs(c - k), c))
        root = _replace_leaf(root, target, k, width)
    return root


def _replace_leaf(node, target, k, width):
    if isinstance(node, Leaf):
        if node.label != target:
            return node
        return Internal(ClassSplit((target,), (k,)), _degenerate_model(width), node, Leaf(k))
    if target not in node.split.left and target not in node.split.right:
        return node
    split = node.split
    if target in split.left:
        split = ClassSplit(tuple(sorted(split.left + (k,))), split.right)
        return Internal(split, node.model, _replace_leaf(node.left, target, k, width), node.right,
                        node.train_rmse)
    split = ClassSplit(split.left, tuple(sorted(split.right + (k,))))
    return Internal(split, node.model, node.left, _replace_leaf(node.right, target, k, width),
                    node.train_rmse)


def build_from_encoded(ed, spec, config=LearnerConfig(), workers=1):
    """Grow a nested dichotomy over all classes of ``ed``.

    Each node's model sees only instances of that node's classes. Classes
    with no positively weighted instance are left out of split selection and
    attached afterwards (see :func:`_attach_absent`).
    """
    n_classes = len(ed.classes)
    if n_classes < 2:
        raise UsageError("a nested dichotomy needs at least 2 classes")
    active = np.flatnonzero(ed.weights > 0)
    data = ed.subset(active)
    present = tuple(int(c) for c in np.unique(data.labels))
    absent = tuple(c for c in range(n_classes) if c not in present)

    def grow(classes, idx, path):
        if len(classes) == 1:
            return Leaf(classes[0])
        node = data.subset(idx)
        choice = select_split(node, classes, spec, config, path, workers)
        in_left = np.isin(node.labels, choice.split.left)
        return Internal(
            choice.split,
            choice.model,
            grow(choice.split.left, idx[in_left], _random.child_path(path, 0)),
            grow(choice.split.right, idx[~in_left], _random.child_path(path, 1)),
            choice.rmse,
        )

    root = grow(present, np.arange(data.n_instances), _random.ROOT_PATH)
    if absent:
        root = _attach_absent(root, absent, present, ed.matrix.shape[1])
    return NestedDichotomy(root, ed.column_map, ed.classes)


def build_nd(data, spec, config=LearnerConfig(), encoder=None, workers=1):
    """Train a nested dichotomy on a raw :class:`~nestdich.data.Dataset`.

    Encoding statistics are fitted on ``data`` unless ``encoder`` is given.
    """
    return build_from_encoded(encode(data, encoder), spec, config, workers)


def sample_tree(classes, rng, strategy=RANDOM):
    """Structure of a tree grown by a data-free strategy, without fitting models."""
    classes = tuple(classes)
    if len(classes) == 1:
        return classes[0]
    draw = sample_random_split if strategy == RANDOM else sample_balanced_split
    split = draw(classes, rng)
    return frozenset([sample_tree(split.left, rng, strategy), sample_tree(split.right, rng, strategy)])
