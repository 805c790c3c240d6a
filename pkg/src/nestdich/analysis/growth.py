"""Growth functions: how many distinct nested dichotomies a selection strategy can produce."""

import itertools
from functools import lru_cache
from math import comb, floor

from ..errors import UsageError

RANDOM = "random"
BALANCED = "balanced"
RANDOM_PAIR = "random_pair"

NO_REMOVAL = "none"
ISOLATE_SINGLETON = "isolate_singleton"
BALANCED_REMOVAL = "balanced_removal"
REMOVAL_POLICIES = (NO_REMOVAL, ISOLATE_SINGLETON, BALANCED_REMOVAL)


def _check_n(n):
    n = int(n)
    if n < 1:
        raise UsageError(f"number of classes must be >= 1, got {n}")
    return n


def split_shapes(n, strategy=RANDOM):
    """Unordered side sizes ``(a, b)`` with ``a <= b`` and the number of splits of each shape.

    Random selection admits every shape; balanced selection only ``b - a <= 1``.
    """
    shapes = []
    for a in range(1, n // 2 + 1):
        b = n - a
        if strategy == BALANCED and b - a > 1:
            continue
        count = comb(n, a) // 2 if a == b else comb(n, a)
        shapes.append((a, b, count))
    return shapes


@lru_cache(maxsize=None)
def _t_random(n):
    return 1 if n <= 2 else (2 * n - 3) * _t_random(n - 1)


def growth_random(n):
    """T(n) = (2n - 3) T(n - 1), T(1) = 1."""
    return _t_random(_check_n(n))


@lru_cache(maxsize=None)
def _t_balanced(n):
    if n <= 2:
        return 1
    if n % 2 == 0:
        return comb(n, n // 2) // 2 * _t_balanced(n // 2) ** 2
    return comb(n, (n + 1) // 2) * _t_balanced((n + 1) // 2) * _t_balanced((n - 1) // 2)


def growth_balanced(n):
    return _t_balanced(_check_n(n))


def random_pair_polynomial(n):
    return 0.3812 * n * n - 1.4979 * n + 2.9027


def _nearest(x):
    return max(1, floor(x + 0.5))


@lru_cache(maxsize=None)
def _t_random_pair(n):
    if n <= 2:
        return 1.0
    return random_pair_polynomial(n) * _t_random_pair(_nearest(n / 3)) * _t_random_pair(_nearest(2 * n / 3))


def growth_random_pair_estimate(n):
    """Empirical estimate for random-pair selection.

    Sub-problem sizes n/3 and 2n/3 are rounded half-up to the nearest integer
    and clamped to at least 1. The value is an estimate, not a count.
    """
    return _t_random_pair(_check_n(n))


def growth(n, strategy):
    if strategy == RANDOM:
        return growth_random(n)
    if strategy == BALANCED:
        return growth_balanced(n)
    if strategy == RANDOM_PAIR:
        return growth_random_pair_estimate(n)
    raise UsageError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# restricted growth under multiple subset evaluation


def _removal_order(shapes, policy):
    # singleton removal discards the most unbalanced shapes first, balanced
    # removal the most balanced ones; later shapes are used once one runs out
    return sorted(shapes, key=lambda s: s[0], reverse=(policy == BALANCED_REMOVAL))


def _surviving_shapes(n, strategy, lam, policy):
    shapes = _removal_order(split_shapes(n, strategy), policy)
    total = sum(c for _, _, c in shapes)
    remove = min(lam - 1, total - 1)
    kept = []
    for a, b, count in shapes:
        drop = min(remove, count)
        remove -= drop
        if count > drop:
            kept.append((a, b, count - drop))
    return kept


@lru_cache(maxsize=None)
def _restricted(n, strategy, lam, policy):
    if n <= 1:
        return 1
    return sum(
        count * _restricted(a, strategy, lam, policy) * _restricted(b, strategy, lam, policy)
        for a, b, count in _surviving_shapes(n, strategy, lam, policy)
    )


def _all_splits(classes):
    """Every unordered two-way split of ``classes`` as (smaller, larger) tuples."""
    first, rest = classes[0], classes[1:]
    out = []
    for r in range(len(rest)):
        for combo in itertools.combinations(rest, r):
            side = (first,) + combo
            other = tuple(c for c in classes if c not in side)
            out.append((side, other) if len(side) <= len(other) else (other, side))
    return out


def _enumerate_trees(classes, strategy, lam, policy, memo):
    """Set of canonical trees (nested frozensets) built under the removal rule."""
    if classes in memo:
        return memo[classes]
    if len(classes) == 1:
        result = frozenset([classes[0]])
    else:
        splits = _all_splits(classes)
        if strategy == BALANCED:
            splits = [s for s in splits if len(s[1]) - len(s[0]) <= 1]
        splits.sort(key=lambda s: len(s[0]), reverse=(policy == BALANCED_REMOVAL))
        remove = min(lam - 1, len(splits) - 1)
        trees = set()
        for left, right in splits[remove:]:
            for lt in _enumerate_trees(left, strategy, lam, policy, memo):
                for rt in _enumerate_trees(right, strategy, lam, policy, memo):
                    trees.add(frozenset([lt, rt]))
        result = frozenset(trees)
    memo[classes] = result
    return result


ENUMERATE_MAX_N = 8


def growth_restricted(n, strategy=RANDOM, lam=1, removal_policy=NO_REMOVAL, method="recurrence"):
    """Nested dichotomies reachable when each node discards its ``lam - 1`` worst splits.

    The removal policy fixes which splits are assumed worst: those isolating
    single classes (``isolate_singleton``) or the balanced ones
    (``balanced_removal``). A node always keeps at least one split.
    ``method="enumerate"`` builds every tree explicitly and counts distinct
    ones; it is limited to ``n <= 8``.
    """
    n = _check_n(n)
    lam = int(lam)
    if lam < 1:
        raise UsageError(f"lambda must be >= 1, got {lam}")
    if strategy == RANDOM_PAIR:
        raise UsageError("restricted growth is undefined for random-pair selection (data-dependent)")
    if strategy not in (RANDOM, BALANCED):
        raise UsageError(f"unknown strategy {strategy!r}")
    if removal_policy not in REMOVAL_POLICIES:
        raise UsageError(f"unknown removal policy {removal_policy!r}")
    if removal_policy == NO_REMOVAL and lam > 1:
        raise UsageError("a removal policy is required when lambda > 1")
    if lam == 1:
        removal_policy = NO_REMOVAL
    if method == "recurrence":
        return _restricted(n, strategy, lam, removal_policy)
    if method == "enumerate":
        if n > ENUMERATE_MAX_N:
            raise UsageError(f"enumeration is limited to n <= {ENUMERATE_MAX_N}")
        return len(_enumerate_trees(tuple(range(n)), strategy, lam, removal_policy, {}))
    raise UsageError(f"unknown method {method!r}")
