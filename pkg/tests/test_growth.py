import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nestdich.analysis import (
    growth_balanced,
    growth_random,
    growth_random_pair_estimate,
    growth_restricted,
    random_pair_polynomial,
    split_shapes,
)
from nestdich.errors import UsageError

from oracles import all_trees

# Reference restricted-growth values, n = 2..12, random selection: "f" = singleton
# removal, "l" = balanced removal.
RANDOM_TABLE = {
    3: ([1, 1, 5, 25, 185, 1625, 17205, 210225, 2924025, 45535425, 785158725],
        [1, 1, 5, 33, 281, 2825, 33141, 444033, 6700761, 112525281, 2082421093]),
    5: ([1, 1, 3, 13, 81, 621, 5795, 63049, 785913, 11026537, 171983907],
        [1, 1, 3, 21, 177, 1773, 20595, 271737, 4022217, 66045753, 1192218291]),
    7: ([1, 1, 1, 9, 25, 249, 1737, 17409, 193137, 2395905, 33875889],
        [1, 1, 1, 9, 73, 729, 8409, 109137, 1582305, 25335537, 444257505]),
    9: ([1, 1, 1, 7, 23, 175, 1071, 10185, 100569, 1170729, 15305913],
        [1, 1, 1, 7, 59, 587, 6767, 87817, 1271297, 20311969, 355153337]),
}
BALANCED_TABLE = {
    3: [1, 1, 1, 8, 8, 33, 33, 992, 7936, 29440, 29440],
    5: [1, 1, 1, 6, 6, 31, 31, 732, 4392, 16488, 16488],
    7: [1, 1, 1, 4, 4, 29, 29, 480, 1920, 7296, 7296],
    9: [1, 1, 1, 2, 2, 27, 27, 236, 472, 1816, 1816],
}
UNRESTRICTED_RANDOM = [1, 3, 15, 105, 945, 10395, 135135, 2027025, 34459425, 654729075, 13749310575]
UNRESTRICTED_BALANCED = [1, 3, 3, 30, 90, 315, 315, 11340, 113400, 1247400, 3742200]


def test_growth_random_values():
    assert growth_random(1) == 1 and growth_random(2) == 1
    assert growth_random(4) == 15
    assert growth_random(12) == 13_749_310_575
    assert [growth_random(n) for n in range(2, 13)] == UNRESTRICTED_RANDOM


def test_growth_balanced_values():
    assert growth_balanced(1) == 1
    assert growth_balanced(4) == 3
    assert growth_balanced(5) == 30
    assert [growth_balanced(n) for n in range(2, 13)] == UNRESTRICTED_BALANCED


@pytest.mark.parametrize("n", range(1, 8))
def test_growth_random_counts_brute_force_trees(n):
    assert growth_random(n) == len(all_trees(range(n)))


@pytest.mark.parametrize("n", range(2, 13))
def test_shape_decomposition_identity(n):
    assert growth_random(n) == sum(c * growth_random(a) * growth_random(b) for a, b, c in split_shapes(n))


def test_growth_is_exact_big_integer():
    assert growth_random(30) == math.prod(range(1, 2 * 30 - 2, 2))


def test_random_pair_estimate():
    assert growth_random_pair_estimate(1) == 1.0
    assert growth_random_pair_estimate(2) == 1.0
    # direct evaluation of the quadratic
    assert random_pair_polynomial(2) == pytest.approx(0.3812 * 4 - 1.4979 * 2 + 2.9027)
    assert random_pair_polynomial(2) == pytest.approx(1.4317, abs=1e-12)
    assert growth_random_pair_estimate(3) == pytest.approx(1.8398, abs=1e-12)
    # n = 4: round(4/3) = 1, round(8/3) = 3
    assert growth_random_pair_estimate(4) == pytest.approx(random_pair_polynomial(4) * 1.8398, rel=1e-12)


@pytest.mark.parametrize("lam", [3, 5, 7, 9])
def test_restricted_random_matches_published_table(lam):
    singleton, balanced = RANDOM_TABLE[lam]
    assert [growth_restricted(n, "random", lam, "isolate_singleton") for n in range(2, 13)] == singleton
    assert [growth_restricted(n, "random", lam, "balanced_removal") for n in range(2, 13)] == balanced


@pytest.mark.parametrize("lam", [3, 5, 7, 9])
def test_restricted_balanced_matches_published_table(lam):
    assert [growth_restricted(n, "balanced", lam, "isolate_singleton") for n in range(2, 13)] == BALANCED_TABLE[lam]


def test_restricted_spot_values():
    assert growth_restricted(5, "random", 3, "isolate_singleton") == 25
    assert growth_restricted(5, "random", 3, "balanced_removal") == 33
    assert growth_restricted(5, "balanced", 3, "balanced_removal") == 8


@pytest.mark.parametrize("n", range(1, 8))
@pytest.mark.parametrize("lam", [1, 3, 5, 7])
@pytest.mark.parametrize("strategy", ["random", "balanced"])
@pytest.mark.parametrize("policy", ["isolate_singleton", "balanced_removal"])
def test_recurrence_equals_enumeration(n, lam, strategy, policy):
    assert growth_restricted(n, strategy, lam, policy, "recurrence") == growth_restricted(
        n, strategy, lam, policy, "enumerate"
    )


@given(st.integers(1, 14), st.sampled_from(["random", "balanced"]),
       st.sampled_from(["isolate_singleton", "balanced_removal"]))
def test_restricted_non_increasing_in_lambda(n, strategy, policy):
    values = [growth_restricted(n, strategy, lam, policy) for lam in range(1, 12)]
    assert all(b <= a for a, b in zip(values, values[1:]))
    assert values[0] == (growth_random(n) if strategy == "random" else growth_balanced(n))


def test_restricted_errors():
    with pytest.raises(UsageError):
        growth_restricted(5, "random_pair", 3, "isolate_singleton")
    with pytest.raises(UsageError):
        growth_restricted(9, "random", 3, "isolate_singleton", "enumerate")
    with pytest.raises(UsageError):
        growth_restricted(5, "random", 3, "none")
