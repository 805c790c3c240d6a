"""Growth functions, the order-statistics error model and the RMSE-distribution experiment."""

from .growth import (
    growth,
    growth_balanced,
    growth_random,
    growth_random_pair_estimate,
    growth_restricted,
    random_pair_polynomial,
    split_shapes,
)
from .orderstats import OrderStatQuery, expected_min_normal, inverse_normal_cdf, normal_cdf


def __getattr__(name):
    # distribution depends on dichotomy, which itself imports growth
    if name in ("rmse_distribution", "RmseDistributionReport"):
        from . import distribution

        return getattr(distribution, name)
    raise AttributeError(name)
