import numpy as np
import pytest

from nestdich.analysis.distribution import rmse_distribution
from nestdich.errors import UsageError


@pytest.fixture(scope="module")
def report(small4):
    return rmse_distribution(small4, "random", trials=20, lambda_max=3, holdout_fraction=0.2, seed=1)


def test_shape(report):
    assert report.lambdas == [1, 2, 3]
    assert all(len(report.train[l]) == 20 for l in report.lambdas)
    assert not np.isnan(report.test[1]).any()


def test_lambda_one_prediction_is_sample_mean(report):
    assert report.predicted[1] == report.mean(1)


def test_means_non_increasing_within_two_se(report):
    for lam in report.lambdas[1:]:
        se = np.hypot(report.standard_error(lam), report.standard_error(lam - 1))
        assert report.mean(lam) <= report.mean(lam - 1) + 2 * se


def test_csv(report):
    lines = report.to_csv().splitlines()
    assert lines[0] == "lambda,trial,train_rmse,test_rmse"
    data = [l for l in lines[1:] if not l.startswith("#")]
    assert len(data) == 60
    summary = [l for l in lines if l.startswith("# lambda=")]
    assert len(summary) == 3 and "predicted_mean=" in summary[0]


def test_no_holdout(small4):
    r = rmse_distribution(small4, "balanced", trials=3, lambda_max=1, seed=0)
    assert np.isnan(r.test[1]).all()
    assert ",\n" in r.to_csv() or r.to_csv().splitlines()[1].endswith(",")


def test_random_pair_and_determinism(small4):
    a = rmse_distribution(small4, "random-pair", trials=4, lambda_max=2, seed=3)
    b = rmse_distribution(small4, "random_pair", trials=4, lambda_max=2, seed=3, workers=3)
    assert a.to_csv() == b.to_csv()


def test_validation(small4):
    with pytest.raises(UsageError):
        rmse_distribution(small4, trials=1)
    with pytest.raises(UsageError):
        rmse_distribution(small4, holdout_fraction=1.0)
