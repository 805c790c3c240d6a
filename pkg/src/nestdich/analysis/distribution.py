"""Empirical distribution of binary-model training error under random class splits."""

import io
from dataclasses import dataclass

import numpy as np

from .. import _random
from .._parallel import parallel_map
from ..data import encode, fit_encoder
from ..dichotomy import STRATEGIES, draw_split, evaluate_split
from ..errors import UsageError
from ..evaluation import binary_rmse
from ..learner import LearnerConfig
from .orderstats import BLOM_ALPHA, expected_min_normal


@dataclass
class RmseDistributionReport:
    """Per-lambda samples of the minimum training RMSE over lambda random splits.

    ``test`` holds the held-out RMSE of the model that won on training error,
    or NaN when no data was held out.
    """

    train: dict
    test: dict
    predicted: dict
    alpha: float = BLOM_ALPHA

    @property
    def lambdas(self):
        return sorted(self.train)

    def mean(self, lam, which="train"):
        return float(np.mean(getattr(self, which)[lam]))

    def sd(self, lam, which="train"):
        return float(np.std(getattr(self, which)[lam], ddof=1))

    def standard_error(self, lam, which="train"):
        v = getattr(self, which)[lam]
        return float(np.std(v, ddof=1) / np.sqrt(len(v)))

    def to_csv(self):
        out = io.StringIO()
        out.write("lambda,trial,train_rmse,test_rmse\n")
        for lam in self.lambdas:
            for t, (tr, te) in enumerate(zip(self.train[lam], self.test[lam])):
                out.write(f"{lam},{t},{tr!r},{'' if np.isnan(te) else repr(te)}\n")
        for lam in self.lambdas:
            line = (f"# lambda={lam} empirical_mean={self.mean(lam)!r} "
                    f"predicted_mean={self.predicted[lam]!r}")
            te = self.test[lam]
            if not np.all(np.isnan(te)):
                line += f" test_mean={float(np.mean(te))!r}"
            out.write(line + "\n")
        return out.getvalue()


def _holdout_split(labels, fraction, rng):
    test = []
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        members = members[rng.permutation(len(members))]
        test.extend(members[: int(round(fraction * len(members)))])
    test = np.sort(np.array(test, dtype=np.int64))
    train = np.setdiff1d(np.arange(len(labels)), test)
    return train, test


def rmse_distribution(data, strategy="random", config=LearnerConfig(), trials=200, lambda_max=5,
                      holdout_fraction=0.0, seed=42, alpha=BLOM_ALPHA, workers=1):
    """Sample root-level splits of ``data`` and record the best of ``lam`` training errors.

    For each lambda and trial, ``lam`` fresh splits are drawn over all classes,
    one binary model is fitted per split, and the lowest training RMSE is kept.
    The predicted mean for each lambda comes from the order-statistics model
    applied to the lambda = 1 sample mean and standard deviation.
    """
    strategy = strategy.replace("-", "_")
    if strategy not in STRATEGIES:
        raise UsageError(f"unknown strategy {strategy!r}")
    if trials < 2:
        raise UsageError("trials must be >= 2")
    if lambda_max < 1:
        raise UsageError("lambda_max must be >= 1")
    if not 0.0 <= holdout_fraction < 1.0:
        raise UsageError("holdout fraction must lie in [0, 1)")

    train_idx, test_idx = _holdout_split(
        data.labels, holdout_fraction, _random.stream(seed, _random.HOLDOUT)
    )
    train_data = data.subset(train_idx)
    encoder = fit_encoder(train_data)
    train = encode(train_data, encoder)
    test = encode(data.subset(test_idx), encoder) if len(test_idx) else None
    classes = tuple(int(c) for c in np.unique(train.labels))

    def trial(job):
        lam, t = job
        best = None
        for i in range(lam):
            rng = _random.stream(seed, _random.TRIAL, lam, t, i)
            split = draw_split(strategy, classes, train, config, rng)
            model, err = evaluate_split(train, split, config)
            if best is None or err < best[0]:
                best = (err, split, model)
        err, split, model = best
        test_err = float("nan")
        if test is not None:
            y = np.isin(test.labels, split.left).astype(float)
            test_err = binary_rmse(model.predict(test.matrix), y)
        return err, test_err

    jobs = [(lam, t) for lam in range(1, lambda_max + 1) for t in range(trials)]
    results = dict(zip(jobs, parallel_map(trial, jobs, workers)))
    train_s, test_s = {}, {}
    for lam in range(1, lambda_max + 1):
        train_s[lam] = np.array([results[(lam, t)][0] for t in range(trials)])
        test_s[lam] = np.array([results[(lam, t)][1] for t in range(trials)])
    mu, sigma = float(np.mean(train_s[1])), float(np.std(train_s[1], ddof=1))
    predicted = {lam: expected_min_normal(mu, sigma, lam, alpha) for lam in train_s}
    return RmseDistributionReport(train_s, test_s, predicted, alpha)
