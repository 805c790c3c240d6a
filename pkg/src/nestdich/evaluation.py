"""Probability-estimate metrics and the repeated stratified cross-validation harness."""

import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import _random
from ._parallel import parallel_map
from .data import stratified_fold_ids
from .errors import UsageError


def _check_batch(estimates, truth):
    estimates = np.asarray(estimates, dtype=float)
    truth = np.asarray(truth)
    if truth.ndim == 1:
        truth = one_hot(truth, estimates.shape[1])
    if estimates.ndim != 2 or estimates.shape != truth.shape:
        raise UsageError("estimates and truth must be n x m matrices of equal shape")
    if estimates.shape[0] == 0:
        raise UsageError("empty prediction batch")
    return estimates, truth.astype(float)


def one_hot(labels, m):
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((len(labels), m))
    out[np.arange(len(labels)), labels] = 1.0
    return out


def rmse(estimates, truth, weights=None):
    """Root mean squared error over all n*m probability entries.

    ``truth`` is a one-hot matrix or a vector of class indices. Optional
    instance ``weights`` turn the mean over instances into a weighted mean.
    """
    estimates, truth = _check_batch(estimates, truth)
    per_instance = np.mean((estimates - truth) ** 2, axis=1)
    if weights is None:
        return math.sqrt(float(np.mean(per_instance)))
    weights = np.asarray(weights, dtype=float)
    return math.sqrt(float(np.sum(weights * per_instance) / np.sum(weights)))


def accuracy(estimates, truth):
    """Fraction of rows whose argmax matches the true class (ties go to the lowest index)."""
    estimates, truth = _check_batch(estimates, truth)
    return float(np.mean(np.argmax(estimates, axis=1) == np.argmax(truth, axis=1)))


def binary_rmse(p, y, weights=None):
    """RMSE of a two-class problem given positive-side probabilities ``p``.

    With m = 2 both columns carry the same squared error, so this reduces to
    sqrt(mean((p - y)^2)).
    """
    p = np.asarray(p, dtype=float)
    y = np.asarray(y, dtype=float)
    if p.size == 0:
        raise UsageError("empty prediction batch")
    sq = (p - y) ** 2
    if weights is None:
        return math.sqrt(float(np.mean(sq)))
    weights = np.asarray(weights, dtype=float)
    return math.sqrt(float(np.sum(weights * sq) / np.sum(weights)))


# ---------------------------------------------------------------------------
# cross-validation


@dataclass
class CvCell:
    run: int
    fold: int
    rmse: float
    accuracy: float
    train_ms: float
    test_index: np.ndarray = field(repr=False, default=None)
    train_index: np.ndarray = field(repr=False, default=None)


@dataclass
class CvReport:
    cells: list

    def _values(self, name):
        return np.array([getattr(c, name) for c in self.cells])

    def mean(self, name="rmse"):
        return float(np.mean(self._values(name)))

    def sd(self, name="rmse"):
        v = self._values(name)
        return float(np.std(v, ddof=1)) if len(v) > 1 else 0.0

    def to_csv(self, timing=True):
        out = io.StringIO()
        out.write("run,fold,rmse,accuracy,train_ms\n")
        for c in self.cells:
            ms = repr(round(c.train_ms, 3)) if timing else "0"
            out.write(f"{c.run},{c.fold},{c.rmse!r},{c.accuracy!r},{ms}\n")
        for name in ("rmse", "accuracy"):
            out.write(f"# mean_{name}={self.mean(name)!r}\n")
            out.write(f"# sd_{name}={self.sd(name)!r}\n")
        return out.getvalue()


def cross_validate(data, fit, runs=10, folds=10, seed=42, workers=1):
    """Repeated stratified k-fold cross-validation.

    ``fit(train_dataset, cell_seed)`` must return an object with a
    ``predict_proba(rows)`` method taking raw attribute rows; encoding
    statistics are therefore fitted on the training portion only. Run ``r``
    uses folds drawn with a seed derived from ``(seed, r)``.
    """
    if runs < 1:
        raise UsageError("runs must be >= 1")
    if not 1 < folds <= data.n_instances:
        raise UsageError(f"folds must be in [2, {data.n_instances}], got {folds}")

    jobs = []
    for r in range(runs):
        ids = stratified_fold_ids(data.labels, folds, _random.stream(seed, _random.RUN, r))
        for f in range(folds):
            jobs.append((r, f, np.flatnonzero(ids != f), np.flatnonzero(ids == f)))

    def run_cell(job):
        r, f, train_idx, test_idx = job
        train = data.subset(train_idx)
        start = time.perf_counter()
        model = fit(train, _random.derive_seed(seed, _random.CELL, r, f))
        elapsed = (time.perf_counter() - start) * 1000.0
        probs = model.predict_proba(data.rows[test_idx])
        truth = data.labels[test_idx]
        return CvCell(r, f, rmse(probs, truth), accuracy(probs, truth), elapsed, test_idx, train_idx)

    return CvReport(parallel_map(run_cell, jobs, workers))

