"""Weighted binary logistic regression, the base learner at every tree node.

The fit minimizes

    sum_i w_i * (log(1 + exp(z_i)) - y_i * z_i) + ridge * ||beta||^2,
    z_i = x_i . beta + b,

with Newton steps and Armijo backtracking from a zero start, so a fit is a
deterministic function of its inputs. The intercept is not penalized.
"""

from dataclasses import dataclass

import numpy as np

from .errors import UsageError


@dataclass(frozen=True)
class LearnerConfig:
    ridge: float = 1e-8
    max_iterations: int = 200
    tolerance: float = 1e-8

    def __post_init__(self):
        if not self.ridge >= 0:
            raise UsageError(f"ridge must be >= 0, got {self.ridge}")
        if not self.tolerance > 0:
            raise UsageError(f"tolerance must be > 0, got {self.tolerance}")
        if int(self.max_iterations) < 1:
            raise UsageError("max_iterations must be positive")


@dataclass(frozen=True, eq=False)
class BinaryModel:
    """Logistic model giving the probability of ``positive_side``.

    When ``degenerate_probability`` is set the model ignores its input.
    """

    coefficients: np.ndarray
    intercept: float
    positive_side: str = "left"
    degenerate_probability: float = None

    @property
    def width(self):
        return len(self.coefficients)

    def predict(self, x):
        """Positive-side probability for each row of ``x``."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        if x.shape[1] != self.width:
            raise UsageError(f"row width {x.shape[1]} does not match model width {self.width}")
        if self.degenerate_probability is not None:
            p = np.full(x.shape[0], float(self.degenerate_probability))
        else:
            p = sigmoid(x @ self.coefficients + self.intercept)
        return p[0] if single else p

    def to_dict(self):
        return {
            "coefficients": [float(c) for c in self.coefficients],
            "intercept": float(self.intercept),
            "positive_side": self.positive_side,
            "degenerate_probability": self.degenerate_probability,
        }

    @classmethod
    def from_dict(cls, d):
        dp = d.get("degenerate_probability")
        return cls(
            np.array(d["coefficients"], dtype=float),
            float(d["intercept"]),
            d.get("positive_side", "left"),
            None if dp is None else float(dp),
        )


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def predict_binary(model, row):
    return float(model.predict(np.asarray(row, dtype=float).reshape(-1)))


def _design(x):
    return np.hstack([x, np.ones((x.shape[0], 1))])


def objective(params, x, y, w, ridge):
    """Penalized weighted negative log-likelihood; ``params`` = (beta..., b)."""
    z = _design(x) @ params
    return float(np.sum(w * (np.logaddexp(0.0, z) - y * z)) + ridge * np.dot(params[:-1], params[:-1]))


def gradient(params, x, y, w, ridge):
    xd = _design(x)
    g = xd.T @ (w * (sigmoid(xd @ params) - y))
    g[:-1] += 2.0 * ridge * params[:-1]
    return g


def hessian(params, x, w, ridge):
    xd = _design(x)
    p = sigmoid(xd @ params)
    h = (xd * (w * p * (1.0 - p))[:, None]).T @ xd
    h[np.arange(len(params) - 1), np.arange(len(params) - 1)] += 2.0 * ridge
    return h


def _newton_direction(h, g):
    scale = max(1.0, float(np.max(np.abs(np.diag(h)))))
    jitter = 0.0
    eye = np.eye(len(g))
    for _ in range(20):
        try:
            chol = np.linalg.cholesky(h + jitter * eye)
            return -np.linalg.solve(chol.T, np.linalg.solve(chol, g))
        except np.linalg.LinAlgError:
            jitter = scale * 1e-12 if jitter == 0.0 else jitter * 100.0
    return -g


def fit_logistic(x, y, w, config=LearnerConfig(), trace=None):
    """Return the fitted parameter vector (beta..., b).

    ``trace``, if a list, receives the objective value after every iteration.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    params = np.zeros(x.shape[1] + 1)
    f = objective(params, x, y, w, config.ridge)
    if trace is not None:
        trace.append(f)
    for _ in range(int(config.max_iterations)):
        g = gradient(params, x, y, w, config.ridge)
        if np.max(np.abs(g)) <= config.tolerance:
            break
        d = _newton_direction(hessian(params, x, w, config.ridge), g)
        slope = float(g @ d)
        if slope >= 0:
            d, slope = -g, -float(g @ g)
        t = 1.0
        for _ in range(60):
            cand = params + t * d
            fc = objective(cand, x, y, w, config.ridge)
            if fc <= f + 1e-4 * t * slope:
                break
            t *= 0.5
        else:
            break
        if fc >= f and t < 1.0:
            break
        params, f = cand, fc
        if trace is not None:
            trace.append(f)
    return params


def train_binary(x, y, w=None, config=LearnerConfig()):
    """Fit a :class:`BinaryModel` to 0/1 targets ``y`` (1 = positive side).

    If only one target value carries positive weight the result is a constant
    model with Laplace-smoothed probability (n1 + 1) / (n + 2), counting
    positively weighted instances.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.ones(len(y)) if w is None else np.asarray(w, dtype=float)
    if x.ndim != 2 or x.shape[0] != len(y) or len(w) != len(y):
        raise UsageError("x, y and w have inconsistent shapes")
    if not np.all((y == 0) | (y == 1)):
        raise UsageError("binary targets must be 0 or 1")
    if np.any(w < 0):
        raise UsageError("weights must be non-negative")
    active = w > 0
    present = np.unique(y[active])
    if len(present) < 2:
        n = int(active.sum())
        n1 = int(np.sum(y[active] == 1))
        return BinaryModel(np.zeros(x.shape[1]), 0.0, "left", (n1 + 1) / (n + 2))
    params = fit_logistic(x[active], y[active], w[active], config)
    return BinaryModel(params[:-1].copy(), float(params[-1]))
