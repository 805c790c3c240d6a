"""Bagging and AdaBoost.M1 over nested dichotomies."""

import math
from dataclasses import dataclass

import numpy as np

from . import _random
from ._parallel import parallel_map
from .data import bootstrap_indices, encode, fit_encoder
from .dichotomy import SplitterSpec, build_from_encoded
from .errors import UsageError
from .learner import LearnerConfig

BAGGING = "bagging"
ADABOOST = "adaboost"
NONE = "none"
METHODS = (NONE, BAGGING, ADABOOST)

# member weight used when a boosting round makes no training errors
PERFECT_MEMBER_WEIGHT = math.log(1e10)


@dataclass(frozen=True)
class EnsembleSpec:
    method: str = BAGGING
    size: int = 10
    member: SplitterSpec = SplitterSpec()
    learner: LearnerConfig = LearnerConfig()
    seed: int = 42

    def __post_init__(self):
        if self.method not in METHODS:
            raise UsageError(f"unknown ensemble method {self.method!r}")
        if int(self.size) < 1:
            raise UsageError(f"ensemble size must be >= 1, got {self.size}")
        if int(self.seed) < 0:
            raise UsageError(f"seed must be non-negative, got {self.seed}")

    def with_seed(self, seed):
        return EnsembleSpec(self.method, self.size, self.member, self.learner, seed)

    def to_dict(self):
        return {
            "method": self.method,
            "size": self.size,
            "member": self.member.to_dict(),
            "learner": {
                "ridge": self.learner.ridge,
                "max_iterations": self.learner.max_iterations,
                "tolerance": self.learner.tolerance,
            },
            "seed": self.seed,
        }


@dataclass(frozen=True, eq=False)
class EnsembleModel:
    members: tuple
    weights: tuple
    method: str
    encoder: object
    classes: tuple

    def __post_init__(self):
        if not self.members:
            raise UsageError("an ensemble needs at least one member")
        if len(self.members) != len(self.weights):
            raise UsageError("one weight per member required")

    @property
    def n_classes(self):
        return len(self.classes)

    def predict_proba_encoded(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.method == BAGGING:
            return np.mean([m.predict_proba_encoded(x) for m in self.members], axis=0)
        votes = np.zeros((x.shape[0], self.n_classes))
        rows = np.arange(x.shape[0])
        for member, w in zip(self.members, self.weights):
            votes[rows, np.argmax(member.predict_proba_encoded(x), axis=1)] += w
        mass = votes.sum(axis=1, keepdims=True)
        uniform = np.full_like(votes, 1.0 / self.n_classes)
        return np.where(mass > 0, votes / np.where(mass > 0, mass, 1.0), uniform)

    def predict_proba(self, rows):
        return self.predict_proba_encoded(self.encoder.transform(rows))


def ensemble_predict(model, instance):
    row = np.asarray(instance, dtype=float)
    if row.ndim != 1:
        raise UsageError("ensemble_predict takes a single instance")
    return model.predict_proba(row[None, :])[0]


def _member_spec(spec, t):
    return spec.member.with_seed(_random.derive_seed(spec.seed, _random.MEMBER, t))


def train_bagging(data, spec, workers=1):
    """Members trained on bootstrap replicates; all weights 1.

    Every member shares one encoder fitted on ``data``.
    """
    encoder = fit_encoder(data)
    ed = encode(data, encoder)

    def member(t):
        rng = _random.stream(spec.seed, _random.MEMBER, t)
        idx = bootstrap_indices(ed.n_instances, rng)
        boot = ed.subset(idx, weights=np.ones(len(idx)))
        return build_from_encoded(boot, _member_spec(spec, t), spec.learner)

    members = parallel_map(member, range(spec.size), workers)
    return EnsembleModel(tuple(members), (1.0,) * len(members), BAGGING, encoder, data.classes)


def train_adaboost(data, spec, workers=1, weight_trace=None):
    """AdaBoost.M1 by instance reweighting.

    Weights start at 1 per instance. After a round with weighted error e the
    member gets weight ln((1 - e) / e), correctly classified instances are
    scaled by e / (1 - e) and all weights renormalized to sum to n. A round
    with e >= 0.5 stops boosting and is discarded, except the first, which
    is kept with weight 0. A round with e = 0 is kept with weight ln(1e10)
    and stops boosting. ``weight_trace``, if a list, receives the instance
    weights in force at every round.
    """
    encoder = fit_encoder(data)
    ed = encode(data, encoder)
    n = ed.n_instances
    w = np.ones(n)
    members, member_weights = [], []
    for t in range(spec.size):
        if weight_trace is not None:
            weight_trace.append(w.copy())
        nd = build_from_encoded(ed.subset(np.arange(n), weights=w), _member_spec(spec, t),
                                spec.learner, workers)
        wrong = np.argmax(nd.predict_proba_encoded(ed.matrix), axis=1) != ed.labels
        err = float(np.sum(w[wrong]) / np.sum(w))
        if err >= 0.5:
            if not members:
                members.append(nd)
                member_weights.append(0.0)
            break
        if err == 0.0:
            members.append(nd)
            member_weights.append(PERFECT_MEMBER_WEIGHT)
            break
        members.append(nd)
        member_weights.append(math.log((1.0 - err) / err))
        w = np.where(wrong, w, w * (err / (1.0 - err)))
        w *= n / w.sum()
    return EnsembleModel(tuple(members), tuple(member_weights), ADABOOST, encoder, data.classes)


def train_ensemble(data, spec, workers=1):
    if spec.method == BAGGING:
        return train_bagging(data, spec, workers)
    if spec.method == ADABOOST:
        return train_adaboost(data, spec, workers)
    raise UsageError("method 'none' builds a single nested dichotomy; use build_nd")
