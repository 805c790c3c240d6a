"""Cross-validated RMSE of bagged nested dichotomies for lambda = 1 vs a larger lambda."""

import argparse

from nestdich.data import make_gaussian_classes
from nestdich.dichotomy import SplitterSpec
from nestdich.ensemble import EnsembleSpec, train_bagging
from nestdich.evaluation import cross_validate


def cv_rmse(data, strategy, lam, size, folds, seed):
    spec = EnsembleSpec("bagging", size, SplitterSpec(strategy, lam), seed=seed)
    report = cross_validate(data, lambda train, s: train_bagging(train, spec.with_seed(s)),
                            runs=1, folds=folds, seed=seed)
    return report.mean("rmse")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--strategy", default="balanced")
    parser.add_argument("--lam", type=int, default=3)
    parser.add_argument("--size", type=int, default=10)
    parser.add_argument("--folds", type=int, default=5)
    parser.add_argument("--seeds", type=int, default=10)
    args = parser.parse_args()

    data = make_gaussian_classes()
    wins = 0
    print(f"seed  lambda=1   lambda={args.lam}")
    for seed in range(args.seeds):
        base = cv_rmse(data, args.strategy, 1, args.size, args.folds, seed)
        multi = cv_rmse(data, args.strategy, args.lam, args.size, args.folds, seed)
        wins += multi <= base
        print(f"{seed:4d}  {base:.5f}   {multi:.5f}")
    print(f"lambda={args.lam} at least as good in {wins} of {args.seeds} seeds")


if __name__ == "__main__":
    main()
