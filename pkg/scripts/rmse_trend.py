"""Empirical vs. predicted best-of-lambda training RMSE on the synthetic dataset."""

import argparse

from nestdich.analysis.distribution import rmse_distribution
from nestdich.data import make_gaussian_classes


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--strategy", default="random", choices=("random", "balanced", "random_pair"))
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--lambda-max", type=int, default=5)
    parser.add_argument("--holdout", type=float, default=0.1)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--csv", help="also write the per-trial samples here")
    args = parser.parse_args()

    report = rmse_distribution(make_gaussian_classes(), args.strategy, trials=args.trials,
                               lambda_max=args.lambda_max, holdout_fraction=args.holdout,
                               seed=args.seed)
    print("lambda  train_mean   se       predicted  test_mean")
    for lam in report.lambdas:
        print(f"{lam:6d}  {report.mean(lam):.5f}  {report.standard_error(lam):.5f}  "
              f"{report.predicted[lam]:.5f}    {report.mean(lam, 'test'):.5f}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(report.to_csv())


if __name__ == "__main__":
    main()
