"""Print growth and restricted-growth tables for n = 2..12."""

import argparse

from nestdich.analysis import growth, growth_restricted
from nestdich.analysis.growth import BALANCED_REMOVAL, ISOLATE_SINGLETON


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=12)
    parser.add_argument("--lambdas", type=int, nargs="+", default=[3, 5, 7, 9])
    args = parser.parse_args()

    ns = range(2, args.n_max + 1)
    print("n," + ",".join(str(n) for n in ns))
    for strategy in ("random", "balanced"):
        print(f"{strategy}," + ",".join(str(growth(n, strategy)) for n in ns))
    print("random_pair (estimate)," + ",".join(f"{growth(n, 'random_pair'):.4g}" for n in ns))
    for strategy in ("random", "balanced"):
        for policy in (ISOLATE_SINGLETON, BALANCED_REMOVAL):
            for lam in args.lambdas:
                row = [growth_restricted(n, strategy, lam, policy) for n in ns]
                print(f"{strategy} {policy} lambda={lam}," + ",".join(map(str, row)))


if __name__ == "__main__":
    main()
