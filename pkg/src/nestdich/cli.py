"""Command-line entry point: ``nestdich <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 data or parse error, 4 internal error.
"""

import argparse
import sys

import numpy as np

from ._parallel import default_workers
from .analysis import growth, growth_restricted
from .analysis.distribution import rmse_distribution
from .analysis.growth import BALANCED_REMOVAL, ISOLATE_SINGLETON, RANDOM_PAIR
from .analysis.orderstats import BLOM_ALPHA, expected_min_normal
from .data import load_dataset, load_instances
from .dichotomy import SplitterSpec, build_nd
from .ensemble import NONE, EnsembleSpec, train_ensemble
from .errors import DataError, NestDichError, UsageError
from .evaluation import cross_validate
from .learner import LearnerConfig
from .persist import dumps, load_model

DEFAULT_SEED = 42
REMOVAL = {"isolate": ISOLATE_SINGLETON, "balanced": BALANCED_REMOVAL}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _formatter(prog):
    return argparse.ArgumentDefaultsHelpFormatter(prog, width=100)


def _add_data(p, required=True):
    p.add_argument("--data", required=required, help="dataset path (ARFF or CSV)")
    p.add_argument("--format", choices=("arff", "csv"), default=None,
                   help="data format; inferred from the file extension when omitted")
    p.add_argument("--class", dest="class_attribute", default=None,
                   help="class attribute name or 0-based index; last column when omitted")


def _add_common(p):
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master random seed")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads, None meaning one per CPU; results do not depend on this")


def _add_learner(p):
    p.add_argument("--ridge", type=float, default=LearnerConfig.ridge, help="L2 penalty")
    p.add_argument("--max-iter", type=int, default=LearnerConfig.max_iterations,
                   help="optimizer iteration cap")
    p.add_argument("--tol", type=float, default=LearnerConfig.tolerance,
                   help="gradient infinity-norm tolerance")


def _add_model(p):
    _add_data(p)
    p.add_argument("--strategy", choices=("random", "balanced", "random-pair"), required=True,
                   help="class subset selection strategy")
    p.add_argument("--lambda", dest="lam", type=int, default=1,
                   help="candidate splits evaluated per node")
    p.add_argument("--class-threshold", type=int, default=1,
                   help="minimum classes at a node for multiple subset evaluation")
    p.add_argument("--ensemble", choices=("none", "bagging", "adaboost"), default="none",
                   help="ensemble method")
    p.add_argument("--size", type=int, default=10, help="ensemble size")
    _add_learner(p)
    _add_common(p)


def build_parser():
    parser = _Parser(prog="nestdich", formatter_class=_formatter,
                     description="Nested dichotomies with multiple subset evaluation.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("growth", formatter_class=_formatter,
                       help="number of nested dichotomies for a selection strategy")
    p.add_argument("--strategy", choices=("random", "balanced", "random-pair"), required=True,
                   help="class subset selection strategy")
    p.add_argument("--n", type=int, required=True, help="number of classes")

    p = sub.add_parser("growth-restricted", formatter_class=_formatter,
                       help="growth under multiple subset evaluation")
    p.add_argument("--strategy", choices=("random", "balanced"), required=True,
                   help="class subset selection strategy")
    p.add_argument("--n", type=int, required=True, help="number of classes")
    p.add_argument("--lambda", dest="lam", type=int, required=True,
                   help="candidate splits per node")
    p.add_argument("--removal", choices=tuple(REMOVAL), required=True,
                   help="shape of the splits assumed worst")
    p.add_argument("--method", choices=("recurrence", "enumerate"), default="recurrence",
                   help="counting method")

    p = sub.add_parser("expectmin", formatter_class=_formatter,
                       help="expected minimum of lambda normal errors")
    p.add_argument("--mu", type=float, required=True, help="error mean")
    p.add_argument("--sigma", type=float, required=True, help="error standard deviation")
    p.add_argument("--lambda", dest="lam", type=int, required=True, help="number of draws")
    p.add_argument("--alpha", type=float, default=BLOM_ALPHA, help="plotting-position constant")

    p = sub.add_parser("rmse-dist", formatter_class=_formatter,
                       help="training RMSE distribution over random class splits")
    _add_data(p)
    p.add_argument("--strategy", choices=("random", "balanced", "random-pair"), default="random",
                   help="class subset selection strategy")
    p.add_argument("--trials", type=int, default=200, help="samples per lambda")
    p.add_argument("--lambda-max", type=int, default=5, help="largest lambda")
    p.add_argument("--holdout", type=float, default=0.1, help="fraction of data held out")
    p.add_argument("--alpha", type=float, default=BLOM_ALPHA, help="plotting-position constant")
    _add_learner(p)
    _add_common(p)
    p.add_argument("--out", required=True, help="output CSV ('-' for stdout)")

    p = sub.add_parser("train", formatter_class=_formatter,
                       help="train a nested dichotomy or an ensemble")
    _add_model(p)
    p.add_argument("--out", required=True, help="model file (JSON)")

    p = sub.add_parser("predict", formatter_class=_formatter,
                       help="class probabilities from a saved model")
    p.add_argument("--model", required=True, help="model file (JSON)")
    _add_data(p)
    p.add_argument("--out", required=True, help="output CSV ('-' for stdout)")

    p = sub.add_parser("cv", formatter_class=_formatter,
                       help="repeated stratified cross-validation")
    _add_model(p)
    p.add_argument("--runs", type=int, default=10, help="repetitions")
    p.add_argument("--folds", type=int, default=10, help="folds per repetition")
    p.add_argument("--no-timing", action="store_true",
                   help="write train_ms as 0 so reports are byte-reproducible")
    p.add_argument("--out", required=True, help="output CSV ('-' for stdout)")
    return parser


def _write(path, text, stdout):
    if path == "-":
        stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _learner(args):
    return LearnerConfig(args.ridge, args.max_iter, args.tol)


def _workers(args):
    if args.threads is None:
        return default_workers()
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    return args.threads


def _specs(args):
    member = SplitterSpec(args.strategy, args.lam, args.class_threshold, args.seed)
    ens = None
    if args.ensemble != NONE:
        ens = EnsembleSpec(args.ensemble, args.size, member, _learner(args), args.seed)
    return member, ens


def _fit(data, member, ens, learner, seed, workers):
    if ens is None:
        return build_nd(data, member.with_seed(seed), learner, workers=workers)
    return train_ensemble(data, ens.with_seed(seed), workers)


def _provenance(args, member, ens):
    spec = ens.to_dict() if ens else dict(member.to_dict(), learner=vars(_learner(args)))
    return {"spec": spec, "seed": args.seed}


def _cmd_growth(args, out):
    strategy = args.strategy.replace("-", "_")
    value = growth(args.n, strategy)
    if strategy == RANDOM_PAIR:
        text = np.format_float_positional(value, precision=6, unique=False, fractional=False,
                                          trim="-")
        out.write(f"{text} estimate\n")
    else:
        out.write(f"{value}\n")


def _cmd_growth_restricted(args, out):
    out.write(f"{growth_restricted(args.n, args.strategy, args.lam, REMOVAL[args.removal], args.method)}\n")


def _cmd_expectmin(args, out):
    out.write(f"{expected_min_normal(args.mu, args.sigma, args.lam, args.alpha)!r}\n")


def _cmd_train(args, out):
    data = load_dataset(args.data, args.format, args.class_attribute)
    member, ens = _specs(args)
    model = _fit(data, member, ens, _learner(args), args.seed, _workers(args))
    _write(args.out, dumps(model, data.class_attribute, _provenance(args, member, ens)), out)


def _cmd_predict(args, out):
    mf = load_model(args.model)
    model = mf.model
    rows = load_instances(args.data, model.encoder.attributes, args.format)
    probs = model.predict_proba(rows)
    lines = [",".join(["instance", *model.classes, "argmax"])]
    for i, p in enumerate(probs):
        lines.append(",".join([str(i), *(repr(float(v)) for v in p), model.classes[int(np.argmax(p))]]))
    _write(args.out, "\n".join(lines) + "\n", out)


def _cmd_cv(args, out):
    data = load_dataset(args.data, args.format, args.class_attribute)
    member, ens = _specs(args)
    learner = _learner(args)
    report = cross_validate(
        data, lambda train, seed: _fit(train, member, ens, learner, seed, 1),
        args.runs, args.folds, args.seed, _workers(args),
    )
    _write(args.out, report.to_csv(timing=not args.no_timing) + f"# seed={args.seed}\n", out)


def _cmd_rmse_dist(args, out):
    data = load_dataset(args.data, args.format, args.class_attribute)
    report = rmse_distribution(data, args.strategy, _learner(args), args.trials, args.lambda_max,
                               args.holdout, args.seed, args.alpha, _workers(args))
    _write(args.out, report.to_csv() + f"# seed={args.seed}\n", out)


COMMANDS = {
    "growth": _cmd_growth,
    "growth-restricted": _cmd_growth_restricted,
    "expectmin": _cmd_expectmin,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "cv": _cmd_cv,
    "rmse-dist": _cmd_rmse_dist,
}


def dispatch(argv=None, stdout=None, stderr=None):
    """Run one subcommand and return its exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args, stdout)
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else 0
    except NestDichError as exc:
        stderr.write(f"nestdich: error: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        stderr.write(f"nestdich: error: {exc}\n")
        return DataError.exit_code
    except Exception as exc:  # invariant violations and bugs
        stderr.write(f"nestdich: internal error: {exc!r}\n")
        return 4
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
