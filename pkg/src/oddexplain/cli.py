"""Command-line surface binding the library into reproducible workflows.

Exit codes: 0 success, 2 usage, 3 parse/model error, 4 capacity,
5 verification mismatch.  Results go to stdout, diagnostics to stderr.
"""

import argparse
import sys

from .classifiers import LatentTreeClassifier, decision_table, train_naive_bayes
from .compiler import compile_latent_tree, compile_naive_bayes
from .errors import (
    CapacityError,
    ModelError,
    OddError,
    ParseError,
    SequencingError,
)
from .explain import (
    brute_mc_oracle,
    brute_pi_oracle,
    explain_pi,
    mc_explanations,
)
from .io import (
    deserialize_odd,
    dump_classifier,
    load_classifier,
    parse_instance,
    read_labeled_csv,
    render_instance,
    render_partial,
    serialize_odd,
)
from .monotone import is_monotone

_MC_SPOT_CHECKS = 8
_PI_SPOT_CHECKS = 8
_PI_ORACLE_LIMIT = 10


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="oddexplain",
        description=(
            "Compile Bayesian network classifiers into ordered decision "
            "diagrams and explain their decisions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a classifier file into a diagram file")
    p.add_argument("--model", required=True, help="classifier JSON file")
    p.add_argument("--order", help="comma-separated feature names (naive Bayes only)")
    p.add_argument("--out", required=True, help="output diagram file")

    p = sub.add_parser("explain", help="explain one instance against a diagram")
    p.add_argument("--odd", required=True, help="diagram file")
    p.add_argument("--instance", required=True, help="space-separated value labels")
    p.add_argument("--kind", required=True, choices=("mc", "pi"))
    p.add_argument("--shortest", action="store_true", help="print only shortest PIs")
    p.add_argument("--histogram", action="store_true", help="print the PI length histogram")

    p = sub.add_parser("check-monotone", help="decide monotonicity of a diagram")
    p.add_argument("--odd", required=True)

    p = sub.add_parser("stats", help="print size and model count of a diagram")
    p.add_argument("--odd", required=True)

    p = sub.add_parser("train", help="train a naive Bayes classifier from CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--smoothing", type=float, default=1.0)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--label-column", type=int, default=0)
    p.add_argument("--no-header", action="store_true")
    p.add_argument(
        "--missing-as-value",
        action="store_true",
        help="treat '?' as a third feature value instead of skipping it",
    )
    p.add_argument("--out", required=True)

    p = sub.add_parser(
        "verify",
        help="compile a model and check it against brute-force oracles",
    )
    p.add_argument("--model", required=True)
    p.add_argument("--order", help="comma-separated feature names (naive Bayes only)")
    p.add_argument("--odd", help="diagram file that must match the compilation")
    return parser


def _parse_order(classifier, text):
    if text is None:
        return None
    names = [token.strip() for token in text.split(",") if token.strip()]
    lookup = {name: i for i, name in enumerate(classifier.feature_names)}
    order = []
    for name in names:
        if name not in lookup:
            raise SequencingError(f"unknown feature {name!r} in --order")
        order.append(lookup[name])
    if sorted(order) != list(range(classifier.feature_count)):
        raise SequencingError("--order must list every feature exactly once")
    return order


def _compile(classifier, order):
    if isinstance(classifier, LatentTreeClassifier):
        if order is not None:
            raise SequencingError("latent trees derive their own order; drop --order")
        return compile_latent_tree(classifier)
    return compile_naive_bayes(classifier, order=order)


def _cmd_compile(args):
    classifier = load_classifier(args.model)
    diagram = _compile(classifier, _parse_order(classifier, args.order))
    serialize_odd(diagram, args.out)
    print(f"size {diagram.size()}")
    print(f"models {diagram.model_count()}")
    return 0


def _cmd_explain(args):
    diagram = deserialize_odd(args.odd)
    variables = diagram.manager.variables
    x = parse_instance(variables, args.instance)
    if args.kind == "mc":
        found = mc_explanations(diagram, x)
        lines = [render_instance(variables, m) for m in found.models()]
        for line in lines:
            print(line)
        print(f"count {len(lines)}")
        return 0
    found = explain_pi(diagram, x)
    chosen = found.shortest() if args.shortest else list(found.partial_instances())
    for partial in chosen:
        print(render_partial(variables, partial))
    print(f"count {len(chosen)}")
    if args.histogram:
        for length, number in found.length_histogram().items():
            print(f"length {length} count {number}")
    return 0


def _cmd_check_monotone(args):
    diagram = deserialize_odd(args.odd)
    report = is_monotone(diagram)
    if report.monotone:
        print("monotone")
    else:
        print("not-monotone")
        lower, upper = report.witness
        variables = diagram.manager.variables
        print(f"witness-low {render_instance(variables, lower)}")
        print(f"witness-high {render_instance(variables, upper)}")
    return 0


def _cmd_stats(args):
    diagram = deserialize_odd(args.odd)
    manager = diagram.manager
    print(f"mode {manager.mode}")
    print(f"vars {manager.var_count}")
    print(f"size {diagram.size()}")
    print(f"models {diagram.model_count()}")
    return 0


def _cmd_train(args):
    names, rows, labels = read_labeled_csv(
        args.csv,
        has_header=not args.no_header,
        label_column=args.label_column,
        missing_as_value=args.missing_as_value,
    )
    classifier = train_naive_bayes(
        rows,
        labels,
        smoothing=args.smoothing,
        feature_names=names,
        threshold=args.threshold,
    )
    dump_classifier(classifier, args.out)
    print(f"accuracy {classifier.training_accuracy:.12g}")
    return 0


def _spot_ranks(total, wanted):
    if total <= wanted:
        return range(total)
    step = total // wanted
    return range(0, step * wanted, step)


def _cmd_verify(args):
    classifier = load_classifier(args.model)
    diagram = _compile(classifier, _parse_order(classifier, args.order))
    table = decision_table(classifier)
    # feature index (classifier order) sitting at each diagram level
    names = [v.name for v in diagram.manager.variables]
    at_level = [classifier.feature_names.index(name) for name in names]

    def to_diagram(x):
        return tuple(x[feature] for feature in at_level)

    failures = 0
    checked = 0
    for x in table.instances():
        if diagram.evaluate(to_diagram(x)) != table.decision(x):
            print(f"decision mismatch at {x}", file=sys.stderr)
            failures += 1
            break
        checked += 1
    if not failures:
        print(f"decision-function ok ({checked} instances)")

    binary = all(b == 2 for b in table.domains)
    if binary and not failures:
        instances = list(table.instances())
        good = 0
        for rank in _spot_ranks(len(instances), _MC_SPOT_CHECKS):
            x = instances[rank]
            found = set()
            for model in mc_explanations(diagram, to_diagram(x)).models():
                back = [0] * len(x)
                for level, value in enumerate(model):
                    back[at_level[level]] = value
                found.add(tuple(back))
            if found != brute_mc_oracle(table, x):
                print(f"mc-explanation mismatch at {x}", file=sys.stderr)
                failures += 1
                break
            good += 1
        if not failures:
            print(f"mc-oracle ok ({good} instances)")
    elif not binary:
        print("mc-oracle skipped (multi-valued features)")

    if not failures and len(table.domains) <= _PI_ORACLE_LIMIT:
        instances = list(table.instances())
        good = 0
        for rank in _spot_ranks(len(instances), _PI_SPOT_CHECKS):
            x = instances[rank]
            decoded = {
                frozenset((at_level[var], value) for var, value in partial.items())
                for partial in explain_pi(diagram, to_diagram(x)).partial_instances()
            }
            if decoded != brute_pi_oracle(table, x):
                print(f"pi-explanation mismatch at {x}", file=sys.stderr)
                failures += 1
                break
            good += 1
        if not failures:
            print(f"pi-oracle ok ({good} instances)")
    elif not failures:
        print("pi-oracle skipped (too many features)")

    if args.odd is not None and not failures:
        try:
            stored = deserialize_odd(args.odd, manager=diagram.manager)
        except OddError as exc:
            print(f"stored diagram rejected: {exc}", file=sys.stderr)
            failures += 1
        else:
            if stored.root != diagram.root:
                print("stored diagram differs from the compilation", file=sys.stderr)
                failures += 1
            else:
                print("odd-file ok")

    if failures:
        print("verification failed", file=sys.stderr)
        return 5
    return 0


_COMMANDS = {
    "compile": _cmd_compile,
    "explain": _cmd_explain,
    "check-monotone": _cmd_check_monotone,
    "stats": _cmd_stats,
    "train": _cmd_train,
    "verify": _cmd_verify,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, ModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OddError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
