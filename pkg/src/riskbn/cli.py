"""``riskbn`` command-line interface.

Exit codes: 0 success, 1 usage error, 2 model/validation/inference error.
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys

from riskbn.causal import causal_effect, intervention_sweep
from riskbn.errors import RiskBNError
from riskbn.fixtures import IVI_ATTACK_TREE, ivi_network
from riskbn.inference import Distribution, InferenceMode, query
from riskbn.model_io import dumps_model, load_model, parse_assignment, save_model
from riskbn.report import (
    FORMATS,
    marginals_table,
    render_distribution,
    render_dot,
    render_interventions,
    render_marginals,
    render_sensitivity,
)
from riskbn.sensitivity import SensitivityConfig, sensitivity_sweep
from riskbn.threat_model import lint_tree, parse_attack_tree, transform_to_bn

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

MODES = [m.value for m in InferenceMode]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _assignment(text: str) -> dict[str, int]:
    try:
        return parse_assignment(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="riskbn", description="Bayesian-network threat risk analysis")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check a model document")
    p.add_argument("model")

    p = sub.add_parser("infer", help="P(target | evidence)")
    p.add_argument("model")
    p.add_argument("--target", required=True)
    p.add_argument("--evidence", type=_assignment, default={})
    p.add_argument("--mode", choices=MODES, default="ve")

    p = sub.add_parser("marginals", help="marginal of every node")
    p.add_argument("model")
    p.add_argument("--mode", choices=MODES, default="ve")
    p.add_argument("--format", choices=FORMATS, default="md")

    p = sub.add_parser("do", help="P(target = 1 | do(...))")
    p.add_argument("model")
    p.add_argument("--target", required=True)
    p.add_argument("--set", dest="assign", type=_assignment, required=True)

    p = sub.add_parser("sweep-do", help="do(X=1) for every node")
    p.add_argument("model")
    p.add_argument("--target", required=True)
    p.add_argument("--format", choices=FORMATS, default="md")

    p = sub.add_parser("sensitivity", help="one-at-a-time sensitivity scores")
    p.add_argument("model")
    p.add_argument("--target", required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--mode", choices=["ve", "enum", "forward"], default="ve")
    p.add_argument("--format", choices=FORMATS, default="md")

    p = sub.add_parser("transform", help="attack-tree DSL -> model document")
    p.add_argument("tree")
    p.add_argument("-o", "--output")

    p = sub.add_parser("export-dot", help="model DAG as Graphviz DOT")
    p.add_argument("model")
    p.add_argument("-o", "--output")

    p = sub.add_parser("fixture", help="write an embedded case-study model")
    p.add_argument("name", choices=["ivi"])
    p.add_argument("-o", "--output-dir", default=".")
    return parser


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from e


def run(args: argparse.Namespace) -> int:
    cmd = args.command
    if cmd == "fixture":
        os.makedirs(args.output_dir, exist_ok=True)
        model_path = os.path.join(args.output_dir, "ivi.model.json")
        tree_path = os.path.join(args.output_dir, "ivi.at")
        save_model(ivi_network(), model_path, name="ivi")
        _emit(IVI_ATTACK_TREE, tree_path)
        print(model_path)
        print(tree_path)
        return EXIT_OK
    if cmd == "transform":
        tree = parse_attack_tree(_read_text(args.tree))
        for w in lint_tree(tree):
            print(f"warning: {w}", file=sys.stderr)
        name = os.path.basename(args.tree).split(".")[0] or "model"
        _emit(dumps_model(transform_to_bn(tree), name), args.output)
        return EXIT_OK

    net = load_model(args.model)
    if cmd == "validate":
        print(f"valid: {len(net)} nodes, {len(net.edges())} edges")
    elif cmd == "infer":
        sys.stdout.write(render_distribution(query(net, args.target, args.evidence, args.mode)))
    elif cmd == "marginals":
        sys.stdout.write(render_marginals(marginals_table(net, args.mode), args.format))
    elif cmd == "do":
        p = causal_effect(net, args.target, args.assign)
        sys.stdout.write(render_distribution(Distribution.bernoulli(p)))
    elif cmd == "sweep-do":
        sys.stdout.write(render_interventions(intervention_sweep(net, args.target), args.format))
    elif cmd == "sensitivity":
        try:
            cfg = SensitivityConfig(args.target, delta=args.delta, mode=args.mode)
        except ValueError as e:
            raise UsageError(str(e)) from e
        net.node(args.target)
        sys.stdout.write(render_sensitivity(sensitivity_sweep(net, cfg), args.format))
    elif cmd == "export-dot":
        _emit(render_dot(net), args.output)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except UsageError as e:
        print(f"riskbn: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except RiskBNError as e:
        print(f"riskbn: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"riskbn: error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
