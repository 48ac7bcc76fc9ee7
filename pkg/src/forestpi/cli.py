"""Command-line interface: evaluate, explain, encode and verify models.

Exit codes: 0 success, 1 verification found failures, 2 parse or argument
error, 3 capacity limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import boolfn, encode, ingest, mvl, oracle, pi
from .errors import CapacityError, ParseError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_CAPACITY = 3


@dataclass
class Config:
    node_budget: int = boolfn.DEFAULT_NODE_BUDGET
    cap: int = mvl.DEFAULT_CAP
    format: str = "text"
    seed: int = 7

    def __post_init__(self):
        if self.node_budget <= 0:
            raise ValueError("node budget must be positive")
        if self.cap <= 0:
            raise ValueError("exhaustion cap must be positive")
        if self.format not in ("text", "json"):
            raise ValueError(f"unknown format {self.format!r}")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(exc.strerror or str(exc), path) from exc


def _load_model(path: str) -> tuple[ingest.Forest, ingest.FeatureSpace]:
    try:
        return ingest.parse_model(_read(path))
    except ParseError as exc:
        raise ParseError(str(exc), path) from exc


def cmd_explain(model_path: str, instance_path: str, config: Config) -> int:
    forest, space = _load_model(model_path)
    raw = ingest.parse_instance(_read(instance_path), space)
    inst = ingest.lift_instance(raw, space)
    explanations = pi.pi_explanations(forest, inst, space, node_budget=config.node_budget)
    if explanations:
        decision = explanations[0].decision
    else:
        decision = ingest.evaluate_forest(forest, raw, space)
    if config.format == "json":
        report = {
            "decision": decision,
            "instance": {space.var(fid).name: raw[fid] for fid in sorted(raw)},
            "explanations": [
                {
                    "features": {
                        name: {"values": list(lit.values), "render": render}
                        for lit, (name, render) in zip(e.term.literals, e.rendered)
                    }
                }
                for e in explanations
            ],
        }
        print(_dumps(report))
    else:
        print(f"decision: {decision}")
        for e in explanations:
            print(f"explanation: {e.text}")
    return EXIT_OK


def cmd_eval(model_path: str, instance_path: str, config: Config) -> int:
    forest, space = _load_model(model_path)
    text = _read(instance_path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", instance_path) from exc
    # A JSON array evaluates each element, one class index per line.
    docs = doc if isinstance(doc, list) else [doc]
    decisions = [
        ingest.evaluate_forest(forest, ingest.raw_instance(d, space), space)
        for d in docs
    ]
    if config.format == "json":
        print(_dumps({"decisions": decisions}))
    else:
        for d in decisions:
            print(d)
    return EXIT_OK


def cmd_encode(
    model_path: str,
    config: Config,
    scheme: str,
    cnf_path: str | None = None,
    dot_path: str | None = None,
    class_index: int = 1,
) -> int:
    forest, space = _load_model(model_path)
    if not 0 <= class_index < forest.n_classes:
        raise ParseError(
            f"class index {class_index} out of range for {forest.n_classes} classes"
        )
    vmap = encode.var_map(space, scheme)
    constraints = encode.build_constraints(vmap)
    manager = boolfn.BddManager(vmap.n_vars, config.node_budget)
    psi = manager.compile(constraints.psi)
    class_fns = pi.class_functions(manager, forest, space, vmap)

    literal_rows = []
    for var in space.variables:
        if var.domain_size < 2:
            continue
        for value in range(1, var.domain_size + 1):
            lit = mvl.MvLiteral(var.id, (value,))
            expr = encode.encode_literal(lit, vmap)
            if scheme == encode.ONE_HOT:
                rendered = encode.render_term(encode.encode_literal_term(lit, vmap), vmap)
            else:
                rendered = encode.render_expression(expr, vmap)
            literal_rows.append((var, value, rendered))

    class_rows = []
    for c, fn in enumerate(class_fns):
        expr = manager.to_expression(fn)
        with_psi = manager.combine("and", psi, fn)
        class_rows.append((c, encode.render_expression(expr, vmap),
                           manager.count_models(with_psi)))

    if cnf_path is not None or dot_path is not None:
        target = encode.Or((encode.Not(constraints.psi),
                            manager.to_expression(class_fns[class_index])))
        if cnf_path is not None:
            with open(cnf_path, "w", encoding="utf-8") as fh:
                fh.write(encode.tseitin_cnf(target, vmap))
        if dot_path is not None:
            gamma = manager.combine("implies", psi, class_fns[class_index])
            with open(dot_path, "w", encoding="utf-8") as fh:
                fh.write(manager.to_dot(gamma, vmap.names))

    if config.format == "json":
        report = {
            "scheme": scheme,
            "variables": list(vmap.names),
            "constraints": {
                space.var(var_id).name: encode.render_expression(expr, vmap)
                for var_id, expr in constraints.per_variable
            },
            "literals": [
                {
                    "feature": var.name,
                    "value": value,
                    "label": var.label(value),
                    "encoding": rendered,
                }
                for var, value, rendered in literal_rows
            ],
            "classes": [
                {"class": c, "expression": rendered, "models_with_constraint": count}
                for c, rendered, count in class_rows
            ],
        }
        print(_dumps(report))
    else:
        print(f"scheme: {scheme}")
        print("variables: " + " ".join(vmap.names))
        for var_id, expr in constraints.per_variable:
            print(f"constraint {space.var(var_id).name}: "
                  + encode.render_expression(expr, vmap))
        for var, value, rendered in literal_rows:
            lit = mvl.MvLiteral(var.id, (value,))
            print(f"literal {space.render_literal(lit)}: {rendered}")
        for c, rendered, count in class_rows:
            print(f"class {c}: {rendered}")
            print(f"class {c} models with constraint: {count}")
    return EXIT_OK


def _demo_lines(report: oracle.CheckReport) -> list[str]:
    details = report.details
    lines = [f"== {report.name} =="]
    lines.append("target primes: " + ", ".join(details["target"]))
    lines.append("boolean primes: " + ", ".join(details["boolean_primes"]))
    for row in details["decoded"]:
        lines.append("  " + row)
    recovered = details["recovered_primes"]
    lines.append("recovered multi-valued primes: "
                 + (", ".join(recovered) if recovered else "(none)"))
    lines.append("one_hot control: " + ", ".join(details["one_hot_control"]))
    lines.append(("PASS " if report.passed else "FAIL ") + report.name)
    return lines


def cmd_verify(config: Config, trials: int) -> int:
    if trials < 1:
        raise ParseError("trials must be at least 1")
    checks = [
        oracle.check_property(name, trials=trials, seed=config.seed, cap=config.cap)
        for name in oracle.CHECK_NAMES
    ]
    demos = [oracle.demo_prefix_failure(), oracle.demo_highest_bit_failure()]
    if config.format == "json":
        print(_dumps({"checks": [r.as_dict() for r in checks + demos]}))
    else:
        for r in checks:
            verdict = "PASS" if r.passed else "FAIL"
            print(f"{verdict} {r.name}: {r.trials} trials, "
                  f"{len(r.failures)} failures (seed {r.seed})")
            for failure in r.failures[:5]:
                print(f"  {failure}")
        for r in demos:
            print()
            for line in _demo_lines(r):
                print(line)
    ok = all(r.passed for r in checks + demos)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=("text", "json"), default="text",
                    help="output format")
    sp.add_argument("--node-budget", type=int, default=boolfn.DEFAULT_NODE_BUDGET,
                    metavar="N", help="maximum BDD nodes")
    sp.add_argument("--cap", type=int, default=mvl.DEFAULT_CAP,
                    metavar="N", help="maximum instances for exhaustive checks")
    sp.add_argument("--seed", type=int, default=7, metavar="N",
                    help="random seed for verification")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forestpi",
        description="Evaluate, explain, encode and verify decision-tree models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("explain", help="print the decision and its explanations")
    p.add_argument("model")
    p.add_argument("instance")
    _add_common(p)

    p = sub.add_parser("eval", help="print the class index for an instance")
    p.add_argument("model")
    p.add_argument("instance")
    _add_common(p)

    p = sub.add_parser("encode", help="dump the Boolean encoding of a model")
    p.add_argument("model")
    p.add_argument("--scheme", choices=encode.SCHEMES, default=encode.ONE_HOT)
    p.add_argument("--cnf", metavar="PATH", help="write the class implication as DIMACS CNF")
    p.add_argument("--dot", metavar="PATH", help="write the class implication BDD as DOT")
    p.add_argument("--class-index", type=int, default=1, metavar="C",
                   help="class used for --cnf and --dot")
    _add_common(p)

    p = sub.add_parser("verify", help="run randomized checks and encoding demos")
    p.add_argument("--trials", type=int, default=1000, metavar="N")
    _add_common(p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    try:
        config = Config(args.node_budget, args.cap, args.format, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.command == "explain":
            return cmd_explain(args.model, args.instance, config)
        if args.command == "eval":
            return cmd_eval(args.model, args.instance, config)
        if args.command == "encode":
            return cmd_encode(args.model, config, args.scheme,
                              args.cnf, args.dot, args.class_index)
        return cmd_verify(config, args.trials)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    raise SystemExit(main())
