"""Command-line front end.

Exit status: 0 when every checked property holds, 1 when a violation is
found, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .catalog import CATALOG_NAMES, lookup
from .errors import SimAlgebraError
from .measures import DEFAULT_TOL, DomainSample, parse_domain
from .operators import check_operator_axioms, compare_restrictiveness, default_grid, parse_operator
from .transforms import apply_equivalence, conjugate_operator, dualize_measure, parse_map
from .verify import PROPERTIES, full_report, value_table

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

DEFAULT_TRIPLE_CAP = 20_000_000
DEFAULT_DOMAINS = {"real": "real:0:1:0.25", "int": "int:-3:3", "tree": "trees:2"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    measure: str
    domain: Optional[str] = None
    op: Optional[str] = None
    transform: Optional[str] = None
    equiv: Optional[str] = None
    tol: float = DEFAULT_TOL
    format: str = "text"
    cap_triples: int = DEFAULT_TRIPLE_CAP
    properties: Optional[list] = None

    def __post_init__(self):
        if self.cap_triples <= 0:
            raise UsageError("--cap-triples must be positive")
        if not self.tol >= 0:
            raise UsageError("--tol must be non-negative")


def _emit(payload: dict, text: str, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _domain_for(entry, spec: Optional[str]) -> DomainSample:
    spec = spec or DEFAULT_DOMAINS[entry.elements]
    dom = parse_domain(spec)
    is_tree_domain = spec.startswith("trees:")
    if is_tree_domain != (entry.elements == "tree"):
        raise UsageError(f"domain {spec!r} does not match the elements of {entry.measure.name!r}")
    return dom


def _resolve(config: RunConfig):
    entry = lookup(config.measure)
    dom = _domain_for(entry, config.domain)
    m = entry.measure
    op = parse_operator(config.op) if config.op else entry.documented_operator
    if config.equiv:
        f = parse_map(config.equiv)
        if not f.increasing:
            raise UsageError(f"--equiv needs an increasing map, {f.name!r} is decreasing")
        m = apply_equivalence(m, f)
        op = conjugate_operator(op, f) if op is not None else None
    if config.transform:
        f = parse_map(config.transform)
        if f.increasing:
            raise UsageError(f"--transform needs a decreasing map, {f.name!r} is increasing")
        triple = dualize_measure(m, f, op)
        m, op = (triple.d, triple.d_operator) if m.is_similarity else (triple.s, triple.s_operator)
    return entry, m, op, dom


def cmd_verify(config: RunConfig) -> int:
    entry, m, op, dom = _resolve(config)
    if len(dom) ** 3 > config.cap_triples and op is not None:
        raise UsageError(f"{len(dom)} elements give {len(dom) ** 3} triples, above --cap-triples")
    report = full_report(m, dom, op, config.tol, config.properties)
    _emit(report.to_dict(), report.describe(), config.format)
    return EXIT_OK if report.holds else EXIT_VIOLATION


def _fmt_value(v: float) -> str:
    return f"{v:.6g}"


def _table_text(labels: Sequence, table: np.ndarray) -> str:
    head = "          " + " ".join(f"{str(l):>10}" for l in labels)
    rows = [f"{str(l):>10}" + " ".join(f"{_fmt_value(v):>10}" for v in row) for l, row in zip(labels, table)]
    return "\n".join([head, *rows])


def cmd_dualize(config: RunConfig, roundtrip: bool = False) -> int:
    if not config.transform:
        raise UsageError("dualize needs --transform")
    entry = lookup(config.measure)
    dom = _domain_for(entry, config.domain)
    f = parse_map(config.transform)
    if f.increasing:
        raise UsageError(f"dualize needs a decreasing map, {f.name!r} is increasing")
    op = parse_operator(config.op) if config.op else entry.documented_operator
    triple = dualize_measure(entry.measure, f, op)
    dual, dual_op = (triple.d, triple.d_operator) if entry.measure.is_similarity else (triple.s, triple.s_operator)

    values = value_table(dual, dom)
    labels = [str(x) for x in dom]
    payload = {
        "dual": {"name": dual.name, "kind": dual.kind.value, "codomain": str(dual.codomain),
                 "elements": labels, "values": values.tolist()},
    }
    text = [f"dual {dual.kind.value} {dual.name} on {dual.codomain}", _table_text(labels, values)]

    report = None
    if dual_op is not None:
        grid = default_grid(dual_op, points=5)
        g = np.array(grid)
        op_table = dual_op.on_grid(g[:, None], g[None, :])
        payload["operator"] = {"name": dual_op.name, "domain": str(dual_op.domain),
                               "null_element": dual_op.null_element, "grid": grid, "table": op_table.tolist()}
        text += [f"transferred operator {dual_op.name} on {dual_op.domain}, e = {dual_op.null_element:g}",
                 _table_text([_fmt_value(v) for v in grid], op_table)]
        report = full_report(dual, dom, dual_op, config.tol, ["transitivity"])
        payload["verification"] = report.to_dict()
        text.append(report.describe())

    if roundtrip:
        back = dualize_measure(dual, f.inverted())
        original = back.s if entry.measure.is_similarity else back.d
        deviation = float(np.max(np.abs(value_table(original, dom) - value_table(entry.measure, dom))))
        payload["roundtrip_max_deviation"] = deviation
        text.append(f"round trip through {f.inverted().name}: max deviation {deviation:.3g}")

    _emit(payload, "\n".join(text), config.format)
    return EXIT_OK if report is None or report.holds else EXIT_VIOLATION


def cmd_tree(args) -> int:
    from . import trees

    fmt = args.format
    if args.tree_command == "code":
        t = trees.parse_tree(args.tree)
        c = trees.encode(t)
        _emit({"tree": str(t), "code": c.value, "binary": c.binary, "height": c.height_used},
              f"{c.value} {c.binary}".rstrip(), fmt)
        return EXIT_OK
    if args.tree_command == "dissim":
        a, b = trees.parse_tree(args.a), trees.parse_tree(args.b)
        v = trees.tree_dissimilarity(a, b)
        _emit({"a": str(a), "b": str(b), "value": str(v), "float": float(v)}, str(v), fmt)
        return EXIT_OK
    if args.tree_command == "verify":
        report = trees.verify_product_transitivity(args.max_height, args.cap_triples)
        payload = {
            "max_height": report.max_height, "trees": report.tree_count, "checked": report.checked,
            "holds": report.holds, "empty_case_counts": {str(k): v for k, v in report.empty_case_counts.items()},
            "violations": [[str(a), str(c), str(b), str(l), str(r)] for a, c, b, l, r in report.violations],
        }
        _emit(payload, report.describe(), fmt)
        return EXIT_OK if report.holds else EXIT_VIOLATION
    if args.tree_command == "metricize":
        if trees.count_trees(args.max_height) ** 3 > args.cap_triples:
            raise UsageError("tree count too large for --cap-triples")
        result = trees.metricize(args.max_height, args.tol)
        dom = trees.tree_sample(args.max_height)
        labels = [str(t) for t in dom]
        values = value_table(result.measure, dom)
        payload = {"operator": result.operator.name, "elements": labels, "values": values.tolist(),
                   "reports": [r.to_dict() for r in result.reports], "holds": result.holds}
        text = [f"log-space tree dissimilarity over {len(dom)} trees, operator {result.operator.name}"]
        if len(dom) <= 8:
            text.append(_table_text(labels, values))
        text += [r.describe() for r in result.reports]
        _emit(payload, "\n".join(text), fmt)
        return EXIT_OK if result.holds else EXIT_VIOLATION
    if args.tree_command == "dmax":
        r = trees.d_max_with_cap(args.max_height)
        payload = {"height_cap": r.height_cap, "formula_value": r.formula_value,
                   "enumerated_value": int(r.enumerated_value), "attained_by": [str(t) for t in r.attained_by],
                   "discrepancy": r.discrepancy}
        _emit(payload, r.describe(), fmt)
        return EXIT_OK
    raise UsageError("missing tree subcommand")


def cmd_axioms(args) -> int:
    op = parse_operator(args.op)
    grid = [float(v) for v in args.grid.split(",")] if args.grid else default_grid(op)
    report = check_operator_axioms(op, grid, args.tol)
    payload = {
        "operator": report.operator, "grid": list(report.grid), "tolerance": report.tolerance,
        "holds": report.axioms_hold, "failing": report.failing,
        "results": {k: {"holds": r.holds, "checked": r.checked, "counterexample": r.counterexample,
                        "values": r.values} for k, r in report.results.items()},
    }
    _emit(payload, report.describe(), args.format)
    return EXIT_OK if report.holds else EXIT_VIOLATION


def cmd_compare(args) -> int:
    op1, op2 = parse_operator(args.op), parse_operator(args.other)
    grid = [float(v) for v in args.grid.split(",")] if args.grid else default_grid(op1)
    result = compare_restrictiveness(op1, op2, grid, args.tol)
    payload = {"first": result.first, "second": result.second, "relation": result.relation.value,
               "stricter_at": result.stricter_at, "looser_at": result.looser_at}
    _emit(payload, str(result), args.format)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="simalgebra", description="Verify and transform similarity and dissimilarity measures.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, measure=True):
        if measure:
            sp.add_argument("--measure", required=True, help=f"catalog measure: {', '.join(CATALOG_NAMES)}")
            sp.add_argument("--domain", help="real:<lo>:<hi>:<step> | int:<lo>:<hi> | trees:<maxHeight>")
            sp.add_argument("--op", help="min | max | bsum | sum | prodshift | prod1inf | sqrtsq | luk:<alpha>")
            sp.add_argument("--transform", help="decreasing map: lin:a:b | pow:a | oneminus:alpha")
            sp.add_argument("--equiv", help="increasing map: lin:a:b | pow:a | explog | log1p | log | ratk:k")
            sp.add_argument("--cap-triples", type=int, default=DEFAULT_TRIPLE_CAP)
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    v = sub.add_parser("verify", help="run property checks on a measure")
    common(v)
    v.add_argument("--properties", help=f"comma-separated subset of: {', '.join(PROPERTIES)}")

    d = sub.add_parser("dualize", help="dualise a measure through a decreasing map")
    common(d)
    d.add_argument("--roundtrip", action="store_true", help="dualise back and report the deviation")

    t = sub.add_parser("tree", help="tree coding and the tree dissimilarity")
    tsub = t.add_subparsers(dest="tree_command", parser_class=_Parser)
    tc = tsub.add_parser("code")
    tc.add_argument("tree")
    common(tc, measure=False)
    td = tsub.add_parser("dissim")
    td.add_argument("a")
    td.add_argument("b")
    common(td, measure=False)
    for name in ("verify", "metricize", "dmax"):
        tv = tsub.add_parser(name)
        tv.add_argument("--max-height", type=int, default=2)
        tv.add_argument("--cap-triples", type=int, default=DEFAULT_TRIPLE_CAP)
        common(tv, measure=False)

    a = sub.add_parser("axioms", help="check the operator axioms on a grid")
    a.add_argument("--op", required=True)
    a.add_argument("--grid", help="comma-separated values (default: operator's default grid)")
    common(a, measure=False)

    c = sub.add_parser("compare", help="compare the restrictiveness of two operators")
    c.add_argument("--op", required=True)
    c.add_argument("--other", required=True)
    c.add_argument("--grid")
    common(c, measure=False)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command")
        if args.command in ("verify", "dualize"):
            props = args.properties.split(",") if getattr(args, "properties", None) else None
            if props and any(p not in PROPERTIES for p in props):
                raise UsageError(f"unknown property in --properties {args.properties!r}")
            config = RunConfig(args.measure, args.domain, args.op, args.transform, args.equiv,
                               args.tol, args.format, args.cap_triples, props)
            if args.command == "verify":
                return cmd_verify(config)
            return cmd_dualize(config, args.roundtrip)
        if args.command == "tree":
            if args.tree_command is None:
                raise UsageError("missing tree subcommand")
            if getattr(args, "max_height", 1) < 1:
                raise UsageError("--max-height must be at least 1")
            return cmd_tree(args)
        if args.command == "axioms":
            return cmd_axioms(args)
        return cmd_compare(args)
    except (UsageError, SimAlgebraError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
