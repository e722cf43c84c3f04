"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage or input error,
3 a capacity ceiling was hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .canonical import aut_order, canonical_form, canonical_key, vertex_aut_count
from .enumeration import DEFAULT_MAX_WEIGHT, semistable_graphs
from .graph import CapacityError, Digraph, GraphError, format_graph, graph_to_json, parse_graph
from .jets import ATLASES, DEFAULT_ORDER, builtin_context, evaluate_sum, invariance_test
from .opalg import OperatorSum, Q_k, R_k, compose, compose_oracle
from .stabilize import stabilize
from .star import (
    DEFAULT_MAX_ORDER,
    StarSeries,
    check_axioms,
    karabegov_check,
    star_coefficients,
    wick_dual_hC,
)
from .sums import GraphSum
from .trees import tree_table
from .weyl import WeylFunctionSpec, build_invariant, d_expand, is_weyl_function

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


class _Out:
    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def emit(self, payload, text: str) -> None:
        if self.as_json:
            json.dump(payload, self.stream, indent=2)
            self.stream.write("\n")
        else:
            self.stream.write(text.rstrip("\n") + "\n")


def _fmt(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _graph_line(G: Digraph) -> str:
    return f"{canonical_key(G).hex()}  {format_graph(G)}"


def _sum_text(S: GraphSum) -> str:
    if not S:
        return "0"
    return "\n".join(f"{str(c):>10}  {_graph_line(G)}" for G, c in S.items())


def _graph_entry(G: Digraph) -> dict:
    return {"key": canonical_key(G).hex(), "graph": graph_to_json(G), "text": format_graph(G)}


def _cx(z: complex) -> list[float]:
    return [z.real, z.imag]


def _load_sum(path: str, *, pointed: bool | None = None) -> GraphSum:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise GraphError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise GraphError(f"{path} is not valid JSON: {exc}") from exc
    if isinstance(data, dict) and "terms" in data:
        data = data["terms"]
    return GraphSum.from_json(data, pointed=pointed)


def _series(spec: str, order: int, ceiling: int = DEFAULT_MAX_ORDER) -> StarSeries:
    """``wick:C`` selects the Wick-type dual of the ``h_C`` product."""
    name, _, arg = spec.partition(":")
    if name.strip().lower() == "wick":
        try:
            C = Fraction(arg or "1")
        except ValueError as exc:
            raise GraphError(f"bad Wick parameter {arg!r}") from exc
        return wick_dual_hC(C, order, max_order=ceiling)
    return star_coefficients(WeylFunctionSpec.parse(spec), order, max_order=ceiling)


# -- subcommands ---------------------------------------------------------------

def cmd_enumerate(a, out: _Out) -> int:
    graphs = semistable_graphs(
        a.weight, pointed=a.pointed, stable=a.stable, strong=a.strong, balanced=a.balanced, max_weight=a.max_weight
    )
    out.emit([_graph_entry(G) for G in graphs], "\n".join([f"# {len(graphs)} graphs"] + [_graph_line(G) for G in graphs]))
    return EXIT_OK


def cmd_table(a, out: _Out) -> int:
    kmax, mmax = a.trees
    rows = tree_table(kmax, mmax)
    lines = ["(k,m)   t(1..k+m-2)"]
    lines += [f"({k},{m})   " + " ".join(str(t) for t in counts) for k, m, counts in rows]
    out.emit([{"k": k, "m": m, "counts": counts} for k, m, counts in rows], "\n".join(lines))
    return EXIT_OK


def cmd_stabilize(a, out: _Out) -> int:
    G = parse_graph(a.graph)
    res = stabilize(G)
    payload = {
        "input": format_graph(G),
        "stabilizable": res.stabilizable,
        "trace": list(res.contraction_trace),
        "terminal": format_graph(res.terminal),
        "stable": _graph_entry(res.stable_graph) if res.stabilizable else None,
    }
    lines = [f"input     {format_graph(G)}"]
    lines += [f"contract  edge {e}" for e in res.contraction_trace]
    lines.append(f"terminal  {format_graph(res.terminal)}")
    lines.append(f"stable    {_graph_line(res.stable_graph)}" if res.stabilizable else "not stabilizable")
    out.emit(payload, "\n".join(lines))
    return EXIT_OK


def cmd_aut(a, out: _Out) -> int:
    G = parse_graph(a.graph)
    order, vperm = aut_order(G), vertex_aut_count(G)
    payload = {"graph": _graph_entry(canonical_form(G)), "aut_order": order, "vertex_permutations": vperm}
    out.emit(payload, f"{_graph_line(canonical_form(G))}\n|Aut| = {order}  (vertex part {vperm})")
    return EXIT_OK


def cmd_weyl_check(a, out: _Out) -> int:
    spec = WeylFunctionSpec.parse(a.function)
    res = is_weyl_function(spec, a.weight, pointed=a.pointed, strong=a.strong, max_weight=a.max_weight)
    payload = {"ok": res.ok, "function": spec.name, "weight": a.weight, "witness": None}
    if res.ok:
        text = f"{spec.name} is constant on every stabilization fiber of weight {a.weight}"
    else:
        H, G = res.witness
        payload["witness"] = {
            "member": _graph_entry(H), "stable": _graph_entry(G),
            "values": [_fmt(v) for v in res.values],
        }
        text = (f"{spec.name} is not a Weyl function at weight {a.weight}:\n"
                f"  c({format_graph(H)}) = {res.values[0]}\n  c({format_graph(G)}) = {res.values[1]}")
    out.emit(payload, text)
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_d_expand(a, out: _Out) -> int:
    S = d_expand(parse_graph(a.graph), max_weight=a.max_weight)
    out.emit(S.to_json(), _sum_text(S))
    return EXIT_OK


def cmd_compose(a, out: _Out) -> int:
    op1 = OperatorSum.from_sum(_load_sum(a.op1, pointed=True))
    op2 = OperatorSum.from_sum(_load_sum(a.op2, pointed=True))
    S = compose(op1, op2, a.strong, max_weight=a.max_weight)
    out.emit(S.to_json(), _sum_text(S))
    return EXIT_OK


def cmd_op(a, out: _Out) -> int:
    if a.family == "Qk":
        S = Q_k(a.k, balanced=a.balanced, basis=a.basis, max_weight=max(a.max_weight, a.k))
    else:
        if a.balanced:
            raise GraphError("--balanced applies to the Qk family only")
        S = R_k(a.k, basis=a.basis, max_weight=max(a.max_weight, a.k))
    out.emit(S.to_json(), f"# {len(S)} terms\n{_sum_text(S)}")
    return EXIT_OK


def cmd_star(a, out: _Out) -> int:
    series = _series(a.h, a.order)
    lines = [f"# {series.name}" + (" (Wick type)" if series.wick else "")]
    for j, S in enumerate(series.orders):
        lines.append(f"## C_{j}: {len(S)} terms")
        lines.append(_sum_text(S))
    out.emit(series.to_json(), "\n".join(lines))
    return EXIT_OK


def _axiom_payload(series: StarSeries, rep) -> dict:
    return {
        "ok": rep.ok, "name": series.name, "checks": rep.checks,
        "associativity": rep.associativity, "tolerance": rep.tolerance,
        "witness": {k: (v if not isinstance(v, complex) else _cx(v)) for k, v in rep.witness.items()},
    }


def cmd_star_check(a, out: _Out) -> int:
    series = _series(a.h, a.order)
    rep = check_axioms(series, metric=a.metric, order=a.jet_order, tolerance=a.tol)
    lines = [f"{name:24s} {'ok' if v else 'FAILED'}" for name, v in rep.checks.items()]
    lines.append("associativity by order: " + " ".join(f"{x:.2e}" for x in rep.associativity))
    out.emit(_axiom_payload(series, rep), "\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_eval(a, out: _Out) -> int:
    if Path(a.target).is_file():
        S = _load_sum(a.target)
    else:
        S = GraphSum.single(parse_graph(a.target))
    ctx = builtin_context(a.metric, a.chart, a.jet_order)
    if S.pointed:
        op = OperatorSum.from_sum(S) if a.stable_basis else None
        value = op.apply(ctx, a.function) if op is not None else evaluate_sum(S, ctx, a.function)
    else:
        value = evaluate_sum(S, ctx)
    payload = {"metric": a.metric, "chart": a.chart, "value": _cx(value)}
    out.emit(payload, f"{value.real:.15g} {value.imag:+.15g}i")
    return EXIT_OK


def cmd_verify(a, out: _Out) -> int:
    if a.what == "invariance":
        spec = WeylFunctionSpec.parse(a.function)
        S = build_invariant(spec, a.weight, pointed=a.pointed, max_weight=max(a.weight, DEFAULT_MAX_WEIGHT))
        rep = invariance_test(S, a.metric, a.tol, a.jet_order)
        payload = {"ok": rep.ok, "check": "invariance", "values": [_cx(rep.value0), _cx(rep.value1)],
                   "rel_error": rep.rel_error, "tolerance": a.tol}
        text = f"chart 0: {rep.value0:.12g}\nchart 1: {rep.value1:.12g}\nrel error {rep.rel_error:.3e}"
    elif a.what == "associativity":
        series = _series(a.h, a.order)
        rep = check_axioms(series, metric=a.metric, order=a.jet_order, tolerance=a.tol)
        payload = dict(_axiom_payload(series, rep), check="associativity")
        payload["ok"] = rep.checks["associativity"]
        text = "associativity by order: " + " ".join(f"{x:.2e}" for x in rep.associativity)
    elif a.what == "karabegov":
        rep = karabegov_check(WeylFunctionSpec.parse(a.h), a.order, metric=a.metric, order=a.jet_order, tolerance=a.tol)
        payload = {"ok": rep.ok, "check": "karabegov", "values": [_cx(v) for v in rep.values],
                   "errors": rep.errors, "tolerance": a.tol}
        text = "\n".join(f"nu^{n}: {v:.12g}" for n, v in enumerate(rep.values))
    else:
        ops = {"Q": lambda k: Q_k(k), "R": lambda k: R_k(k)}
        try:
            op1, op2 = (ops[s[0].upper()](int(s[1:])) for s in (a.op1, a.op2))
        except (KeyError, ValueError, IndexError) as exc:
            raise GraphError("operators are named like Q1, Q2, R1") from exc
        ctx = builtin_context(a.metric, 0, a.jet_order)
        rep = compose_oracle(op1, op2, ctx, tolerance=a.tol)
        payload = {"ok": rep.ok, "check": "compose", "values": [_cx(rep.direct), _cx(rep.oracle)],
                   "rel_error": rep.rel_error, "tolerance": a.tol}
        text = f"direct {rep.direct:.12g}\noracle {rep.oracle:.12g}\nrel error {rep.rel_error:.3e}"
    out.emit(payload, text + ("\nok" if payload["ok"] else "\nFAILED"))
    return EXIT_OK if payload["ok"] else EXIT_FAIL


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-weight", type=int, default=DEFAULT_MAX_WEIGHT, help="enumeration ceiling")

    jet = argparse.ArgumentParser(add_help=False)
    jet.add_argument("--metric", choices=sorted(ATLASES), default="fubini_study_1d")
    jet.add_argument("--jet-order", type=int, default=16, help="Taylor truncation order")
    jet.add_argument("--tol", type=float, default=1e-8)

    p = argparse.ArgumentParser(prog="weylgraphs", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[common], help="list semistable graphs of a weight")
    s.add_argument("--weight", type=int, required=True)
    for flag in ("stable", "pointed", "strong", "balanced"):
        s.add_argument(f"--{flag}", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("table", parents=[common], help="contractible semistable tree counts")
    s.add_argument("--trees", nargs=2, type=int, metavar=("KMAX", "MMAX"), required=True)
    s.set_defaults(func=cmd_table)

    for name, func, helptext in (
        ("stabilize", cmd_stabilize, "contract a graph to its stabilization"),
        ("aut", cmd_aut, "automorphism group order"),
        ("d-expand", cmd_d_expand, "stable graph in the semistable basis"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("graph", help='graph text such as "g 2; 0->1, 1->0, 1->0"')
        s.set_defaults(func=func)

    s = sub.add_parser("weyl-check", parents=[common], help="fiber constancy of a coefficient function")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--function", required=True, help="constant:c, beta:C, det, berezin, h_C:C, indicator:<graph>")
    s.add_argument("--pointed", action="store_true")
    s.add_argument("--strong", action="store_true")
    s.set_defaults(func=cmd_weyl_check)

    s = sub.add_parser("compose", parents=[common], help="compose two operator files")
    s.add_argument("op1")
    s.add_argument("op2")
    s.add_argument("--strong", action="store_true", help="restrict to strong graphs")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("op", parents=[common], help="the Qk or Rk operator")
    s.add_argument("family", choices=("Qk", "Rk"))
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--balanced", action="store_true")
    s.add_argument("--basis", choices=("stable", "semistable"), default="stable")
    s.set_defaults(func=cmd_op)

    s = sub.add_parser("star", parents=[common], help="star product coefficients")
    s.add_argument("--h", required=True, help="Weyl function spec, or wick:C for the Wick-type dual")
    s.add_argument("--order", type=int, default=DEFAULT_MAX_ORDER)
    s.set_defaults(func=cmd_star)

    s = sub.add_parser("star-check", parents=[common, jet], help="check the star product axioms")
    s.add_argument("--h", required=True)
    s.add_argument("--order", type=int, default=DEFAULT_MAX_ORDER)
    s.set_defaults(func=cmd_star_check)

    s = sub.add_parser("eval", parents=[common, jet], help="evaluate a graph or graph-sum file at the base point")
    s.add_argument("target", help="graph text or a GraphSum JSON file")
    s.add_argument("--chart", type=int, choices=(0, 1), default=0)
    s.add_argument("--function", default="f1", choices=("f1", "f2", "f3"))
    s.add_argument("--stable-basis", action="store_true", help="read a pointed file as an operator in the stable basis")
    s.set_defaults(func=cmd_eval, jet_order=DEFAULT_ORDER)

    s = sub.add_parser("verify", parents=[common, jet], help="numeric oracles")
    s.add_argument("what", choices=("invariance", "associativity", "compose", "karabegov"))
    s.add_argument("--function", default="constant:1", help="coefficient function (invariance)")
    s.add_argument("--weight", type=int, default=2, help="invariant weight (invariance)")
    s.add_argument("--pointed", action="store_true")
    s.add_argument("--h", default="berezin", help="star product parameter (associativity, karabegov)")
    s.add_argument("--order", type=int, default=DEFAULT_MAX_ORDER)
    s.add_argument("--op1", default="Q1")
    s.add_argument("--op2", default="Q2")
    s.set_defaults(func=cmd_verify)
    return p


def run(argv: Sequence[str] | None = None, stream=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = _Out(a.json, stream)
    err = sys.stderr
    try:
        return a.func(a, out)
    except CapacityError as exc:
        print(f"capacity: {exc}", file=err)
        return EXIT_CAPACITY
    except (GraphError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
