"""Star products with separation of variables built from a Weyl-function parameter.

For a parameter ``h`` (a :class:`WeylFunctionSpec` on strong stable graphs
together with its value on the one-loop vertex) the anti-Wick star product is

    f1 ⋆ f2 = sum_Γ ν^{w(Γ)} / |Aut Γ| * prod_{G in SCC(Γ₋)} α_h(G) * Γ^op(f1, f2)

over strong semistable pointed graphs.  ``Γ^op(f1, f2)`` puts the
antiholomorphic derivatives of the in-edges at ``•`` on ``f1`` and the
holomorphic ones of the out-edges on ``f2``.  With the Poisson bracket
``{f1, f2} = i g^{k lbar} (d_k f1 dbar_l f2 - d_k f2 dbar_l f1)`` this gives
``C_1(f1, f2) - C_1(f2, f1) = i {f1, f2}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from .canonical import aut_order, canonical_key
from .enumeration import DEFAULT_MAX_WEIGHT, semistable_graphs
from .graph import CapacityError, Digraph, GraphError, PointedGraph, is_strong, scc
from .jets import JetContext, TaylorJet, builtin_context, evaluate_pointed, graph_jet, pointed_jet, rel_diff
from .stabilize import gs_stabilize
from .sums import GraphSum, Rational, as_fraction
from .weyl import WeylFunctionSpec

__all__ = [
    "DEFAULT_MAX_ORDER",
    "alpha",
    "StarSeries",
    "star_coefficients",
    "star_hC",
    "wick_dual_hC",
    "KarabegovForm",
    "karabegov_form",
    "AxiomReport",
    "check_axioms",
    "associativity_defect",
    "KarabegovReport",
    "karabegov_check",
    "POISSON_GRAPH",
]

DEFAULT_MAX_ORDER = 3

#: ``•`` with one loop: the bidifferential operator g^{k lbar} dbar_l f1 d_k f2
POISSON_GRAPH = PointedGraph(1, ((0, 0),))
_POINT = PointedGraph(1)


def _is_cycle(G: Digraph) -> bool:
    return G.n >= 1 and all(G.indeg[v] == 1 and G.outdeg[v] == 1 for v in range(G.n)) and is_strong(G)


def alpha(h: WeylFunctionSpec, G: Digraph) -> Fraction:
    """``α_h`` on a strong plain digraph."""
    if G.pointed or not is_strong(G):
        raise GraphError("α_h is defined on strong plain digraphs")
    if G.n == 1 and not G.edges:
        return Fraction(-1)
    if _is_cycle(G):
        return (-1) ** (G.n + 1) * h.cycle_value
    res = gs_stabilize(G)
    if not res.stabilizable:
        raise GraphError(f"{G} is strong but not generalized stabilizable")
    Gs = res.stable_graph
    return (-1) ** (G.n - Gs.n) * h(Gs)


def _components(G: PointedGraph) -> list[Digraph]:
    """Induced subgraphs of ``Γ₋`` on its strongly connected components."""
    M = G.minus()
    out = []
    for comp in scc(M):
        where = {v: i for i, v in enumerate(comp)}
        out.append(Digraph(len(comp), tuple((where[t], where[h]) for t, h in M.edges if t in where and h in where)))
    return out


def _check_order(N: int, max_order: int) -> None:
    if N < 0:
        raise ValueError("order must be nonnegative")
    if N > max_order:
        raise CapacityError(f"order {N} exceeds the configured ceiling {max_order}")


@dataclass
class StarSeries:
    """Bidifferential operators ``C_j`` as pointed graph sums, ``j = 0..N``.

    ``wick=True`` means ``C_j(f1, f2)`` evaluates each graph as ``Γ^op(f2, f1)``.
    """

    orders: list[GraphSum]
    name: str
    wick: bool = False

    @property
    def N(self) -> int:
        return len(self.orders) - 1

    def __getitem__(self, j: int) -> GraphSum:
        return self.orders[j]

    def _args(self, f1, f2):
        return (f2, f1) if self.wick else (f1, f2)

    def value(self, j: int, ctx: JetContext, f1, f2) -> complex:
        a, b = self._args(f1, f2)
        return sum((float(c) * evaluate_pointed(G, ctx, a, b) for G, c in self.orders[j].items()), 0j)

    def jet(self, j: int, ctx: JetContext, f1, f2) -> TaylorJet:
        a, b = self._args(f1, f2)
        total = TaylorJet.constant(0.0, ctx.nvars, ctx.order)
        for G, c in self.orders[j].items():
            total = total + pointed_jet(G, ctx, a, b) * float(c)
        return total

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "type": "wick" if self.wick else "anti-wick",
            "orders": [S.to_json() for S in self.orders],
        }

    @classmethod
    def from_json(cls, data: dict) -> "StarSeries":
        return cls(
            [GraphSum.from_json(o, pointed=True) for o in data["orders"]],
            data["name"],
            data["type"] == "wick",
        )


def _graphs(j: int, max_order: int) -> list[Digraph]:
    return semistable_graphs(j, pointed=True, strong=True, max_weight=max(max_order, j))


def star_coefficients(h: WeylFunctionSpec, N: int = DEFAULT_MAX_ORDER, *, max_order: int = DEFAULT_MAX_ORDER) -> StarSeries:
    _check_order(N, max_order)
    orders = []
    for j in range(N + 1):
        terms = {}
        for G in _graphs(j, max_order):
            c = prod((alpha(h, K) for K in _components(G)), start=Fraction(1)) / aut_order(G)
            if c:
                terms[canonical_key(G)] = c
        orders.append(GraphSum(terms, pointed=True))
    return StarSeries(orders, f"h={h.name}")


def star_hC(C: Rational, N: int = DEFAULT_MAX_ORDER, *, max_order: int = DEFAULT_MAX_ORDER) -> StarSeries:
    S = star_coefficients(WeylFunctionSpec.h_C(C), N, max_order=max_order)
    S.name = f"h_C:{as_fraction(C)}"
    return S


def _wick_admissible(G: PointedGraph) -> tuple[bool, int]:
    cycles = 0
    for K in _components(G):
        if K.n == 1 and not K.edges:
            continue
        if _is_cycle(K):
            cycles += 1
            continue
        return False, 0
    return True, cycles


def wick_dual_hC(
    C: Rational, N: int = DEFAULT_MAX_ORDER, *, strong: bool = True, max_order: int = DEFAULT_MAX_ORDER
) -> StarSeries:
    """Wick-type dual: ``(-1)^{|E|} C^ℓ / |Aut Γ|`` over graphs whose ``Γ₋`` components
    are loopless points or directed cycles (``ℓ`` of them).

    ``strong=False`` takes every semistable pointed graph instead of the
    strong ones; that variant is kept only for comparison.
    """
    _check_order(N, max_order)
    C = as_fraction(C)
    orders = []
    for j in range(N + 1):
        graphs = semistable_graphs(j, pointed=True, strong=strong, max_weight=max(max_order, j))
        terms = {}
        for G in graphs:
            ok, ell = _wick_admissible(G)
            if not ok:
                continue
            c = Fraction((-1) ** len(G.edges)) * C**ell / aut_order(G)
            if c:
                terms[canonical_key(G)] = c
        orders.append(GraphSum(terms, pointed=True))
    return StarSeries(orders, f"wick_dual_h_C:{C}", wick=True)


@dataclass
class KarabegovForm:
    """``(1/ν) ω₋₁ + ricci_coefficient * Ric - i ∂∂̄ sum_w ν^w graphs[w]``."""

    ricci_coefficient: Fraction
    graphs: dict[int, GraphSum]
    name: str

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "leading": "omega/nu",
            "ricci_coefficient": f"{self.ricci_coefficient.numerator}/{self.ricci_coefficient.denominator}",
            "graphs": {str(w): S.to_json() for w, S in sorted(self.graphs.items())},
        }


def karabegov_form(h: WeylFunctionSpec, N: int = DEFAULT_MAX_ORDER, *, max_order: int = DEFAULT_MAX_ORDER) -> KarabegovForm:
    _check_order(N, max_order)
    graphs = {}
    for w in range(1, N + 1):
        items = [
            (G, alpha(h, G) / aut_order(G))
            for G in semistable_graphs(w, strong=True, max_weight=max(max_order, w))
        ]
        graphs[w] = GraphSum.from_graphs(items, pointed=False)
    return KarabegovForm(-h.cycle_value, graphs, f"h={h.name}")


# -- verification -------------------------------------------------------------

@dataclass
class AxiomReport:
    ok: bool
    checks: dict[str, bool]
    associativity: list[float] = field(default_factory=list)
    tolerance: float = 1e-8
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def associativity_defect(series: StarSeries, ctx: JetContext, N: int | None = None,
                         functions: Sequence[str] = ("f1", "f2", "f3")) -> list[float]:
    """Relative mismatch of ``(f1⋆f2)⋆f3`` and ``f1⋆(f2⋆f3)`` at each order ``ν^0..ν^N``."""
    N = series.N if N is None else N
    f1, f2, f3 = (ctx.function(f) for f in functions)
    left_inner = [series.jet(j, ctx, f1, f2) for j in range(N + 1)]
    right_inner = [series.jet(j, ctx, f2, f3) for j in range(N + 1)]
    scale = abs(f1.value * f2.value * f3.value)
    out = []
    for n in range(N + 1):
        L = sum((series.value(i, ctx, left_inner[n - i], f3) for i in range(n + 1)), 0j)
        R = sum((series.value(i, ctx, f1, right_inner[n - i]) for i in range(n + 1)), 0j)
        out.append(abs(L - R) / max(abs(L), abs(R), 1e-12 * scale))
    return out


def check_axioms(
    series: StarSeries, N: int | None = None, *, metric: str = "fubini_study_1d", order: int = 16,
    tolerance: float = 1e-8,
) -> AxiomReport:
    N = series.N if N is None else N
    checks: dict[str, bool] = {}
    witness: dict = {}
    checks["C0_is_product"] = series[0] == GraphSum.single(_POINT)
    sign = -1 if series.wick else 1
    # the Wick dual evaluates Γ^op(f2, f1); antisymmetrising either way leaves P1 ± P1^swap
    checks["C1_antisymmetry"] = series[1] - GraphSum.single(POISSON_GRAPH, sign) == GraphSum(pointed=True) if N >= 1 else True
    ctx = builtin_context(metric, 0, order)
    if N >= 1:
        anti = series.value(1, ctx, "f1", "f2") - series.value(1, ctx, "f2", "f1")
        f1, f2 = ctx.function("f1"), ctx.function("f2")
        gi = ctx.ginv
        n = ctx.dim
        pb = 0j
        for k in range(n):
            for l in range(n):
                d1 = f1.derivative_value(ctx.alpha([k], []))
                db2 = f2.derivative_value(ctx.alpha([], [l]))
                d2 = f2.derivative_value(ctx.alpha([k], []))
                db1 = f1.derivative_value(ctx.alpha([], [l]))
                pb += 1j * gi[k, l] * (d1 * db2 - d2 * db1)
        err = rel_diff(anti, 1j * pb)
        checks["C1_poisson_numeric"] = bool(err <= tolerance)
        witness["C1_poisson_rel_error"] = err
    sep = True
    for j in range(1, N + 1):
        for G, _ in series[j].items():
            if G.indeg[0] < 1 or G.outdeg[0] < 1:
                sep = False
                witness.setdefault("separation_violations", []).append(str(G))
    checks["separation_of_variables"] = sep
    defects = associativity_defect(series, ctx, N)
    checks["associativity"] = bool(max(defects) <= tolerance)
    if not checks["associativity"]:
        witness["associativity_by_order"] = defects
    return AxiomReport(all(checks.values()), checks, defects, tolerance, witness)


@dataclass
class KarabegovReport:
    ok: bool
    values: list[complex]
    errors: list[float]
    tolerance: float

    def __bool__(self) -> bool:
        return self.ok


def karabegov_check(
    h: WeylFunctionSpec, N: int = 1, *, metric: str = "fubini_study_1d", order: int = 16, tolerance: float = 1e-8,
) -> KarabegovReport:
    """Check ``u ⋆ z - z u = 1`` order by order through ``ν^N`` (dimension one).

    ``u = (1/ν) dΦ - h(⟲) d log g - sum_{w >= 1} ν^w sum_G α_h(G)/|Aut G| dG``
    with ``d = d/dz``; the ``ν^{-1}`` coefficient vanishes identically.
    """
    if N + 1 > DEFAULT_MAX_WEIGHT:
        raise CapacityError(f"order {N} needs star coefficients above the weight ceiling {DEFAULT_MAX_WEIGHT}")
    ctx = builtin_context(metric, 0, order)
    if ctx.dim != 1:
        raise GraphError("karabegov_check is implemented in dimension one")
    series = star_coefficients(h, N + 1, max_order=max(DEFAULT_MAX_ORDER, N + 1))
    form = karabegov_form(h, N, max_order=max(DEFAULT_MAX_ORDER, N)) if N >= 1 else None
    z = ctx.coordinates[0][0]
    g = ctx.phi.partial(ctx.alpha([0], [0]))
    u = {-1: ctx.phi.deriv(0), 0: g.log().deriv(0) * float(-h.cycle_value)}
    for w in range(1, N + 1):
        acc = TaylorJet.constant(0.0, ctx.nvars, ctx.order)
        for G, c in form.graphs[w].items():
            acc = acc + graph_jet(G, ctx).deriv(0) * float(-c)
        u[w] = acc
    values, errors = [], []
    for n in range(0, N + 1):
        val = sum((series.value(j, ctx, u[n - j], z) for j in range(1, n + 2)), 0j)
        target = 1.0 if n == 0 else 0.0
        values.append(val)
        errors.append(abs(val - target))
    return KarabegovReport(bool(max(errors) <= tolerance), values, errors, tolerance)
