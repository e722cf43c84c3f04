"""Covariant differential operators in the basis of stable pointed graphs.

An :class:`OperatorSum` stores, for each stable pointed graph ``Z``, the raw
coefficient ``a(Z)`` of the covariant operator ``D(Z)`` (``Z`` expanded over
its stabilization fiber, see :func:`weylgraphs.weyl.d_expand`).  In terms of
a fiber-constant coefficient function ``c`` the same operator reads
``a(Z) = c(Z) (-1)^{|V(Z)|} / |Aut Z|``; :meth:`OperatorSum.from_weyl_coefficients`
and :meth:`OperatorSum.weyl_coefficients` convert between the two.

Composition.  Let ``Z`` be stable, ``S`` a vertex set containing ``•`` and
``F`` a set of edges with both ends in ``S``; ``Γ = (S, F)``, and ``Z/Γ``
collapses ``S`` onto ``•`` (edges of ``Z`` inside ``S`` but not in ``F`` become
loops at ``•``).  Then

    a(Z) = 1/|Aut Z| * sum_{Γ GS} (-1)^{|V(Γ)| - |V(Γ^s)|}
           * a1(Z/Γ) |Aut(Z/Γ)| * a2(Γ^s) |Aut(Γ^s)|.

The sum runs over labelled pairs ``(S, F)``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Mapping

from .canonical import aut_order, canonical_key, graph_from_key
from .enumeration import DEFAULT_MAX_WEIGHT, semistable_graphs, stable_graphs
from .graph import CapacityError, Digraph, GraphError, PointedGraph, is_stable, is_strong, weight
from .jets import JetContext, TaylorJet, evaluate_pointed, pointed_jet, rel_diff
from .stabilize import gs_stabilize, is_gs
from .sums import GraphSum, Rational, as_fraction
from .weyl import det_A_minus_I, d_expand

__all__ = [
    "OperatorSum",
    "identity",
    "quotient",
    "gs_subgraphs",
    "compose",
    "R_k",
    "Q_k",
    "englis_generators",
    "ComposeReport",
    "compose_oracle",
]


class OperatorSum(GraphSum):
    """Raw coefficients of covariant operators on stable pointed graphs."""

    __slots__ = ()

    def __init__(self, terms: Mapping[bytes, Rational] | None = None, *, pointed: bool = True):
        if not pointed:
            raise GraphError("operators live on pointed graphs")
        super().__init__(terms, pointed=True)
        for key in self:
            if not is_stable(graph_from_key(key)):
                raise GraphError(f"{graph_from_key(key)} is not a stable pointed graph")

    @classmethod
    def from_sum(cls, S: GraphSum) -> "OperatorSum":
        return cls(S.terms())

    @classmethod
    def from_weyl_coefficients(cls, c: Mapping[Digraph, Rational]) -> "OperatorSum":
        """Build from values ``c(Z)`` in the ``(-1)^{|V|} / |Aut|`` normalisation."""
        terms: dict[bytes, Fraction] = {}
        for Z, v in c.items():
            sign = -1 if Z.n % 2 else 1
            key = canonical_key(Z)
            terms[key] = terms.get(key, Fraction(0)) + as_fraction(v) * sign / aut_order(Z)
        return cls(terms)

    def weyl_coefficients(self) -> dict[bytes, Fraction]:
        out = {}
        for Z, a in self.items():
            sign = -1 if Z.n % 2 else 1
            out[canonical_key(Z)] = a * sign * aut_order(Z)
        return out

    def semistable_expansion(self, *, max_weight: int = DEFAULT_MAX_WEIGHT) -> GraphSum:
        """The operator written over semistable pointed graphs (literal partial derivatives)."""
        total = GraphSum(pointed=True)
        for Z, a in self.items():
            total = total + d_expand(Z, max_weight=max_weight) * a
        return total

    def apply(self, ctx: JetContext, f: str | TaylorJet = "f1") -> complex:
        """Value of the operator applied to ``f`` at the base point."""
        total = 0j
        for H, c in self.semistable_expansion(max_weight=max(self.weights, default=0)).items():
            total += float(c) * evaluate_pointed(H, ctx, f)
        return total

    def apply_jet(self, ctx: JetContext, f: str | TaylorJet = "f1") -> TaylorJet:
        """The operator applied to ``f`` as a function near the base point."""
        total = TaylorJet.constant(0.0, ctx.nvars, ctx.order)
        for H, c in self.semistable_expansion(max_weight=max(self.weights, default=0)).items():
            total = total + pointed_jet(H, ctx, f) * float(c)
        return total


def identity() -> OperatorSum:
    return OperatorSum({canonical_key(PointedGraph(1)): 1})


def _subgraph(Z: Digraph, S: tuple[int, ...], F: tuple[int, ...]) -> PointedGraph:
    where = {v: i for i, v in enumerate(S)}
    return PointedGraph(len(S), tuple((where[Z.edges[e][0]], where[Z.edges[e][1]]) for e in F))


def quotient(Z: Digraph, S: tuple[int, ...], F: tuple[int, ...]) -> PointedGraph:
    """Collapse the vertex set ``S`` (containing 0) onto ``•``, deleting the edges ``F``."""
    if 0 not in S:
        raise GraphError("the subgraph must contain the distinguished vertex")
    rest = [v for v in range(Z.n) if v not in S]
    where = {v: 0 for v in S}
    where.update({v: i + 1 for i, v in enumerate(rest)})
    drop = set(F)
    edges = tuple((where[t], where[h]) for e, (t, h) in enumerate(Z.edges) if e not in drop)
    return PointedGraph(len(rest) + 1, edges)


def _pairs(Z: Digraph) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    others = list(range(1, Z.n))
    for r in range(len(others) + 1):
        for extra in combinations(others, r):
            S = (0,) + extra
            inside = [e for e, (t, h) in enumerate(Z.edges) if t in S and h in S]
            for s in range(len(inside) + 1):
                for F in combinations(inside, s):
                    yield S, F


def gs_subgraphs(Z: Digraph, *, strong: bool = False) -> list[tuple[PointedGraph, PointedGraph, tuple, tuple]]:
    """All labelled ``(Γ, Z/Γ, S, F)`` with ``Γ`` and ``Z/Γ`` GS (or both strong)."""
    if not Z.pointed:
        raise GraphError("expected a pointed graph")
    if not is_gs(Z):
        raise GraphError(f"{Z} is not a GS pointed graph")
    out = []
    for S, F in _pairs(Z):
        G = _subgraph(Z, S, F)
        if strong and not is_strong(G):
            continue
        if not is_gs(G):
            continue
        Q = quotient(Z, S, F)
        if not is_gs(Q):
            continue
        out.append((G, Q, S, F))
    return out


@lru_cache(maxsize=None)
def _structure(key: bytes, strong: bool) -> tuple[tuple[bytes, bytes, int, int], ...]:
    """Per labelled GS pair: (key of Z/Γ, key of Γ^s, sign, weight of Γ)."""
    Z = graph_from_key(key)
    rows = []
    for G, Q, _, _ in gs_subgraphs(Z, strong=strong):
        res = gs_stabilize(G)
        Gs = res.stable_graph
        sign = -1 if (G.n - Gs.n) % 2 else 1
        rows.append((canonical_key(Q), canonical_key(Gs), sign, weight(Gs)))
    return tuple(rows)


def compose(
    op1: OperatorSum, op2: OperatorSum, strong_only: bool = False, *, max_weight: int = DEFAULT_MAX_WEIGHT
) -> OperatorSum:
    """The operator ``op1 ∘ op2`` in the stable basis."""
    if not (isinstance(op1, OperatorSum) and isinstance(op2, OperatorSum)):
        raise GraphError("compose expects OperatorSum arguments")
    if not op1 or not op2:
        return OperatorSum()
    targets = sorted({w1 + w2 for w1 in op1.weights for w2 in op2.weights})
    if targets[-1] > max_weight:
        raise CapacityError(f"composition reaches weight {targets[-1]} above the ceiling {max_weight}")
    t1, t2 = op1.terms(), op2.terms()
    scaled1 = {k: c * aut_order(graph_from_key(k)) for k, c in t1.items()}
    scaled2 = {k: c * aut_order(graph_from_key(k)) for k, c in t2.items()}
    result: dict[bytes, Fraction] = {}
    for w in targets:
        for Z in stable_graphs(w, pointed=True, strong=strong_only, max_weight=max_weight):
            key = canonical_key(Z)
            total = Fraction(0)
            for qkey, gkey, sign, _ in _structure(key, strong_only):
                a1 = scaled1.get(qkey)
                if a1 is None:
                    continue
                a2 = scaled2.get(gkey)
                if a2 is None:
                    continue
                total += sign * a1 * a2
            if total:
                result[key] = total / aut_order(Z)
    return OperatorSum(result)


def _family(k: int, strong: bool, balanced: bool, basis: str, max_weight: int) -> GraphSum:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if basis == "stable":
        graphs = stable_graphs(k, pointed=True, strong=strong, balanced=balanced, max_weight=max_weight)
        cls = OperatorSum
    elif basis == "semistable":
        graphs = semistable_graphs(k, pointed=True, strong=strong, balanced=balanced, max_weight=max_weight)
        cls = None
    else:
        raise GraphError(f"unknown basis {basis!r}")
    terms = {}
    for G in graphs:
        d = det_A_minus_I(G.minus())
        if d:
            terms[canonical_key(G)] = Fraction(d, aut_order(G))
    return cls(terms) if cls else GraphSum(terms, pointed=True)


def R_k(k: int, *, basis: str = "stable", max_weight: int = DEFAULT_MAX_WEIGHT) -> GraphSum:
    """``sum det(A(Γ₋) - I) / |Aut Γ| * Γ`` over pointed graphs of weight ``k``.

    ``basis="stable"`` returns the :class:`OperatorSum`; ``"semistable"`` the
    literal sum over semistable pointed graphs.
    """
    return _family(k, False, False, basis, max_weight)


def Q_k(k: int, *, balanced: bool = False, basis: str = "stable", max_weight: int = DEFAULT_MAX_WEIGHT) -> GraphSum:
    """As :func:`R_k` restricted to strong (and optionally balanced) graphs."""
    return _family(k, True, balanced, basis, max_weight)


def englis_generators(k_list, *, max_weight: int = DEFAULT_MAX_WEIGHT) -> list[OperatorSum]:
    out = []
    for k in k_list:
        if k % 2 != 1:
            raise GraphError(f"generator index {k} must be odd")
        out.append(Q_k(k, balanced=True, max_weight=max_weight))
    return out


class ComposeReport:
    def __init__(self, direct: complex, oracle: complex, tolerance: float):
        self.direct = direct
        self.oracle = oracle
        self.rel_error = rel_diff(direct, oracle)
        self.tolerance = tolerance
        self.ok = self.rel_error <= tolerance

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        return f"ComposeReport(ok={self.ok}, rel_error={self.rel_error:.3e})"


def compose_oracle(
    op1: OperatorSum, op2: OperatorSum, ctx: JetContext, *, f: str = "f1", tolerance: float = 1e-8,
    strong_only: bool = False,
) -> ComposeReport:
    """Compare ``compose(op1, op2)`` with applying ``op2`` to a jet and then ``op1``."""
    inner = op2.apply_jet(ctx, f)
    oracle = op1.apply(ctx, inner)
    direct = compose(op1, op2, strong_only).apply(ctx, f)
    return ComposeReport(direct, oracle, tolerance)
