"""Weyl functions, the fiber-constancy criterion and expansions in the semistable basis.

Conventions used throughout:

* A coefficient function ``c`` is turned into the combination
  ``sum_H c(H) (-1)^{|V(H)|} / |Aut H| * H`` over stabilizable semistable
  graphs of a fixed weight.  For pointed graphs ``|V|`` includes ``•``.
* ``d_expand(G)`` is the expansion of a stable graph in the semistable basis,
  ``sum_H (-1)^{|V(H)|-|V(G)|} |Aut G| / |Aut H| * H`` over the fiber of ``G``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Mapping

from .canonical import aut_order, canonical_key, graph_from_key
from .enumeration import DEFAULT_MAX_WEIGHT, semistable_graphs, stabilization_fibers
from .graph import (
    CapacityError,
    Digraph,
    GraphError,
    PointedGraph,
    is_stable,
    linear_subgraphs,
    parse_graph,
)
from .sums import GraphSum, Rational, as_fraction
from .trees import DEFAULT_MAX_LEGS, DecoratedTree, contractible_trees

__all__ = [
    "LOOP",
    "WeylFunctionSpec",
    "WeylCheck",
    "beta",
    "det_int",
    "det_weyl",
    "det_A_minus_I",
    "h_C_value",
    "linear_subgraph_sum",
    "is_weyl_function",
    "d_expand",
    "d_expand_pointed",
    "build_invariant",
    "check_invariant_identity",
    "tensor_expansion",
    "labeled_expansion",
]

#: the single vertex with one loop
LOOP = Digraph(1, ((0, 0),))


def det_int(M: list[list[int]]) -> int:
    """Exact integer determinant (fraction-free Gaussian elimination); ``det([]) = 1``."""
    n = len(M)
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


def _shifted(G: Digraph, s: int) -> list[list[int]]:
    # s * I - A
    return [[(s if i == j else 0) - G.matrix[i][j] for j in range(G.n)] for i in range(G.n)]


def det_weyl(G: Digraph) -> int:
    """``det(I - A(G))``."""
    return det_int(_shifted(G, 1))


def det_A_minus_I(G: Digraph) -> int:
    return (-1) ** G.n * det_weyl(G)


def linear_subgraph_sum(G: Digraph, term: Callable[[int], Fraction | int]) -> Fraction:
    """``sum over linear subgraphs L of term(p(L))``."""
    return sum((Fraction(term(p)) for _, p in linear_subgraphs(G)), Fraction(0))


def beta(G: Digraph, C: Rational) -> Fraction:
    """``sum_L C^{p(L)}``."""
    C = as_fraction(C)
    return linear_subgraph_sum(G, lambda p: C**p)


def h_C_value(G: Digraph, C: Rational) -> Fraction:
    """``sum_L (-1)^{|V(G)| + p(L)} C^{p(L)}``, so that ``C = 1`` gives ``det(A - I)``.

    Defined on stable graphs and on the one-loop vertex (whose value is ``C - 1``).
    """
    if not (is_stable(G) or G == LOOP) or G.pointed:
        raise GraphError("h_C is defined on stable plain graphs and the one-loop vertex")
    C = as_fraction(C)
    return (-1) ** G.n * beta(G, -C)


_KINDS = ("constant", "beta", "det_I_minus_A", "det_A_minus_I", "h_C", "table")


@dataclass(frozen=True)
class WeylFunctionSpec:
    """A coefficient rule on graphs together with the value on the one-loop vertex.

    Builtin kinds are evaluated on the graph itself, or on ``Γ₋`` for a pointed
    graph; ``table`` looks up the canonical key of whatever graph it is given
    and falls back to ``default`` (an error when ``default`` is ``None``).
    """

    kind: str
    param: Fraction | None = None
    table: tuple[tuple[bytes, Fraction], ...] = ()
    default: Fraction | None = None
    cycle: Fraction | None = None
    _lookup: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise GraphError(f"unknown Weyl function kind {self.kind!r}")
        if self.kind in ("constant", "beta", "h_C") and self.param is None:
            raise GraphError(f"kind {self.kind} needs a parameter")
        self._lookup.update(self.table)

    # constructors
    @classmethod
    def constant(cls, c: Rational = 1) -> "WeylFunctionSpec":
        return cls("constant", as_fraction(c))

    @classmethod
    def beta(cls, C: Rational) -> "WeylFunctionSpec":
        return cls("beta", as_fraction(C))

    @classmethod
    def det_I_minus_A(cls) -> "WeylFunctionSpec":
        return cls("det_I_minus_A")

    @classmethod
    def berezin(cls) -> "WeylFunctionSpec":
        """``det(A - I)``."""
        return cls("det_A_minus_I")

    @classmethod
    def h_C(cls, C: Rational) -> "WeylFunctionSpec":
        return cls("h_C", as_fraction(C))

    @classmethod
    def from_table(
        cls, values: Mapping[Digraph | bytes, Rational], *, default: Rational | None = None,
        cycle: Rational | None = None,
    ) -> "WeylFunctionSpec":
        items = []
        for G, v in values.items():
            key = G if isinstance(G, bytes) else canonical_key(G)
            items.append((key, as_fraction(v)))
        return cls(
            "table",
            table=tuple(sorted(items)),
            default=None if default is None else as_fraction(default),
            cycle=None if cycle is None else as_fraction(cycle),
        )

    @classmethod
    def indicator(cls, G: Digraph) -> "WeylFunctionSpec":
        return cls.from_table({G: 1}, default=0)

    @classmethod
    def parse(cls, text: str) -> "WeylFunctionSpec":
        """``constant:c``, ``beta:C``, ``det_I_minus_A``, ``det_A_minus_I`` (or ``berezin``),
        ``h_C:C`` or ``indicator:<graph text>``."""
        name, _, arg = text.partition(":")
        name = name.strip().lower()
        try:
            if name == "constant":
                return cls.constant(arg or 1)
            if name == "beta":
                return cls.beta(arg)
            if name in ("det_i_minus_a", "det"):
                return cls.det_I_minus_A()
            if name in ("det_a_minus_i", "berezin"):
                return cls.berezin()
            if name in ("h_c", "hc"):
                return cls.h_C(arg)
            if name == "indicator":
                return cls.indicator(parse_graph(arg))
        except (ValueError, ZeroDivisionError) as exc:
            raise GraphError(f"bad function spec {text!r}: {exc}") from exc
        raise GraphError(f"unknown function spec {text!r}")

    # evaluation
    def __call__(self, G: Digraph) -> Fraction:
        if self.kind == "table":
            value = self._lookup.get(canonical_key(G), self.default)
            if value is None:
                raise GraphError(f"table has no value for {G}")
            return value
        H = G.minus() if G.pointed else G
        if self.kind == "constant":
            return self.param
        if self.kind == "beta":
            return beta(H, self.param)
        if self.kind == "det_I_minus_A":
            return Fraction(det_weyl(H))
        if self.kind == "det_A_minus_I":
            return Fraction(det_A_minus_I(H))
        return (-1) ** H.n * beta(H, -self.param)

    @property
    def cycle_value(self) -> Fraction:
        """The value on the one-loop vertex."""
        if self.cycle is not None:
            return self.cycle
        return self(LOOP)

    @property
    def name(self) -> str:
        if self.kind in ("constant", "beta", "h_C"):
            return f"{self.kind}:{self.param}"
        return self.kind


@dataclass(frozen=True)
class WeylCheck:
    ok: bool
    witness: tuple[Digraph, Digraph] | None = None
    values: tuple[Fraction, Fraction] | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_weyl_function(
    c: Callable[[Digraph], Fraction], k: int, *, pointed: bool = False, strong: bool = False,
    max_weight: int = DEFAULT_MAX_WEIGHT,
) -> WeylCheck:
    """Test constancy of ``c`` on every stabilization fiber of weight ``k``.

    A failure reports a fiber member and the fiber's stable graph with
    different values (or two members if the stable graph agrees with neither).
    """
    for key, members in stabilization_fibers(k, pointed=pointed, strong=strong, max_weight=max_weight).items():
        G = graph_from_key(key)
        ref = c(G)
        for H in members:
            v = c(H)
            if v != ref:
                return WeylCheck(False, (H, G), (v, ref))
    return WeylCheck(True)


def _sign_vertices(G: Digraph) -> int:
    return -1 if G.n % 2 else 1


@lru_cache(maxsize=None)
def _d_expand(key: bytes) -> GraphSum:
    G = graph_from_key(key)
    if not is_stable(G):
        raise GraphError("d_expand needs a stable graph")
    from .graph import weight

    k = weight(G)
    fiber = stabilization_fibers(k, pointed=G.pointed, max_weight=max(k, DEFAULT_MAX_WEIGHT)).get(key, ())
    aG = aut_order(G)
    items = [(H, Fraction((-1) ** (H.n - G.n) * aG, aut_order(H))) for H in fiber]
    return GraphSum.from_graphs(items, pointed=G.pointed)


def d_expand(G: Digraph, *, max_weight: int = DEFAULT_MAX_WEIGHT) -> GraphSum:
    """The stable graph ``G`` written in the semistable basis."""
    from .graph import weight

    if weight(G) > max_weight:
        raise CapacityError(f"weight {weight(G)} exceeds the configured ceiling {max_weight}")
    return _d_expand(canonical_key(G))


def d_expand_pointed(G: PointedGraph, *, max_weight: int = DEFAULT_MAX_WEIGHT) -> GraphSum:
    if not G.pointed:
        raise GraphError("expected a pointed graph")
    return d_expand(G, max_weight=max_weight)


def build_invariant(
    c: Callable[[Digraph], Fraction], k: int, *, pointed: bool = False, strong: bool = False,
    max_weight: int = DEFAULT_MAX_WEIGHT, verify: bool = True,
) -> GraphSum:
    """``sum_H c(H) (-1)^{|V(H)|} / |Aut H| * H`` over stabilizable semistable ``H`` of weight ``k``.

    With ``verify`` (the default) and a Weyl function ``c``, the result is
    checked against the same combination assembled from :func:`d_expand`.
    """
    graphs = semistable_graphs(k, pointed=pointed, strong=strong, stabilizable=True, max_weight=max_weight)
    S = GraphSum.from_graphs(
        ((H, c(H) * _sign_vertices(H) / aut_order(H)) for H in graphs), pointed=pointed
    )
    if verify and is_weyl_function(c, k, pointed=pointed, strong=strong, max_weight=max_weight):
        if S != _invariant_from_stable(c, k, pointed, strong, max_weight):
            raise AssertionError("stable-basis identity failed for a Weyl function")
    return S


def _invariant_from_stable(c, k: int, pointed: bool, strong: bool, max_weight: int) -> GraphSum:
    total = GraphSum(pointed=pointed)
    for G in semistable_graphs(k, pointed=pointed, stable=True, strong=strong, max_weight=max_weight):
        total = total + d_expand(G, max_weight=max_weight) * (c(G) * _sign_vertices(G) / aut_order(G))
    return total


def check_invariant_identity(
    c: Callable[[Digraph], Fraction], k: int, *, pointed: bool = False, strong: bool = False,
    max_weight: int = DEFAULT_MAX_WEIGHT,
) -> bool:
    """Whether the semistable combination equals its stable-basis reassembly."""
    S = build_invariant(c, k, pointed=pointed, strong=strong, max_weight=max_weight, verify=False)
    return S == _invariant_from_stable(c, k, pointed, strong, max_weight)


def tensor_expansion(
    k: int, m: int, *, pointed: bool = False, max_legs: int = DEFAULT_MAX_LEGS
) -> list[tuple[DecoratedTree, int]]:
    """Signed trees expanding the covariant version of a ``k | m`` derivative.

    Plain trees carry ``(-1)^{|V|+1}``; pointed trees ``(-1)^{|V|}`` with ``•`` excluded.
    """
    out = []
    for n, trees in sorted(contractible_trees(k, m, pointed=pointed, max_legs=max_legs).items()):
        sign = (-1) ** n if pointed else (-1) ** (n + 1)
        out.extend((T, sign) for T in trees)
    return out


def labeled_expansion(G: Digraph, *, max_legs: int = DEFAULT_MAX_LEGS) -> dict[bytes, tuple[int, int]]:
    """Expand every vertex of a stable graph into contractible trees and glue.

    The legs of the tree at ``v`` are labelled by the edge ends at ``v``.
    Returns ``{key of H: (number of labelled occurrences, sign)}``; this is an
    independent route to the coefficients of :func:`d_expand`.
    """
    if not is_stable(G):
        raise GraphError("labeled_expansion needs a stable graph")
    out_ends: list[list[int]] = [[] for _ in range(G.n)]
    in_ends: list[list[int]] = [[] for _ in range(G.n)]
    for i, (t, h) in enumerate(G.edges):
        out_ends[t].append(i)
        in_ends[h].append(i)
    choices = []
    for v in range(G.n):
        special = G.pointed and v == 0
        trees = contractible_trees(len(out_ends[v]), len(in_ends[v]), pointed=special, max_legs=max_legs)
        choices.append([T for n in sorted(trees) for T in trees[n]])
    tally: dict[bytes, list[int]] = {}
    for combo in product(*choices):
        H, sign = _glue(G, combo, out_ends, in_ends)
        key = canonical_key(H)
        if key in tally:
            tally[key][0] += 1
            assert tally[key][1] == sign
        else:
            tally[key] = [1, sign]
    return {key: (cnt, s) for key, (cnt, s) in sorted(tally.items())}


def _glue(G: Digraph, trees, out_ends, in_ends) -> tuple[Digraph, int]:
    offset = []
    total = 0
    for T in trees:
        offset.append(total)
        total += T.n
    edges: list[tuple[int, int]] = []
    tail_of: dict[int, int] = {}
    head_of: dict[int, int] = {}
    sign = 1
    for v, T in enumerate(trees):
        base = offset[v]
        edges.extend((base + a, base + b) for a, b in T.edges)
        for x in range(T.n):
            for lab in T.out_legs[x]:
                tail_of[out_ends[v][lab - 1]] = base + x
            for lab in T.in_legs[x]:
                head_of[in_ends[v][lab - 1]] = base + x
        sign *= (-1) ** (T.n - 1)
    edges.extend((tail_of[i], head_of[i]) for i in range(len(G.edges)))
    return G.with_edges(total, edges), sign
