"""Stabilization by edge contraction, and generalized stabilizable (GS) graphs."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .canonical import canonical_form
from .graph import (
    Digraph,
    GraphError,
    contract_edge,
    contractible_edges,
    is_semistable,
    is_stable,
)

__all__ = [
    "StabilizationResult",
    "stabilize",
    "is_stabilizable",
    "semistabilization",
    "is_gs",
    "gs_stabilize",
    "subdivide",
]


@dataclass(frozen=True)
class StabilizationResult:
    stabilizable: bool
    stable_graph: Digraph | None
    contraction_trace: tuple[int, ...]
    terminal: Digraph

    def __bool__(self) -> bool:
        return self.stabilizable


@lru_cache(maxsize=1 << 18)
def stabilize(G: Digraph) -> StabilizationResult:
    """Contract the lowest-index contractible edge until none remains.

    The terminal graph does not depend on the order of contractions (up to
    isomorphism); ``stable_graph`` is its canonical form when it is stable.
    """
    if not is_semistable(G):
        raise GraphError("stabilization needs a semistable graph")
    trace = []
    H = G
    while True:
        ce = contractible_edges(H)
        if not ce:
            break
        trace.append(ce[0])
        H = contract_edge(H, ce[0])
    ok = is_stable(H)
    return StabilizationResult(ok, canonical_form(H) if ok else None, tuple(trace), H)


def is_stabilizable(G: Digraph) -> bool:
    return stabilize(G).stabilizable


def _pass_through(G: Digraph, v: int) -> bool:
    return G.indeg[v] == 1 and G.outdeg[v] == 1 and G.matrix[v][v] == 0


@lru_cache(maxsize=1 << 18)
def semistabilization(G: Digraph) -> Digraph:
    """Suppress every ordinary vertex of in- and outdegree one (and no loop).

    The two edges through a suppressed vertex are spliced into one.
    """
    H = G
    while True:
        v = next((v for v in H.ordinary if _pass_through(H, v)), None)
        if v is None:
            break
        (a,) = [t for t, h in H.edges if h == v]
        (b,) = [h for t, h in H.edges if t == v]
        edges = [e for e in H.edges if v not in e]
        edges.append((a, b))
        edges = [(t - (t > v), h - (h > v)) for t, h in edges]
        H = H.with_edges(H.n - 1, edges)
    bad = [v for v in H.ordinary if not (H.indeg[v] >= 1 and H.outdeg[v] >= 1 and H.indeg[v] + H.outdeg[v] >= 3)]
    if bad:
        raise GraphError(f"vertex {bad[0]} is neither semistable nor a pass-through vertex")
    return H


def is_gs(G: Digraph) -> bool:
    try:
        H = semistabilization(G)
    except GraphError:
        return False
    return is_stabilizable(H)


def gs_stabilize(G: Digraph) -> StabilizationResult:
    return stabilize(semistabilization(G))


def subdivide(G: Digraph, e: int) -> Digraph:
    """Insert a new pass-through vertex into edge ``e``."""
    t, h = G.edges[e]
    x = G.n
    edges = [f for i, f in enumerate(G.edges) if i != e] + [(t, x), (x, h)]
    return G.with_edges(G.n + 1, edges)
