"""Canonical keys, isomorphism tests and automorphism group orders.

Vertices are first coloured by iterated neighbourhood refinement; the
compiled search in :mod:`weylgraphs.kernels` then takes the least encoding
of the multiplicity matrix over all colour-respecting vertex orders.  The
number of orders attaining that minimum is exactly the number of vertex
permutations preserving the multiplicity matrix.

An automorphism of a multigraph is a vertex permutation together with an
edge bijection compatible with incidence, so

    |Aut(G)| = #(matrix-preserving vertex perms) * prod over (u, v) of m(u, v)!
"""
from __future__ import annotations

from functools import lru_cache
from math import factorial

from . import kernels
from .graph import Digraph, GraphError, PointedGraph

__all__ = [
    "refine_colors",
    "canonical_key",
    "canonical_form",
    "are_isomorphic",
    "aut_order",
    "vertex_aut_count",
]


def refine_colors(G: Digraph) -> list[int]:
    """Isomorphism-invariant vertex colours (stable under refinement)."""
    n = G.n
    M = G.matrix
    sig0 = [
        (0 if (G.pointed and v == 0) else 1, G.outdeg[v], G.indeg[v], M[v][v])
        for v in range(n)
    ]
    ranks = {s: i for i, s in enumerate(sorted(set(sig0)))}
    colors = [ranks[s] for s in sig0]
    num = len(ranks)
    while True:
        sigs = []
        for v in range(n):
            row = M[v]
            outs = tuple(sorted((row[u], colors[u]) for u in range(n) if u != v and row[u]))
            ins = tuple(sorted((M[u][v], colors[u]) for u in range(n) if u != v and M[u][v]))
            sigs.append((colors[v], outs, ins))
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [ranks[s] for s in sigs]
        if len(ranks) == num:
            return colors
        num = len(ranks)


@lru_cache(maxsize=1 << 18)
def _canon(G: Digraph) -> tuple[bytes, int]:
    n = G.n
    if n > 255:
        raise GraphError("graphs with more than 255 vertices are not supported")
    colors = refine_colors(G)
    best, count = kernels.canon_search(n, [list(r) for r in G.matrix], colors)
    if any(x > 255 for x in best):
        raise GraphError("edge multiplicity above 255 is not supported")
    return bytes([int(G.pointed), n]) + bytes(best), count


def canonical_key(G: Digraph) -> bytes:
    """Bytes identifying the isomorphism class (the distinguished vertex held fixed)."""
    return _canon(G)[0]


def vertex_aut_count(G: Digraph) -> int:
    """Number of vertex permutations preserving the multiplicity matrix."""
    return _canon(G)[1]


def _decode(key: bytes) -> Digraph:
    pointed, n = key[0], key[1]
    seq = key[2:]
    M = [[0] * n for _ in range(n)]
    k = 0
    for d in range(n):
        M[d][d] = seq[k]
        k += 1
        for j in range(d):
            M[j][d] = seq[k]
            M[d][j] = seq[k + 1]
            k += 2
    edges = [(t, h) for t in range(n) for h in range(n) for _ in range(M[t][h])]
    cls = PointedGraph if pointed else Digraph
    return cls(n, tuple(edges))


@lru_cache(maxsize=1 << 16)
def graph_from_key(key: bytes) -> Digraph:
    return _decode(key)


def canonical_form(G: Digraph) -> Digraph:
    """The canonical representative of ``G``'s isomorphism class."""
    return graph_from_key(canonical_key(G))


def are_isomorphic(G1: Digraph, G2: Digraph) -> bool:
    if G1.pointed != G2.pointed:
        raise GraphError("cannot compare a pointed graph with a plain graph")
    return canonical_key(G1) == canonical_key(G2)


@lru_cache(maxsize=1 << 18)
def aut_order(G: Digraph) -> int:
    """``|Aut(G)|`` counting parallel-edge permutations (fixing the marked vertex)."""
    order = vertex_aut_count(G)
    for row in G.matrix:
        for m in row:
            if m > 1:
                order *= factorial(m)
    return order
