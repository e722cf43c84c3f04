"""Directed multigraphs and pointed graphs.

A graph is an immutable vertex count plus a sorted multiset of ``(tail, head)``
pairs.  Loops and parallel edges are allowed.  A :class:`PointedGraph` marks
vertex ``0`` as the distinguished vertex, which is exempt from every degree
condition and is not counted in the weight.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar, Iterable, Sequence

__all__ = [
    "GraphError",
    "CapacityError",
    "Digraph",
    "PointedGraph",
    "degrees",
    "is_semistable",
    "is_stable",
    "weight",
    "contractible_edges",
    "is_contractible",
    "contract_edge",
    "scc",
    "condensation",
    "is_strong",
    "is_balanced",
    "adjacency_matrix",
    "linear_subgraphs",
    "parse_graph",
    "format_graph",
    "graph_from_json",
    "graph_to_json",
]


class GraphError(ValueError):
    """Raised when an operation is applied outside its domain."""


class CapacityError(RuntimeError):
    """Raised when a request exceeds a configured size ceiling."""


@dataclass(frozen=True, eq=True)
class Digraph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    pointed: ClassVar[bool] = False

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError(f"negative vertex count {self.n}")
        edges = []
        for e in self.edges:
            t, h = int(e[0]), int(e[1])
            if not (0 <= t < self.n and 0 <= h < self.n):
                raise GraphError(f"edge {t}->{h} out of range for {self.n} vertices")
            edges.append((t, h))
        edges.sort()
        object.__setattr__(self, "edges", tuple(edges))

    # -- basic structure -------------------------------------------------
    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def ordinary(self) -> range:
        """Vertices subject to the (semi)stability conditions."""
        return range(1, self.n) if self.pointed else range(self.n)

    @cached_property
    def outdeg(self) -> tuple[int, ...]:
        d = [0] * self.n
        for t, _ in self.edges:
            d[t] += 1
        return tuple(d)

    @cached_property
    def indeg(self) -> tuple[int, ...]:
        d = [0] * self.n
        for _, h in self.edges:
            d[h] += 1
        return tuple(d)

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        m = [[0] * self.n for _ in range(self.n)]
        for t, h in self.edges:
            m[t][h] += 1
        return tuple(tuple(r) for r in m)

    def loops(self, v: int) -> int:
        return self.matrix[v][v]

    def with_edges(self, n: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        """A graph of the same kind with new content."""
        return type(self)(n, tuple(edges))

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Apply ``old vertex -> perm[old]``; pointed graphs must fix 0."""
        if self.pointed and perm[0] != 0:
            raise GraphError("relabeling must fix the distinguished vertex")
        return self.with_edges(self.n, ((perm[t], perm[h]) for t, h in self.edges))

    def reversed(self) -> "Digraph":
        return self.with_edges(self.n, ((h, t) for t, h in self.edges))

    def __str__(self) -> str:
        return format_graph(self)


@dataclass(frozen=True, eq=True)
class PointedGraph(Digraph):
    """Digraph whose vertex 0 is the distinguished vertex."""

    pointed: ClassVar[bool] = True

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError("a pointed graph needs its distinguished vertex")
        super().__post_init__()

    def minus(self) -> Digraph:
        """The plain graph obtained by deleting the distinguished vertex."""
        return Digraph(
            self.n - 1,
            tuple((t - 1, h - 1) for t, h in self.edges if t and h),
        )


def _check_vertex(G: Digraph, v: int) -> None:
    if not 0 <= v < G.n:
        raise GraphError(f"vertex {v} not in graph with {G.n} vertices")


def degrees(G: Digraph, v: int) -> tuple[int, int]:
    """``(indegree, outdegree)`` of ``v``; a loop adds one to each."""
    _check_vertex(G, v)
    return G.indeg[v], G.outdeg[v]


def _vertex_ok(G: Digraph, v: int, lo_each: int, lo_total: int) -> bool:
    i, o = G.indeg[v], G.outdeg[v]
    return i >= lo_each and o >= lo_each and i + o >= lo_total


def is_semistable(G: Digraph) -> bool:
    return all(_vertex_ok(G, v, 1, 3) for v in G.ordinary)


def is_stable(G: Digraph) -> bool:
    return all(_vertex_ok(G, v, 2, 4) for v in G.ordinary)


def weight(G: Digraph) -> int:
    """``|E| - |V|`` with the distinguished vertex not counted."""
    return G.num_edges - len(G.ordinary)


def _edge_contractible(G: Digraph, u: int, v: int) -> bool:
    if u == v:
        return False
    ordinary = G.ordinary
    return (u in ordinary and G.outdeg[u] == 1) or (v in ordinary and G.indeg[v] == 1)


def is_contractible(G: Digraph, e: int) -> bool:
    u, v = G.edges[e]
    return _edge_contractible(G, u, v)


def contractible_edges(G: Digraph) -> list[int]:
    """Indices (into the sorted edge list) of contractible edges."""
    if not is_semistable(G):
        raise GraphError("contractibility is defined for semistable graphs")
    return [i for i, (u, v) in enumerate(G.edges) if _edge_contractible(G, u, v)]


def merge_vertices(G: Digraph, u: int, v: int, drop_edge: int | None = None) -> Digraph:
    """Identify ``u`` and ``v`` (keeping the smaller id) and compact ids."""
    keep, gone = min(u, v), max(u, v)

    def m(x: int) -> int:
        if x == gone:
            x = keep
        return x - 1 if x > gone else x

    edges = [(m(t), m(h)) for i, (t, h) in enumerate(G.edges) if i != drop_edge]
    return G.with_edges(G.n - 1, edges)


def contract_edge(G: Digraph, e: int) -> Digraph:
    """Contract the contractible edge with index ``e``."""
    if not 0 <= e < G.num_edges:
        raise GraphError(f"edge index {e} out of range")
    if not is_semistable(G) or not is_contractible(G, e):
        raise GraphError(f"edge {G.edges[e]} is not contractible")
    u, v = G.edges[e]
    return merge_vertices(G, u, v, drop_edge=e)


def _reach(G: Digraph) -> list[set[int]]:
    succ: list[set[int]] = [set() for _ in range(G.n)]
    for t, h in G.edges:
        succ[t].add(h)
    reach = []
    for s in range(G.n):
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        reach.append(seen)
    return reach


def scc(G: Digraph) -> list[tuple[int, ...]]:
    """Strongly connected components, each sorted, ordered by least vertex."""
    reach = _reach(G)
    comps: list[tuple[int, ...]] = []
    done: set[int] = set()
    for v in range(G.n):
        if v in done:
            continue
        comp = tuple(sorted(w for w in reach[v] if v in reach[w]))
        done.update(comp)
        comps.append(comp)
    return comps


def condensation(G: Digraph) -> Digraph:
    """Simple DAG on the components of :func:`scc` (one edge per adjacent pair)."""
    comps = scc(G)
    where = {v: i for i, c in enumerate(comps) for v in c}
    pairs = {(where[t], where[h]) for t, h in G.edges if where[t] != where[h]}
    return Digraph(len(comps), tuple(sorted(pairs)))


def is_strong(G: Digraph) -> bool:
    if G.n <= 1:
        return True
    return len(_reach(G)[0]) == G.n and len(scc(G)) == 1


def is_balanced(G: Digraph) -> bool:
    return G.indeg == G.outdeg


def adjacency_matrix(G: Digraph) -> list[list[int]]:
    return [list(r) for r in G.matrix]


def linear_subgraphs(G: Digraph) -> list[tuple[tuple[int, ...], int]]:
    """All unions of vertex-disjoint directed cycles, as ``(edge indices, p)``.

    Parallel edges are distinct, so each choice of copy is a separate
    subgraph.  ``p`` is the number of cycles; the empty subgraph is included.
    """
    out_edges: list[list[tuple[int, int]]] = [[] for _ in range(G.n)]
    for i, (t, h) in enumerate(G.edges):
        out_edges[t].append((i, h))

    results: list[tuple[tuple[int, ...], int]] = []
    succ: dict[int, int] = {}
    chosen: list[int] = []
    used_heads: set[int] = set()

    def count_cycles() -> int:
        seen: set[int] = set()
        p = 0
        for s in succ:
            if s in seen:
                continue
            p += 1
            x = s
            while x not in seen:
                seen.add(x)
                x = succ[x]
        return p

    def rec(v: int) -> None:
        if v == G.n:
            if used_heads == set(succ):
                results.append((tuple(sorted(chosen)), count_cycles()))
            return
        rec(v + 1)
        for i, h in out_edges[v]:
            if h in used_heads:
                continue
            succ[v] = h
            used_heads.add(h)
            chosen.append(i)
            rec(v + 1)
            chosen.pop()
            used_heads.discard(h)
            del succ[v]

    rec(0)
    return results


# -- text and JSON forms ----------------------------------------------------

_TEXT_RE = re.compile(r"^\s*([gp])\s+(\d+)\s*;\s*(.*?)\s*$")
_EDGE_RE = re.compile(r"^(\d+)\s*->\s*(\d+)$")


def parse_graph(text: str) -> Digraph:
    """Parse ``g <n>; t->h, ...`` (plain) or ``p <n>; ...`` (pointed)."""
    m = _TEXT_RE.match(text)
    if not m:
        raise GraphError(f"cannot parse graph {text!r}")
    kind, n, body = m.group(1), int(m.group(2)), m.group(3)
    edges = []
    if body:
        for part in body.split(","):
            em = _EDGE_RE.match(part.strip())
            if not em:
                raise GraphError(f"bad edge {part.strip()!r}")
            edges.append((int(em.group(1)), int(em.group(2))))
    cls = PointedGraph if kind == "p" else Digraph
    return cls(n, tuple(edges))


def format_graph(G: Digraph) -> str:
    body = ", ".join(f"{t}->{h}" for t, h in G.edges)
    return f"{'p' if G.pointed else 'g'} {G.n}; {body}".rstrip()


def graph_to_json(G: Digraph) -> dict:
    return {"pointed": G.pointed, "vertices": G.n, "edges": [list(e) for e in G.edges]}


def graph_from_json(obj: dict | str) -> Digraph:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        cls = PointedGraph if obj["pointed"] else Digraph
        return cls(int(obj["vertices"]), tuple(tuple(e) for e in obj["edges"]))
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from exc
