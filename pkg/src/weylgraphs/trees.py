"""Contractible semistable decorated trees.

A decorated tree carries outward legs labelled ``1..k`` (unbarred indices) and
inward legs labelled ``1..m`` (barred indices).  Degrees count tree
half-edges and legs alike.  Because every leaf of a semistable tree carries
at least two legs and all labels are distinct, a decorated tree has no
nontrivial label-preserving automorphism.  Hence

    t_{k,m}(n) = sum over unlabelled directed tree shapes S on n vertices of
                 (1/|Aut S|) * #(leg placements on a vertex-labelled copy of S)

which is what :func:`tree_counts` evaluates.  :func:`contractible_trees`
builds the trees themselves and removes duplicates with a rooted code.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, prod
from typing import Iterator

from .canonical import aut_order, canonical_form, canonical_key
from .graph import CapacityError, Digraph, GraphError, PointedGraph

__all__ = [
    "DecoratedTree",
    "DEFAULT_MAX_LEGS",
    "tree_shapes",
    "tree_count",
    "tree_counts",
    "contractible_trees",
    "t_closed_forms",
    "double_factorial",
    "table_rows",
    "tree_table",
]

DEFAULT_MAX_LEGS = 10


@dataclass(frozen=True)
class DecoratedTree:
    """A directed tree with labelled legs; vertex 0 is ``•`` when ``pointed``."""

    n: int
    edges: tuple[tuple[int, int], ...]
    out_legs: tuple[tuple[int, ...], ...]
    in_legs: tuple[tuple[int, ...], ...]
    pointed: bool = False

    def outdeg(self, v: int) -> int:
        return sum(t == v for t, _ in self.edges) + len(self.out_legs[v])

    def indeg(self, v: int) -> int:
        return sum(h == v for _, h in self.edges) + len(self.in_legs[v])

    def is_ordinary(self, v: int) -> bool:
        return not (self.pointed and v == 0)

    @property
    def ordinary_count(self) -> int:
        return self.n - int(self.pointed)

    def shape(self) -> Digraph:
        cls = PointedGraph if self.pointed else Digraph
        return cls(self.n, self.edges)

    def is_semistable(self) -> bool:
        for v in range(self.n):
            if self.is_ordinary(v):
                i, o = self.indeg(v), self.outdeg(v)
                if i < 1 or o < 1 or i + o < 3:
                    return False
        return True

    def is_contractible(self) -> bool:
        """Every tree edge ``uv`` has ``deg+(u) = 1`` or ``deg-(v) = 1`` at an ordinary end."""
        for u, v in self.edges:
            if not (
                (self.is_ordinary(u) and self.outdeg(u) == 1)
                or (self.is_ordinary(v) and self.indeg(v) == 1)
            ):
                return False
        return True

    def __str__(self) -> str:
        def legs(v: int) -> str:
            a = "".join(f"a{x}" for x in self.out_legs[v])
            b = "".join(f"b{x}" for x in self.in_legs[v])
            tag = "*" if not self.is_ordinary(v) else str(v)
            return f"{tag}[{a}|{b}]"

        verts = " ".join(legs(v) for v in range(self.n))
        es = ", ".join(f"{t}->{h}" for t, h in self.edges)
        return f"{verts}; {es}" if es else verts


def double_factorial(n: int) -> int:
    return prod(range(n, 0, -2)) if n > 0 else 1


def _check(k: int, m: int, pointed: bool, max_legs: int) -> None:
    lo = 0 if pointed else 2
    if k < lo or m < lo:
        raise GraphError(f"leg counts must be at least {lo}")
    if k + m > max_legs:
        raise CapacityError(f"k + m = {k + m} exceeds the configured ceiling {max_legs}")


@lru_cache(maxsize=None)
def tree_shapes(n: int, pointed: bool = False) -> tuple[Digraph, ...]:
    """Directed trees on ``n`` vertices up to isomorphism (vertex 0 fixed when pointed)."""
    cls = PointedGraph if pointed else Digraph
    if n < 1:
        raise ValueError("a tree has at least one vertex")
    if n == 1:
        return (cls(1, ()),)
    found: dict[bytes, Digraph] = {}
    for S in tree_shapes(n - 1, pointed):
        for v in range(n - 1):
            for e in ((v, n - 1), (n - 1, v)):
                T = cls(n, S.edges + (e,))
                key = canonical_key(T)
                if key not in found:
                    found[key] = canonical_form(T)
    return tuple(found[k] for k in sorted(found))


def _leg_vectors(S: Digraph, k: int, m: int, pointed: bool) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Per-vertex leg counts making the decorated shape semistable and contractible."""
    n = S.n
    tin, tout = S.indeg, S.outdeg
    ordinary = [not (pointed and v == 0) for v in range(n)]
    # an edge is checked once both of its endpoints have leg counts
    checks: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v in S.edges:
        checks[max(u, v)].append((u, v))
    o = [0] * n
    i = [0] * n

    def edge_ok(u: int, v: int) -> bool:
        return (ordinary[u] and tout[u] + o[u] == 1) or (ordinary[v] and tin[v] + i[v] == 1)

    def rec(v: int, kleft: int, mleft: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        if v == n - 1:
            choices = [(kleft, mleft)]
        else:
            choices = [(a, b) for a in range(kleft + 1) for b in range(mleft + 1)]
        for a, b in choices:
            outs, ins = tout[v] + a, tin[v] + b
            if ordinary[v] and (outs < 1 or ins < 1 or outs + ins < 3):
                continue
            o[v], i[v] = a, b
            if all(edge_ok(x, y) for x, y in checks[v]):
                if v == n - 1:
                    yield tuple(o), tuple(i)
                else:
                    yield from rec(v + 1, kleft - a, mleft - b)
        o[v] = i[v] = 0

    yield from rec(0, k, m)


def _multinomial(total: int, parts: tuple[int, ...]) -> int:
    return factorial(total) // prod(factorial(p) for p in parts)


def _max_vertices(k: int, m: int, pointed: bool) -> int:
    # half-edges: 2(|V| - 1) + k + m >= 3 * (ordinary vertices), plus one at a non-isolated •
    return max(k + m - 1, 0) if pointed else k + m - 2


@lru_cache(maxsize=None)
def _count_n(k: int, m: int, pointed: bool, size: int) -> int:
    total = Fraction(0)
    for S in tree_shapes(size, pointed):
        ways = sum(_multinomial(k, o) * _multinomial(m, i) for o, i in _leg_vectors(S, k, m, pointed))
        total += Fraction(ways, aut_order(S))
    assert total.denominator == 1
    return int(total)


def tree_count(k: int, m: int, n: int, pointed: bool = False, max_legs: int = DEFAULT_MAX_LEGS) -> int:
    """``t_{k,m}(n)``; for pointed trees ``n`` counts ordinary vertices."""
    _check(k, m, pointed, max_legs)
    size = n + int(pointed)
    if size < 1 or n > _max_vertices(k, m, pointed):
        return 0
    return _count_n(k, m, pointed, size)


def tree_counts(k: int, m: int, pointed: bool = False, max_legs: int = DEFAULT_MAX_LEGS) -> dict[int, int]:
    """``{n: t_{k,m}(n)}`` for every vertex count with at least one tree.

    For pointed trees ``n`` counts ordinary vertices only.
    """
    _check(k, m, pointed, max_legs)
    counts = {}
    for n in range(0 if pointed else 1, _max_vertices(k, m, pointed) + 1):
        c = tree_count(k, m, n, pointed, max_legs)
        if c:
            counts[n] = c
    return counts


def _place(labels: tuple[int, ...], sizes: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
    if not sizes:
        yield ()
        return
    first, rest = sizes[0], sizes[1:]
    for chosen in combinations(labels, first):
        left = tuple(x for x in labels if x not in chosen)
        for tail in _place(left, rest):
            yield (chosen,) + tail


def _rooted_code(T: DecoratedTree, v: int, parent: int) -> tuple:
    kids = []
    for t, h in T.edges:
        if t == v and h != parent:
            kids.append((1, _rooted_code(T, h, v)))
        elif h == v and t != parent:
            kids.append((0, _rooted_code(T, t, v)))
    return (T.out_legs[v], T.in_legs[v], tuple(sorted(kids)))


def _root(T: DecoratedTree) -> int:
    if T.pointed:
        return 0
    return next(v for v in range(T.n) if 1 in T.out_legs[v])


def _from_code(code: tuple, pointed: bool) -> DecoratedTree:
    edges: list[tuple[int, int]] = []
    outs: list[tuple[int, ...]] = []
    ins: list[tuple[int, ...]] = []

    def build(c: tuple) -> int:
        v = len(outs)
        outs.append(c[0])
        ins.append(c[1])
        for direction, child in c[2]:
            w = build(child)
            edges.append((v, w) if direction else (w, v))
        return v

    build(code)
    return DecoratedTree(len(outs), tuple(sorted(edges)), tuple(outs), tuple(ins), pointed)


def canonical_tree(T: DecoratedTree) -> DecoratedTree:
    """Relabel vertices in a deterministic order (the root first)."""
    return _from_code(_rooted_code(T, _root(T), -1), T.pointed)


@lru_cache(maxsize=None)
def _trees(k: int, m: int, pointed: bool) -> tuple[DecoratedTree, ...]:
    nmax = _max_vertices(k, m, pointed) + int(pointed)
    found: dict[tuple, DecoratedTree] = {}
    alabels = tuple(range(1, k + 1))
    blabels = tuple(range(1, m + 1))
    for n in range(1, max(nmax, 1) + 1):
        for S in tree_shapes(n, pointed):
            for o, i in _leg_vectors(S, k, m, pointed):
                for outs in _place(alabels, o):
                    for ins in _place(blabels, i):
                        T = DecoratedTree(n, S.edges, outs, ins, pointed)
                        code = _rooted_code(T, _root(T), -1)
                        if code not in found:
                            found[code] = _from_code(code, pointed)
    return tuple(sorted(found.values(), key=lambda T: (T.n, T.edges, T.out_legs, T.in_legs)))


def contractible_trees(
    k: int, m: int, pointed: bool = False, max_legs: int = DEFAULT_MAX_LEGS
) -> dict[int, list[DecoratedTree]]:
    """All contractible semistable trees with legs ``a1..ak | b1..bm``, grouped by vertex count.

    For pointed trees the grouping key is the number of ordinary vertices.
    """
    _check(k, m, pointed, max_legs)
    groups: dict[int, list[DecoratedTree]] = {}
    for T in _trees(k, m, pointed):
        groups.setdefault(T.ordinary_count, []).append(T)
    return groups


def t_closed_forms(k: int, m: int, n: int) -> int:
    """Closed forms for ``t_{k,m}(n)`` at ``n = 2``, ``n = 3`` and ``(m, n) = (2, k)``."""
    if k < 2 or m < 2:
        raise GraphError("closed forms need k, m >= 2")
    if n == 2:
        return 2**k + 2**m - k - m - 3
    if n == 3:
        twice = (
            3 ** (k + 1) + 3 ** (m + 1)
            - 2 * (2**k + 2**m) * (k + m)
            - 10 * (2**k + 2**m)
            + 2 * 2 ** (k + m)
            + k * k + m * m
            + 7 * (k + m)
            + 2 * k * m
            + 14
        )
        return twice // 2
    if m == 2 and n == k:
        return double_factorial(2 * k - 3)
    if k == 2 and n == m:
        return double_factorial(2 * m - 3)
    raise GraphError(f"no closed form for (k, m, n) = ({k}, {m}, {n})")


def table_rows(kmax: int, mmax: int) -> list[tuple[int, int]]:
    """Row labels ``(k, m)`` of the tree table, ``2 <= m <= min(k, mmax)``, ``k + m <= kmax + 2``."""
    rows = [
        (k, m)
        for k in range(2, kmax + 1)
        for m in range(2, min(k, mmax) + 1)
        if k + m <= kmax + 2
    ]
    rows.sort(key=lambda r: (r[0] + r[1], -r[0]))
    return rows


def tree_table(kmax: int, mmax: int, max_legs: int = DEFAULT_MAX_LEGS) -> list[tuple[int, int, list[int]]]:
    """``(k, m, [t(1), t(2), ...])`` for every table row."""
    out = []
    for k, m in table_rows(kmax, mmax):
        counts = tree_counts(k, m, max_legs=max_legs)
        out.append((k, m, [counts.get(n, 0) for n in range(1, k + m - 1)]))
    return out
