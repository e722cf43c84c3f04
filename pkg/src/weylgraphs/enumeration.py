"""Isomorph-free generation of semistable (pointed) graphs of a given weight.

A semistable ordinary vertex has total degree at least three, so a graph of
weight ``k`` with ``n`` ordinary vertices satisfies ``3n <= 2(n + k)``, i.e.
``n <= 2k``; stable graphs satisfy ``4n <= 2(n + k)``, i.e. ``n <= k``.  The
distinguished vertex has no degree constraint and does not change the bound.
"""
from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from typing import Iterator

from .canonical import canonical_form, canonical_key
from .graph import CapacityError, Digraph, PointedGraph, is_strong
from .stabilize import stabilize

__all__ = [
    "DEFAULT_MAX_WEIGHT",
    "semistable_graphs",
    "stable_graphs",
    "stabilization_fibers",
    "labeled_matrices",
]

DEFAULT_MAX_WEIGHT = 4


def _degree_multisets(
    n: int, E: int, lo: int, tot: int, balanced: bool
) -> Iterator[list[tuple[int, int]]]:
    """Nonincreasing lists of ``(out, in)`` pairs with both sums at most ``E``."""
    pairs = [
        (o, i)
        for o in range(lo, E + 1)
        for i in range(lo, E + 1)
        if o + i >= tot and (not balanced or o == i)
    ]
    pairs.sort(reverse=True)

    def rec(start: int, left: int, so: int, si: int, acc: list) -> Iterator[list]:
        if left == 0:
            yield list(acc)
            return
        for idx in range(start, len(pairs)):
            o, i = pairs[idx]
            # every remaining vertex needs at least ``lo`` of each
            if so + o + lo * (left - 1) > E or si + i + lo * (left - 1) > E:
                continue
            acc.append((o, i))
            yield from rec(idx, left - 1, so + o, si + i, acc)
            acc.pop()

    yield from rec(0, n, 0, 0, [])


def labeled_matrices(outs: list[int], ins: list[int]) -> Iterator[list[list[int]]]:
    """All nonnegative integer matrices with the given row and column sums."""
    N = len(outs)
    M = [[0] * N for _ in range(N)]
    colrem = list(ins)

    def fill(r: int, c: int, rowrem: int) -> Iterator[list[list[int]]]:
        if r == N:
            if not any(colrem):
                yield M
            return
        if c == N - 1:
            if rowrem > colrem[c]:
                return
            M[r][c] = rowrem
            colrem[c] -= rowrem
            nxt = outs[r + 1] if r + 1 < N else 0
            # remaining column demand must be coverable by remaining rows
            if sum(colrem) == sum(outs[r + 1 :]):
                yield from fill(r + 1, 0, nxt)
            colrem[c] += rowrem
            M[r][c] = 0
            return
        for x in range(min(rowrem, colrem[c]), -1, -1):
            M[r][c] = x
            colrem[c] -= x
            yield from fill(r, c + 1, rowrem - x)
            colrem[c] += x
        M[r][c] = 0

    yield from fill(0, 0, outs[0] if N else 0)


def _check_capacity(k: int, max_weight: int) -> None:
    if k > max_weight:
        raise CapacityError(f"weight {k} exceeds the configured ceiling {max_weight}")


@lru_cache(maxsize=None)
def _generate(k: int, pointed: bool, stable: bool, strong: bool, balanced: bool) -> tuple[Digraph, ...]:
    lo, tot = (2, 4) if stable else (1, 3)
    nmax = k if stable else 2 * k
    nmin = 0 if pointed else 1
    found: dict[bytes, Digraph] = {}
    cls = PointedGraph if pointed else Digraph
    for n in range(nmin, nmax + 1):
        E = n + k
        if E < 0:
            continue
        for degs in _degree_multisets(n, E, lo, tot, balanced):
            so = sum(o for o, _ in degs)
            si = sum(i for _, i in degs)
            if pointed:
                bo, bi = E - so, E - si
                if balanced and bo != bi:
                    continue
                outs = [bo] + [o for o, _ in degs]
                ins = [bi] + [i for _, i in degs]
            else:
                if so != E or si != E:
                    continue
                outs = [o for o, _ in degs]
                ins = [i for _, i in degs]
            N = len(outs)
            for M in labeled_matrices(outs, ins):
                edges = tuple((t, h) for t in range(N) for h in range(N) for _ in range(M[t][h]))
                G = cls(N, edges)
                if strong and not is_strong(G):
                    continue
                key = canonical_key(G)
                if key not in found:
                    found[key] = canonical_form(G)
    return tuple(found[key] for key in sorted(found))


def semistable_graphs(
    k: int,
    *,
    pointed: bool = False,
    stable: bool = False,
    strong: bool = False,
    balanced: bool = False,
    stabilizable: bool = False,
    max_weight: int = DEFAULT_MAX_WEIGHT,
) -> list[Digraph]:
    """Every semistable graph of weight ``k`` satisfying the flags, once each.

    Results are canonical forms sorted by canonical key.
    """
    if k < (0 if pointed else 1):
        raise ValueError(f"weight {k} out of range")
    _check_capacity(k, max_weight)
    graphs = _generate(k, pointed, stable, strong, balanced)
    if stabilizable and not stable:
        graphs = tuple(G for G in graphs if stabilize(G).stabilizable)
    return list(graphs)


def stable_graphs(k: int, *, pointed: bool = False, strong: bool = False, balanced: bool = False,
                  max_weight: int = DEFAULT_MAX_WEIGHT) -> list[Digraph]:
    return semistable_graphs(k, pointed=pointed, stable=True, strong=strong, balanced=balanced,
                             max_weight=max_weight)


@lru_cache(maxsize=None)
def _fibers(k: int, pointed: bool, strong: bool) -> dict[bytes, tuple[Digraph, ...]]:
    groups: dict[bytes, list[Digraph]] = defaultdict(list)
    for H in _generate(k, pointed, False, strong, False):
        res = stabilize(H)
        if res.stabilizable:
            groups[canonical_key(res.stable_graph)].append(H)
    return {key: tuple(v) for key, v in sorted(groups.items())}


def stabilization_fibers(
    k: int, *, pointed: bool = False, strong: bool = False, max_weight: int = DEFAULT_MAX_WEIGHT
) -> dict[bytes, tuple[Digraph, ...]]:
    """Map each stable graph's key to the semistable graphs stabilizing to it.

    With ``strong=True`` only strong graphs are enumerated; fibers of strong
    stable graphs consist of strong graphs, so those fibers are complete.
    """
    _check_capacity(k, max_weight)
    return _fibers(k, pointed, strong)
