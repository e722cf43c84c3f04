from itertools import permutations
from math import factorial, prod

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import digraphs, permutations_of
from weylgraphs import kernels
from weylgraphs.canonical import (
    are_isomorphic,
    aut_order,
    canonical_form,
    canonical_key,
    graph_from_key,
    refine_colors,
    vertex_aut_count,
)
from weylgraphs.enumeration import stable_graphs, stabilization_fibers
from weylgraphs.graph import Digraph, PointedGraph
from weylgraphs.weyl import labeled_expansion

L2 = Digraph(1, ((0, 0), (0, 0)))
NS = Digraph(2, ((0, 0), (1, 1), (0, 1)))
H3 = Digraph(2, ((1, 0), (1, 0), (0, 1)))
P1 = PointedGraph(1, ((0, 0),))


def test_examples():
    assert canonical_key(H3) == canonical_key(H3)
    assert canonical_key(H3) == canonical_key(Digraph(2, ((0, 1), (0, 1), (1, 0))))
    assert canonical_key(L2) != canonical_key(NS)
    assert are_isomorphic(Digraph(2, ((0, 1), (0, 1), (1, 0))), Digraph(2, ((1, 0), (1, 0), (0, 1))))
    assert aut_order(L2) == 2
    assert aut_order(H3) == 2
    assert aut_order(P1) == 1


def test_pointed_isomorphism_fixes_the_point():
    a = PointedGraph(2, ((0, 1), (1, 0), (1, 0)))
    b = PointedGraph(2, ((0, 1), (0, 1), (1, 0)))
    assert not are_isomorphic(a, b)
    assert are_isomorphic(a.reversed(), b)


@settings(max_examples=200)
@given(digraphs(max_vertices=6, max_edges=10), st.data())
def test_key_is_relabeling_invariant(G, data):
    key = canonical_key(G)
    for _ in range(20):
        perm = data.draw(permutations_of(G.n, fix_zero=G.pointed))
        assert canonical_key(G.relabel(perm)) == key


@given(digraphs(max_vertices=6, max_edges=10))
def test_key_round_trip(G):
    H = graph_from_key(canonical_key(G))
    assert are_isomorphic(G, H)
    assert canonical_form(G) == H


def _brute_vertex_autos(G):
    M = G.matrix
    fixed = range(1, G.n) if G.pointed else range(G.n)
    count = 0
    for rest in permutations(fixed):
        perm = ([0] if G.pointed else []) + list(rest)
        if all(M[perm[i]][perm[j]] == M[i][j] for i in range(G.n) for j in range(G.n)):
            count += 1
    return count


@given(digraphs(max_vertices=6, max_edges=9))
def test_aut_order_brute_force(G):
    mult = prod(factorial(c) for row in G.matrix for c in row)
    assert vertex_aut_count(G) == _brute_vertex_autos(G)
    assert aut_order(G) == _brute_vertex_autos(G) * mult
    bound = factorial(G.n) * mult
    assert bound % aut_order(G) == 0


def _edge_level_autos(G):
    # pairs (vertex permutation, edge permutation) compatible with incidence
    E = G.edges
    fixed = range(1, G.n) if G.pointed else range(G.n)
    total = 0
    for rest in permutations(fixed):
        perm = ([0] if G.pointed else []) + list(rest)
        for sigma in permutations(range(len(E))):
            if all(E[sigma[i]] == (perm[t], perm[h]) for i, (t, h) in enumerate(E)):
                total += 1
    return total


@given(digraphs(max_vertices=3, max_edges=5))
def test_aut_order_counts_incidence_preserving_pairs(G):
    assert aut_order(G) == _edge_level_autos(G)


@given(digraphs(max_vertices=6, max_edges=10))
def test_refinement_is_equivariant(G):
    colors = refine_colors(G)
    perm = list(range(G.n))[::-1] if not G.pointed else [0] + list(range(1, G.n))[::-1]
    moved = refine_colors(G.relabel(perm))
    assert [moved[perm[v]] for v in range(G.n)] == colors


@pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled kernels not built")
@given(digraphs(max_vertices=6, max_edges=10))
def test_canon_search_backend_parity(G):
    mat = [list(r) for r in G.matrix]
    colors = refine_colors(G)
    assert kernels.python_backend.canon_search(G.n, mat, colors) == kernels.compiled_backend.canon_search(
        G.n, mat, colors
    )


@pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled kernels not built")
@given(st.integers(0, 12), st.integers(0, 2**31))
def test_mul2_backend_parity(order, seed):
    rng = np.random.default_rng(seed)
    shape = (order + 1, order + 1)
    a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    b = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    x = kernels.python_backend.mul2(a, b, order)
    y = kernels.compiled_backend.mul2(a, b, order)
    assert x.shape == shape
    np.testing.assert_allclose(x, y, rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("pointed", [False, True])
def test_orbit_stabilizer_in_labeled_expansion(pointed):
    # labelled occurrences of H in the expansion of a stable G number |Aut G| / |Aut H|
    for k in (1, 2) if pointed else (1,):
        fibers = stabilization_fibers(k, pointed=pointed)
        for G in stable_graphs(k, pointed=pointed):
            counts = labeled_expansion(G)
            members = fibers[canonical_key(G)]
            assert set(counts) == {canonical_key(H) for H in members}
            for H in members:
                n, _ = counts[canonical_key(H)]
                assert n * aut_order(H) == aut_order(G)
