from fractions import Fraction

import pytest

from weylgraphs.canonical import aut_order, canonical_key
from weylgraphs.enumeration import semistable_graphs, stable_graphs
from weylgraphs.graph import Digraph, GraphError, PointedGraph
from weylgraphs.jets import builtin_context, invariance_test
from weylgraphs.stabilize import is_stabilizable
from weylgraphs.sums import GraphSum
from weylgraphs.weyl import (
    LOOP,
    WeylFunctionSpec,
    beta,
    build_invariant,
    check_invariant_identity,
    d_expand,
    d_expand_pointed,
    det_A_minus_I,
    det_weyl,
    h_C_value,
    is_weyl_function,
    labeled_expansion,
    tensor_expansion,
)

L2 = Digraph(1, ((0, 0), (0, 0)))
L3 = Digraph(1, ((0, 0),) * 3)
NS = Digraph(2, ((0, 0), (1, 1), (0, 1)))
H3 = Digraph(2, ((1, 0), (1, 0), (0, 1)))
P1 = PointedGraph(1, ((0, 0),))
C = Fraction(3, 7)


def test_beta_examples():
    assert beta(L2, C) == 1 + 2 * C
    assert beta(Digraph(1), C) == 1
    assert beta(H3, C) == 1 + 2 * C == beta(L2, C)


def test_det_examples():
    assert det_weyl(L2) == -1
    assert det_weyl(H3) == -1
    assert det_weyl(Digraph(1)) == 1
    assert det_weyl(Digraph(0)) == 1
    assert det_A_minus_I(L2) == 1


def test_h_C_values():
    # (-1)^{|V|} beta_{-C}; see the decisions ledger for the normalisation
    assert h_C_value(L2, C) == -(1 - 2 * C)
    assert h_C_value(LOOP, C) == C - 1
    assert WeylFunctionSpec.h_C(C).cycle_value == C - 1
    assert WeylFunctionSpec.h_C(1)(L2) == WeylFunctionSpec.berezin()(L2)
    with pytest.raises(GraphError):
        h_C_value(H3, C)


def test_h_C_at_one_is_berezin_on_stable_graphs():
    h1, b = WeylFunctionSpec.h_C(1), WeylFunctionSpec.berezin()
    for k in (1, 2, 3):
        for G in stable_graphs(k):
            assert h1(G) == b(G)


def test_spec_parsing():
    assert WeylFunctionSpec.parse("constant:2")(L2) == 2
    assert WeylFunctionSpec.parse("beta:1/2")(L2) == 2
    assert WeylFunctionSpec.parse("det")(L2) == -1
    assert WeylFunctionSpec.parse("berezin").name == "det_A_minus_I"
    assert WeylFunctionSpec.parse("indicator:g 2; 0->1, 1->0, 1->0")(H3) == 1
    for bad in ("nonsense", "beta:x", "h_C:1/0"):
        with pytest.raises(GraphError):
            WeylFunctionSpec.parse(bad)
    with pytest.raises(GraphError):
        WeylFunctionSpec.from_table({L2: 1})(H3)


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("pointed", [False, True])
@pytest.mark.parametrize(
    "spec", [WeylFunctionSpec.constant(1), WeylFunctionSpec.beta(C), WeylFunctionSpec.beta(-2), WeylFunctionSpec.det_I_minus_A()]
)
def test_weyl_functions_are_fiber_constant(spec, k, pointed):
    assert is_weyl_function(spec, k, pointed=pointed)
    assert check_invariant_identity(spec, k, pointed=pointed)


def test_indicator_is_not_weyl():
    res = is_weyl_function(WeylFunctionSpec.indicator(H3), 1)
    assert not res
    assert {canonical_key(G) for G in res.witness} == {canonical_key(H3), canonical_key(L2)}
    assert not check_invariant_identity(WeylFunctionSpec.indicator(H3), 1)


def test_pointed_det_sign_normalisation():
    # det(A(Γ₋) - I) times (-1)^{|V(Γ₋)|} is det(I - A(Γ₋)), a Weyl function
    fn = lambda G: Fraction(det_A_minus_I(G.minus()) * (-1) ** (G.n - 1))
    for k in (1, 2):
        assert is_weyl_function(fn, k, pointed=True)
        for G in semistable_graphs(k, pointed=True):
            if not is_stabilizable(G):
                assert det_weyl(G.minus()) == 0


def test_d_expand_examples():
    assert d_expand(L2) == GraphSum.from_graphs([(L2, 1), (H3, -1)])
    for k in (1, 2):
        for pointed in (False, True):
            for G in stable_graphs(k, pointed=pointed):
                assert d_expand(G).coeff(G) == 1
    S = d_expand_pointed(P1)
    assert S == GraphSum.single(P1)  # no other weight-1 pointed graph stabilizes to P1


def test_build_invariant_examples():
    S = build_invariant(WeylFunctionSpec.constant(1), 1)
    assert S == GraphSum.from_graphs([(L2, Fraction(-1, 2)), (H3, Fraction(1, 2))])
    B = build_invariant(WeylFunctionSpec.berezin(), 1)
    assert B.coeff(L2) == Fraction(-1, 2) * det_A_minus_I(L2)


@pytest.mark.parametrize("pointed", [False, True])
def test_labeled_expansion_matches_d_expand(pointed):
    for k in (1, 2):
        for G in stable_graphs(k, pointed=pointed):
            lab = labeled_expansion(G)
            expected = d_expand(G).terms()
            got = {key: Fraction(sign * count) for key, (count, sign) in lab.items()}
            assert got == expected


def test_tensor_expansion_examples():
    terms = tensor_expansion(2, 2)
    assert sorted((T.n, s) for T, s in terms) == [(1, 1), (2, -1)]
    pattern = {}
    for T, s in tensor_expansion(3, 2):
        pattern.setdefault(T.n, set()).add(s)
        pattern[T.n, "count"] = pattern.get((T.n, "count"), 0) + 1
    assert pattern[1] == {1} and pattern[2] == {-1} and pattern[3] == {1}
    assert (pattern[1, "count"], pattern[2, "count"], pattern[3, "count"]) == (1, 4, 3)


def _tree_value(T, ctx):
    v = 1
    for x in range(T.n):
        v *= ctx.phi_value([0] * T.outdeg(x), [0] * T.indeg(x))
    return v * ctx.ginv[0, 0] ** len(T.edges)


@pytest.mark.parametrize("k,m", [(2, 2), (3, 2), (4, 2), (3, 3), (5, 2), (4, 3), (6, 2), (5, 3), (4, 4)])
def test_tensor_expansion_is_covariant(k, m):
    # in one dimension the covariant derivative transforms by J^k conj(J)^m
    c0 = builtin_context("generic_1d", 0, 14)
    c1 = builtin_context("generic_1d", 1, 14)
    J = c1.coordinates[0][0].derivative_value((1, 0))
    Jb = c1.coordinates[1][0].derivative_value((0, 1))
    terms = tensor_expansion(k, m)
    s0 = sum(s * _tree_value(T, c0) for T, s in terms)
    s1 = sum(s * _tree_value(T, c1) for T, s in terms)
    assert abs(s1 - s0 * J**k * Jb**m) <= 1e-10 * abs(s1)
    raw0, raw1 = c0.phi_value([0] * k, [0] * m), c1.phi_value([0] * k, [0] * m)
    assert abs(raw1 - raw0 * J**k * Jb**m) > 1e-3 * abs(raw1)


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("pointed", [False, True])
def test_numeric_chart_invariance(k, pointed):
    for spec in (WeylFunctionSpec.constant(1), WeylFunctionSpec.beta(C), WeylFunctionSpec.det_I_minus_A()):
        S = build_invariant(spec, k, pointed=pointed)
        for atlas in ("fubini_study_1d", "generic_1d", "fubini_study_2d"):
            rep = invariance_test(S, atlas, 1e-9)
            assert rep.ok, (spec.name, atlas, rep.rel_error)


def test_non_weyl_combination_breaks_invariance():
    rep = invariance_test(build_invariant(WeylFunctionSpec.indicator(L3), 2), "fubini_study_1d")
    assert rep.rel_error > 1e-3
