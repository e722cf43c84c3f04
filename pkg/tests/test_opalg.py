from fractions import Fraction

import pytest

from weylgraphs.canonical import canonical_key, graph_from_key
from weylgraphs.enumeration import semistable_graphs
from weylgraphs.graph import CapacityError, GraphError, PointedGraph, is_balanced, is_strong, weight
from weylgraphs.jets import builtin_context
from weylgraphs.opalg import (
    OperatorSum,
    Q_k,
    R_k,
    compose,
    compose_oracle,
    englis_generators,
    gs_subgraphs,
    identity,
    quotient,
)
from weylgraphs.stabilize import is_gs
from weylgraphs.sums import GraphSum

P1 = PointedGraph(1, ((0, 0),))
POINT = PointedGraph(1)
P1_TWICE = PointedGraph(1, ((0, 0), (0, 0)))


def test_families():
    assert Q_k(1) == OperatorSum({canonical_key(P1): 1})
    assert R_k(0) == identity()
    assert Q_k(2) == OperatorSum({canonical_key(P1_TWICE): Fraction(1, 2)})
    assert [len(Q_k(k, balanced=True)) for k in (1, 3)] == [1, 5]
    for S in englis_generators([1, 3]):
        for G, _ in S.items():
            assert is_balanced(G) and is_strong(G)
    with pytest.raises(GraphError):
        englis_generators([2])


def test_semistable_basis_of_families():
    S = R_k(1, basis="semistable")
    for G, c in S.items():
        assert weight(G) == 1 and c
    assert Q_k(1, basis="semistable") == GraphSum.single(P1)


def test_operator_sum_rejects_unstable_keys():
    with pytest.raises(GraphError):
        OperatorSum({canonical_key(PointedGraph(2, ((0, 1), (1, 0), (1, 0)))): 1})
    with pytest.raises(GraphError):
        OperatorSum({}, pointed=False)


def test_weyl_coefficient_round_trip():
    op = Q_k(2) + Q_k(1) * 3
    assert OperatorSum.from_weyl_coefficients({}) == OperatorSum()
    c = op.weyl_coefficients()
    assert c[canonical_key(P1)] == -3
    assert OperatorSum.from_weyl_coefficients({graph_from_key(k): v for k, v in c.items()}) == op


def test_quotients():
    assert quotient(P1, (0,), ()) == P1
    assert quotient(P1, (0,), (0,)) == POINT
    with pytest.raises(GraphError):
        quotient(P1, (1,), ())


def test_gs_subgraphs_requires_gs():
    with pytest.raises(GraphError):
        gs_subgraphs(PointedGraph(3, ((1, 1), (1, 2), (1, 0), (2, 2), (0, 2))))


def test_compose_q1_q1():
    expected = OperatorSum.from_sum(GraphSum.from_graphs([
        (P1_TWICE, 1),
        (PointedGraph(2, ((0, 1), (1, 0), (1, 1))), -1),
    ]))
    assert compose(Q_k(1), Q_k(1)) == expected


@pytest.mark.parametrize("op", [Q_k(1), Q_k(2), R_k(1), R_k(2), Q_k(1) + R_k(2) * Fraction(2, 3)])
def test_unit_law_and_grading(op):
    e = identity()
    assert compose(e, op) == op
    assert compose(op, e) == op
    for a in (Q_k(1), R_k(1)):
        for G, _ in compose(a, op).items():
            assert weight(G) in {1 + w for w in op.weights}


def test_capacity_guard():
    with pytest.raises(CapacityError):
        compose(Q_k(2), Q_k(2), max_weight=3)


def test_strong_subalgebra_closed():
    for G, _ in compose(Q_k(1), Q_k(2), strong_only=True).items():
        assert is_strong(G)


@pytest.mark.parametrize("metric", ["fubini_study_1d", "generic_1d"])
@pytest.mark.parametrize(
    "pair", [(1, 1, "Q"), (1, 2, "Q"), (2, 1, "Q"), (1, 1, "R"), (1, 2, "R")]
)
def test_compose_oracle(metric, pair):
    a, b, fam = pair
    make = Q_k if fam == "Q" else R_k
    ctx = builtin_context(metric, 0, 16)
    rep = compose_oracle(make(a), make(b), ctx)
    assert rep.ok, rep


def test_identity_oracle_is_exact():
    ctx = builtin_context("fubini_study_1d", 0, 12)
    rep = compose_oracle(identity(), Q_k(2), ctx)
    assert rep.rel_error < 1e-14


def test_quotient_closure_weight_two():
    for Z in semistable_graphs(2, pointed=True):
        if is_gs(Z):
            for G, Q, _, _ in gs_subgraphs(Z):
                assert is_gs(Q)
