"""Graph calculus for Weyl invariants, covariant operators and star products on Kähler manifolds."""
from .canonical import aut_order, canonical_form, canonical_key, are_isomorphic, graph_from_key
from .enumeration import semistable_graphs, stable_graphs, stabilization_fibers
from .graph import (
    CapacityError,
    Digraph,
    GraphError,
    PointedGraph,
    format_graph,
    graph_from_json,
    graph_to_json,
    is_semistable,
    is_stable,
    is_strong,
    parse_graph,
    weight,
)
from .jets import builtin_context, evaluate_graph, evaluate_pointed, evaluate_sum, invariance_test
from .opalg import OperatorSum, Q_k, R_k, compose, compose_oracle, identity
from .stabilize import gs_stabilize, is_gs, stabilize
from .star import alpha, check_axioms, karabegov_check, karabegov_form, star_coefficients, star_hC, wick_dual_hC
from .sums import GraphSum
from .trees import tree_counts, tree_table
from .weyl import WeylFunctionSpec, build_invariant, d_expand, det_weyl, is_weyl_function

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Digraph",
    "GraphError",
    "GraphSum",
    "OperatorSum",
    "PointedGraph",
    "Q_k",
    "R_k",
    "WeylFunctionSpec",
    "alpha",
    "are_isomorphic",
    "aut_order",
    "build_invariant",
    "builtin_context",
    "canonical_form",
    "canonical_key",
    "check_axioms",
    "compose",
    "compose_oracle",
    "d_expand",
    "det_weyl",
    "evaluate_graph",
    "evaluate_pointed",
    "evaluate_sum",
    "format_graph",
    "graph_from_json",
    "graph_from_key",
    "graph_to_json",
    "gs_stabilize",
    "identity",
    "invariance_test",
    "is_gs",
    "is_semistable",
    "is_stable",
    "is_strong",
    "is_weyl_function",
    "karabegov_check",
    "karabegov_form",
    "parse_graph",
    "semistable_graphs",
    "stabilization_fibers",
    "stabilize",
    "stable_graphs",
    "star_coefficients",
    "star_hC",
    "tree_counts",
    "tree_table",
    "weight",
    "wick_dual_hC",
]
