"""Numeric evaluation oracle: truncated Taylor jets of Kähler potentials.

Holomorphic coordinates ``z_i`` and their conjugates ``w_i`` are independent
jet variables (polarization), ordered ``z_1..z_n, w_1..w_n``.  A jet stores
Taylor coefficients ``c[alpha] = d^alpha f / alpha!`` at a base point with
total degree at most ``order``.

Graph dictionary: an ordinary vertex with out-degree ``p`` and in-degree ``q``
carries ``d^p dbar^q Phi``; an edge ``u -> v`` contracts an unbarred index of
``u`` with a barred index of ``v`` through ``g^{i jbar}``.  At the
distinguished vertex the in-edges take antiholomorphic derivatives and the
out-edges holomorphic ones, either of a single function or, for a
bidifferential operator ``Γ(f1, f2)``, of ``f1`` and ``f2`` respectively.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import factorial, prod
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .graph import Digraph, GraphError

__all__ = [
    "TaylorJet",
    "Atlas",
    "JetContext",
    "ATLASES",
    "builtin_context",
    "evaluate_graph",
    "evaluate_pointed",
    "evaluate_sum",
    "graph_jet",
    "pointed_jet",
    "InvarianceReport",
    "invariance_test",
    "rel_diff",
    "DEFAULT_ORDER",
]

DEFAULT_ORDER = 10


@lru_cache(maxsize=None)
def _degree_grid(nvars: int, order: int) -> np.ndarray:
    grids = np.indices((order + 1,) * nvars)
    return grids.sum(axis=0)


@lru_cache(maxsize=None)
def _mask(nvars: int, order: int, cut: int) -> np.ndarray:
    return _degree_grid(nvars, order) <= cut


class TaylorJet:
    """Truncated multivariate Taylor series with complex coefficients.

    The array always has shape ``(size,) * nvars``; entries above ``order``
    in total degree are zero.  ``size - 1`` is the order the jet was created
    with, and derivatives lower ``order`` without reshaping.
    """

    __slots__ = ("c", "order", "_dcache")

    def __init__(self, coeffs: np.ndarray, order: int):
        self.c = coeffs
        self.order = order
        self._dcache: dict = {}

    # constructors
    @classmethod
    def constant(cls, value: complex, nvars: int, order: int) -> "TaylorJet":
        c = np.zeros((order + 1,) * nvars, dtype=complex)
        c[(0,) * nvars] = value
        return cls(c, order)

    @classmethod
    def variable(cls, i: int, base: complex, nvars: int, order: int) -> "TaylorJet":
        J = cls.constant(base, nvars, order)
        if order >= 1:
            idx = [0] * nvars
            idx[i] = 1
            J.c[tuple(idx)] = 1.0
        return J

    @property
    def nvars(self) -> int:
        return self.c.ndim

    @property
    def size(self) -> int:
        return self.c.shape[0]

    @property
    def value(self) -> complex:
        return complex(self.c[(0,) * self.nvars])

    def coefficient(self, alpha: Sequence[int]) -> complex:
        if sum(alpha) > self.order:
            raise GraphError(f"jet of order {self.order} has no coefficient of degree {sum(alpha)}")
        return complex(self.c[tuple(alpha)])

    def derivative_value(self, alpha: Sequence[int]) -> complex:
        return self.coefficient(alpha) * prod(factorial(a) for a in alpha)

    def _like(self, c: np.ndarray, order: int) -> "TaylorJet":
        return TaylorJet(c, order)

    def _coerce(self, other) -> "TaylorJet":
        if isinstance(other, TaylorJet):
            if other.c.shape != self.c.shape:
                raise GraphError("jets of different shapes")
            return other
        return TaylorJet.constant(complex(other), self.nvars, self.size - 1)

    # arithmetic
    def __add__(self, other) -> "TaylorJet":
        o = self._coerce(other)
        order = min(self.order, o.order)
        c = self.c + o.c
        if order < max(self.order, o.order):
            c = c * _mask(self.nvars, self.size - 1, order)
        return self._like(c, order)

    __radd__ = __add__

    def __neg__(self) -> "TaylorJet":
        return self._like(-self.c, self.order)

    def __sub__(self, other) -> "TaylorJet":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TaylorJet":
        return self._coerce(other) - self

    def __mul__(self, other) -> "TaylorJet":
        if not isinstance(other, TaylorJet):
            return self._like(self.c * complex(other), self.order)
        o = self._coerce(other)
        order = min(self.order, o.order)
        if self.nvars == 2:
            c = kernels.mul2(self.c, o.c, order)
        else:
            c = _mul_generic(self.c, o.c, order)
        return self._like(c, order)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "TaylorJet":
        if isinstance(other, TaylorJet):
            return self * other.reciprocal()
        return self * (1.0 / complex(other))

    def __rtruediv__(self, other) -> "TaylorJet":
        return self.reciprocal() * complex(other)

    def __pow__(self, k: int) -> "TaylorJet":
        if not isinstance(k, int) or k < 0:
            raise GraphError("only nonnegative integer powers are supported")
        out = TaylorJet.constant(1.0, self.nvars, self.size - 1)
        out.order = self.order
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def _series(self, coeffs: Sequence[complex]) -> "TaylorJet":
        """``sum coeffs[k] * (self - value)^k`` by Horner's rule."""
        x = self - self.value
        out = TaylorJet.constant(coeffs[-1], self.nvars, self.size - 1)
        out.order = self.order
        for a in reversed(coeffs[:-1]):
            out = out * x + a
        return out

    def reciprocal(self) -> "TaylorJet":
        c0 = self.value
        if c0 == 0:
            raise ZeroDivisionError("jet with zero constant term")
        return self._series([(-1) ** k / c0 ** (k + 1) for k in range(self.order + 1)])

    def log(self) -> "TaylorJet":
        c0 = self.value
        if c0 == 0:
            raise ZeroDivisionError("log of a jet with zero constant term")
        coeffs = [cmath.log(c0)] + [(-1) ** (k + 1) / (k * c0**k) for k in range(1, self.order + 1)]
        return self._series(coeffs)

    def exp(self) -> "TaylorJet":
        e0 = cmath.exp(self.value)
        return self._series([e0 / factorial(k) for k in range(self.order + 1)])

    def deriv(self, i: int, times: int = 1) -> "TaylorJet":
        """Partial derivative in variable ``i`` (a jet of lower order)."""
        if times == 0:
            return self
        key = (i, times)
        hit = self._dcache.get(key)
        if hit is not None:
            return hit
        if times > self.order:
            raise GraphError("derivative order exceeds jet order")
        J = self if times == 1 else self.deriv(i, times - 1)
        n = J.size
        c = np.zeros_like(J.c)
        src = [slice(None)] * J.nvars
        dst = [slice(None)] * J.nvars
        src[i] = slice(1, n)
        dst[i] = slice(0, n - 1)
        shape = [1] * J.nvars
        shape[i] = n - 1
        c[tuple(dst)] = J.c[tuple(src)] * np.arange(1, n).reshape(shape)
        out = TaylorJet(c, J.order - 1)
        self._dcache[key] = out
        return out

    def partial(self, alpha: Sequence[int]) -> "TaylorJet":
        """Mixed partial derivative with multi-index ``alpha`` over all variables."""
        key = ("multi", tuple(alpha))
        hit = self._dcache.get(key)
        if hit is not None:
            return hit
        J = self
        for i, a in enumerate(alpha):
            J = J.deriv(i, a)
        self._dcache[key] = J
        return J


def _mul_generic(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    nv = a.ndim
    out = np.zeros_like(a)
    deg = _degree_grid(nv, a.shape[0] - 1)
    for idx in zip(*np.nonzero((a != 0) & (deg <= order))):
        rem = order - sum(idx)
        dst = tuple(slice(i, i + rem + 1) for i in idx)
        src = (slice(0, rem + 1),) * nv
        out[dst] += a[idx] * b[src]
    out *= _mask(nv, a.shape[0] - 1, order)
    return out


# -- atlases ----------------------------------------------------------------

Coords = list  # list of TaylorJet, one per coordinate


@dataclass(frozen=True)
class Atlas:
    """A model Kähler manifold described in two charts.

    ``potential(zs, ws)`` builds the potential from chart-0 coordinate jets;
    ``to_chart0(zetas, omegas)`` expresses chart-0 coordinates through
    chart-1 coordinates (the barred half uses conjugated coefficients).
    """

    name: str
    dim: int
    potential: Callable[[Coords, Coords], TaylorJet]
    base0: tuple[complex, ...]
    base1: tuple[complex, ...]
    to_chart0: Callable[[Coords, Coords], tuple[Coords, Coords]]


def _fs1(zs, ws):
    return (1 + zs[0] * ws[0]).log()


def _inv1(zs, ws):
    return [1 / zs[0]], [1 / ws[0]]


def _hyp(zs, ws):
    return -((1 - zs[0] * ws[0]).log())


_MOB = 0.25 - 0.1j


def _mobius(zs, ws):
    a, ab = _MOB, _MOB.conjugate()
    return [(zs[0] + a) / (1 + ab * zs[0])], [(ws[0] + ab) / (1 + a * ws[0])]


def _fs2(zs, ws):
    return (1 + zs[0] * ws[0] + zs[1] * ws[1]).log()


def _fs2_chart(zs, ws):
    return [1 / zs[0], zs[1] / zs[0]], [1 / ws[0], ws[1] / ws[0]]


def _flat(zs, ws):
    return sum((z * w for z, w in zip(zs, ws)), start=0 * zs[0])


def _identity(zs, ws):
    return list(zs), list(ws)


def _generic(zs, ws):
    z, w = zs[0], ws[0]
    zw = z * w
    return zw + 0.15 * zw * zw + 0.1 * (z * zw + zw * w) + 0.1 * (0.5 * (z + w)).exp()


_GEN = 0.2 + 0.1j


def _quadratic_chart(zs, ws):
    return [zs[0] + _GEN * zs[0] * zs[0]], [ws[0] + _GEN.conjugate() * ws[0] * ws[0]]


def _newton_quadratic(z0: complex) -> complex:
    x = z0
    for _ in range(60):
        x -= (x + _GEN * x * x - z0) / (1 + 2 * _GEN * x)
    return x


_Z0 = 0.3 + 0.2j
_Z0_2D = (0.3 + 0.2j, -0.1 + 0.25j)

ATLASES: dict[str, Atlas] = {
    "flat": Atlas("flat", 1, _flat, (_Z0,), (_Z0,), _identity),
    "fubini_study_1d": Atlas("fubini_study_1d", 1, _fs1, (_Z0,), (1 / _Z0,), _inv1),
    "hyperbolic_1d": Atlas(
        "hyperbolic_1d", 1, _hyp, (_Z0,),
        ((_Z0 - _MOB) / (1 - _MOB.conjugate() * _Z0),), _mobius,
    ),
    "fubini_study_2d": Atlas(
        "fubini_study_2d", 2, _fs2, _Z0_2D, (1 / _Z0_2D[0], _Z0_2D[1] / _Z0_2D[0]), _fs2_chart,
    ),
    "generic_1d": Atlas("generic_1d", 1, _generic, (_Z0,), (_newton_quadratic(_Z0),), _quadratic_chart),
}


# real-analytic test functions, written in chart-0 coordinates
def _f1(zs, ws):
    s = zs[0] * 0.3 - ws[0] * 0.2
    out = s.exp() + zs[0] * zs[0] * ws[0]
    for z, w in zip(zs[1:], ws[1:]):
        out = out + 0.4 * z * w * w - 0.3 * z
    return out


def _f2(zs, ws):
    d = 1.5 + 0.4 * zs[0] - 0.3 * ws[0] + 0.1 * zs[0] * ws[0]
    for z, w in zip(zs[1:], ws[1:]):
        d = d + 0.2 * z - 0.15 * w * w
    return 1 / d


def _f3(zs, ws):
    out = (2 + zs[0] + 0.5 * ws[0] * ws[0]).log()
    for z, w in zip(zs[1:], ws[1:]):
        out = out + z * z * w * 0.25
    return out


TEST_FUNCTIONS = {"f1": _f1, "f2": _f2, "f3": _f3}


class JetContext:
    """Potential and test-function jets of one atlas chart at its base point."""

    def __init__(self, atlas: Atlas, chart: int, order: int):
        if chart not in (0, 1):
            raise GraphError("chart must be 0 or 1")
        if order < 2:
            raise GraphError("order must be at least 2")
        self.atlas = atlas
        self.chart = chart
        self.order = order
        self.dim = atlas.dim
        n = self.dim
        nv = 2 * n
        base = atlas.base0 if chart == 0 else atlas.base1
        self.base = base
        zs = [TaylorJet.variable(i, base[i], nv, order) for i in range(n)]
        ws = [TaylorJet.variable(n + i, base[i].conjugate(), nv, order) for i in range(n)]
        if chart == 1:
            zs, ws = atlas.to_chart0(zs, ws)
        self.coordinates = (zs, ws)
        self.phi = atlas.potential(zs, ws)
        self.functions = {name: f(zs, ws) for name, f in TEST_FUNCTIONS.items()}
        g = np.array([[self.phi_value([i], [j]) for j in range(n)] for i in range(n)])
        self.g = g
        self.ginv = np.linalg.inv(g).T  # ginv[i, j] = g^{i jbar}
        self._vertex_tensors: dict = {}
        self._ginv_jets = None

    @property
    def nvars(self) -> int:
        return 2 * self.dim

    def alpha(self, holo: Iterable[int], anti: Iterable[int]) -> tuple[int, ...]:
        a = [0] * self.nvars
        for i in holo:
            a[i] += 1
        for j in anti:
            a[self.dim + j] += 1
        return tuple(a)

    def phi_value(self, holo: Sequence[int], anti: Sequence[int]) -> complex:
        return self.phi.derivative_value(self.alpha(holo, anti))

    def vertex_tensor(self, J: TaylorJet, p: int, q: int) -> np.ndarray:
        """``T[i1..ip, j1..jq] = d_{i1..ip} dbar_{j1..jq} J`` at the base point."""
        key = (id(J), p, q)
        hit = self._vertex_tensors.get(key)
        if hit is not None and hit[0] is J:
            return hit[1]
        n = self.dim
        if p + q > J.order:
            raise GraphError(f"jet order {J.order} too small for a ({p},{q}) derivative")
        T = np.empty((n,) * (p + q), dtype=complex)
        for idx in product(range(n), repeat=p + q):
            T[idx] = J.derivative_value(self.alpha(idx[:p], idx[p:]))
        self._vertex_tensors[key] = (J, T)
        return T

    def ginv_jets(self) -> list[list[TaylorJet]]:
        """Jets of the inverse metric ``g^{i jbar}`` (dimension 1 or 2)."""
        if self._ginv_jets is None:
            n = self.dim
            gj = [[self.phi.partial(self.alpha([i], [j])) for j in range(n)] for i in range(n)]
            if n == 1:
                inv = [[gj[0][0].reciprocal()]]
            elif n == 2:
                det = gj[0][0] * gj[1][1] - gj[0][1] * gj[1][0]
                r = det.reciprocal()
                # (g^{-1})^T with g[i][j] = g_{i jbar}
                inv = [[gj[1][1] * r, -(gj[1][0] * r)], [-(gj[0][1] * r), gj[0][0] * r]]
            else:
                raise GraphError("jet-valued evaluation supports dimension 1 and 2")
            self._ginv_jets = inv
        return self._ginv_jets

    def function(self, f: str | TaylorJet) -> TaylorJet:
        return self.functions[f] if isinstance(f, str) else f

    def check(self) -> float:
        """Residual of ``g * ginv = I`` at the base point."""
        return float(np.abs(self.g @ self.ginv.T - np.eye(self.dim)).max())


@lru_cache(maxsize=64)
def builtin_context(name: str, chart: int = 0, order: int = DEFAULT_ORDER) -> JetContext:
    try:
        atlas = ATLASES[name]
    except KeyError:
        raise GraphError(f"unknown metric {name!r}; choose from {sorted(ATLASES)}") from None
    if order > 24:
        raise GraphError("jet order above 24 is not supported")
    return JetContext(atlas, chart, order)


# -- graph evaluation --------------------------------------------------------

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _check_vertices(G: Digraph) -> None:
    for v in G.ordinary:
        if G.outdeg[v] < 1 or G.indeg[v] < 1:
            raise GraphError(f"vertex {v} has a zero in- or outdegree; it is not a metric jet")


def _ends(G: Digraph) -> tuple[list[list[int]], list[list[int]]]:
    outs: list[list[int]] = [[] for _ in range(G.n)]
    ins: list[list[int]] = [[] for _ in range(G.n)]
    for e, (t, h) in enumerate(G.edges):
        outs[t].append(e)
        ins[h].append(e)
    return outs, ins


def _contract(G: Digraph, ctx: JetContext, point_tensors) -> complex:
    """einsum over edge indices; ``point_tensors`` supplies (operand, subscripts) for •."""
    E = len(G.edges)
    if 2 * E > len(_LETTERS):
        raise GraphError("graph too large for numeric contraction")
    a = _LETTERS[:E]  # unbarred index of edge e (at the tail)
    b = _LETTERS[E : 2 * E]  # barred index of edge e (at the head)
    outs, ins = _ends(G)
    operands, subs = [], []
    for v in G.ordinary:
        operands.append(ctx.vertex_tensor(ctx.phi, len(outs[v]), len(ins[v])))
        subs.append("".join(a[e] for e in outs[v]) + "".join(b[e] for e in ins[v]))
    for T, s in point_tensors(outs, ins, a, b):
        operands.append(T)
        subs.append(s)
    for e in range(E):
        operands.append(ctx.ginv)
        subs.append(a[e] + b[e])
    if not operands:
        return 1.0 + 0j
    return complex(np.einsum(",".join(subs) + "->", *operands, optimize=True))


def evaluate_graph(G: Digraph, ctx: JetContext) -> complex:
    """The scalar value of a plain graph at the base point."""
    if G.pointed:
        raise GraphError("use evaluate_pointed for pointed graphs")
    _check_vertices(G)
    return _contract(G, ctx, lambda *args: [])


def evaluate_pointed(
    G: Digraph, ctx: JetContext, f1: str | TaylorJet = "f1", f2: str | TaylorJet | None = None
) -> complex:
    """``Γ(f)`` with one function, or ``Γ^op(f1, f2)`` when ``f2`` is given."""
    if not G.pointed:
        raise GraphError("expected a pointed graph")
    _check_vertices(G)
    F1 = ctx.function(f1)
    F2 = None if f2 is None else ctx.function(f2)

    def point(outs, ins, a, b):
        sub_out = "".join(a[e] for e in outs[0])
        sub_in = "".join(b[e] for e in ins[0])
        if F2 is None:
            return [(ctx.vertex_tensor(F1, len(outs[0]), len(ins[0])), sub_out + sub_in)]
        return [
            (ctx.vertex_tensor(F1, 0, len(ins[0])), sub_in),
            (ctx.vertex_tensor(F2, len(outs[0]), 0), sub_out),
        ]

    return _contract(G, ctx, point)


def evaluate_sum(S, ctx: JetContext, f1: str | TaylorJet = "f1", f2: str | TaylorJet | None = None) -> complex:
    """Evaluate a :class:`GraphSum` term by term (graphs taken literally)."""
    total = 0j
    for G, c in S.items():
        v = evaluate_pointed(G, ctx, f1, f2) if G.pointed else evaluate_graph(G, ctx)
        total += float(c) * v
    return total


def _jet_product(G: Digraph, ctx: JetContext, point_jets) -> TaylorJet:
    n = ctx.dim
    outs, ins = _ends(G)
    ginv = ctx.ginv_jets()
    total = None
    for assign in product(range(n), repeat=2 * len(G.edges)):
        ia = assign[: len(G.edges)]
        jb = assign[len(G.edges) :]
        term = None
        factors = [ginv[ia[e]][jb[e]] for e in range(len(G.edges))]
        for v in G.ordinary:
            al = ctx.alpha([ia[e] for e in outs[v]], [jb[e] for e in ins[v]])
            factors.append(ctx.phi.partial(al))
        factors.extend(point_jets([ia[e] for e in outs[0]], [jb[e] for e in ins[0]]) if G.pointed else [])
        for F in factors:
            term = F if term is None else term * F
        if term is None:
            continue
        total = term if total is None else total + term
    if total is None:
        total = TaylorJet.constant(1.0, ctx.nvars, ctx.order)
    return total


def graph_jet(G: Digraph, ctx: JetContext) -> TaylorJet:
    """A plain graph as a function near the base point."""
    if G.pointed:
        raise GraphError("use pointed_jet for pointed graphs")
    _check_vertices(G)
    return _jet_product(G, ctx, None)


def pointed_jet(
    G: Digraph, ctx: JetContext, f1: str | TaylorJet = "f1", f2: str | TaylorJet | None = None
) -> TaylorJet:
    """``Γ(f)`` or ``Γ^op(f1, f2)`` as a function near the base point."""
    if not G.pointed:
        raise GraphError("expected a pointed graph")
    _check_vertices(G)
    F1 = ctx.function(f1)
    F2 = None if f2 is None else ctx.function(f2)

    def point(holo, anti):
        if F2 is None:
            return [F1.partial(ctx.alpha(holo, anti))]
        return [F1.partial(ctx.alpha([], anti)), F2.partial(ctx.alpha(holo, []))]

    return _jet_product(G, ctx, point)


def rel_diff(x: complex, y: complex, floor: float = 1e-300) -> float:
    return abs(x - y) / max(abs(x), abs(y), floor)


@dataclass
class InvarianceReport:
    ok: bool
    value0: complex
    value1: complex
    rel_error: float
    tolerance: float
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def invariance_test(S, atlas: str, tolerance: float = 1e-9, order: int = DEFAULT_ORDER,
                    function: str = "f1") -> InvarianceReport:
    """Evaluate a graph sum in both charts at corresponding points.

    Pointed sums act on the named test function, transported between charts.
    """
    vals = []
    for chart in (0, 1):
        ctx = builtin_context(atlas, chart, order)
        vals.append(evaluate_sum(S, ctx, function) if S.pointed else evaluate_sum(S, ctx))
    err = rel_diff(vals[0], vals[1])
    return InvarianceReport(err <= tolerance, vals[0], vals[1], err, tolerance)
