"""Formal linear combinations of isomorphism classes of graphs with rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .canonical import canonical_key, graph_from_key
from .graph import Digraph, GraphError, graph_from_json, graph_to_json, weight

__all__ = ["GraphSum", "Rational", "as_fraction"]

Rational = Union[int, Fraction, str]


def as_fraction(x: Rational) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


class GraphSum:
    """``sum c_i G_i`` over canonical keys; zero coefficients are never stored.

    Instances are treated as immutable values.
    """

    __slots__ = ("_terms", "pointed")

    def __init__(self, terms: Mapping[bytes, Rational] | None = None, *, pointed: bool):
        self.pointed = pointed
        clean: dict[bytes, Fraction] = {}
        for key, c in (terms or {}).items():
            if key[0] != int(pointed):
                raise GraphError("graph kind does not match the sum")
            c = as_fraction(c)
            if c:
                clean[key] = c
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def from_graphs(cls, items: Iterable[tuple[Digraph, Rational]], *, pointed: bool | None = None) -> "GraphSum":
        acc: dict[bytes, Fraction] = {}
        kind = pointed
        for G, c in items:
            if kind is None:
                kind = G.pointed
            elif G.pointed != kind:
                raise GraphError("cannot mix pointed and plain graphs")
            key = canonical_key(G)
            acc[key] = acc.get(key, Fraction(0)) + as_fraction(c)
        return cls(acc, pointed=bool(kind))

    @classmethod
    def single(cls, G: Digraph, c: Rational = 1) -> "GraphSum":
        return cls({canonical_key(G): c}, pointed=G.pointed)

    # read access
    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self) -> Iterator[bytes]:
        return iter(self._terms)

    def __contains__(self, key: object) -> bool:
        return key in self._terms

    def terms(self) -> dict[bytes, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Digraph, Fraction]]:
        for key, c in self._terms.items():
            yield graph_from_key(key), c

    def coeff(self, G: Digraph | bytes) -> Fraction:
        key = G if isinstance(G, bytes) else canonical_key(G)
        return self._terms.get(key, Fraction(0))

    @property
    def weights(self) -> set[int]:
        return {weight(graph_from_key(k)) for k in self._terms}

    def grade(self, w: int) -> "GraphSum":
        return GraphSum({k: c for k, c in self._terms.items() if weight(graph_from_key(k)) == w},
                        pointed=self.pointed)

    # arithmetic
    def _check_kind(self, other: "GraphSum") -> None:
        if self.pointed != other.pointed:
            raise GraphError("cannot combine pointed and plain sums")

    def __add__(self, other: "GraphSum") -> "GraphSum":
        self._check_kind(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, Fraction(0)) + c
        return type(self)(acc, pointed=self.pointed)

    def __neg__(self) -> "GraphSum":
        return type(self)({k: -c for k, c in self._terms.items()}, pointed=self.pointed)

    def __sub__(self, other: "GraphSum") -> "GraphSum":
        return self + (-other)

    def __mul__(self, s: Rational) -> "GraphSum":
        s = as_fraction(s)
        return type(self)({k: c * s for k, c in self._terms.items()}, pointed=self.pointed)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphSum):
            return NotImplemented
        return self.pointed == other.pointed and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.pointed, tuple(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"{type(self).__name__}(0)"
        parts = [f"({c})*[{graph_from_key(k)}]" for k, c in self._terms.items()]
        return f"{type(self).__name__}(" + " + ".join(parts) + ")"

    # serialization
    def to_json(self) -> list[dict]:
        return [
            {"key": k.hex(), "graph": graph_to_json(graph_from_key(k)), "coeff": _fmt(c)}
            for k, c in self._terms.items()
        ]

    @classmethod
    def from_json(cls, data: list[dict], *, pointed: bool | None = None) -> "GraphSum":
        items = [(graph_from_json(t["graph"]), Fraction(t["coeff"])) for t in data]
        if pointed is None and not items:
            raise GraphError("cannot infer the kind of an empty sum; pass pointed=")
        out = cls.from_graphs(items, pointed=pointed)
        for t in data:
            if "key" in t and bytes.fromhex(t["key"]) != canonical_key(graph_from_json(t["graph"])):
                raise GraphError(f"key {t['key']} does not match its graph")
        return out


def _fmt(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"
