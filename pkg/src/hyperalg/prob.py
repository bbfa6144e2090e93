"""Probability maps on Delta[V], the three product-form models and their closed-form pushforwards."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .core import (
    Hypergraph,
    VertexSet,
    canonical_edges,
    co_external_faces,
    complement,
    extremal_edges,
    external_faces,
    edge_key,
    parse_edge,
    require_complex,
    require_independence,
)
from .errors import ClassificationError, ProbabilityMapError, SerializationError, VertexSetError


def _check_probability(value: float, what: str = "probability") -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0 or math.isnan(value):
        raise ProbabilityMapError(f"{what} {value!r} is outside [0, 1]")
    return value


class ProbabilityMap:
    """A function p: Delta[V] -> [0, 1].  Call it with an edge mask."""

    vertex_set: VertexSet

    def __call__(self, edge: int) -> float:
        if edge <= 0 or edge & ~self.vertex_set.full_mask:
            raise VertexSetError(f"edge mask {edge!r} is not valid over {self.vertex_set}")
        return self._value(edge)

    def _value(self, edge: int) -> float:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def values(self) -> list[float]:
        """Values on Delta[V] in canonical edge order."""
        return [self._value(e) for e in canonical_edges(len(self.vertex_set))]


@dataclass(frozen=True)
class Constant(ProbabilityMap):
    vertex_set: VertexSet
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _check_probability(self.value))

    def _value(self, edge):
        return self.value

    def describe(self):
        return f"const:{self.value!r}"


@dataclass(frozen=True)
class PerDimension(ProbabilityMap):
    """Value indexed by edge cardinality minus one; missing trailing entries are 0."""

    vertex_set: VertexSet
    dims: tuple[float, ...]

    def __post_init__(self):
        dims = tuple(_check_probability(v) for v in self.dims)
        if not dims:
            raise ProbabilityMapError("dims needs at least one value")
        object.__setattr__(self, "dims", dims)

    def _value(self, edge):
        d = edge.bit_count() - 1
        return self.dims[d] if d < len(self.dims) else 0.0

    def describe(self):
        return "dims:" + ",".join(repr(v) for v in self.dims)


@dataclass(frozen=True, eq=False)
class Table(ProbabilityMap):
    """Explicit edge -> value assignment; must cover every edge that is queried."""

    vertex_set: VertexSet
    table: Mapping[int, float] = field(repr=False)
    source: str = "inline"

    def __post_init__(self):
        full = self.vertex_set.full_mask
        checked = {}
        for edge, value in self.table.items():
            if edge <= 0 or edge & ~full:
                raise ProbabilityMapError(f"table edge {edge!r} not valid over {self.vertex_set}")
            checked[edge] = _check_probability(value)
        object.__setattr__(self, "table", checked)

    def _value(self, edge):
        try:
            return self.table[edge]
        except KeyError:
            members = ",".join(self.vertex_set.members(edge))
            raise ProbabilityMapError(f"table map has no value for edge {{{members}}}") from None

    def is_total(self) -> bool:
        return all(e in self.table for e in canonical_edges(len(self.vertex_set)))

    def describe(self):
        return f"table:{self.source}"


@dataclass(frozen=True)
class Complemented(ProbabilityMap):
    inner: ProbabilityMap

    @property
    def vertex_set(self):
        return self.inner.vertex_set

    def _value(self, edge):
        return 1.0 - self.inner._value(edge)

    def describe(self):
        return f"1-({self.inner.describe()})"


def _same_vertex_set(p1: ProbabilityMap, p2: ProbabilityMap) -> None:
    if p1.vertex_set != p2.vertex_set:
        raise VertexSetError(f"maps live on different vertex sets: [{p1.vertex_set}] vs [{p2.vertex_set}]")


@dataclass(frozen=True)
class Meet(ProbabilityMap):
    """Pointwise product."""

    left: ProbabilityMap
    right: ProbabilityMap

    def __post_init__(self):
        _same_vertex_set(self.left, self.right)

    @property
    def vertex_set(self):
        return self.left.vertex_set

    def _value(self, edge):
        return self.left._value(edge) * self.right._value(edge)

    def describe(self):
        return f"meet({self.left.describe()};{self.right.describe()})"


@dataclass(frozen=True)
class JoinUnion(ProbabilityMap):
    """Pointwise 1 - (1 - p')(1 - p'')."""

    left: ProbabilityMap
    right: ProbabilityMap

    def __post_init__(self):
        _same_vertex_set(self.left, self.right)

    @property
    def vertex_set(self):
        return self.left.vertex_set

    def _value(self, edge):
        return 1.0 - (1.0 - self.left._value(edge)) * (1.0 - self.right._value(edge))

    def describe(self):
        return f"union({self.left.describe()};{self.right.describe()})"


@dataclass(frozen=True)
class JoinOf(ProbabilityMap):
    """Map on the join V' + V'': p'(edge & V') * p''(edge & V''), an empty part counting as 1."""

    left: ProbabilityMap
    right: ProbabilityMap
    vertex_set: VertexSet = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "vertex_set", self.left.vertex_set.join(self.right.vertex_set))

    def _value(self, edge):
        shift = len(self.left.vertex_set)
        low = edge & ((1 << shift) - 1)
        high = edge >> shift
        value = 1.0
        if low:
            value *= self.left._value(low)
        if high:
            value *= self.right._value(high)
        return value

    def describe(self):
        return f"star({self.left.describe()};{self.right.describe()})"


# -- operations ---------------------------------------------------------------


def evaluate_map(p: ProbabilityMap, edge: int) -> float:
    return p(edge)


def complement_map(p: ProbabilityMap) -> ProbabilityMap:
    """Pointwise 1 - p.  Complementing twice returns the original object."""
    if isinstance(p, Complemented):
        return p.inner
    return Complemented(p)


def combine_maps(p1: ProbabilityMap, p2: ProbabilityMap, op: str) -> ProbabilityMap:
    """``meet`` (product), ``join_union`` (1-(1-p')(1-p'')) or ``star`` (map on the join)."""
    if op == "meet":
        return Meet(p1, p2)
    if op == "join_union":
        return JoinUnion(p1, p2)
    if op == "star":
        return JoinOf(p1, p2)
    raise ValueError(f"unknown map combination {op!r}")


def preset_map(name: str, q: float, vertex_set: VertexSet, d: int | None = None) -> PerDimension:
    """Per-dimension presets: ``gnp``, ``linial_meshulam``, ``meshulam_wallach`` (needs ``d``), ``clique``."""
    n = len(vertex_set)
    q = _check_probability(q)
    if name == "gnp":
        top = 1
    elif name == "linial_meshulam":
        top = 2
    elif name == "meshulam_wallach":
        if d is None:
            raise ProbabilityMapError("meshulam_wallach needs a dimension d")
        top = int(d)
    elif name == "clique":
        if n < 2:
            raise ProbabilityMapError("clique preset needs at least two vertices")
        return PerDimension(vertex_set, (1.0, q) + (1.0,) * (n - 2))
    else:
        raise ProbabilityMapError(f"unknown preset {name!r}")
    if not 1 <= top < n:
        raise ProbabilityMapError(f"dimension {top} out of range for |V|={n}")
    dims = [1.0] * top + [q] + [0.0] * (n - top - 1)
    return PerDimension(vertex_set, tuple(dims))


def random_table_map(vertex_set: VertexSet, seed: int) -> Table:
    """Table map with independent uniform values, reproducible from ``seed``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    edges = canonical_edges(len(vertex_set))
    values = rng.random(len(edges))
    return Table(vertex_set, dict(zip(edges, values.tolist())), source=f"random-seed-{seed}")


def read_table_map(path: str | Path, vertex_set: VertexSet) -> Table:
    """Read ``<edge>\\t<value>`` lines; ``#`` lines and blank lines are ignored."""
    table = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            edge_text, value_text = line.rsplit(None, 1)
            edge = parse_edge(vertex_set, edge_text)
            table[edge] = float(value_text)
        except (ValueError, SerializationError) as exc:
            raise ProbabilityMapError(f"{path}:{lineno}: {exc}") from None
    return Table(vertex_set, table, source=str(path))


def parse_prob_spec(text: str, vertex_set: VertexSet) -> ProbabilityMap:
    """Parse ``const:`` / ``dims:`` / ``table:`` / ``gnp:`` / ``lm:`` / ``mw:<d>:`` / ``clique:`` specs."""
    kind, _, rest = text.strip().partition(":")
    try:
        if kind == "const":
            return Constant(vertex_set, float(rest))
        if kind == "dims":
            return PerDimension(vertex_set, tuple(float(v) for v in rest.split(",")))
        if kind == "table":
            return read_table_map(rest, vertex_set)
        if kind == "gnp":
            return preset_map("gnp", float(rest), vertex_set)
        if kind == "lm":
            return preset_map("linial_meshulam", float(rest), vertex_set)
        if kind == "mw":
            d, _, q = rest.partition(":")
            return preset_map("meshulam_wallach", float(q), vertex_set, int(d))
        if kind == "clique":
            return preset_map("clique", float(rest), vertex_set)
    except ValueError as exc:
        if isinstance(exc, ProbabilityMapError):
            raise
        raise ProbabilityMapError(f"bad probability spec {text!r}: {exc}") from None
    raise ProbabilityMapError(f"unknown probability spec {text!r}")


# -- models -------------------------------------------------------------------


def _check_vertex_set(p: ProbabilityMap, h: Hypergraph) -> None:
    if p.vertex_set != h.vertex_set:
        raise VertexSetError("probability map and hypergraph live on different vertex sets")


def _ordered(edges) -> list[int]:
    return sorted(edges, key=edge_key)


def mass_hypergraph(p: ProbabilityMap, h: Hypergraph) -> float:
    """Independent-edge law: product of p over edges and 1 - p over non-edges."""
    _check_vertex_set(p, h)
    mass = 1.0
    for e in canonical_edges(len(h.vertex_set)):
        mass *= p._value(e) if e in h.edges else 1.0 - p._value(e)
    return mass


def mass_complex(p: ProbabilityMap, k: Hypergraph) -> float:
    """Product of p over simplices and 1 - p over external faces."""
    _check_vertex_set(p, k)
    mass = 1.0
    for e in k:
        mass *= p._value(e)
    for e in _ordered(external_faces(k)):
        mass *= 1.0 - p._value(e)
    return mass


def mass_indep(p: ProbabilityMap, l: Hypergraph) -> float:  # noqa: E741
    """Product of p over edges and 1 - p over co-external faces."""
    _check_vertex_set(p, l)
    mass = 1.0
    for e in l:
        mass *= p._value(e)
    for e in _ordered(co_external_faces(l)):
        mass *= 1.0 - p._value(e)
    return mass


def pushforward_closed_form(p: ProbabilityMap, target: Hypergraph, operator: str) -> float:
    """Probability that the closure ``operator`` of a random hypergraph equals ``target``.

    ``operator`` is one of ``up``, ``iup``, ``down``, ``idown`` (the associated
    complex, associated independence hypergraph and their lower variants).
    """
    _check_vertex_set(p, target)
    universe = canonical_edges(len(target.vertex_set))
    edges = target.edges
    if operator in ("up", "down"):
        require_complex(target)
    elif operator in ("iup", "idown"):
        require_independence(target)
    else:
        raise ValueError(f"unknown closure operator {operator!r}")

    if operator == "up":
        present = extremal_edges(target, "maximal")
        absent = [e for e in universe if e not in edges]
    elif operator == "iup":
        present = extremal_edges(target, "minimal")
        absent = [e for e in universe if e not in edges]
    elif operator == "down":
        present = edges
        absent = extremal_edges(complement(target), "minimal")
    else:
        present = edges
        absent = extremal_edges(complement(target), "maximal")

    mass = 1.0
    for e in _ordered(present):
        mass *= p._value(e)
    for e in _ordered(absent):
        mass *= 1.0 - p._value(e)
    return mass


class Family(enum.Enum):
    PBAR = "pbar"
    P = "p"
    Q = "q"


@dataclass(frozen=True)
class ModelDescriptor:
    """A model family together with its probability map."""

    family: Family
    map: ProbabilityMap

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))

    @property
    def vertex_set(self) -> VertexSet:
        return self.map.vertex_set

    def mass(self, h: Hypergraph) -> float:
        """Model probability of ``h``; zero outside the family's support class."""
        try:
            if self.family is Family.PBAR:
                return mass_hypergraph(self.map, h)
            if self.family is Family.P:
                return mass_complex(self.map, h)
            return mass_indep(self.map, h)
        except ClassificationError:
            return 0.0

    def describe(self) -> str:
        return f"{self.family.value}[{self.map.describe()}]"
