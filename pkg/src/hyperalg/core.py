"""Hypergraphs on ordered finite vertex sets and their deterministic operators.

Hyperedges are plain ``int`` bitmasks over vertex positions: bit ``i`` set means
the ``i``-th vertex of the owning :class:`VertexSet` is a member.  A
:class:`Hypergraph` is an immutable pair of a vertex set and a frozenset of such
masks.  Everything in this module is a pure function of its arguments.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce
from operator import or_
from typing import Iterable, Iterator, Sequence

from .errors import (
    ClassificationError,
    EnumerationBoundError,
    SerializationError,
    VertexSetError,
)

MAX_VERTICES = 64
# operators that materialise all of Delta[V] (complement, superset closure, ...)
MAX_DENSE_VERTICES = 20


def _split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside parentheses; raise on unbalanced input."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SerializationError(f"unbalanced ')' in {text!r}")
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise SerializationError(f"unbalanced '(' in {text!r}")
    parts.append(text[start:])
    return parts


def _check_label(label: str) -> None:
    if not isinstance(label, str) or not label:
        raise VertexSetError(f"vertex labels must be nonempty strings, got {label!r}")
    if any(ch.isspace() for ch in label) or ";" in label or not label.isprintable():
        raise VertexSetError(f"vertex label {label!r} contains whitespace, ';' or control characters")
    try:
        pieces = _split_top_level(label)
    except SerializationError as exc:
        raise VertexSetError(str(exc)) from None
    if len(pieces) != 1:
        raise VertexSetError(f"vertex label {label!r} has a comma outside parentheses")


def bits(mask: int) -> Iterator[int]:
    """Yield the set positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def edge_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Sort key of the canonical edge order: cardinality, then positions lexicographically."""
    positions = tuple(bits(mask))
    return len(positions), positions


@lru_cache(maxsize=None)
def canonical_edges(n: int) -> tuple[int, ...]:
    """All nonempty subsets of ``n`` positions, as masks, in canonical order."""
    if n > MAX_DENSE_VERTICES:
        raise EnumerationBoundError(f"Delta[V] for |V|={n} is too large to materialise")
    out = []
    for k in range(1, n + 1):
        for combo in itertools.combinations(range(n), k):
            mask = 0
            for i in combo:
                mask |= 1 << i
            out.append(mask)
    return tuple(out)


@lru_cache(maxsize=None)
def canonical_index(n: int) -> dict[int, int]:
    return {mask: i for i, mask in enumerate(canonical_edges(n))}


@dataclass(frozen=True)
class VertexSet:
    """Ordered tuple of distinct vertex labels; position defines the total order."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not 1 <= len(labels) <= MAX_VERTICES:
            raise VertexSetError(f"a vertex set needs 1..{MAX_VERTICES} labels, got {len(labels)}")
        for label in labels:
            _check_label(label)
        if len(set(labels)) != len(labels):
            raise VertexSetError(f"duplicate vertex labels in {labels}")

    @classmethod
    def parse(cls, text: str) -> "VertexSet":
        """Build from comma-separated labels (``"a,b,c"``); parenthesised labels may hold commas."""
        try:
            return cls(tuple(p.strip() for p in _split_top_level(text.strip())))
        except SerializationError as exc:
            raise VertexSetError(str(exc)) from None

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __str__(self) -> str:
        return ",".join(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def index(self, label: str) -> int:
        try:
            return self._positions()[label]
        except KeyError:
            raise VertexSetError(f"unknown vertex {label!r}") from None

    def _positions(self) -> dict[str, int]:
        cache = self.__dict__.get("_pos")
        if cache is None:
            cache = {label: i for i, label in enumerate(self.labels)}
            object.__setattr__(self, "_pos", cache)
        return cache

    def mask(self, labels: Iterable[str]) -> int:
        """Bitmask of a collection of labels; rejects the empty collection."""
        mask = 0
        for label in labels:
            mask |= 1 << self.index(label)
        if not mask:
            raise VertexSetError("a hyperedge must be nonempty")
        return mask

    def members(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in bits(mask))

    def join(self, other: "VertexSet") -> "VertexSet":
        """Disjoint union, all of ``self`` ordered before ``other``."""
        overlap = set(self.labels) & set(other.labels)
        if overlap:
            raise VertexSetError(f"join needs disjoint vertex sets; shared labels {sorted(overlap)}")
        return VertexSet(self.labels + other.labels)

    def product(self, other: "VertexSet") -> "VertexSet":
        """Cartesian product with labels ``(left,right)``, left-major order."""
        return VertexSet(tuple(f"({a},{b})" for a in self.labels for b in other.labels))


class HypergraphClass(enum.Enum):
    COMPLEX = "complex"
    INDEPENDENCE = "independence"
    BOTH = "both"
    NEITHER = "neither"

    @property
    def is_complex(self) -> bool:
        return self in (HypergraphClass.COMPLEX, HypergraphClass.BOTH)

    @property
    def is_independence(self) -> bool:
        return self in (HypergraphClass.INDEPENDENCE, HypergraphClass.BOTH)


@dataclass(frozen=True)
class Hypergraph:
    """A finite set of nonempty hyperedges (bitmasks) over a vertex set.

    Iteration yields edges in canonical order (ascending cardinality, then
    position-lexicographic), so serialisation and comparison are exact.
    """

    vertex_set: VertexSet
    edges: frozenset = frozenset()

    def __post_init__(self):
        edges = frozenset(self.edges)
        full = self.vertex_set.full_mask
        if edges and not (
            all(isinstance(e, int) for e in edges) and min(edges) > 0 and not reduce(or_, edges) & ~full
        ):
            bad = next(e for e in edges if not isinstance(e, int) or e <= 0 or e & ~full)
            raise VertexSetError(f"edge mask {bad!r} is not a nonempty subset of {self.vertex_set}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_labels(cls, vertex_set: VertexSet, edges: Iterable[Iterable[str]]) -> "Hypergraph":
        return cls(vertex_set, frozenset(vertex_set.mask(e) for e in edges))

    @classmethod
    def empty(cls, vertex_set: VertexSet) -> "Hypergraph":
        return cls(vertex_set, frozenset())

    @classmethod
    def full(cls, vertex_set: VertexSet) -> "Hypergraph":
        """The complete complex Delta[V]."""
        return cls(vertex_set, frozenset(canonical_edges(_dense_size(vertex_set))))

    @classmethod
    def from_code(cls, vertex_set: VertexSet, code: int) -> "Hypergraph":
        """Inverse of :meth:`code`."""
        universe = canonical_edges(_dense_size(vertex_set))
        if code < 0 or code >> len(universe):
            raise VertexSetError(f"code {code} out of range for |V|={len(vertex_set)}")
        return cls(vertex_set, frozenset(universe[i] for i in bits(code)))

    def code(self) -> int:
        """Edge-set bitmask: bit ``i`` set iff the ``i``-th canonical edge of Delta[V] is present."""
        index = canonical_index(_dense_size(self.vertex_set))
        out = 0
        for e in self.edges:
            out |= 1 << index[e]
        return out

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.edges, key=edge_key))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge) -> bool:
        if isinstance(edge, int):
            return edge in self.edges
        return self.vertex_set.mask(edge) in self.edges

    def __le__(self, other: "Hypergraph") -> bool:
        _same_vertex_set(self, other)
        return self.edges <= other.edges

    def __ge__(self, other: "Hypergraph") -> bool:
        _same_vertex_set(self, other)
        return self.edges >= other.edges

    def edge_sets(self) -> list[tuple[str, ...]]:
        """Edges as label tuples, canonical order."""
        return [self.vertex_set.members(e) for e in self]

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(m) + "}" for m in self.edge_sets())
        return f"Hypergraph({{{body}}} on {self.vertex_set})"

    def to_text(self) -> str:
        return format_hypergraph(self)


@dataclass(frozen=True)
class VertexMap:
    """Total map between vertex sets, stored as codomain positions indexed by domain position."""

    domain: VertexSet
    codomain: VertexSet
    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(self.mapping)
        object.__setattr__(self, "mapping", mapping)
        if len(mapping) != len(self.domain):
            raise VertexSetError("vertex map must be total on its domain")
        if any(not 0 <= j < len(self.codomain) for j in mapping):
            raise VertexSetError("vertex map sends a vertex outside its codomain")

    @classmethod
    def from_labels(cls, domain: VertexSet, codomain: VertexSet, assignment: dict) -> "VertexMap":
        return cls(domain, codomain, tuple(codomain.index(assignment[v]) for v in domain.labels))

    def image(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.mapping[i]
        return out


def _dense_size(vertex_set: VertexSet) -> int:
    n = len(vertex_set)
    if n > MAX_DENSE_VERTICES:
        raise EnumerationBoundError(
            f"operation needs all of Delta[V]; |V|={n} exceeds {MAX_DENSE_VERTICES}"
        )
    return n


def _same_vertex_set(h1: Hypergraph, h2: Hypergraph) -> None:
    if h1.vertex_set != h2.vertex_set:
        raise VertexSetError(
            f"vertex sets differ: [{h1.vertex_set}] vs [{h2.vertex_set}]"
        )


def _faces(mask: int) -> Iterator[int]:
    """Nonempty codimension-one faces."""
    for i in bits(mask):
        face = mask & ~(1 << i)
        if face:
            yield face


def _cofaces(mask: int, full: int) -> Iterator[int]:
    for i in bits(full & ~mask):
        yield mask | (1 << i)


# -- unary operators ---------------------------------------------------------


def complement(h: Hypergraph) -> Hypergraph:
    """Every nonempty subset of V that is not an edge of ``h``."""
    universe = canonical_edges(_dense_size(h.vertex_set))
    return Hypergraph(h.vertex_set, frozenset(universe).difference(h.edges))


def assoc_complex(h: Hypergraph) -> Hypergraph:
    """Smallest simplicial complex containing ``h`` (subset closure)."""
    out: set[int] = set()
    for e in sorted(h.edges, key=int.bit_count, reverse=True):
        if e in out:
            continue
        s = e
        while s:
            out.add(s)
            s = (s - 1) & e
    return Hypergraph(h.vertex_set, frozenset(out))


def lower_complex(h: Hypergraph) -> Hypergraph:
    """Largest simplicial complex contained in ``h``."""
    out: set[int] = set()
    for e in sorted(h.edges, key=int.bit_count):
        if all(f in out for f in _faces(e)):
            out.add(e)
    return Hypergraph(h.vertex_set, frozenset(out))


def assoc_indep(h: Hypergraph) -> Hypergraph:
    """Smallest independence hypergraph containing ``h`` (superset closure within V)."""
    full = h.vertex_set.full_mask
    out: set[int] = set()
    for e in sorted(h.edges, key=int.bit_count):
        if e in out:
            continue
        free = full & ~e
        s = free
        while True:
            out.add(e | s)
            if not s:
                break
            s = (s - 1) & free
    return Hypergraph(h.vertex_set, frozenset(out))


def lower_indep(h: Hypergraph) -> Hypergraph:
    """Largest independence hypergraph contained in ``h``."""
    full = h.vertex_set.full_mask
    out: set[int] = set()
    for e in sorted(h.edges, key=int.bit_count, reverse=True):
        if all(c in out for c in _cofaces(e, full)):
            out.add(e)
    return Hypergraph(h.vertex_set, frozenset(out))


# -- classification and derived edge sets -------------------------------------


def is_complex(h: Hypergraph) -> bool:
    return all(f in h.edges for e in h.edges for f in _faces(e))


def is_independence(h: Hypergraph) -> bool:
    full = h.vertex_set.full_mask
    return all(c in h.edges for e in h.edges for c in _cofaces(e, full))


def classify(h: Hypergraph) -> HypergraphClass:
    down, up = is_complex(h), is_independence(h)
    if down and up:
        return HypergraphClass.BOTH
    if down:
        return HypergraphClass.COMPLEX
    if up:
        return HypergraphClass.INDEPENDENCE
    return HypergraphClass.NEITHER


def require_complex(h: Hypergraph) -> None:
    if not is_complex(h):
        raise ClassificationError(f"{h!r} is not a simplicial complex")


def require_independence(h: Hypergraph) -> None:
    if not is_independence(h):
        raise ClassificationError(f"{h!r} is not an independence hypergraph")


def external_faces(k: Hypergraph) -> frozenset:
    """Missing edges all of whose nonempty proper subsets lie in the complex ``k``."""
    require_complex(k)
    edges = k.edges
    candidates = {1 << i for i in range(len(k.vertex_set))}
    full = k.vertex_set.full_mask
    for e in edges:
        candidates.update(_cofaces(e, full))
    return frozenset(
        c for c in candidates if c not in edges and all(f in edges for f in _faces(c))
    )


def co_external_faces(l: Hypergraph) -> frozenset:  # noqa: E741
    """Missing edges all of whose proper supersets (within V) lie in ``l``."""
    require_independence(l)
    edges = l.edges
    full = l.vertex_set.full_mask
    candidates = {full}
    for e in edges:
        candidates.update(_faces(e))
    return frozenset(
        c for c in candidates if c not in edges and all(s in edges for s in _cofaces(c, full))
    )


def extremal_edges(h: Hypergraph, mode: str) -> frozenset:
    """Maximal (``mode="maximal"``) or minimal (``mode="minimal"``) edges under inclusion."""
    edges = h.edges
    if mode == "maximal":
        return frozenset(e for e in edges if not any(f != e and f & e == e for f in edges))
    if mode == "minimal":
        return frozenset(e for e in edges if not any(f != e and f & e == f for f in edges))
    raise ValueError(f"mode must be 'maximal' or 'minimal', got {mode!r}")


# -- binary operators ---------------------------------------------------------


def combine(h1: Hypergraph, h2: Hypergraph, op: str) -> Hypergraph:
    """Edge-set intersection (``op="intersect"``) or union (``op="union"``)."""
    _same_vertex_set(h1, h2)
    if op == "intersect":
        return Hypergraph(h1.vertex_set, h1.edges & h2.edges)
    if op == "union":
        return Hypergraph(h1.vertex_set, h1.edges | h2.edges)
    raise ValueError(f"op must be 'intersect' or 'union', got {op!r}")


def join(h1: Hypergraph, h2: Hypergraph) -> Hypergraph:
    """All unions of an edge of ``h1`` with an edge of ``h2``, plus both inputs, on V1 then V2."""
    vs = h1.vertex_set.join(h2.vertex_set)
    shift = len(h1.vertex_set)
    right = [e << shift for e in h2.edges]
    edges = {a | b for a in h1.edges for b in right}
    edges.update(h1.edges)
    edges.update(right)
    return Hypergraph(vs, frozenset(edges))


def box_product(h1: Hypergraph, h2: Hypergraph) -> Hypergraph:
    """Pairwise Cartesian products of edges, on the left-major product vertex set."""
    vs = h1.vertex_set.product(h2.vertex_set)
    width = len(h2.vertex_set)
    edges = set()
    for a in h1.edges:
        for b in h2.edges:
            mask = 0
            for i in bits(a):
                mask |= b << (i * width)
            edges.add(mask)
    return Hypergraph(vs, frozenset(edges))


def apply_vertex_map(f: VertexMap, h: Hypergraph) -> Hypergraph:
    """Image hypergraph ``{f(sigma)}`` on the codomain."""
    if f.domain != h.vertex_set:
        raise VertexSetError("vertex map domain does not match the hypergraph's vertex set")
    return Hypergraph(f.codomain, frozenset(f.image(e) for e in h.edges))


# -- text format --------------------------------------------------------------

HEADER = "# vertices:"


def format_hypergraph(h: Hypergraph) -> str:
    """Canonical text: header line, one edge per line, blank terminator line."""
    lines = [HEADER + " " + " ".join(h.vertex_set.labels)]
    lines.extend(",".join(members) for members in h.edge_sets())
    return "\n".join(lines) + "\n\n"


def parse_hypergraphs(text: str) -> list[Hypergraph]:
    """Parse every hypergraph block in ``text``; other ``#`` lines (manifests) are skipped."""
    out: list[Hypergraph] = []
    vs: VertexSet | None = None
    edges: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith(HEADER):
            if vs is not None:
                out.append(Hypergraph(vs, frozenset(edges)))
            labels = line[len(HEADER):].split()
            try:
                vs = VertexSet(tuple(labels))
            except VertexSetError as exc:
                raise SerializationError(f"line {lineno}: {exc}") from None
            edges = []
        elif line.startswith("#"):
            continue
        elif not line:
            if vs is not None:
                out.append(Hypergraph(vs, frozenset(edges)))
                vs = None
        else:
            if vs is None:
                raise SerializationError(f"line {lineno}: edge before '{HEADER}' header")
            try:
                mask = parse_edge(vs, line)
            except SerializationError as exc:
                raise SerializationError(f"line {lineno}: {exc}") from None
            if mask in edges:
                raise SerializationError(f"line {lineno}: repeated edge {line!r}")
            edges.append(mask)
    if vs is not None:
        out.append(Hypergraph(vs, frozenset(edges)))
    return out


def parse_hypergraph(text: str) -> Hypergraph:
    """Parse exactly one hypergraph block."""
    found = parse_hypergraphs(text)
    if len(found) != 1:
        raise SerializationError(f"expected one hypergraph, found {len(found)}")
    return found[0]


def parse_edge(vertex_set: VertexSet, text: str) -> int:
    """Edge mask from serialisation syntax (``a,b``)."""
    members = [m.strip() for m in _split_top_level(text.strip())]
    if len(set(members)) != len(members):
        raise SerializationError(f"repeated vertex in edge {text!r}")
    try:
        return vertex_set.mask(members)
    except VertexSetError as exc:
        raise SerializationError(str(exc)) from None


def hypergraph(labels: str | Sequence[str], *edges: str) -> Hypergraph:
    """Shorthand constructor: ``hypergraph("a,b", "a", "a,b")``."""
    vs = VertexSet.parse(labels) if isinstance(labels, str) else VertexSet(tuple(labels))
    return Hypergraph(vs, frozenset(parse_edge(vs, e) for e in edges))
