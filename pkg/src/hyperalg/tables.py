"""Dense probability tables over all hypergraphs on a small vertex set."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import Hypergraph, HypergraphClass, VertexSet, canonical_edges, classify
from .errors import EnumerationBoundError, VertexSetError

MAX_TABLE_EDGES = 20


def check_enumerable(vertex_set: VertexSet) -> int:
    """Number of edges of Delta[V]; raises if 2**that many states is over the bound."""
    n = len(vertex_set)
    m = (1 << n) - 1
    if m > MAX_TABLE_EDGES:
        raise EnumerationBoundError(
            f"|Delta[V]| = {m} for |V| = {n} exceeds the enumeration bound of {MAX_TABLE_EDGES}"
        )
    return m


def enumerate_hypergraphs(
    vertex_set: VertexSet, class_filter: HypergraphClass | None = None
) -> Iterator[Hypergraph]:
    """All hypergraphs on ``vertex_set`` in code order, optionally restricted to a class.

    ``COMPLEX`` and ``INDEPENDENCE`` filters keep hypergraphs in that class
    (``BOTH`` members included); ``BOTH`` and ``NEITHER`` match exactly.
    """
    m = check_enumerable(vertex_set)
    for code in range(1 << m):
        h = Hypergraph.from_code(vertex_set, code)
        if class_filter is None or _matches(classify(h), class_filter):
            yield h


def _matches(cls: HypergraphClass, wanted: HypergraphClass) -> bool:
    if wanted is HypergraphClass.COMPLEX:
        return cls.is_complex
    if wanted is HypergraphClass.INDEPENDENCE:
        return cls.is_independence
    return cls is wanted


@dataclass(frozen=True, eq=False)
class DistributionTable:
    """Probability mass indexed by hypergraph code (bit i = i-th canonical edge present)."""

    vertex_set: VertexSet
    masses: np.ndarray

    def __post_init__(self):
        m = check_enumerable(self.vertex_set)
        masses = np.array(self.masses, dtype=np.float64)
        if masses.shape != (1 << m,):
            raise ValueError(f"expected {1 << m} masses, got shape {masses.shape}")
        if (masses < 0).any():
            raise ValueError("negative probability mass")
        masses.setflags(write=False)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def zeros(cls, vertex_set: VertexSet) -> "DistributionTable":
        return cls(vertex_set, np.zeros(1 << check_enumerable(vertex_set)))

    @classmethod
    def point_mass(cls, h: Hypergraph) -> "DistributionTable":
        masses = np.zeros(1 << check_enumerable(h.vertex_set))
        masses[h.code()] = 1.0
        return cls(h.vertex_set, masses)

    def __len__(self) -> int:
        return len(self.masses)

    def total(self) -> float:
        return float(self.masses.sum())

    def mass(self, h: Hypergraph) -> float:
        if h.vertex_set != self.vertex_set:
            raise VertexSetError("hypergraph is on a different vertex set than the table")
        return float(self.masses[h.code()])

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.masses)

    def items(self) -> Iterator[tuple[int, float]]:
        for code in self.support():
            yield int(code), float(self.masses[code])

    def max_abs_diff(self, other: "DistributionTable") -> float:
        _same_table_space(self, other)
        return float(np.max(np.abs(self.masses - other.masses)))

    def to_text(self) -> str:
        """Canonical edge list of Delta[V] followed by ``index<TAB>mass`` lines."""
        lines = ["# vertices: " + " ".join(self.vertex_set.labels)]
        for i, e in enumerate(canonical_edges(len(self.vertex_set))):
            lines.append(f"# edge {i}: " + ",".join(self.vertex_set.members(e)))
        lines.extend(f"{code}\t{float(self.masses[code])!r}" for code in range(len(self.masses)))
        return "\n".join(lines) + "\n"


def _same_table_space(t1: DistributionTable, t2: DistributionTable) -> None:
    if t1.vertex_set != t2.vertex_set:
        raise VertexSetError(f"tables on different vertex sets: [{t1.vertex_set}] vs [{t2.vertex_set}]")
