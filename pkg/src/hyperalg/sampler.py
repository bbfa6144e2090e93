"""Seeded samplers for the three product-form random hypergraph models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .core import Hypergraph, VertexSet, _cofaces, _faces, canonical_edges, edge_key
from .prob import ProbabilityMap

GENERATOR_TAG = "pcg64-seedseq-v1"
_BUFFER = 4096


class SampleStream:
    """Deterministic stream of uniforms on [0, 1) keyed by ``(seed, replicate)``.

    Backed by numpy's PCG64 seeded through ``SeedSequence(seed, spawn_key=(replicate,))``.
    Uniforms are pre-drawn in blocks; the values handed out are the same as
    drawing them one at a time, so consumption order alone fixes the output.
    A stream is single-owner: do not share one between threads.
    """

    def __init__(self, seed: int, replicate: int = 0):
        if seed < 0 or replicate < 0:
            raise ValueError("seed and replicate must be non-negative")
        self.seed = int(seed)
        self.replicate = int(replicate)
        self.counter = 0
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.replicate,))
        self._gen = np.random.Generator(np.random.PCG64(seq))
        self._buf: list[float] = []
        self._pos = 0

    def uniform(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self._gen.random(_BUFFER).tolist()
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        self.counter += 1
        return u

    def bernoulli(self, p: float) -> bool:
        return self.uniform() < p

    def __repr__(self):
        return f"SampleStream(seed={self.seed}, replicate={self.replicate}, counter={self.counter})"


@dataclass(frozen=True)
class SampledObject:
    """A sampled hypergraph with the description of how it was drawn."""

    vertex_set: VertexSet
    hypergraph: Hypergraph
    descriptor: Any


def sample_hypergraph(p: ProbabilityMap, stream: SampleStream) -> Hypergraph:
    """One Bernoulli(p(sigma)) draw per sigma in Delta[V], canonical order."""
    vs = p.vertex_set
    edges = frozenset(e for e in canonical_edges(len(vs)) if stream.uniform() < p._value(e))
    return Hypergraph(vs, edges)


def sample_complex(p: ProbabilityMap, stream: SampleStream) -> Hypergraph:
    """Grow a complex skeleton by skeleton, drawing each external face of the next size once."""
    vs = p.vertex_set
    n = len(vs)
    accepted: set[int] = set()
    level = [1 << i for i in range(n) if stream.uniform() < p._value(1 << i)]
    accepted.update(level)
    full = vs.full_mask
    while level:
        candidates = {c for e in level for c in _cofaces(e, full)}
        faces = [c for c in candidates if all(f in accepted for f in _faces(c))]
        faces.sort(key=edge_key)
        level = [c for c in faces if stream.uniform() < p._value(c)]
        accepted.update(level)
    return Hypergraph(vs, frozenset(accepted))


def sample_indep(p: ProbabilityMap, stream: SampleStream) -> Hypergraph:
    """Top-down dual of :func:`sample_complex`: start at V, then co-external faces of each lower size."""
    vs = p.vertex_set
    full = vs.full_mask
    accepted: set[int] = set()
    level = [full] if stream.uniform() < p._value(full) else []
    accepted.update(level)
    while level:
        candidates = {f for e in level for f in _faces(e)}
        faces = [c for c in candidates if all(s in accepted for s in _cofaces(c, full))]
        faces.sort(key=edge_key)
        level = [c for c in faces if stream.uniform() < p._value(c)]
        accepted.update(level)
    return Hypergraph(vs, frozenset(accepted))


SAMPLERS = {"pbar": sample_hypergraph, "p": sample_complex, "q": sample_indep}
