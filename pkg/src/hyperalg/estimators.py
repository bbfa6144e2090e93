"""scikit-learn style wrappers around the models and the expression evaluator.

Hypergraphs travel as 0/1 indicator rows: column ``i`` is the ``i``-th edge of
Delta[V] in canonical order.  For several leaf blocks the rows are the leaf
blocks concatenated left to right.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import core
from .algebra import as_expr, eval_expr, infer_signature, leaf_count
from .core import Hypergraph, VertexSet, canonical_edges
from .prob import Family, ModelDescriptor, Table, parse_prob_spec
from .sampler import SAMPLERS, SampleStream


def n_edges(vertex_set: VertexSet) -> int:
    n = len(vertex_set)
    if n > core.MAX_DENSE_VERTICES:
        raise core.EnumerationBoundError(f"indicator rows need |V| <= {core.MAX_DENSE_VERTICES}, got {n}")
    return (1 << n) - 1


def to_indicators(hypergraphs, vertex_set: VertexSet) -> np.ndarray:
    """Stack hypergraphs on ``vertex_set`` into an (n, |Delta[V]|) uint8 matrix."""
    index = core.canonical_index(len(vertex_set))
    out = np.zeros((len(hypergraphs), n_edges(vertex_set)), dtype=np.uint8)
    for row, h in enumerate(hypergraphs):
        if h.vertex_set != vertex_set:
            raise core.VertexSetError(f"row {row} is on [{h.vertex_set}], expected [{vertex_set}]")
        for e in h.edges:
            out[row, index[e]] = 1
    return out


def from_indicators(X, vertex_set: VertexSet) -> list[Hypergraph]:
    X = check_indicators(X, n_edges(vertex_set))
    edges = np.asarray(canonical_edges(len(vertex_set)), dtype=object)
    return [Hypergraph(vertex_set, frozenset(edges[row.astype(bool)].tolist())) for row in X]


def check_indicators(X, width: int) -> np.ndarray:
    """Validate a 0/1 matrix with ``width`` columns."""
    X = check_array(X, dtype=np.uint8, ensure_min_samples=1)
    if X.shape[1] != width:
        raise ValueError(f"expected {width} indicator columns, got {X.shape[1]}")
    if X.max(initial=0) > 1:
        raise ValueError("indicator entries must be 0 or 1")
    return X


def _seed(random_state) -> int:
    if random_state is None:
        return 0
    if isinstance(random_state, (int, np.integer)) and random_state >= 0:
        return int(random_state)
    raise ValueError("random_state must be a non-negative int or None")


class HypergraphModelSampler(BaseEstimator):
    """Sampler and likelihood for one of the models ``pbar``, ``p`` or ``q``.

    ``fit()`` without data uses the ``p`` probability string.  ``fit(X)`` instead estimates a
    table map from observed indicator rows: the frequency of each edge among
    the rows where it could have been drawn (always for ``pbar``, when all its
    faces are present for ``p``, when all its cofaces are present for ``q``).
    Edges never eligible get probability 0.
    """

    def __init__(self, vertices="v0,v1,v2", family="pbar", p="const:0.5", random_state=None):
        self.vertices = vertices
        self.family = family
        self.p = p
        self.random_state = random_state

    def fit(self, X=None, y=None):
        vs = VertexSet.parse(self.vertices) if isinstance(self.vertices, str) else VertexSet(tuple(self.vertices))
        family = Family(self.family)
        if X is None:
            pmap = parse_prob_spec(self.p, vs)
        else:
            pmap = self._estimate(from_indicators(X, vs), vs, family)
        self.vertex_set_ = vs
        self.model_ = ModelDescriptor(family, pmap)
        self.n_features_in_ = n_edges(vs)
        return self

    @staticmethod
    def _estimate(hs, vs, family) -> Table:
        full = vs.full_mask
        table = {}
        for e in canonical_edges(len(vs)):
            if family is Family.PBAR:
                eligible = hs
            elif family is Family.P:
                eligible = [h for h in hs if all(f in h.edges for f in core._faces(e))]
            else:
                eligible = [h for h in hs if all(c in h.edges for c in core._cofaces(e, full))]
            hits = sum(e in h.edges for h in eligible)
            table[e] = hits / len(eligible) if eligible else 0.0
        return Table(vs, table, "fitted")

    def sample(self, n_samples=1):
        """``n_samples`` indicator rows; row ``i`` uses the stream ``(random_state, i)``."""
        check_is_fitted(self, "model_")
        seed = _seed(self.random_state)
        draw = SAMPLERS[self.model_.family.value]
        hs = [draw(self.model_.map, SampleStream(seed, i)) for i in range(n_samples)]
        return to_indicators(hs, self.vertex_set_)

    def score_samples(self, X):
        """Log-probability of each row (``-inf`` outside the model's support)."""
        check_is_fitted(self, "model_")
        with np.errstate(divide="ignore"):
            return np.log([self.model_.mass(h) for h in from_indicators(X, self.vertex_set_)])

    def score(self, X, y=None):
        return float(np.mean(self.score_samples(X)))


class ExpressionTransformer(TransformerMixin, BaseEstimator):
    """Apply an expression row by row to concatenated leaf indicator blocks."""

    def __init__(self, expr="$0", vertices="v0,v1,v2"):
        self.expr = expr
        self.vertices = vertices

    def fit(self, X=None, y=None):
        e = as_expr(self.expr)
        sets = [VertexSet.parse(b.strip()) for b in self.vertices.split(";")]
        if len(sets) != leaf_count(e):
            raise ValueError(f"expression has {leaf_count(e)} leaves but {len(sets)} vertex sets were given")
        self.expr_ = e
        self.leaf_vertex_sets_ = sets
        self.result_vertex_set_ = infer_signature(e, sets).result_vertex_set
        self.n_features_in_ = sum(n_edges(vs) for vs in sets)
        n_edges(self.result_vertex_set_)
        if X is not None:
            check_indicators(X, self.n_features_in_)
        return self

    def transform(self, X):
        check_is_fitted(self, "expr_")
        X = check_indicators(X, self.n_features_in_)
        columns, start = [], 0
        for vs in self.leaf_vertex_sets_:
            width = n_edges(vs)
            columns.append(from_indicators(X[:, start : start + width], vs))
            start += width
        results = [eval_expr(self.expr_, list(inputs)) for inputs in zip(*columns)]
        return to_indicators(results, self.result_vertex_set_)
