import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from hyperalg import core
from hyperalg.algebra import eval_expr
from hyperalg.core import VertexSet
from hyperalg.estimators import (
    ExpressionTransformer,
    HypergraphModelSampler,
    check_indicators,
    from_indicators,
    to_indicators,
)
from hyperalg.prob import Table
from hyperalg.sampler import SampleStream, sample_complex
from hyperalg.tables import enumerate_hypergraphs

AB = VertexSet(("a", "b"))


def test_params_and_clone():
    est = HypergraphModelSampler(vertices="a,b", family="q", p="const:0.3", random_state=4)
    assert est.get_params() == {"vertices": "a,b", "family": "q", "p": "const:0.3", "random_state": 4}
    assert clone(est).get_params() == est.get_params()


def test_indicator_roundtrip():
    hs = list(enumerate_hypergraphs(AB))
    X = to_indicators(hs, AB)
    assert X.shape == (8, 3) and X.dtype == np.uint8
    assert from_indicators(X, AB) == hs
    with pytest.raises(ValueError):
        check_indicators(np.full((1, 3), 2), 3)
    with pytest.raises(ValueError):
        check_indicators(np.zeros((1, 4)), 3)


def test_sample_requires_fit():
    with pytest.raises(NotFittedError):
        HypergraphModelSampler().sample(2)


def test_sample_and_score():
    est = HypergraphModelSampler(vertices="a,b,c", family="p", random_state=3).fit()
    X = est.sample(20)
    assert X.shape == (20, 7)
    assert all(core.is_complex(h) for h in from_indicators(X, est.vertex_set_))
    assert np.array_equal(X, est.sample(20))
    scores = est.score_samples(X)
    assert np.all(np.isfinite(scores)) and np.all(scores <= 0)
    not_complex = to_indicators([core.hypergraph("a,b,c", "a,b")], est.vertex_set_)
    assert est.score_samples(not_complex)[0] == -np.inf


def test_uniform_scores():
    est = HypergraphModelSampler(vertices="a,b", family="pbar", p="const:0.5").fit()
    X = to_indicators(list(enumerate_hypergraphs(AB)), AB)
    assert np.allclose(est.score_samples(X), np.log(1 / 8))
    assert est.score(X) == pytest.approx(np.log(1 / 8))


def test_fit_from_samples_recovers_complex_map():
    truth = Table(AB, {0b01: 0.7, 0b10: 0.4, 0b11: 0.5})
    hs = [sample_complex(truth, SampleStream(8, i)) for i in range(20_000)]
    est = HypergraphModelSampler(vertices="a,b", family="p").fit(to_indicators(hs, AB))
    fitted = est.model_.map
    for e, value in truth.table.items():
        assert fitted(e) == pytest.approx(value, abs=0.02)


def test_expression_transformer():
    vs2 = VertexSet(("c",))
    tr = ExpressionTransformer(expr="down($0) * $1", vertices="a,b;c")
    hs1 = list(enumerate_hypergraphs(AB))
    hs2 = [core.hypergraph("c", "c")] * len(hs1)
    X = np.hstack([to_indicators(hs1, AB), to_indicators(hs2, vs2)])
    out = tr.fit_transform(X)
    expected = [eval_expr("down($0) * $1", [h1, h2]) for h1, h2 in zip(hs1, hs2)]
    assert np.array_equal(out, to_indicators(expected, tr.result_vertex_set_))
    with pytest.raises(ValueError):
        ExpressionTransformer(expr="$0 * $1", vertices="a,b").fit()
