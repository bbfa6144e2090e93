import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperalg import core
from hyperalg.core import Hypergraph, VertexSet
from hyperalg.prob import Constant, Family, ModelDescriptor, random_table_map
from hyperalg.sampler import GENERATOR_TAG, SampleStream, sample_complex, sample_hypergraph, sample_indep
from hyperalg.tables import DistributionTable, enumerate_hypergraphs

ABC = VertexSet(("a", "b", "c"))
AB = VertexSet(("a", "b"))


def test_stream_matches_seed_sequence_generator():
    stream = SampleStream(42, 3)
    got = [stream.uniform() for _ in range(5000)]
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(42, spawn_key=(3,))))
    assert got == gen.random(5000).tolist()
    assert stream.counter == 5000
    assert GENERATOR_TAG == "pcg64-seedseq-v1"


def test_streams_are_keyed_by_replicate():
    a = [SampleStream(1, 0).uniform() for _ in range(3)]
    b = [SampleStream(1, 0).uniform() for _ in range(3)]
    c = [SampleStream(1, 1).uniform() for _ in range(3)]
    assert a == b and a != c
    with pytest.raises(ValueError):
        SampleStream(-1)


@pytest.mark.parametrize("sampler", [sample_hypergraph, sample_complex, sample_indep])
def test_degenerate_probabilities(sampler):
    assert sampler(Constant(ABC, 1.0), SampleStream(0)) == Hypergraph.full(ABC)
    assert sampler(Constant(ABC, 0.0), SampleStream(0)) == Hypergraph.empty(ABC)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 6))
def test_samplers_land_in_their_class(seed, n):
    vs = VertexSet(tuple(f"v{i}" for i in range(n)))
    p = Constant(vs, 0.6)
    assert core.is_complex(sample_complex(p, SampleStream(seed)))
    assert core.is_independence(sample_indep(p, SampleStream(seed)))


def test_complex_sampler_draws_only_external_faces():
    # with p({a,b}) = 1 but p(b) = 0 the pair can never appear
    p = random_table_map(AB, 1)
    table = dict(p.table)
    table[0b10] = 0.0
    table[0b11] = 1.0
    p = type(p)(AB, table)
    for i in range(50):
        k = sample_complex(p, SampleStream(9, i))
        assert 0b11 not in k.edges


def test_sampler_consumption_is_deterministic():
    s1, s2 = SampleStream(5), SampleStream(5)
    assert sample_complex(Constant(ABC, 0.5), s1) == sample_complex(Constant(ABC, 0.5), s2)
    assert s1.counter == s2.counter


@pytest.mark.parametrize("family,sampler", [("pbar", sample_hypergraph), ("p", sample_complex), ("q", sample_indep)])
def test_small_sample_frequencies(family, sampler):
    # oracle: model masses on |V| = 2; loose bound for a quick run
    p = random_table_map(AB, 4)
    model = ModelDescriptor(Family(family), p)
    exact = np.array([model.mass(h) for h in enumerate_hypergraphs(AB)])
    counts = np.zeros(8)
    n = 20000
    for i in range(n):
        counts[sampler(p, SampleStream(3, i)).code()] += 1
    tv = 0.5 * np.abs(counts / n - exact).sum()
    assert tv < 0.02
    DistributionTable(AB, counts / n)
