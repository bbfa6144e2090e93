import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hyperalg import core
from hyperalg.algebra import (
    Binary,
    ClassBound,
    Leaf,
    PipelineConfig,
    Unary,
    build_pipeline,
    eval_expr,
    infer_signature,
    parse_expr,
    pushforward_expr,
    random_pipeline_config,
    render,
    run_pipeline,
    sample_expr,
)
from hyperalg.core import VertexSet
from hyperalg.errors import AdmissibilityError, EnumerationBoundError, ExprSyntaxError
from hyperalg.prob import Constant, Family, ModelDescriptor, random_table_map
from hyperalg.sampler import SampleStream
from hyperalg.tables import enumerate_hypergraphs
from hyperalg.verify import exact_table

AB = VertexSet(("a", "b"))
CD = VertexSet(("c", "d"))
ABC = VertexSet(("a", "b", "c"))


# -- parsing ---------------------------------------------------------------------


def test_parse_shapes():
    assert parse_expr("comp(up($0))") == Unary("comp", Unary("up", Leaf(0)))
    assert parse_expr("$0 & $1 | $2") == Binary("|", Binary("&", Leaf(0), Leaf(1)), Leaf(2))
    assert parse_expr("down($0) * idown($1)") == Binary("*", Unary("down", Leaf(0)), Unary("idown", Leaf(1)))
    assert parse_expr("$0 # ($1 * $2)") == Binary("#", Leaf(0), Binary("*", Leaf(1), Leaf(2)))


@pytest.mark.parametrize(
    "text,position",
    [("up(", 3), ("$0 $1", 3), ("foo($0)", 0), ("$0 & $0", 5), ("$", 0), ("$0 ^ $1", 3)],
)
def test_syntax_errors_carry_positions(text, position):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr(text)
    assert info.value.position == position


def test_slot_gap_rejected():
    with pytest.raises(ExprSyntaxError):
        parse_expr("$0 & $2")


@settings(max_examples=80, deadline=None)
@given(st.recursive(
    st.just("L"),
    lambda inner: st.one_of(
        st.tuples(st.sampled_from(["comp", "up", "down", "iup", "idown"]), inner),
        st.tuples(st.sampled_from(["&", "|", "*", "#"]), inner, inner),
    ),
    max_leaves=6,
))
def test_render_parse_roundtrip(shape):
    counter = iter(range(100))

    def build(s):
        if s == "L":
            return Leaf(next(counter))
        if len(s) == 2:
            return Unary(s[0], build(s[1]))
        return Binary(s[0], build(s[1]), build(s[2]))

    e = build(shape)
    assert parse_expr(render(e)) == e


# -- signatures ----------------------------------------------------------------------


def test_box_of_a_set_with_itself_is_admissible():
    assert len(infer_signature("$0 # $1", [AB, AB]).result_vertex_set) == 4


def test_signatures():
    sig = infer_signature("down($0) * down($1)", [AB, CD])
    assert sig.result_vertex_set.labels == ("a", "b", "c", "d")
    assert sig.result_class_bound is ClassBound.COMPLEX
    assert infer_signature("comp(up($0))", [AB]).result_class_bound is ClassBound.INDEPENDENCE
    assert infer_signature("iup($0) * iup($1)", [AB, CD]).result_class_bound is ClassBound.ANY
    assert infer_signature("$0 # $1", [AB, CD]).result_vertex_set.labels[0] == "(a,c)"


@pytest.mark.parametrize(
    "text,sets",
    [("$0 & $1", [AB, CD]), ("$0 * $1", [AB, AB]), ("$0", [AB, CD])],
)
def test_inadmissible(text, sets):
    with pytest.raises(AdmissibilityError):
        infer_signature(text, sets)


# -- evaluation and pushforward ---------------------------------------------------------


def test_eval_matches_oracle():
    for h1 in enumerate_hypergraphs(AB):
        for h2 in enumerate_hypergraphs(CD):
            got = eval_expr("comp(up($0)) * down($1)", [h1, h2])
            E1, E2 = oracles.as_sets(h1), oracles.as_sets(h2)
            expected = oracles.join(oracles.complement(oracles.up(E1), AB.labels), oracles.down(E2))
            assert oracles.as_sets(got) == expected


@pytest.mark.parametrize("text", ["comp($0)", "down(comp($0))", "idown(up($0))", "comp(iup($0))"])
def test_unary_pushforward_matches_oracle(text):
    p = random_table_map(ABC, 21)
    table = pushforward_expr(text, [exact_table(ModelDescriptor(Family.PBAR, p))])
    e = parse_expr(text)

    def f(E):
        h = core.Hypergraph(ABC, frozenset(ABC.mask(s) for s in E))
        return oracles.as_sets(eval_expr(e, [h]))

    law = oracles.pushforward(f, lambda s: p(ABC.mask(s)), ABC.labels)
    for code, mass in enumerate(table.masses):
        h = core.Hypergraph.from_code(ABC, code)
        assert abs(mass - law.get(oracles.as_sets(h), 0.0)) < 1e-12


def test_binary_pushforward_matches_oracle():
    p1, p2 = random_table_map(AB, 1), random_table_map(CD, 2)
    tables = [exact_table(ModelDescriptor(Family.PBAR, p)) for p in (p1, p2)]
    table = pushforward_expr("down($0) * $1", tables)
    law = oracles.pushforward2(
        lambda E1, E2: oracles.join(oracles.down(E1), E2),
        lambda s: p1(AB.mask(s)), AB.labels, lambda s: p2(CD.mask(s)), CD.labels,
    )
    for code, mass in enumerate(table.masses):
        h = core.Hypergraph.from_code(table.vertex_set, code)
        assert abs(mass - law.get(oracles.as_sets(h), 0.0)) < 1e-12
    assert table.total() == pytest.approx(1.0)


def test_pushforward_bound():
    t = exact_table(ModelDescriptor(Family.PBAR, Constant(ABC, 0.5)))
    other = VertexSet(("x", "y"))
    with pytest.raises(EnumerationBoundError):
        pushforward_expr("$0 * $1", [t, exact_table(ModelDescriptor(Family.PBAR, Constant(other, 0.5)))])


def test_sample_expr_records_descriptor():
    s = sample_expr("down($0) * $1", [Constant(AB, 0.5), Constant(CD, 0.5)], SampleStream(3, 1))
    assert s.vertex_set.labels == ("a", "b", "c", "d")
    assert s.descriptor.seed == 3 and s.descriptor.replicate == 1
    assert str(s.descriptor) == "down($0) * $1 <- const:0.5; const:0.5"


# -- pipelines --------------------------------------------------------------------------


def _config(**overrides):
    base = dict(
        kind="complex",
        vertex_sets=(AB, CD),
        leaf_words=((("comp",), ()), (("iup",),)),
        block_orders=((1, 0), (0,)),
        block_ops=(("|",), ()),
        cross_order=(0, 1),
        cross_ops=("*",),
        leaf_closures=(("down", "up"), ("down",)),
        cross_closures=(None,),
    )
    base.update(overrides)
    return PipelineConfig(**base)


def test_build_pipeline_expression():
    e = build_pipeline(_config())
    assert render(e) == "up($1) | down(comp($0)) * down(iup($2))"


def test_box_needs_closure_in_complex_kind():
    with pytest.raises(ValueError):
        build_pipeline(_config(cross_ops=("#",), cross_closures=(None,)))
    e = build_pipeline(_config(cross_ops=("#",), cross_closures=("down",)))
    assert isinstance(e, Unary) and e.op == "down"


@pytest.mark.parametrize(
    "field,value",
    [
        ("kind", "other"),
        ("block_orders", ((0, 0), (0,))),
        ("block_ops", (("*",), ())),
        ("cross_order", (0, 0)),
        ("leaf_closures", (("down",), ("down",))),
        ("final_word", ("comp",)),
        ("leaf_words", ((("bogus",), ()), (("iup",),))),
    ],
)
def test_malformed_configs(field, value):
    with pytest.raises(ValueError):
        build_pipeline(_config(**{field: value}))


@pytest.mark.parametrize("kind", ["complex", "independence"])
def test_random_pipelines_stay_in_class(kind):
    rng = np.random.Generator(np.random.PCG64(99))
    bound = ClassBound.COMPLEX if kind == "complex" else ClassBound.INDEPENDENCE
    for i in range(200):
        cfg = random_pipeline_config(kind, rng)
        sample = run_pipeline(cfg, SampleStream(99, i))
        assert bound.admits(sample.hypergraph)


def test_hypergraph_kind_pipeline_runs():
    rng = np.random.Generator(np.random.PCG64(5))
    for i in range(50):
        cfg = random_pipeline_config("hypergraph", rng)
        assert len(run_pipeline(cfg, SampleStream(5, i)).vertex_set) <= 12
