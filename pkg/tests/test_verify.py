import numpy as np
import pytest
from scipy import stats

from hyperalg import core
from hyperalg.core import Hypergraph, VertexSet
from hyperalg.errors import EnumerationBoundError, VertexSetError
from hyperalg.laws import LAWS_BY_NAME
from hyperalg.prob import Constant, Family, ModelDescriptor, combine_maps, random_table_map
from hyperalg.verify import (
    CHECKS,
    GROUPS,
    CheckParams,
    CheckReport,
    DistributionTable,
    chi_square,
    empirical_model_table,
    empirical_table,
    exact_table,
    pushforward_table,
    random_distribution_table,
    run_check,
    run_checks,
    total_variation,
)

AB = VertexSet(("a", "b"))
ABC = VertexSet(("a", "b", "c"))


# -- table plumbing ------------------------------------------------------------------


def test_total_variation_examples():
    u = DistributionTable(ABC, np.full(128, 1 / 128))
    assert total_variation(u, u) == 0.0
    empty = DistributionTable.point_mass(Hypergraph.empty(ABC))
    full = DistributionTable.point_mass(Hypergraph.full(ABC))
    assert total_variation(empty, full) == 1.0
    uniform8 = DistributionTable(AB, np.full(8, 1 / 8))
    assert total_variation(uniform8, DistributionTable.point_mass(Hypergraph.empty(AB))) == pytest.approx(7 / 8)
    with pytest.raises(VertexSetError):
        total_variation(uniform8, u)


def test_table_validation_and_text():
    with pytest.raises(ValueError):
        DistributionTable(AB, np.zeros(7))
    with pytest.raises(ValueError):
        DistributionTable(AB, -np.ones(8))
    text = DistributionTable(AB, np.full(8, 0.125)).to_text().splitlines()
    assert text[:4] == ["# vertices: a b", "# edge 0: a", "# edge 1: b", "# edge 2: a,b"]
    assert text[4:] == [f"{i}\t0.125" for i in range(8)]


def test_table_bound():
    with pytest.raises(EnumerationBoundError):
        DistributionTable.zeros(VertexSet(tuple("abcde")))


def test_exact_table_uniform():
    t = exact_table(ModelDescriptor(Family.PBAR, Constant(ABC, 0.5)))
    assert np.all(t.masses == 1 / 128)


def test_pushforward_of_down_is_supported_on_complexes():
    t = pushforward_table("down($0)", [exact_table(ModelDescriptor(Family.PBAR, Constant(AB, 0.5)))])
    support = [Hypergraph.from_code(AB, int(c)) for c in t.support()]
    assert all(core.is_complex(h) for h in support) and len(support) == 5


def test_random_distribution_table_is_seeded_and_normalised():
    t = random_distribution_table(AB, 3)
    assert t.total() == pytest.approx(1.0)
    assert np.array_equal(t.masses, random_distribution_table(AB, 3).masses)


def test_chi_square_reference():
    expected = DistributionTable(AB, np.full(8, 0.125))
    chi = chi_square(np.full(8, 100), expected)
    assert chi.statistic == 0 and chi.dof == 7 and chi.passed
    assert chi.critical == pytest.approx(stats.chi2.ppf(0.999, 7))
    point = DistributionTable.point_mass(Hypergraph.empty(AB))
    assert not chi_square(np.ones(8), point).passed


# -- empirical tables ------------------------------------------------------------------


def test_empirical_single_trial_is_point_mass():
    t = empirical_table("$0", [Constant(AB, 0.5)], trials=1, seed=1)
    assert sorted(t.masses) == [0.0] * 7 + [1.0]


def test_empirical_certain_edges():
    t = empirical_table("$0", [Constant(AB, 1.0)], trials=50, seed=1)
    assert t.mass(Hypergraph.full(AB)) == 1.0


def test_empirical_independent_of_workers():
    p = random_table_map(ABC, 8)
    a = empirical_table("down($0)", [p], trials=25_000, seed=4, n_jobs=1)
    b = empirical_table("down($0)", [p], trials=25_000, seed=4, n_jobs=3)
    assert np.array_equal(a.masses, b.masses)


def test_empirical_model_close_to_exact():
    model = ModelDescriptor(Family.Q, random_table_map(AB, 2))
    emp = empirical_model_table(model, trials=20_000, seed=2)
    assert total_variation(emp, exact_table(model)) < 0.02


# -- registry ------------------------------------------------------------------------


def test_registry_contains_required_names():
    required = (
        [f"thm1.1-part-{i}" for i in range(1, 6)]
        + [f"thm3.5-part-{i}" for i in range(1, 5)]
        + [f"cor1.2-join-{i}" for i in range(1, 4)]
        + [f"cor1.3-capcup-{i}" for i in range(1, 4)]
        + ["cor3.6-1", "cor3.6-2", "cor3.7", "cor3.8", "lemma2.4", "lemma3.1-all", "relations-2.1",
           "example-2.1-fixtures", "sampler-stat-pbar", "sampler-stat-p", "sampler-stat-q",
           "pipeline-class-complex", "pipeline-class-indep"]
    )
    assert set(required) <= set(CHECKS)
    assert GROUPS["thm1.1-all"] == required[:5]


def test_unknown_check():
    with pytest.raises(KeyError):
        run_check("no-such-check")


def test_bound_exceeded():
    with pytest.raises(EnumerationBoundError):
        run_check("thm3.5-part-1", CheckParams(vertices=(VertexSet(tuple("abcde")),)))


def test_report_render():
    r = CheckReport("x", "V=a", "max-abs-diff", 0.0, 1e-12)
    assert r.render() == "PASS x metric=max-abs-diff value=0 threshold=1e-12 params=V=a"
    assert not CheckReport("x", "", "m", 2, 1, "why").passed
    assert CheckReport("x", "", "m", 2, 1, "why").render().endswith("detail=why")


MAPS = {
    "const-0.5": lambda vs: Constant(vs, 0.5),
    "const-0.2": lambda vs: Constant(vs, 0.2),
    "random": lambda vs: random_table_map(vs, 17),
}


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("map_name", list(MAPS))
@pytest.mark.parametrize(
    "name",
    [f"thm1.1-part-{i}" for i in range(1, 6)] + [f"thm3.5-part-{i}" for i in range(1, 5)]
    + ["cor3.6-1", "cor3.6-2", "lemma2.4"],
)
def test_exact_single_input_checks_pass(name, map_name, n):
    vs = VertexSet(tuple(f"v{i}" for i in range(n)))
    report = run_check(name, CheckParams(vertices=(vs,), maps=(MAPS[map_name](vs),)))
    assert report.passed, report.render()


@pytest.mark.parametrize("name", ["cor1.3-capcup-1", "cor1.3-capcup-2", "cor1.3-capcup-3", "cor3.7"])
def test_cap_cup_checks_pass(name):
    assert run_check(name).passed


def test_thm35_example_report():
    r = run_check("thm3.5-part-3", CheckParams(vertices=(ABC,), p_specs=("const:0.5",)))
    assert r.passed and r.value < 1e-12 and "targets=19" in r.params


def test_closure_duality_counts():
    r = run_check("lemma2.4", CheckParams(vertices=(ABC,)))
    assert r.passed and "hypergraphs=128" in r.params


def test_run_checks_group():
    reports = run_checks("thm1.1-all")
    assert [r.name for r in reports] == [f"thm1.1-part-{i}" for i in range(1, 6)]


# -- documented counterexamples ---------------------------------------------------------
# These identities are stated for the join in general but do not hold; the
# counterexamples pin down why the corresponding checks report FAIL.


def test_join_is_not_a_product_model():
    v, w = VertexSet(("a", "b")), VertexSet(("c", "d"))
    p1, p2 = Constant(v, 0.5), Constant(w, 0.3)
    t = pushforward_table(
        "$0 * $1", [exact_table(ModelDescriptor(Family.PBAR, p)) for p in (p1, p2)]
    )
    edges = core.canonical_edges(4)
    star = combine_maps(p1, p2, "star")
    marg = [sum(m for c, m in t.items() if c >> i & 1) for i in range(len(edges))]
    # every single-edge marginal agrees with p' * p''
    assert max(abs(marg[i] - star(e)) for i, e in enumerate(edges)) < 1e-12
    # ... but {a,c} and {a,d} both need {a} in H', so they are positively correlated
    ac = edges.index(t.vertex_set.mask(["a", "c"]))
    ad = edges.index(t.vertex_set.mask(["a", "d"]))
    joint = sum(m for c, m in t.items() if c >> ac & 1 and c >> ad & 1)
    assert joint == pytest.approx(0.5 * 0.3 * 0.3)
    assert marg[ac] * marg[ad] == pytest.approx(0.15**2)


def test_superset_closure_does_not_commute_with_join():
    h = core.hypergraph("a,x", "a")
    k = core.hypergraph("b,y", "b")
    assert not LAWS_BY_NAME["iup-join"].holds(h, k)
    lhs = core.assoc_indep(core.join(h, k))
    rhs = core.join(core.assoc_indep(h), core.assoc_indep(k))
    # {a,y} contains {a} inside the joined vertex set but is no union of closure edges
    ay = lhs.vertex_set.mask(["a", "y"])
    assert ay in lhs.edges and ay not in rhs.edges


def test_lower_indep_does_not_commute_with_join():
    h = core.hypergraph("a")
    k = core.hypergraph("c", "c")
    # the join is {{c}} on {a,c}; {c} loses its superset {a,c}, so the left side is empty
    assert core.lower_indep(core.join(h, k)).edges == frozenset()
    assert core.join(core.lower_indep(h), core.lower_indep(k)).edge_sets() == [("c",)]


def test_box_does_not_distribute_over_join():
    a = core.hypergraph("a,b", "a", "b")
    c = core.hypergraph("c", "c")
    e = core.hypergraph("e", "e")
    assert not LAWS_BY_NAME["box-join-distributes"].holds(a, c, e)
    rhs = core.join(core.box_product(a, c), core.box_product(a, e))
    mixed = rhs.vertex_set.mask(["(a,c)", "(b,e)"])
    assert mixed in rhs.edges
