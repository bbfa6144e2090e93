"""Exhaustive and statistical checks of the distributional identities.

Exact checks compare dense tables obtained by brute-force pushforward with
tables computed from the closed-form model masses.  Statistical checks compare
seeded empirical frequency tables against exact ones.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from . import core
from .algebra import (
    as_expr,
    infer_signature,
    pushforward_expr,
    random_pipeline_config,
    run_pipeline,
    sample_expr,
    ClassBound,
    build_pipeline,
)
from .core import Hypergraph, HypergraphClass, VertexSet
from .laws import LAWS, LAWS_BY_NAME, Law
from .prob import (
    Family,
    ModelDescriptor,
    ProbabilityMap,
    combine_maps,
    complement_map,
    parse_prob_spec,
    pushforward_closed_form,
    random_table_map,
)
from .sampler import SAMPLERS, SampleStream
from .tables import DistributionTable, check_enumerable, enumerate_hypergraphs

__all__ = [
    "DistributionTable",
    "CheckReport",
    "CheckParams",
    "enumerate_hypergraphs",
    "exact_table",
    "pushforward_table",
    "total_variation",
    "chi_square",
    "empirical_table",
    "empirical_model_table",
    "random_distribution_table",
    "run_check",
    "run_checks",
    "CHECKS",
]

EXACT_TOL = 1e-12
SAMPLER_TV = 0.02
CROSS_TV = 0.03
DEFAULT_TRIALS = 200_000
DEFAULT_SEED = 7
BLOCK_TRIALS = 10_000


# -- tables -------------------------------------------------------------------


def exact_table(model: ModelDescriptor) -> DistributionTable:
    """Mass of every hypergraph on the model's vertex set (zero outside its support)."""
    vs = model.vertex_set
    m = check_enumerable(vs)
    masses = np.fromiter(
        (model.mass(Hypergraph.from_code(vs, code)) for code in range(1 << m)),
        dtype=np.float64,
        count=1 << m,
    )
    return DistributionTable(vs, masses)


def pushforward_table(e, tables: Sequence[DistributionTable]) -> DistributionTable:
    return pushforward_expr(e, tables)


def random_distribution_table(vertex_set: VertexSet, seed: int) -> DistributionTable:
    """A generic law on all hypergraphs: normalised exponential weights, seeded."""
    m = check_enumerable(vertex_set)
    rng = np.random.Generator(np.random.PCG64(seed))
    w = rng.exponential(size=1 << m)
    return DistributionTable(vertex_set, w / w.sum())


def total_variation(t1: DistributionTable, t2: DistributionTable) -> float:
    if t1.vertex_set != t2.vertex_set:
        raise core.VertexSetError("total variation needs tables on the same vertex set")
    return float(0.5 * np.abs(t1.masses - t2.masses).sum())


@dataclass(frozen=True)
class ChiSquare:
    statistic: float
    dof: int
    critical: float

    @property
    def passed(self) -> bool:
        return self.statistic <= self.critical


def chi_square(counts: np.ndarray, expected: DistributionTable, level: float = 0.999) -> ChiSquare:
    """Pearson statistic of observed counts against exact probabilities.

    Cells with zero expected mass must be empty (otherwise the statistic is
    infinite).  The critical value is the ``level`` quantile of the chi-square
    distribution with (support size - 1) degrees of freedom.
    """
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    probs = expected.masses
    live = probs > 0
    if (counts[~live] > 0).any():
        return ChiSquare(float("inf"), int(live.sum()) - 1, 0.0)
    exp = n * probs[live]
    stat = float(((counts[live] - exp) ** 2 / exp).sum())
    dof = max(int(live.sum()) - 1, 1)
    return ChiSquare(stat, dof, float(stats.chi2.ppf(level, dof)))


def _count_block(draw: Callable[[SampleStream], Hypergraph], size: int, seed: int, block: int, trials: int) -> np.ndarray:
    counts = np.zeros(size, dtype=np.int64)
    stream = SampleStream(seed, block)
    for _ in range(trials):
        counts[draw(stream).code()] += 1
    return counts


class _ExprDraw:
    def __init__(self, e, maps):
        self.e, self.maps = e, maps

    def __call__(self, stream):
        return sample_expr(self.e, self.maps, stream).hypergraph


class _ModelDraw:
    def __init__(self, model: ModelDescriptor):
        self.sampler = SAMPLERS[model.family.value]
        self.map = model.map

    def __call__(self, stream):
        return self.sampler(self.map, stream)


def _empirical_counts(draw, vertex_set: VertexSet, trials: int, seed: int, n_jobs: int) -> np.ndarray:
    size = 1 << check_enumerable(vertex_set)
    blocks = [(b, min(BLOCK_TRIALS, trials - b * BLOCK_TRIALS)) for b in range(-(-trials // BLOCK_TRIALS))]
    if n_jobs <= 1 or len(blocks) == 1:
        parts = [_count_block(draw, size, seed, b, t) for b, t in blocks]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            futures = [pool.submit(_count_block, draw, size, seed, b, t) for b, t in blocks]
            parts = [f.result() for f in futures]
    counts = np.zeros(size, dtype=np.int64)
    for part in parts:
        counts += part
    return counts


def empirical_table(
    e, maps: Sequence[ProbabilityMap], trials: int, seed: int, n_jobs: int = 1, return_counts: bool = False
):
    """Frequencies of ``trials`` independent draws of expression ``e``.

    Trials are split into fixed blocks of ``BLOCK_TRIALS``; block ``b`` uses the
    stream ``(seed, b)``, so the result does not depend on ``n_jobs``.
    """
    e = as_expr(e)
    vs = infer_signature(e, [p.vertex_set for p in maps]).result_vertex_set
    counts = _empirical_counts(_ExprDraw(e, list(maps)), vs, trials, seed, n_jobs)
    table = DistributionTable(vs, counts / trials)
    return (table, counts) if return_counts else table


def empirical_model_table(model: ModelDescriptor, trials: int, seed: int, n_jobs: int = 1, return_counts: bool = False):
    """Frequencies of ``trials`` draws from the model's own sampler."""
    counts = _empirical_counts(_ModelDraw(model), model.vertex_set, trials, seed, n_jobs)
    table = DistributionTable(model.vertex_set, counts / trials)
    return (table, counts) if return_counts else table


# -- reports ------------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    name: str
    params: str
    metric: str
    value: float
    threshold: float
    detail: str = ""
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.value <= self.threshold

    def render(self) -> str:
        line = (
            f"{'PASS' if self.passed else 'FAIL'} {self.name} metric={self.metric} "
            f"value={self.value:.6g} threshold={self.threshold:.6g} params={self.params}"
        )
        if self.detail:
            line += f" detail={self.detail}"
        return line


@dataclass(frozen=True)
class CheckParams:
    """Inputs shared by the checks.

    Map ``i`` comes from ``maps[i]`` if given, else from the spec ``p_specs[i]``;
    the fallback is constant 1/2 for the first map and a seeded random table
    for later ones.  Missing vertex sets default to ``v0..``, ``w0..``, ``x0..``.
    """

    vertices: tuple[VertexSet, ...] = ()
    p_specs: tuple[str, ...] = ()
    maps: tuple[ProbabilityMap, ...] = ()
    seed: int = DEFAULT_SEED
    trials: int = DEFAULT_TRIALS
    tol: float | None = None
    n_jobs: int = 1

    def vertex_set(self, i: int = 0, size: int = 3) -> VertexSet:
        if i < len(self.vertices):
            return self.vertices[i]
        return VertexSet(tuple(f"{'vwx'[i]}{j}" for j in range(size)))

    def prob_map(self, i: int, vertex_set: VertexSet) -> ProbabilityMap:
        if i < len(self.maps):
            if self.maps[i].vertex_set != vertex_set:
                raise core.VertexSetError(f"map {i} is on [{self.maps[i].vertex_set}], expected [{vertex_set}]")
            return self.maps[i]
        if i < len(self.p_specs):
            return parse_prob_spec(self.p_specs[i], vertex_set)
        if i == 0:
            return parse_prob_spec("const:0.5", vertex_set)
        return random_table_map(vertex_set, self.seed + i)

    def tolerance(self, default: float) -> float:
        return default if self.tol is None else self.tol

    def describe(self, n_sets: int = 1, n_maps: int = 1, extra: str = "", size: int = 3) -> str:
        sets = ";".join(str(self.vertex_set(i, size)) for i in range(n_sets))
        maps = ";".join(
            self.prob_map(i, self.vertex_set(min(i, n_sets - 1), size)).describe() for i in range(n_maps)
        )
        out = f"V={sets}"
        if n_maps:
            out += f" p={maps}"
        return out + (f" {extra}" if extra else "")


def _leaf(p: ProbabilityMap) -> DistributionTable:
    return exact_table(ModelDescriptor(Family.PBAR, p))


def _diff(a: DistributionTable, b: DistributionTable) -> float:
    return a.max_abs_diff(b)


# -- exact identity checks -----------------------------------------------------

_MODEL_PUSHES = {
    1: ("comp($0)", Family.PBAR, True),
    2: ("comp(up($0))", Family.Q, True),
    3: ("comp(iup($0))", Family.P, True),
    4: ("down($0)", Family.P, False),
    5: ("idown($0)", Family.Q, False),
}


def _check_model_push(part: int):
    expr, family, flip = _MODEL_PUSHES[part]

    def check(params: CheckParams) -> CheckReport:
        vs = params.vertex_set(0)
        p = params.prob_map(0, vs)
        pushed = pushforward_table(expr, [_leaf(p)])
        target = exact_table(ModelDescriptor(family, complement_map(p) if flip else p))
        return CheckReport(
            f"thm1.1-part-{part}", params.describe(extra=f"expr={expr}"), "max-abs-diff",
            _diff(pushed, target), params.tolerance(EXACT_TOL),
        )

    return check


_CLOSED_FORMS = {
    1: ("up", HypergraphClass.COMPLEX, lambda p, h: ModelDescriptor(Family.Q, complement_map(p)).mass(core.complement(h))),
    2: ("iup", HypergraphClass.INDEPENDENCE, lambda p, h: ModelDescriptor(Family.P, complement_map(p)).mass(core.complement(h))),
    3: ("down", HypergraphClass.COMPLEX, lambda p, h: ModelDescriptor(Family.P, p).mass(h)),
    4: ("idown", HypergraphClass.INDEPENDENCE, lambda p, h: ModelDescriptor(Family.Q, p).mass(h)),
}


def _check_closed_form(part: int):
    op, cls, model_value = _CLOSED_FORMS[part]

    def check(params: CheckParams) -> CheckReport:
        vs = params.vertex_set(0)
        p = params.prob_map(0, vs)
        preimage = pushforward_table(f"{op}($0)", [_leaf(p)])
        worst = 0.0
        targets = 0
        for h in enumerate_hypergraphs(vs, cls):
            brute = preimage.mass(h)
            closed = pushforward_closed_form(p, h, op)
            worst = max(worst, abs(brute - closed), abs(brute - model_value(p, h)))
            targets += 1
        # the brute-force law must also vanish off the target class
        off = sum(m for code, m in preimage.items() if not _in_class(Hypergraph.from_code(vs, code), cls))
        worst = max(worst, off)
        return CheckReport(
            f"thm3.5-part-{part}", params.describe(extra=f"op={op} targets={targets}"),
            "max-abs-diff", worst, params.tolerance(EXACT_TOL),
        )

    return check


def _in_class(h: Hypergraph, cls: HypergraphClass) -> bool:
    c = core.classify(h)
    return c.is_complex if cls is HypergraphClass.COMPLEX else c.is_independence


def _family_tables(family: Family, maps: Sequence[ProbabilityMap]) -> list[DistributionTable]:
    return [exact_table(ModelDescriptor(family, p)) for p in maps]


_JOIN_FAMILIES = {1: Family.PBAR, 2: Family.P, 3: Family.Q}


def _join_diff(params: CheckParams, family: Family) -> float:
    v1, v2 = params.vertex_set(0, 2), params.vertex_set(1, 2)
    p1, p2 = params.prob_map(0, v1), params.prob_map(1, v2)
    pushed = pushforward_table("$0 * $1", _family_tables(family, [p1, p2]))
    target = exact_table(ModelDescriptor(family, combine_maps(p1, p2, "star")))
    return _diff(pushed, target)


def _check_join_model(part: int):
    family = _JOIN_FAMILIES[part]

    def check(params: CheckParams) -> CheckReport:
        return CheckReport(
            f"cor1.2-join-{part}", params.describe(2, 2, f"family={family.value}", size=2),
            "max-abs-diff", _join_diff(params, family), params.tolerance(EXACT_TOL),
        )

    return check


def _capcup_diff(params: CheckParams, family: Family, op: str) -> float:
    vs = params.vertex_set(0)
    p1, p2 = params.prob_map(0, vs), params.prob_map(1, vs)
    pushed = pushforward_table(f"$0 {op} $1", _family_tables(family, [p1, p2]))
    combined = combine_maps(p1, p2, "meet" if op == "&" else "join_union")
    return _diff(pushed, exact_table(ModelDescriptor(family, combined)))


def _check_capcup_model(part: int):
    def check(params: CheckParams) -> CheckReport:
        if part == 1:
            value = max(_capcup_diff(params, Family.PBAR, "&"), _capcup_diff(params, Family.PBAR, "|"))
            what = "pbar cap+cup"
        else:
            family = Family.P if part == 2 else Family.Q
            value = _capcup_diff(params, family, "&")
            what = f"{family.value} cap"
        return CheckReport(
            f"cor1.3-capcup-{part}", params.describe(1, 2, what), "max-abs-diff", value,
            params.tolerance(EXACT_TOL),
        )

    return check


def _check_closure_model(part: int):
    inner = _check_model_push(part + 1)

    def check(params):
        return replace(inner(params), name=f"cor3.6-{part}")

    return check


def _check_cap_models(params: CheckParams) -> CheckReport:
    value = max(_capcup_diff(params, Family.P, "&"), _capcup_diff(params, Family.Q, "&"))
    return CheckReport("cor3.7", params.describe(1, 2, "p,q cap"), "max-abs-diff", value, params.tolerance(EXACT_TOL))


def _check_join_models(params: CheckParams) -> CheckReport:
    parts = {f.value: _join_diff(params, f) for f in (Family.P, Family.Q)}
    detail = ",".join(f"{k}:{v:.3g}" for k, v in parts.items())
    return CheckReport(
        "cor3.8", params.describe(2, 2, "p,q join", size=2), "max-abs-diff", max(parts.values()),
        params.tolerance(EXACT_TOL), detail,
    )


COMMUTATIONS = {
    "cup-up": ("up($0) | up($1)", "up($0 | $1)", False),
    "cup-iup": ("iup($0) | iup($1)", "iup($0 | $1)", False),
    "cap-down": ("down($0) & down($1)", "down($0 & $1)", False),
    "cap-idown": ("idown($0) & idown($1)", "idown($0 & $1)", False),
    "join-up": ("up($0) * up($1)", "up($0 * $1)", True),
    "join-down": ("down($0) * down($1)", "down($0 * $1)", True),
    "join-iup": ("iup($0) * iup($1)", "iup($0 * $1)", True),
    "join-idown": ("idown($0) * idown($1)", "idown($0 * $1)", True),
}


def commutation_diffs(params: CheckParams) -> dict[str, float]:
    """Max-abs difference of both sides of every operator/pushforward commutation."""
    v1 = params.vertex_set(0, 2)
    v2 = params.vertex_set(1, 2)
    out = {}
    for name, (lhs, rhs, disjoint) in COMMUTATIONS.items():
        second = v2 if disjoint else v1
        tables = [random_distribution_table(v1, params.seed), random_distribution_table(second, params.seed + 1)]
        out[name] = _diff(pushforward_table(lhs, tables), pushforward_table(rhs, tables))
    return out


def _check_commutation(name: str):
    def check(params: CheckParams) -> CheckReport:
        value = commutation_diffs(params)[name]
        return CheckReport(
            f"lemma3.1-{name}", params.describe(2, 0, size=2, extra=f"tables=random-{params.seed},{params.seed + 1}"),
            "max-abs-diff", value, params.tolerance(EXACT_TOL),
        )

    return check


def _check_commutations(params: CheckParams) -> CheckReport:
    diffs = commutation_diffs(params)
    tol = params.tolerance(EXACT_TOL)
    failing = [k for k, v in diffs.items() if v > tol]
    return CheckReport(
        "lemma3.1-all", params.describe(2, 0, size=2, extra=f"tables=random-{params.seed},{params.seed + 1}"),
        "max-abs-diff", max(diffs.values()), tol,
        f"failing=[{','.join(failing)}]" if failing else "",
    )


# -- operator identity suite ----------------------------------------------------


def _random_hypergraph(vs: VertexSet, rng: np.random.Generator) -> Hypergraph:
    density = rng.random()
    edges = core.canonical_edges(len(vs))
    keep = rng.random(len(edges)) < density
    return Hypergraph(vs, frozenset(e for e, k in zip(edges, keep) if k))


def _law_inputs(law: Law, size: int, exhaustive: bool, rng=None, cases: int = 0):
    """Exhaustive (small) or random input tuples for ``law``."""
    names = "abcdefghijklmnopqrstuvwxyz"

    def vset(block: int) -> VertexSet:
        return VertexSet(tuple(f"{names[block]}{i}" for i in range(size)))

    arity = {"unary": (0,), "pair": (0, 0), "join": (0, 1), "triple": (0, 1, 1), "triple3": (0, 1, 2)}[law.domain]
    sets = [vset(b) for b in arity]
    if exhaustive:
        pools = [list(enumerate_hypergraphs(vs)) for vs in sets]

        def product(i):
            if i == len(pools):
                yield ()
                return
            for h in pools[i]:
                for rest in product(i + 1):
                    yield (h,) + rest

        yield from product(0)
    else:
        for _ in range(cases):
            yield tuple(_random_hypergraph(vs, rng) for vs in sets)


def law_mismatches(law: Law, seed: int = DEFAULT_SEED, random_cases: int = 1000, random_size: int = 5) -> tuple[int, int]:
    """(mismatches, cases) over the exhaustive domain plus seeded random inputs.

    Unary laws are exhaustive for |V| = 1, 2, 3; laws with several inputs are
    exhaustive with every block of size 2.
    """
    bad = total = 0
    sizes = (1, 2, 3) if law.domain == "unary" else (2,)
    for size in sizes:
        for args in _law_inputs(law, size, True):
            total += 1
            bad += not law.holds(*args)
    rng = np.random.Generator(np.random.PCG64([seed, sum(map(ord, law.name))]))
    for args in _law_inputs(law, random_size, False, rng, random_cases):
        total += 1
        bad += not law.holds(*args)
    return bad, total


def _law_mismatches_by_name(name: str, seed: int) -> tuple[int, int]:
    return law_mismatches(LAWS_BY_NAME[name], seed)


def _check_relations(params: CheckParams) -> CheckReport:
    names = [law.name for law in LAWS]
    if params.n_jobs > 1:
        with ProcessPoolExecutor(max_workers=params.n_jobs) as pool:
            results = list(pool.map(_law_mismatches_by_name, names, [params.seed] * len(names)))
    else:
        results = [_law_mismatches_by_name(n, params.seed) for n in names]
    failing = [f"{n}:{b}/{t}" for n, (b, t) in zip(names, results) if b]
    bad = sum(b for b, _ in results)
    total = sum(t for _, t in results)
    return CheckReport(
        "relations-2.1", f"laws={len(LAWS)} cases={total} seed={params.seed} random_size=5",
        "mismatches", bad, 0, f"failing=[{','.join(failing)}]" if failing else "",
    )


def _check_closure_duality(params: CheckParams) -> CheckReport:
    vs = params.vertex_set(0)
    check_enumerable(vs)
    bad = total = 0
    for h in enumerate_hypergraphs(vs):
        total += 1
        bad += core.assoc_indep(h) != core.complement(core.lower_complex(core.complement(h)))
        bad += core.lower_indep(h) != core.complement(core.assoc_complex(core.complement(h)))
    return CheckReport("lemma2.4", f"V={vs} hypergraphs={total}", "mismatches", bad, 0)


# -- worked example --------------------------------------------------------------

EXAMPLE_V = ("v0", "v1")
EXAMPLE_W = ("v'0", "v'1", "v'2", "v'3")
EXAMPLE_H = ("v0", "v0,v1")
EXAMPLE_HP = ("v'0,v'1", "v'0,v'1,v'2")

# Edge lists as printed for the two-block worked example.  The printed
# superset closure of H' omits {v'0,v'1,v'3}; it is kept verbatim here.
EXAMPLE_FIXTURES: dict[str, tuple[str, tuple[str, ...]]] = {
    "join": ("VW", ("v0", "v0,v1", "v'0,v'1", "v'0,v'1,v'2", "v0,v'0,v'1", "v0,v'0,v'1,v'2", "v0,v1,v'0,v'1", "v0,v1,v'0,v'1,v'2")),
    "box": ("VxW", (
        "(v0,v'0),(v0,v'1)",
        "(v0,v'0),(v0,v'1),(v0,v'2)",
        "(v0,v'0),(v0,v'1),(v1,v'0),(v1,v'1)",
        "(v0,v'0),(v0,v'1),(v0,v'2),(v1,v'0),(v1,v'1),(v1,v'2)",
    )),
    "up(H)": ("V", ("v0", "v1", "v0,v1")),
    "down(H)": ("V", ("v0",)),
    "iup(H)": ("V", EXAMPLE_H),
    "idown(H)": ("V", EXAMPLE_H),
    "up(H')": ("W", ("v'0", "v'1", "v'2", "v'0,v'1", "v'0,v'2", "v'1,v'2", "v'0,v'1,v'2")),
    "down(H')": ("W", ()),
    "iup(H')": ("W", ("v'0,v'1", "v'0,v'1,v'2", "v'0,v'1,v'2,v'3")),
    "idown(H')": ("W", ()),
    "up(H)*up(H')": ("VW", "ALL:v0,v1,v'0,v'1,v'2"),
    "down(H)*down(H')": ("VW", ("v0",)),
    "iup(H)*iup(H')": ("VW", (
        "v0,v'0,v'1", "v0,v'0,v'1,v'2", "v0,v'0,v'1,v'2,v'3", "v0,v1,v'0,v'1",
        "v0,v1,v'0,v'1,v'2", "v0,v1,v'0,v'1,v'2,v'3",
    ) + EXAMPLE_H + EXAMPLE_HP),
    "idown(H)*idown(H')": ("VW", EXAMPLE_H),
}


def example_inputs() -> tuple[Hypergraph, Hypergraph]:
    return core.hypergraph(EXAMPLE_V, *EXAMPLE_H), core.hypergraph(EXAMPLE_W, *EXAMPLE_HP)


def example_expected(name: str) -> Hypergraph:
    where, edges = EXAMPLE_FIXTURES[name]
    v, w = VertexSet(EXAMPLE_V), VertexSet(EXAMPLE_W)
    vs = {"V": v, "W": w, "VW": v.join(w), "VxW": v.product(w)}[where]
    if isinstance(edges, str):
        sub = edges.split(":", 1)[1]
        base = vs.mask(sub.split(","))
        return Hypergraph(vs, frozenset(e for e in core.canonical_edges(len(vs)) if e & base == e))
    return core.hypergraph(vs.labels, *edges)


def example_computed() -> dict[str, Hypergraph]:
    h, hp = example_inputs()
    up, down, iup, idown = core.assoc_complex, core.lower_complex, core.assoc_indep, core.lower_indep
    return {
        "join": core.join(h, hp),
        "box": core.box_product(h, hp),
        "up(H)": up(h),
        "down(H)": down(h),
        "iup(H)": iup(h),
        "idown(H)": idown(h),
        "up(H')": up(hp),
        "down(H')": down(hp),
        "iup(H')": iup(hp),
        "idown(H')": idown(hp),
        "up(H)*up(H')": core.join(up(h), up(hp)),
        "down(H)*down(H')": core.join(down(h), down(hp)),
        "iup(H)*iup(H')": core.join(iup(h), iup(hp)),
        "idown(H)*idown(H')": core.join(idown(h), idown(hp)),
    }


def _check_example(params: CheckParams) -> CheckReport:
    computed = example_computed()
    failing = [
        name for name, h in computed.items()
        if core.format_hypergraph(h) != core.format_hypergraph(example_expected(name))
    ]
    return CheckReport(
        "example-2.1-fixtures", f"items={len(computed)}", "mismatches", len(failing), 0,
        f"failing=[{','.join(failing)}]" if failing else "",
    )


# -- statistical checks ------------------------------------------------------------


def _check_sampler(family: Family):
    def check(params: CheckParams) -> CheckReport:
        vs = params.vertex_set(0)
        model = ModelDescriptor(family, params.prob_map(0, vs))
        exact = exact_table(model)
        emp, counts = empirical_model_table(model, params.trials, params.seed, params.n_jobs, return_counts=True)
        chi = chi_square(counts, exact)
        return CheckReport(
            f"sampler-stat-{family.value}",
            params.describe(extra=f"seed={params.seed} trials={params.trials}"),
            "total-variation", total_variation(emp, exact), params.tolerance(SAMPLER_TV),
            f"chi2={chi.statistic:.4g}/dof={chi.dof}/crit999={chi.critical:.4g}",
        )

    return check


def _check_cross(family: Family):
    expr = "down($0)" if family is Family.P else "idown($0)"

    def check(params: CheckParams) -> CheckReport:
        vs = params.vertex_set(0)
        p = params.prob_map(0, vs)
        via_expr = empirical_table(expr, [p], params.trials, params.seed, params.n_jobs)
        direct = empirical_model_table(ModelDescriptor(family, p), params.trials, params.seed + 1, params.n_jobs)
        return CheckReport(
            f"sampler-cross-{family.value}",
            params.describe(extra=f"expr={expr} seeds={params.seed},{params.seed + 1} trials={params.trials}"),
            "total-variation", total_variation(via_expr, direct), params.tolerance(CROSS_TV),
        )

    return check


def pipeline_violations(kind: str, runs: int, seed: int) -> int:
    """Runs of random configs whose output is outside the kind's class."""
    rng = np.random.Generator(np.random.PCG64(seed))
    bound = ClassBound.COMPLEX if kind == "complex" else ClassBound.INDEPENDENCE
    bad = 0
    for i in range(runs):
        cfg = random_pipeline_config(kind, rng)
        e = build_pipeline(cfg)
        sig = infer_signature(e, cfg.leaf_vertex_sets())
        sample = run_pipeline(cfg, SampleStream(seed, i))
        bad += sig.result_class_bound is not bound or not bound.admits(sample.hypergraph)
    return bad


def _check_pipeline(kind: str):
    def check(params: CheckParams) -> CheckReport:
        runs = 1000
        bad = pipeline_violations(kind, runs, params.seed)
        short = "complex" if kind == "complex" else "indep"
        return CheckReport(f"pipeline-class-{short}", f"runs={runs} seed={params.seed}", "mismatches", bad, 0)

    return check


# -- registry -----------------------------------------------------------------------

CHECKS: dict[str, Callable[[CheckParams], CheckReport]] = {}
for _i in range(1, 6):
    CHECKS[f"thm1.1-part-{_i}"] = _check_model_push(_i)
for _i in range(1, 5):
    CHECKS[f"thm3.5-part-{_i}"] = _check_closed_form(_i)
for _i in range(1, 4):
    CHECKS[f"cor1.2-join-{_i}"] = _check_join_model(_i)
    CHECKS[f"cor1.3-capcup-{_i}"] = _check_capcup_model(_i)
for _i in (1, 2):
    CHECKS[f"cor3.6-{_i}"] = _check_closure_model(_i)
CHECKS["cor3.7"] = _check_cap_models
CHECKS["cor3.8"] = _check_join_models
CHECKS["lemma2.4"] = _check_closure_duality
for _name in COMMUTATIONS:
    CHECKS[f"lemma3.1-{_name}"] = _check_commutation(_name)
CHECKS["lemma3.1-all"] = _check_commutations
CHECKS["relations-2.1"] = _check_relations
CHECKS["example-2.1-fixtures"] = _check_example
for _fam in Family:
    CHECKS[f"sampler-stat-{_fam.value}"] = _check_sampler(_fam)
CHECKS["sampler-cross-p"] = _check_cross(Family.P)
CHECKS["sampler-cross-q"] = _check_cross(Family.Q)
CHECKS["pipeline-class-complex"] = _check_pipeline("complex")
CHECKS["pipeline-class-indep"] = _check_pipeline("independence")

GROUPS = {
    "thm1.1-all": [f"thm1.1-part-{i}" for i in range(1, 6)],
    "thm3.5-all": [f"thm3.5-part-{i}" for i in range(1, 5)],
    "cor1.2-all": [f"cor1.2-join-{i}" for i in range(1, 4)],
    "cor1.3-all": [f"cor1.3-capcup-{i}" for i in range(1, 4)],
    "sampler-all": ["sampler-stat-pbar", "sampler-stat-p", "sampler-stat-q", "sampler-cross-p", "sampler-cross-q"],
    "pipeline-all": ["pipeline-class-complex", "pipeline-class-indep"],
}
GROUPS["all"] = [name for name in CHECKS if not name.startswith("lemma3.1-") or name == "lemma3.1-all"]


def check_names(name: str) -> list[str]:
    if name in GROUPS:
        return GROUPS[name]
    if name in CHECKS:
        return [name]
    raise KeyError(name)


def run_check(name: str, params: CheckParams | None = None) -> CheckReport:
    """Run one registered check; raises ``KeyError`` for unknown names."""
    params = params or CheckParams()
    fn = CHECKS[name]
    start = time.perf_counter()
    report = fn(params)
    return replace(report, seconds=time.perf_counter() - start)


def run_checks(name: str, params: CheckParams | None = None) -> list[CheckReport]:
    """Run a check or a group of checks (``thm1.1-all``, ``all`` ...)."""
    return [run_check(n, params) for n in check_names(name)]
