"""Command-line interface: ``hyperalg {sample,verify,eval,enumerate,dist}``.

Exit status is 0 on success (all checks passing), 1 when a check fails or an
internal invariant breaks, and 2 for usage, parse and bound errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import core
from .algebra import as_expr, eval_expr, infer_signature, leaf_count, pushforward_expr, sample_expr
from .core import HypergraphClass, VertexSet
from .errors import HyperalgError
from .prob import Family, ModelDescriptor, parse_prob_spec
from .sampler import SampleStream
from .tables import enumerate_hypergraphs
from .verify import DEFAULT_SEED, DEFAULT_TRIALS, CheckParams, check_names, exact_table, run_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_CLASSES = {
    "complex": HypergraphClass.COMPLEX,
    "independence": HypergraphClass.INDEPENDENCE,
    "both": HypergraphClass.BOTH,
    "neither": HypergraphClass.NEITHER,
    "all": None,
}


class UsageError(Exception):
    pass


def _blocks(text: str | None) -> list[str]:
    if not text:
        return []
    return [b.strip() for b in text.split(";")]


def _vertex_sets(text: str | None) -> list[VertexSet]:
    return [VertexSet.parse(b) for b in _blocks(text)]


def _leaf_inputs(args, count: int):
    """Per-leaf vertex sets and probability maps from the ``;``-separated flags."""
    sets = _vertex_sets(args.vertices)
    specs = _blocks(args.p)
    if len(sets) == 1 and count > 1:
        raise UsageError(f"expression has {count} leaves; give {count} ';'-separated vertex sets")
    if len(sets) != count:
        raise UsageError(f"expected {count} vertex set(s) in --vertices, got {len(sets)}")
    if len(specs) == 1:
        specs *= count
    if len(specs) != count:
        raise UsageError(f"expected {count} probability spec(s) in --p, got {len(specs)}")
    return sets, [parse_prob_spec(s, vs) for s, vs in zip(specs, sets)]


def cmd_sample(args, out) -> int:
    e = as_expr(args.expr)
    sets, maps = _leaf_inputs(args, leaf_count(e))
    sig = infer_signature(e, sets)
    for trial in range(args.trials):
        sample = sample_expr(e, maps, SampleStream(args.seed, trial))
        if not sig.result_class_bound.admits(sample.hypergraph):
            raise RuntimeError(f"trial {trial}: sample violates the {sig.result_class_bound.value} bound")
        out.write(f"# seed={args.seed} model={sample.descriptor} trial={trial}\n")
        out.write(core.format_hypergraph(sample.hypergraph))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    try:
        names = check_names(args.check)
    except KeyError:
        raise UsageError(f"unknown check {args.check!r}") from None
    params = CheckParams(
        vertices=tuple(_vertex_sets(args.vertices)),
        p_specs=tuple(_blocks(args.p)),
        seed=args.seed,
        trials=args.trials,
        tol=args.tol,
        n_jobs=args.jobs,
    )
    status = EXIT_OK
    for name in names:
        report = run_check(name, params)
        out.write(report.render() + "\n")
        if not report.passed:
            status = EXIT_FAIL
    return status


def _read_inputs(paths: Sequence[str]) -> list[core.Hypergraph]:
    found = []
    for path in paths:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        found.extend(core.parse_hypergraphs(text))
    return found


def cmd_eval(args, out) -> int:
    e = as_expr(args.expr)
    inputs = _read_inputs(args.input)
    if len(inputs) != leaf_count(e):
        raise UsageError(f"expression has {leaf_count(e)} leaves but {len(inputs)} hypergraphs were read")
    out.write(core.format_hypergraph(eval_expr(e, inputs)))
    return EXIT_OK


def cmd_enumerate(args, out) -> int:
    sets = _vertex_sets(args.vertices)
    if len(sets) != 1:
        raise UsageError("enumerate takes exactly one vertex set")
    for h in enumerate_hypergraphs(sets[0], _CLASSES[args.cls]):
        out.write(core.format_hypergraph(h))
    return EXIT_OK


def cmd_dist(args, out) -> int:
    if args.expr:
        e = as_expr(args.expr)
        sets, maps = _leaf_inputs(args, leaf_count(e))
        leaves = [exact_table(ModelDescriptor(args.model, p)) for p in maps]
        table = pushforward_expr(e, leaves)
    else:
        sets, maps = _leaf_inputs(args, 1)
        table = exact_table(ModelDescriptor(args.model, maps[0]))
    out.write(table.to_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperalg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, vertices_required=False):
        p.add_argument("--vertices", required=vertices_required, help="vertex sets, ';' between leaf blocks")
        p.add_argument("--p", default="const:0.5", help="probability specs, ';' between leaf blocks")
        p.add_argument("--format", choices=["text"], default="text")

    s = sub.add_parser("sample", help="draw seeded samples of an expression")
    s.add_argument("--expr", required=True)
    common(s, vertices_required=True)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--trials", type=int, default=1)
    s.set_defaults(func=cmd_sample)

    v = sub.add_parser("verify", help="run a registered check or check group")
    v.add_argument("--check", required=True)
    v.add_argument("--vertices")
    v.add_argument("--p")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    v.add_argument("--tol", type=float)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--format", choices=["text"], default="text")
    v.set_defaults(func=cmd_verify)

    ev = sub.add_parser("eval", help="apply an expression to hypergraphs read from files")
    ev.add_argument("--expr", required=True)
    ev.add_argument("--input", action="append", required=True, help="hypergraph file (repeatable)")
    ev.add_argument("--format", choices=["text"], default="text")
    ev.set_defaults(func=cmd_eval)

    en = sub.add_parser("enumerate", help="list every hypergraph of a class")
    en.add_argument("--vertices", required=True)
    en.add_argument("--class", dest="cls", choices=list(_CLASSES), default="all")
    en.add_argument("--format", choices=["text"], default="text")
    en.set_defaults(func=cmd_enumerate)

    d = sub.add_parser("dist", help="print an exact distribution table")
    d.add_argument("--model", choices=[f.value for f in Family], default="pbar")
    d.add_argument("--expr", help="push the leaf models forward through this expression")
    common(d, vertices_required=True)
    d.set_defaults(func=cmd_dist)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "trials", 1) < 1:
            raise UsageError("--trials must be positive")
        if getattr(args, "seed", 0) < 0:
            raise UsageError("--seed must be non-negative")
        return args.func(args, out)
    except (UsageError, HyperalgError) as exc:
        print(f"hyperalg {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # invariant violation or bug
        print(f"hyperalg {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
