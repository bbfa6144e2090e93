"""Expression language over hypergraph operators, exact pushforward, and generation pipelines.

Concrete syntax::

    expr  := term {binop term}
    term  := leaf | unary "(" expr ")" | "(" expr ")"
    leaf  := "$" digits
    unary := "comp" | "up" | "down" | "iup" | "idown"
    binop := "&" | "|" | "*" | "#"

All binary operators share one precedence level and associate to the left.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from . import core
from .core import Hypergraph, VertexSet
from .errors import AdmissibilityError, EnumerationBoundError, ExprSyntaxError
from .prob import Constant, ProbabilityMap
from .sampler import SampledObject, SampleStream, sample_hypergraph
from .tables import MAX_TABLE_EDGES, DistributionTable

UNARY_OPS: dict[str, Callable[[Hypergraph], Hypergraph]] = {
    "comp": core.complement,
    "up": core.assoc_complex,
    "down": core.lower_complex,
    "iup": core.assoc_indep,
    "idown": core.lower_indep,
}

BINARY_OPS: dict[str, Callable[[Hypergraph, Hypergraph], Hypergraph]] = {
    "&": lambda a, b: core.combine(a, b, "intersect"),
    "|": lambda a, b: core.combine(a, b, "union"),
    "*": core.join,
    "#": core.box_product,
}


@dataclass(frozen=True)
class Leaf:
    slot: int


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Leaf, Unary, Binary]


# -- parsing ------------------------------------------------------------------


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "$":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ExprSyntaxError("expected digits after '$'", i)
            tokens.append(("leaf", text[i + 1:j], i))
            i = j
        elif ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word not in UNARY_OPS:
                raise ExprSyntaxError(f"unknown operator {word!r}", i)
            tokens.append(("unary", word, i))
            i = j
        elif ch in "()":
            tokens.append((ch, ch, i))
            i += 1
        elif ch in BINARY_OPS:
            tokens.append(("binop", ch, i))
            i += 1
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.leaf_positions: dict[int, int] = {}

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind: str):
        tok = self.tokens[self.pos]
        if tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExprSyntaxError(f"expected {kind!r}, found {found}", tok[2])
        self.pos += 1
        return tok

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] == "binop":
            op = self.take("binop")[1]
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Expr:
        kind, value, where = self.peek()
        if kind == "leaf":
            self.pos += 1
            slot = int(value)
            if slot in self.leaf_positions:
                raise ExprSyntaxError(f"slot ${slot} used more than once", where)
            self.leaf_positions[slot] = where
            return Leaf(slot)
        if kind == "unary":
            self.pos += 1
            self.take("(")
            child = self.expr()
            self.take(")")
            return Unary(value, child)
        if kind == "(":
            self.pos += 1
            inner = self.expr()
            self.take(")")
            return inner
        found = "end of input" if kind == "end" else repr(value)
        raise ExprSyntaxError(f"expected a leaf, operator or '(', found {found}", where)


def parse_expr(text: str) -> Expr:
    """Parse expression text; slots must be exactly ``$0 .. $(k-1)``, each used once."""
    parser = _Parser(text)
    node = parser.expr()
    parser.take("end")
    slots = parser.leaf_positions
    for i in range(len(slots)):
        if i not in slots:
            worst = max(slots)
            raise ExprSyntaxError(f"slot index gap: ${i} missing but ${worst} used", slots[worst])
    return node


def render(e: Expr) -> str:
    """Text that parses back to the same tree."""
    if isinstance(e, Leaf):
        return f"${e.slot}"
    if isinstance(e, Unary):
        return f"{e.op}({render(e.child)})"
    right = render(e.right)
    if isinstance(e.right, Binary):
        right = f"({right})"
    return f"{render(e.left)} {e.op} {right}"


def leaf_slots(e: Expr) -> list[int]:
    if isinstance(e, Leaf):
        return [e.slot]
    if isinstance(e, Unary):
        return leaf_slots(e.child)
    return leaf_slots(e.left) + leaf_slots(e.right)


def leaf_count(e: Expr) -> int:
    return len(leaf_slots(e))


def as_expr(e: Expr | str) -> Expr:
    return parse_expr(e) if isinstance(e, str) else e


# -- signatures ---------------------------------------------------------------


class ClassBound(enum.Enum):
    ANY = "any"
    COMPLEX = "complex"
    INDEPENDENCE = "independence"

    def admits(self, h: Hypergraph) -> bool:
        if self is ClassBound.COMPLEX:
            return core.is_complex(h)
        if self is ClassBound.INDEPENDENCE:
            return core.is_independence(h)
        return True


_SWAP = {
    ClassBound.COMPLEX: ClassBound.INDEPENDENCE,
    ClassBound.INDEPENDENCE: ClassBound.COMPLEX,
    ClassBound.ANY: ClassBound.ANY,
}


@dataclass(frozen=True)
class Signature:
    leaf_vertex_sets: tuple[VertexSet, ...]
    result_vertex_set: VertexSet
    result_class_bound: ClassBound


def _node_signature(e: Expr, leaf_sets: Sequence[VertexSet]) -> tuple[VertexSet, ClassBound]:
    if isinstance(e, Leaf):
        return leaf_sets[e.slot], ClassBound.ANY
    if isinstance(e, Unary):
        vs, bound = _node_signature(e.child, leaf_sets)
        if e.op == "comp":
            return vs, _SWAP[bound]
        if e.op in ("up", "down"):
            return vs, ClassBound.COMPLEX
        return vs, ClassBound.INDEPENDENCE
    lvs, lb = _node_signature(e.left, leaf_sets)
    rvs, rb = _node_signature(e.right, leaf_sets)
    if e.op in ("&", "|"):
        if lvs != rvs:
            raise AdmissibilityError(
                f"'{e.op}' needs equal vertex sets, got [{lvs}] and [{rvs}]"
            )
        return lvs, lb if lb is rb else ClassBound.ANY
    if e.op == "*":
        try:
            vs = lvs.join(rvs)
        except core.VertexSetError as exc:
            raise AdmissibilityError(f"'*' {exc}") from None
        # the join keeps both inputs, so it is superset-closed only in trivial cases
        both_complex = lb is ClassBound.COMPLEX and rb is ClassBound.COMPLEX
        return vs, ClassBound.COMPLEX if both_complex else ClassBound.ANY
    try:
        return lvs.product(rvs), ClassBound.ANY
    except core.VertexSetError as exc:
        raise AdmissibilityError(f"'#' {exc}") from None


def infer_signature(e: Expr | str, leaf_sets: Sequence[VertexSet]) -> Signature:
    """Result vertex set and class bound of ``e`` for the given leaf vertex sets."""
    e = as_expr(e)
    k = leaf_count(e)
    if len(leaf_sets) != k:
        raise AdmissibilityError(f"expression has {k} leaves but {len(leaf_sets)} vertex sets were given")
    vs, bound = _node_signature(e, leaf_sets)
    return Signature(tuple(leaf_sets), vs, bound)


def _node_vertex_sets(e: Expr, leaf_sets: Sequence[VertexSet]) -> list[VertexSet]:
    out = [_node_signature(e, leaf_sets)[0]]
    if isinstance(e, Unary):
        out += _node_vertex_sets(e.child, leaf_sets)
    elif isinstance(e, Binary):
        out += _node_vertex_sets(e.left, leaf_sets) + _node_vertex_sets(e.right, leaf_sets)
    return out


# -- evaluation ---------------------------------------------------------------


def _evaluate(e: Expr, inputs: Sequence[Hypergraph]) -> Hypergraph:
    if isinstance(e, Leaf):
        return inputs[e.slot]
    if isinstance(e, Unary):
        return UNARY_OPS[e.op](_evaluate(e.child, inputs))
    return BINARY_OPS[e.op](_evaluate(e.left, inputs), _evaluate(e.right, inputs))


def eval_expr(e: Expr | str, inputs: Sequence[Hypergraph]) -> Hypergraph:
    """Apply ``e`` to concrete hypergraphs, input ``i`` bound to slot ``$i``."""
    e = as_expr(e)
    infer_signature(e, [h.vertex_set for h in inputs])
    return _evaluate(e, inputs)


def pushforward_expr(e: Expr | str, leaf_tables: Sequence[DistributionTable]) -> DistributionTable:
    """Exact law of ``e`` applied to independent inputs with the given laws."""
    e = as_expr(e)
    leaf_sets = [t.vertex_set for t in leaf_tables]
    infer_signature(e, leaf_sets)
    for vs in _node_vertex_sets(e, leaf_sets):
        m = (1 << len(vs)) - 1
        if m > MAX_TABLE_EDGES:
            raise EnumerationBoundError(
                f"intermediate vertex set of size {len(vs)} exceeds the enumeration bound"
            )
    return _push(e, leaf_tables)


def _support(table: DistributionTable) -> list[tuple[Hypergraph, float]]:
    return [(Hypergraph.from_code(table.vertex_set, code), mass) for code, mass in table.items()]


def _push(e: Expr, tables: Sequence[DistributionTable]) -> DistributionTable:
    if isinstance(e, Leaf):
        return tables[e.slot]
    if isinstance(e, Unary):
        child = _push(e.child, tables)
        op = UNARY_OPS[e.op]
        out = np.zeros(len(child.masses))
        for h, mass in _support(child):
            out[op(h).code()] += mass
        return DistributionTable(child.vertex_set, out)
    left, right = _push(e.left, tables), _push(e.right, tables)
    op = BINARY_OPS[e.op]
    right_support = _support(right)
    out = None
    vs = None
    for h1, m1 in _support(left):
        for h2, m2 in right_support:
            r = op(h1, h2)
            if out is None:
                vs = r.vertex_set
                out = np.zeros(1 << ((1 << len(vs)) - 1))
            out[r.code()] += m1 * m2
    if out is None:
        raise ValueError("pushforward of an empty table")
    return DistributionTable(vs, out)


@dataclass(frozen=True)
class ExprDescriptor:
    """How a sampled object was produced: expression text, leaf maps and stream key."""

    expr: str
    leaf_maps: tuple[str, ...]
    seed: int
    replicate: int

    def __str__(self):
        return f"{self.expr} <- " + "; ".join(self.leaf_maps)


def sample_expr(e: Expr | str, leaf_maps: Sequence[ProbabilityMap], stream: SampleStream) -> SampledObject:
    """Draw every leaf from its independent-edge law (slot order), then evaluate ``e``."""
    e = as_expr(e)
    sig = infer_signature(e, [p.vertex_set for p in leaf_maps])
    inputs = [sample_hypergraph(p, stream) for p in leaf_maps]
    h = _evaluate(e, inputs)
    desc = ExprDescriptor(render(e), tuple(p.describe() for p in leaf_maps), stream.seed, stream.replicate)
    return SampledObject(sig.result_vertex_set, h, desc)


# -- pipelines ----------------------------------------------------------------

KINDS = ("hypergraph", "complex", "independence")
_CLOSURES = {"complex": ("up", "down"), "independence": ("iup", "idown")}


@dataclass(frozen=True)
class PipelineConfig:
    """Every choice of the block-wise generation procedure, made explicit.

    Block ``i`` has ``len(leaf_words[i])`` input hypergraphs on ``vertex_sets[i]``.
    Unary words are tuples of operator names written outermost first, so
    ``("comp", "up")`` means ``comp(up(x))``.  For the complex and independence
    kinds every leaf additionally passes through ``leaf_closures[i][j]``, and
    every cross-block step listed in ``cross_closures`` is wrapped by that
    closure.  Blocks are folded in ``block_orders[i]`` order with ``block_ops[i]``;
    block results are then folded in ``cross_order`` with ``cross_ops``.
    """

    kind: str
    vertex_sets: tuple[VertexSet, ...]
    leaf_words: tuple[tuple[tuple[str, ...], ...], ...]
    block_orders: tuple[tuple[int, ...], ...]
    block_ops: tuple[tuple[str, ...], ...]
    cross_order: tuple[int, ...]
    cross_ops: tuple[str, ...]
    leaf_closures: tuple[tuple[str, ...], ...] = ()
    cross_closures: tuple[str | None, ...] = ()
    final_word: tuple[str, ...] = field(default=())

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(words) for words in self.leaf_words)

    def leaf_vertex_sets(self) -> list[VertexSet]:
        return [vs for vs, words in zip(self.vertex_sets, self.leaf_words) for _ in words]


def _malformed(msg: str):
    raise ValueError(f"malformed pipeline config: {msg}")


def _check_word(word) -> None:
    for op in word:
        if op not in UNARY_OPS:
            _malformed(f"unknown unary operator {op!r}")


def _wrap(word: Sequence[str], node: Expr) -> Expr:
    for op in reversed(word):
        node = Unary(op, node)
    return node


def _validate(cfg: PipelineConfig) -> None:
    if cfg.kind not in KINDS:
        _malformed(f"kind must be one of {KINDS}")
    k = len(cfg.vertex_sets)
    if k < 1:
        _malformed("need at least one block")
    labels = [label for vs in cfg.vertex_sets for label in vs.labels]
    if len(set(labels)) != len(labels):
        _malformed("block vertex sets must be pairwise disjoint")
    for name in ("leaf_words", "block_orders", "block_ops"):
        if len(getattr(cfg, name)) != k:
            _malformed(f"{name} needs one entry per block")
    for i, words in enumerate(cfg.leaf_words):
        n = len(words)
        if n < 1:
            _malformed(f"block {i} has no inputs")
        for w in words:
            _check_word(w)
        if sorted(cfg.block_orders[i]) != list(range(n)):
            _malformed(f"block_orders[{i}] is not a permutation of 0..{n - 1}")
        if len(cfg.block_ops[i]) != n - 1 or any(op not in "&|" for op in cfg.block_ops[i]):
            _malformed(f"block_ops[{i}] needs {n - 1} operators from '&', '|'")
    if sorted(cfg.cross_order) != list(range(k)):
        _malformed("cross_order is not a permutation of the blocks")
    if len(cfg.cross_ops) != k - 1 or any(op not in ("*", "#") for op in cfg.cross_ops):
        _malformed(f"cross_ops needs {k - 1} operators from '*', '#'")
    _check_word(cfg.final_word)
    if cfg.kind == "hypergraph":
        if cfg.leaf_closures or any(c is not None for c in cfg.cross_closures):
            _malformed("the hypergraph kind takes no closures")
        return
    allowed = _CLOSURES[cfg.kind]
    if cfg.final_word:
        _malformed(f"the {cfg.kind} kind ends at the cross-block fold; final_word must be empty")
    if len(cfg.leaf_closures) != k or any(
        len(cl) != len(words) for cl, words in zip(cfg.leaf_closures, cfg.leaf_words)
    ):
        _malformed("leaf_closures needs one closure per input")
    if any(c not in allowed for cl in cfg.leaf_closures for c in cl):
        _malformed(f"leaf closures for the {cfg.kind} kind must be in {allowed}")
    if len(cfg.cross_closures) != k - 1:
        _malformed("cross_closures needs one entry per cross-block step")
    for op, c in zip(cfg.cross_ops, cfg.cross_closures):
        needs = op == "#" or cfg.kind == "independence"
        if needs and c not in allowed:
            _malformed(f"cross-block '{op}' in the {cfg.kind} kind needs a closure from {allowed}")
        if not needs and c is not None:
            _malformed(f"cross-block '{op}' in the {cfg.kind} kind takes no closure")


def build_pipeline(cfg: PipelineConfig) -> Expr:
    """Expression realising the configured procedure; leaves numbered block by block."""
    _validate(cfg)
    closed = cfg.kind != "hypergraph"
    blocks: list[Expr] = []
    slot = 0
    for i, words in enumerate(cfg.leaf_words):
        leaves = []
        for j, word in enumerate(words):
            node = _wrap(word, Leaf(slot + j))
            if closed:
                node = Unary(cfg.leaf_closures[i][j], node)
            leaves.append(node)
        slot += len(words)
        order = cfg.block_orders[i]
        node = leaves[order[0]]
        for op, j in zip(cfg.block_ops[i], order[1:]):
            node = Binary(op, node, leaves[j])
        blocks.append(node)
    node = blocks[cfg.cross_order[0]]
    closures = cfg.cross_closures or (None,) * len(cfg.cross_ops)
    for op, closure, i in zip(cfg.cross_ops, closures, cfg.cross_order[1:]):
        node = Binary(op, node, blocks[i])
        if closure is not None:
            node = Unary(closure, node)
    return _wrap(cfg.final_word, node)


def random_pipeline_config(
    kind: str,
    rng: np.random.Generator,
    max_blocks: int = 3,
    max_block_vertices: int = 3,
    max_inputs: int = 3,
    max_word: int = 3,
    max_vertices: int = 12,
) -> PipelineConfig:
    """Fill every choice uniformly at random, keeping the result vertex set at most ``max_vertices``.

    A box product that would exceed ``max_vertices`` is replaced by a join.
    """
    ops = list(UNARY_OPS)

    def word():
        return tuple(ops[i] for i in rng.integers(0, len(ops), size=rng.integers(0, max_word + 1)))

    k = int(rng.integers(1, max_blocks + 1))
    vertex_sets = tuple(
        VertexSet(tuple(f"b{i}v{j}" for j in range(int(rng.integers(1, max_block_vertices + 1)))))
        for i in range(k)
    )
    leaf_words, block_orders, block_ops = [], [], []
    for _ in range(k):
        n = int(rng.integers(1, max_inputs + 1))
        leaf_words.append(tuple(word() for _ in range(n)))
        block_orders.append(tuple(int(x) for x in rng.permutation(n)))
        block_ops.append(tuple("&|"[int(x)] for x in rng.integers(0, 2, size=n - 1)))
    cross_order = tuple(int(x) for x in rng.permutation(k))
    cross_ops = []
    size = len(vertex_sets[cross_order[0]])
    for i in cross_order[1:]:
        other = len(vertex_sets[i])
        op = "*#"[int(rng.integers(0, 2))]
        if op == "#" and size * other > max_vertices:
            op = "*"
        size = size * other if op == "#" else size + other
        cross_ops.append(op)
    if kind == "hypergraph":
        return PipelineConfig(
            kind, vertex_sets, tuple(leaf_words), tuple(block_orders), tuple(block_ops),
            cross_order, tuple(cross_ops), final_word=word() if size <= max_vertices else (),
        )
    allowed = _CLOSURES[kind]
    leaf_closures = tuple(
        tuple(allowed[int(x)] for x in rng.integers(0, 2, size=len(words))) for words in leaf_words
    )
    cross_closures = tuple(
        allowed[int(rng.integers(0, 2))] if (op == "#" or kind == "independence") else None
        for op in cross_ops
    )
    return PipelineConfig(
        kind, vertex_sets, tuple(leaf_words), tuple(block_orders), tuple(block_ops),
        cross_order, tuple(cross_ops), leaf_closures, cross_closures,
    )


def run_pipeline(cfg: PipelineConfig, stream: SampleStream, leaf_maps: Sequence[ProbabilityMap] | None = None) -> SampledObject:
    """Build the pipeline expression and sample it; default leaf maps are constant 1/2."""
    e = build_pipeline(cfg)
    if leaf_maps is None:
        leaf_maps = [Constant(vs, 0.5) for vs in cfg.leaf_vertex_sets()]
    return sample_expr(e, leaf_maps, stream)
