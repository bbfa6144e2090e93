"""Catalogue of operator identities, each a predicate over one, two or three hypergraphs.

``domain`` says what inputs a law takes:

* ``unary`` -- one hypergraph on V
* ``pair`` -- two hypergraphs on the same V
* ``join`` -- hypergraphs on disjoint V, V'
* ``triple`` -- H1 on V1, H2 and H3 on a disjoint V2
* ``triple3`` -- H1, H2, H3 on pairwise disjoint V1, V2, V3
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .core import (
    Hypergraph,
    assoc_complex as up,
    assoc_indep as iup,
    box_product,
    combine,
    complement as comp,
    is_complex,
    is_independence,
    join,
    lower_complex as down,
    lower_indep as idown,
)


def cap(a, b):
    return combine(a, b, "intersect")


def cup(a, b):
    return combine(a, b, "union")


def same_family(h1: Hypergraph, h2: Hypergraph) -> bool:
    """Equality up to reordering of the vertex set (compares label sets)."""
    labels1, labels2 = h1.vertex_set.labels, h2.vertex_set.labels
    if set(labels1) != set(labels2):
        return False
    if len(h1.edges) != len(h2.edges):
        return False
    # byte-wise lookup tables moving h1's bit positions onto h2's
    target = [h2.vertex_set.index(label) for label in labels1]
    tables = []
    for start in range(0, len(target), 8):
        chunk = target[start : start + 8]
        table = [0] * 256
        for byte in range(1, 256):
            low = byte & -byte
            table[byte] = table[byte ^ low] | (1 << chunk[low.bit_length() - 1]) if low.bit_length() <= len(chunk) else 0
        tables.append(table)

    def move(mask: int) -> int:
        out = 0
        for table in tables:
            out |= table[mask & 0xFF]
            mask >>= 8
        return out

    return {move(e) for e in h1.edges} == h2.edges


@dataclass(frozen=True)
class Law:
    name: str
    domain: str
    holds: Callable[..., bool]


def _full_or_empty(h: Hypergraph, flag: bool) -> Hypergraph:
    return Hypergraph.full(h.vertex_set) if flag else Hypergraph.empty(h.vertex_set)


LAWS: tuple[Law, ...] = (
    Law("comp-involution", "unary", lambda h: comp(comp(h)) == h),
    Law("iup-is-comp-down-comp", "unary", lambda h: iup(h) == comp(down(comp(h)))),
    Law("idown-is-comp-up-comp", "unary", lambda h: idown(h) == comp(up(comp(h)))),
    Law("down-is-comp-iup-comp", "unary", lambda h: down(h) == comp(iup(comp(h)))),
    Law("up-is-comp-idown-comp", "unary", lambda h: up(h) == comp(idown(comp(h)))),
    Law("up-down-absorb", "unary", lambda h: up(down(h)) == down(h)),
    Law("iup-idown-absorb", "unary", lambda h: iup(idown(h)) == idown(h)),
    Law("down-up-absorb", "unary", lambda h: down(up(h)) == up(h)),
    Law("idown-iup-absorb", "unary", lambda h: idown(iup(h)) == iup(h)),
    Law("up-idempotent", "unary", lambda h: up(up(h)) == up(h)),
    Law("iup-idempotent", "unary", lambda h: iup(iup(h)) == iup(h)),
    Law("down-idempotent", "unary", lambda h: down(down(h)) == down(h)),
    Law("idown-idempotent", "unary", lambda h: idown(idown(h)) == idown(h)),
    Law("down-iup-idempotent", "unary", lambda h: down(iup(down(iup(h)))) == down(iup(h))),
    Law("iup-down-idempotent", "unary", lambda h: iup(down(iup(down(h)))) == iup(down(h))),
    Law("up-idown-idempotent", "unary", lambda h: up(idown(up(idown(h)))) == up(idown(h))),
    Law("idown-up-idempotent", "unary", lambda h: idown(up(idown(up(h)))) == idown(up(h))),
    Law("up-iup-full-or-empty", "unary", lambda h: up(iup(h)) == _full_or_empty(h, bool(h.edges))),
    Law(
        "up-idown-full-or-empty",
        "unary",
        lambda h: up(idown(h)) == _full_or_empty(h, h.vertex_set.full_mask in h.edges),
    ),
    Law(
        "up-iup-stable",
        "unary",
        lambda h: (lambda x: up(x) == iup(x) == down(x) == idown(x) == x)(up(iup(h))),
    ),
    Law(
        "up-idown-stable",
        "unary",
        lambda h: (lambda x: up(x) == iup(x) == down(x) == idown(x) == x)(up(idown(h))),
    ),
    Law("comp-cap-de-morgan", "pair", lambda a, b: comp(cap(a, b)) == cup(comp(a), comp(b))),
    Law("comp-cup-de-morgan", "pair", lambda a, b: comp(cup(a, b)) == cap(comp(a), comp(b))),
    Law("up-cap-sub", "pair", lambda a, b: up(cap(a, b)) <= cap(up(a), up(b))),
    Law("up-cup-distributes", "pair", lambda a, b: up(cup(a, b)) == cup(up(a), up(b))),
    Law("down-cap-distributes", "pair", lambda a, b: down(cap(a, b)) == cap(down(a), down(b))),
    Law("down-cup-super", "pair", lambda a, b: down(cup(a, b)) >= cup(down(a), down(b))),
    Law("iup-cap-sub", "pair", lambda a, b: iup(cap(a, b)) <= cap(iup(a), iup(b))),
    Law("iup-cup-distributes", "pair", lambda a, b: iup(cup(a, b)) == cup(iup(a), iup(b))),
    Law("idown-cap-distributes", "pair", lambda a, b: idown(cap(a, b)) == cap(idown(a), idown(b))),
    Law("idown-cup-super", "pair", lambda a, b: idown(cup(a, b)) >= cup(idown(a), idown(b))),
    Law(
        "complexes-closed-under-cap-cup",
        "pair",
        lambda a, b: not (is_complex(a) and is_complex(b))
        or (is_complex(cap(a, b)) and is_complex(cup(a, b))),
    ),
    Law(
        "independence-closed-under-cap-cup",
        "pair",
        lambda a, b: not (is_independence(a) and is_independence(b))
        or (is_independence(cap(a, b)) and is_independence(cup(a, b))),
    ),
    Law("up-join", "join", lambda a, b: up(join(a, b)) == join(up(a), up(b))),
    Law("down-join", "join", lambda a, b: down(join(a, b)) == join(down(a), down(b))),
    Law("iup-join", "join", lambda a, b: iup(join(a, b)) == join(iup(a), iup(b))),
    Law("idown-join", "join", lambda a, b: idown(join(a, b)) == join(idown(a), idown(b))),
    Law("join-cup-distributes", "triple", lambda a, b, c: join(a, cup(b, c)) == cup(join(a, b), join(a, c))),
    Law("join-cap-distributes", "triple", lambda a, b, c: join(a, cap(b, c)) == cap(join(a, b), join(a, c))),
    Law(
        "box-cup-distributes",
        "triple",
        lambda a, b, c: box_product(a, cup(b, c)) == cup(box_product(a, b), box_product(a, c)),
    ),
    Law(
        "box-cap-distributes",
        "triple",
        lambda a, b, c: box_product(a, cap(b, c)) == cap(box_product(a, b), box_product(a, c)),
    ),
    Law(
        "box-join-distributes",
        "triple3",
        lambda a, b, c: same_family(box_product(a, join(b, c)), join(box_product(a, b), box_product(a, c))),
    ),
)

LAWS_BY_NAME = {law.name: law for law in LAWS}
