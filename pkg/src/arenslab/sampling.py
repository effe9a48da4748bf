"""Generator grids and seeded random elements for the check suite."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import bidual as bd
from .lattice import (
    ONE,
    ZERO,
    EvConstSeq,
    FinSupSeq,
    SeqC,
    SeqL1,
    Vec,
    is_findim_like,
    random_rational,
)

GRID_BASIS = 6


def _mixed_vectors(n: int) -> list:
    first = [Fraction((-1) ** (i + 1) * i) for i in range(1, n + 1)]
    second = [Fraction(2), Fraction(-1, 2), ZERO, Fraction(3)]
    second = (second * n)[:n]
    return [Vec(tuple(first)), Vec(tuple(second))]


def bidual_grid(space) -> list:
    """Canonical images of basis vectors, singular elements and two mixed elements."""
    if is_findim_like(space):
        return [Vec.unit(space.dim, i) for i in range(1, space.dim + 1)] + _mixed_vectors(space.dim)
    if isinstance(space, SeqL1):
        return (
            [bd.embed_J(FinSupSeq.unit(i), space) for i in range(1, GRID_BASIS + 1)]
            + [bd.GEN_LIMIT]
            + [
                bd.L1BidualElem(FinSupSeq(((1, 1), (3, -2))), ONE),
                bd.L1BidualElem(FinSupSeq(((2, 3), (5, -1))), Fraction(-1, 2)),
            ]
        )
    if isinstance(space, SeqC):
        return (
            [bd.embed_J(EvConstSeq.delta(i), space) for i in range(1, GRID_BASIS + 1)]
            + [bd.embed_J(EvConstSeq.ones(), space), bd.CBidualElem(ONE, EvConstSeq())]
            + [
                bd.CBidualElem(Fraction(2), EvConstSeq((1, -1), 3)),
                bd.CBidualElem(-ONE, EvConstSeq((0, 2), Fraction(1, 2))),
            ]
        )
    raise TypeError(f"no grid for {space!r}")


def bidual_sign_patterns(space) -> list:
    """Bidual elements with every coordinate in {+1, -1} on a small window."""
    if is_findim_like(space):
        return [Vec(s) for s in itertools.product((ONE, -ONE), repeat=space.dim)]
    if isinstance(space, SeqL1):
        return [
            bd.L1BidualElem(FinSupSeq(((1, s1), (2, s2))), mu)
            for s1, s2, mu in itertools.product((ONE, -ONE), repeat=3)
        ]
    return [
        bd.CBidualElem(beta, EvConstSeq((s1, s2), tail))
        for beta, s1, s2, tail in itertools.product((ONE, -ONE), repeat=4)
    ]


def random_bidual(space, rng: random.Random, singular: bool = True, window: int = 5):
    """Seeded random bidual-model element.  ``singular=False`` keeps the
    element in the image of the canonical embedding."""
    if is_findim_like(space):
        return Vec(tuple(random_rational(rng) for _ in range(space.dim)))
    if isinstance(space, SeqL1):
        a = FinSupSeq(tuple((i, random_rational(rng)) for i in range(1, window + 1)))
        return bd.L1BidualElem(a, random_rational(rng) if singular else ZERO)
    t = EvConstSeq(tuple(random_rational(rng) for _ in range(rng.randint(0, window))), random_rational(rng))
    beta = random_rational(rng) if singular else t.tail
    return bd.CBidualElem(beta, t)


def random_tuples(domain, count: int, seed: int, singular: bool = True) -> list:
    rng = random.Random(seed)
    return [tuple(random_bidual(s, rng, singular) for s in domain) for _ in range(count)]


def grid_tuples(domain) -> list:
    return list(itertools.product(*(bidual_grid(s) for s in domain)))


def sign_pattern_tuples(domain) -> list:
    return list(itertools.product(*(bidual_sign_patterns(s) for s in domain)))


def random_tensor(rng: random.Random, dims, codomain: int, density: float = 0.5) -> dict:
    entries = {}
    for idx in itertools.product(*(range(1, n + 1) for n in dims)):
        for j in range(1, codomain + 1):
            if rng.random() < density:
                v = random_rational(rng, zero_weight=0.0)
                if v != 0:
                    entries[idx + (j,)] = v
    return entries
