"""Finite-dimensional sublattices: closure, atoms and the coordinate isomorphism."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import ClosureBudgetExceeded, DomainMismatch
from .lattice import ONE, FinDim, Vec, is_findim_like, random_rational, sup_norm
from .operators import HomComposite, MatrixMap, basis_elements

MAX_ROUNDS = 32
WORD_SAMPLES = 500


# -- exact linear algebra ------------------------------------------------------


def rref(vectors) -> list:
    """Reduced row echelon basis of the span of ``vectors`` (deterministic)."""
    rows = [list(v.coords) for v in vectors if not v.is_zero()]
    if not rows:
        return []
    n = len(rows[0])
    pivot_row = 0
    for col in range(n):
        pick = next((r for r in range(pivot_row, len(rows)) if rows[r][col] != 0), None)
        if pick is None:
            continue
        rows[pivot_row], rows[pick] = rows[pick], rows[pivot_row]
        p = rows[pivot_row][col]
        rows[pivot_row] = [c / p for c in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return [Vec(tuple(r)) for r in rows[:pivot_row]]


def in_span(v: Vec, basis: list) -> bool:
    """Membership test against an rref basis."""
    residual = list(v.coords)
    for b in basis:
        col = next(i for i, c in enumerate(b.coords) if c != 0)
        f = residual[col]
        if f != 0:
            residual = [a - f * c for a, c in zip(residual, b.coords)]
    return all(c == 0 for c in residual)


# -- closure ---------------------------------------------------------------


def _lattice_round(basis: list) -> list:
    cand = list(basis)
    for g in basis:
        cand += [g.pos(), g.neg()]
    for g, h in itertools.combinations(basis, 2):
        cand += [g.sup(h), g.inf(h)]
    return rref(cand)


def _random_word(basis: list, rng: random.Random) -> Vec:
    """A random lattice expression in random combinations of the basis."""
    def leaf():
        out = Vec.zeros(len(basis[0]))
        for b in basis:
            out = out + b.scale(random_rational(rng))
        return out

    x = leaf()
    for _ in range(rng.randint(1, 3)):
        op = rng.choice(("sup", "inf", "abs", "pos"))
        if op == "sup":
            x = x.sup(leaf())
        elif op == "inf":
            x = x.inf(leaf())
        elif op == "abs":
            x = x.abs()
        else:
            x = x.pos()
    return x


def sublattice_closure(generators, max_rounds: int = MAX_ROUNDS, seed: int = 0) -> list:
    """Rational basis (rref) of the vector sublattice generated by ``generators``.

    Rounds add positive/negative parts and pairwise sups/infs of the current
    basis until the span stops growing.  The result is then probed with
    random lattice words; any escapee is added and the rounds resume.
    """
    basis = rref(generators)
    rounds = 0
    rng = random.Random(seed)
    while True:
        while True:
            rounds += 1
            if rounds > max_rounds:
                raise ClosureBudgetExceeded(f"sublattice closure did not settle in {max_rounds} rounds")
            nxt = _lattice_round(basis)
            if nxt == basis:
                break
            basis = nxt
        if not basis:
            return basis
        escapee = None
        for _ in range(WORD_SAMPLES):
            w = _random_word(basis, rng)
            if not in_span(w, basis):
                escapee = w
                break
        if escapee is None:
            return basis
        basis = rref(basis + [escapee])


def _normalize(v: Vec) -> Vec:
    return v.scale(ONE / sup_norm(v))


def atoms_of(basis: list, max_steps: int = 10_000) -> list:
    """Pairwise disjoint positive elements spanning the sublattice, sup-norm 1.

    Pairs that overlap are replaced by ``(u-v)+``, ``(v-u)+`` and ``u ^ v``
    until no two overlap.
    """
    pool = {_normalize(b.abs()) for b in basis if not b.is_zero()}
    steps = 0
    while True:
        clash = next(
            ((u, v) for u, v in itertools.combinations(sorted(pool, key=_order_key), 2)
             if not u.inf(v).is_zero()),
            None,
        )
        if clash is None:
            break
        steps += 1
        if steps > max_steps:
            raise ClosureBudgetExceeded("disjointification did not terminate")
        u, v = clash
        pool -= {u, v}
        for w in ((u - v).pos(), (v - u).pos(), u.inf(v)):
            if not w.is_zero():
                pool.add(_normalize(w))
    return sorted(pool, key=_order_key)


def _order_key(v: Vec):
    return (v.support(), v.coords)


# -- the reduction ---------------------------------------------------------


@dataclass
class FiniteRankReduction:
    """``A = I^{-1} o (I o A_1)`` with ``I`` a Riesz isomorphism of ``G`` onto R^n."""

    basis: list
    atoms: list
    iso: MatrixMap
    inverse: MatrixMap
    reduced: object

    @property
    def dim(self) -> int:
        return len(self.atoms)

    def to_coords(self, g: Vec) -> Vec:
        if not in_span(g, self.basis):
            raise DomainMismatch(f"{g!r} is not in the sublattice")
        return self.iso.apply(g)

    def from_coords(self, c: Vec) -> Vec:
        return self.inverse.apply(c)


def finite_rank_reduce(op, seed: int = 0) -> FiniteRankReduction:
    if not is_findim_like(op.codomain):
        raise DomainMismatch("finite-rank reduction needs a finite-dimensional codomain")
    k = op.codomain.dim
    h = op.horizon()
    gens = [
        op.evaluate(args)
        for args in itertools.product(*(basis_elements(s, h) for s in op.domain))
    ]
    basis = sublattice_closure(gens, seed=seed)
    atoms = atoms_of(basis)
    n = len(atoms)
    # G = {0} still gets a one-dimensional (zero) coordinate map so that the
    # reduced operator has a valid codomain.
    target = FinDim(max(n, 1))
    cols = atoms or [Vec.zeros(k)]
    rows = [Vec.unit(k, a.support()[0]).scale(ONE / a[a.support()[0]]) for a in atoms] or [Vec.zeros(k)]
    iso = MatrixMap(tuple(rows), op.codomain, target)
    inverse = MatrixMap(
        tuple(Vec(tuple(a[i] for a in cols)) for i in range(1, k + 1)), target, op.codomain
    )
    return FiniteRankReduction(basis, atoms, iso, inverse, HomComposite(iso, op))
