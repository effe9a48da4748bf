"""Computable order duals and biduals of the sequence models.

Dual models
    ``FinDim(n)``: Vec.  ``SeqL1``: EvConstSeq.  ``SeqC``: :class:`CDualElem`.

Bidual models
    ``FinDim(n)``: Vec.  ``SeqL1``: :class:`L1BidualElem`, an l_1 part plus a
    mass ``mu`` on the generalized limit (the tail functional).  ``SeqC``:
    :class:`CBidualElem`, a mass ``beta`` on the limit coordinate of the dual
    plus a bounded sequence ``t`` acting on the summable part.

Several helpers take a functional given only as a Python callable
``value_at(primal_element)`` together with a *horizon* ``H``: the promise that
the functional's dual-model representation is already "settled" past index
``H`` (for SeqL1 its coefficients are constant after ``H``; for SeqC its
summable part is supported in ``1..H``).  That promise is what makes every
evaluation finite.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainMismatch, NotRepresentable
from .lattice import (
    ONE,
    ZERO,
    EvConstSeq,
    FinSupSeq,
    LatticeOps,
    SeqC,
    SeqL1,
    Vec,
    check_member,
    dual_contains,
    is_findim_like,
    q,
)


@dataclass(frozen=True)
class CDualElem(LatticeOps):
    """Functional ``x -> b * tail(x) + sum a_i x_i`` on the c-model."""

    b: Fraction = ZERO
    a: FinSupSeq = FinSupSeq()
    __hash__ = LatticeOps._cached_hash

    def __post_init__(self):
        object.__setattr__(self, "b", q(self.b))
        if not isinstance(self.a, FinSupSeq):
            object.__setattr__(self, "a", FinSupSeq(tuple(self.a)))

    @classmethod
    def limit(cls) -> "CDualElem":
        return cls(ONE, FinSupSeq())

    @classmethod
    def coord(cls, i: int) -> "CDualElem":
        return cls(ZERO, FinSupSeq.unit(i))

    @property
    def bound(self) -> int:
        return self.a.bound

    def _zip(self, other, fn):
        return CDualElem(fn(self.b, other.b), self.a._zip(other.a, fn))

    def _map(self, fn):
        return CDualElem(fn(self.b), self.a._map(fn))

    def _coords(self):
        return [self.b] + self.a._coords()

    def __repr__(self):
        return f"CDualElem(b={self.b}, a={self.a!r})"


@dataclass(frozen=True)
class CBidualElem(LatticeOps):
    """Element ``(b, a) -> beta * b + sum t_i a_i`` of the c-model bidual."""

    beta: Fraction = ZERO
    t: EvConstSeq = EvConstSeq()
    __hash__ = LatticeOps._cached_hash

    def __post_init__(self):
        object.__setattr__(self, "beta", q(self.beta))
        if not isinstance(self.t, EvConstSeq):
            raise TypeError("t must be an EvConstSeq")

    @property
    def bound(self) -> int:
        return self.t.bound

    def _zip(self, other, fn):
        return CBidualElem(fn(self.beta, other.beta), self.t._zip(other.t, fn))

    def _map(self, fn):
        return CBidualElem(fn(self.beta), self.t._map(fn))

    def _coords(self):
        return [self.beta] + self.t._coords()

    def __repr__(self):
        return f"CBidualElem(beta={self.beta}, t={self.t!r})"


@dataclass(frozen=True)
class L1BidualElem(LatticeOps):
    """Element ``t -> sum a_i t_i + mu * tail(t)`` of the l_1-model bidual."""

    a: FinSupSeq = FinSupSeq()
    mu: Fraction = ZERO
    __hash__ = LatticeOps._cached_hash

    def __post_init__(self):
        object.__setattr__(self, "mu", q(self.mu))
        if not isinstance(self.a, FinSupSeq):
            object.__setattr__(self, "a", FinSupSeq(tuple(self.a)))

    @property
    def bound(self) -> int:
        return self.a.bound

    def _zip(self, other, fn):
        return L1BidualElem(self.a._zip(other.a, fn), fn(self.mu, other.mu))

    def _map(self, fn):
        return L1BidualElem(self.a._map(fn), fn(self.mu))

    def _coords(self):
        return self.a._coords() + [self.mu]

    def __repr__(self):
        return f"L1BidualElem(a={self.a!r}, mu={self.mu})"


#: The generalized limit on the l_1 model's dual: ``t -> tail(t)``.
GEN_LIMIT = L1BidualElem(FinSupSeq(), ONE)
#: The limit functional on the c model.
LIMIT_FUNCTIONAL = CDualElem.limit()


def limit_of(t: EvConstSeq) -> Fraction:
    """L(t) for the generalized limit: the tail value."""
    return t.tail


# -- membership -------------------------------------------------------------


def primal_zero(space):
    return space.zero()


def dual_contains_safe(space, f) -> bool:
    return dual_contains(space, f)


def dual_zero(space):
    if is_findim_like(space):
        return Vec.zeros(space.dim)
    if isinstance(space, SeqL1):
        return EvConstSeq()
    if isinstance(space, SeqC):
        return CDualElem()
    raise DomainMismatch(f"unknown space {space!r}")


def bidual_zero(space):
    if is_findim_like(space):
        return Vec.zeros(space.dim)
    if isinstance(space, SeqL1):
        return L1BidualElem()
    if isinstance(space, SeqC):
        return CBidualElem()
    raise DomainMismatch(f"unknown space {space!r}")


def bidual_contains(space, x) -> bool:
    if is_findim_like(space):
        return isinstance(x, Vec) and len(x) == space.dim
    if isinstance(space, SeqL1):
        return isinstance(x, L1BidualElem)
    if isinstance(space, SeqC):
        return isinstance(x, CBidualElem)
    return False


def check_bidual(x, space):
    if not bidual_contains(space, x):
        raise DomainMismatch(f"{x!r} is not a bidual element of {space}")


# -- canonical embedding and order structure --------------------------------


def embed_J(x, space):
    check_member(x, space)
    if is_findim_like(space):
        return x
    if isinstance(space, SeqL1):
        return L1BidualElem(x, ZERO)
    return CBidualElem(x.tail, x)


def model_modulus(x):
    return x.abs()


def model_pos(x):
    return x.pos()


def model_neg(x):
    return x.neg()


def bidual_pair(x, f, space) -> Fraction:
    """Evaluate the bidual-model element ``x`` at the dual-model element ``f``."""
    check_bidual(x, space)
    if isinstance(space, SeqL1) and not isinstance(f, EvConstSeq):
        raise DomainMismatch(f"{f!r} is not in the dual of l1")
    if isinstance(space, SeqC) and not isinstance(f, CDualElem):
        raise DomainMismatch(f"{f!r} is not in the dual of c")
    return pair_unchecked(x, f)


def pair_unchecked(x, f) -> Fraction:
    if isinstance(x, Vec):
        return x.dot(f)
    if isinstance(x, L1BidualElem):
        return sum((v * f[i] for i, v in x.a.items), ZERO) + x.mu * f.tail
    return x.beta * f.b + sum((v * x.t[i] for i, v in f.a.items), ZERO)


@dataclass(frozen=True)
class Split:
    oc_part: object
    singular_part: object


def classify_order_continuity(x, space) -> Split:
    """Split ``x`` into the part coming from the primal space and a singular remainder.

    For finite-dimensional spaces everything is order continuous and the
    singular part is zero.
    """
    check_bidual(x, space)
    if is_findim_like(space):
        return Split(x, Vec.zeros(space.dim))
    if isinstance(space, SeqL1):
        return Split(L1BidualElem(x.a, ZERO), L1BidualElem(FinSupSeq(), x.mu))
    oc = CBidualElem(x.t.tail, x.t)
    return Split(oc, CBidualElem(x.beta - x.t.tail, EvConstSeq()))


def is_singular_free(x, space) -> bool:
    return classify_order_continuity(x, space).singular_part.is_zero()


def approximants(x, N: int, space):
    """Primal element whose J-image approaches ``x`` as ``N`` grows.

    The pairing with any fixed dual-model element is exactly constant once
    ``N`` passes that element's bound.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    check_bidual(x, space)
    if is_findim_like(space):
        return x
    if isinstance(space, SeqL1):
        if x.mu == 0:
            return x.a
        return x.a + FinSupSeq.unit(N + x.a.bound + 1).scale(x.mu)
    cut = N + x.t.bound
    return EvConstSeq(x.t.window(cut), x.beta)


# -- generators and probing -------------------------------------------------


def dual_generators(space, horizon: int) -> list:
    """Positive dual-model generators: coordinate functionals up to ``horizon``
    plus the limit-type functional for sequence models."""
    if is_findim_like(space):
        return [Vec.unit(space.dim, i) for i in range(1, space.dim + 1)]
    if isinstance(space, SeqL1):
        return [EvConstSeq.delta(i) for i in range(1, horizon + 1)] + [EvConstSeq.ones()]
    if isinstance(space, SeqC):
        return [CDualElem.coord(i) for i in range(1, horizon + 1)] + [LIMIT_FUNCTIONAL]
    raise DomainMismatch(f"unknown space {space!r}")


def bidual_apply_lazy(x, space, value_at, horizon: int) -> Fraction:
    """``x(f)`` where ``f`` is known only through ``value_at`` and settles past ``horizon``."""
    if is_findim_like(space):
        return sum(
            (c * value_at(Vec.unit(space.dim, i)) for i, c in enumerate(x.coords, 1) if c != 0),
            ZERO,
        )
    if isinstance(space, SeqL1):
        total = sum((v * value_at(FinSupSeq.unit(i)) for i, v in x.a.items), ZERO)
        if x.mu != 0:
            total += x.mu * value_at(FinSupSeq.unit(max(horizon, x.a.bound) + 1))
        return total
    # c model: beta * f(ones) + sum_{i <= H} (t_i - beta) f(delta_i)
    total = x.beta * value_at(EvConstSeq.ones()) if x.beta != 0 else ZERO
    for i in range(1, horizon + 1):
        w = x.t[i] - x.beta
        if w != 0:
            total += w * value_at(EvConstSeq.delta(i))
    return total


def functional_to_dual(space, value_at, horizon: int):
    """Read off the dual-model representation of a functional given by values."""
    if is_findim_like(space):
        return Vec(tuple(value_at(Vec.unit(space.dim, i)) for i in range(1, space.dim + 1)))
    if isinstance(space, SeqL1):
        prefix = [value_at(FinSupSeq.unit(i)) for i in range(1, horizon + 1)]
        tail = value_at(FinSupSeq.unit(horizon + 1))
        if value_at(FinSupSeq.unit(horizon + 2)) != tail:
            raise NotRepresentable(f"functional on l1 not settled past index {horizon}")
        return EvConstSeq(tuple(prefix), tail)
    if isinstance(space, SeqC):
        a = [(i, value_at(EvConstSeq.delta(i))) for i in range(1, horizon + 1)]
        if value_at(EvConstSeq.delta(horizon + 1)) != 0:
            raise NotRepresentable(f"functional on c has summable part past index {horizon}")
        b = value_at(EvConstSeq.ones()) - sum((v for _, v in a), ZERO)
        return CDualElem(b, FinSupSeq(tuple(a)))
    raise DomainMismatch(f"unknown space {space!r}")


def reconstruct_bidual(space, value_of_dual, horizon: int):
    """Bidual-model element from its values on dual-model elements.

    ``value_of_dual(f)`` must be linear in ``f``.  For SeqL1 the summable part
    is read on ``1..horizon`` and confirmed to vanish past it; for SeqC the
    sequence part is read on ``1..horizon+1`` and confirmed constant after.
    """
    if is_findim_like(space):
        return Vec(tuple(value_of_dual(Vec.unit(space.dim, j)) for j in range(1, space.dim + 1)))
    if isinstance(space, SeqL1):
        a = [(i, value_of_dual(EvConstSeq.delta(i))) for i in range(1, horizon + 1)]
        if value_of_dual(EvConstSeq.delta(horizon + 1)) != 0:
            raise NotRepresentable(f"bidual value has summable mass past index {horizon}")
        mu = value_of_dual(EvConstSeq.ones()) - sum((v for _, v in a), ZERO)
        return L1BidualElem(FinSupSeq(tuple(a)), mu)
    if isinstance(space, SeqC):
        beta = value_of_dual(LIMIT_FUNCTIONAL)
        prefix = [value_of_dual(CDualElem.coord(i)) for i in range(1, horizon + 1)]
        tail = value_of_dual(CDualElem.coord(horizon + 1))
        if value_of_dual(CDualElem.coord(horizon + 2)) != tail:
            raise NotRepresentable(f"bidual value not eventually constant past index {horizon}")
        return CBidualElem(beta, EvConstSeq(tuple(prefix), tail))
    raise DomainMismatch(f"unknown space {space!r}")
