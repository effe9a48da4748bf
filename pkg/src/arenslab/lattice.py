"""Exact-rational Riesz space elements and their order calculus.

Three primal models are supported:

* ``FinDim(n)``: R^n with the coordinatewise order, elements are :class:`Vec`.
* ``SeqL1``: the l_1-type sequence lattice, elements are finitely supported
  sequences (:class:`FinSupSeq`); its order dual is modelled by eventually
  constant sequences (:class:`EvConstSeq`).
* ``SeqC``: the c-type lattice of eventually constant sequences; its dual is
  modelled in :mod:`arenslab.bidual`.

Indices of sequences and coordinates are 1-based throughout, matching the
usual mathematical notation.  All arithmetic is done with
:class:`fractions.Fraction`; nothing is ever rounded.
"""
from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import DomainMismatch, InternalInvariantViolation

ZERO = Fraction(0)
ONE = Fraction(1)


def q(value) -> Fraction:
    """Coerce ``value`` to a Fraction.

    Accepts ints, Fractions, decimal-free strings like ``"3/4"`` and
    ``[num, den]`` pairs (the wire format).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        num, den = value
        if not isinstance(num, int) or not isinstance(den, int) or isinstance(num, bool):
            raise TypeError(f"rational pair must hold integers, got {value!r}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return Fraction(num, den)
    if isinstance(value, str):
        if "." in value or "e" in value.lower():
            raise TypeError(f"decimal forms are not accepted: {value!r}")
        return Fraction(value)
    raise TypeError(f"cannot read {value!r} as a rational")


# -- spaces -----------------------------------------------------------------


@dataclass(frozen=True)
class FinDim:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"FinDim dimension must be a positive integer, got {self.n!r}")

    @property
    def dim(self) -> int:
        return self.n

    def contains(self, x) -> bool:
        return isinstance(x, Vec) and len(x) == self.n

    def zero(self) -> "Vec":
        return Vec.zeros(self.n)

    def __str__(self):
        return f"R^{self.n}"


@dataclass(frozen=True)
class SeqL1:
    def contains(self, x) -> bool:
        return isinstance(x, FinSupSeq)

    def zero(self) -> "FinSupSeq":
        return FinSupSeq()

    def __str__(self):
        return "l1"


@dataclass(frozen=True)
class SeqC:
    def contains(self, x) -> bool:
        return isinstance(x, EvConstSeq)

    def zero(self) -> "EvConstSeq":
        return EvConstSeq((), ZERO)

    def __str__(self):
        return "c"


SCALARS = FinDim(1)


def is_findim_like(space) -> bool:
    """True for spaces whose elements are flat :class:`Vec` coordinates."""
    return hasattr(space, "dim")


def check_member(x, space, what="element"):
    if not space.contains(x):
        raise DomainMismatch(f"{what} {x!r} does not belong to {space}")


# -- elements ---------------------------------------------------------------


class LatticeOps:
    """Riesz operations derived from coordinatewise ``_zip``/``_map``.

    Subclasses implement ``_zip(other, fn)`` (binary, coordinatewise, with
    ``fn(0, 0) == 0``), ``_map(fn)`` and ``_coords()`` (every coordinate that
    can be nonzero, tails included).
    """

    def __add__(self, other):
        self._same_kind(other)
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        self._same_kind(other)
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self._map(lambda a: -a)

    def scale(self, c):
        c = q(c)
        return self._map(lambda a: c * a)

    def __rmul__(self, c):
        return self.scale(c)

    def sup(self, other):
        self._same_kind(other)
        return self._zip(other, max)

    def inf(self, other):
        self._same_kind(other)
        return self._zip(other, min)

    def abs(self):
        return self._map(abs)

    def pos(self):
        return self._map(lambda a: a if a > 0 else ZERO)

    def neg(self):
        return self._map(lambda a: -a if a < 0 else ZERO)

    def is_positive(self) -> bool:
        return all(c >= 0 for c in self._coords())

    def is_zero(self) -> bool:
        return all(c == 0 for c in self._coords())

    def _cached_hash(self):
        # elements are immutable and used heavily as memo keys; hashing a
        # tuple of Fractions is expensive, so do it once per object
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash(tuple(getattr(self, f.name) for f in fields(self)))
            object.__setattr__(self, "_hash", h)
            return h

    def _same_kind(self, other):
        if type(other) is not type(self):
            raise DomainMismatch(f"cannot combine {type(self).__name__} with {type(other).__name__}")


@dataclass(frozen=True)
class Vec(LatticeOps):
    coords: tuple
    __hash__ = LatticeOps._cached_hash

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(q(c) for c in self.coords))

    @classmethod
    def of(cls, *values) -> "Vec":
        return cls(tuple(values))

    @classmethod
    def zeros(cls, n: int) -> "Vec":
        return cls((ZERO,) * n)

    @classmethod
    @functools.lru_cache(maxsize=None)
    def unit(cls, n: int, i: int) -> "Vec":
        if not 1 <= i <= n:
            raise IndexError(f"unit index {i} outside 1..{n}")
        return cls(tuple(ONE if j == i else ZERO for j in range(1, n + 1)))

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        """1-based coordinate access."""
        if not 1 <= i <= len(self.coords):
            raise IndexError(i)
        return self.coords[i - 1]

    def __iter__(self):
        return iter(self.coords)

    def dot(self, other: "Vec") -> Fraction:
        if len(other) != len(self):
            raise DomainMismatch(f"length {len(self)} vs {len(other)}")
        return sum((a * b for a, b in zip(self.coords, other.coords)), ZERO)

    def support(self) -> tuple:
        return tuple(i for i, c in enumerate(self.coords, 1) if c != 0)

    def _zip(self, other, fn):
        if len(other) != len(self):
            raise DomainMismatch(f"length {len(self)} vs {len(other)}")
        return Vec(tuple(fn(a, b) for a, b in zip(self.coords, other.coords)))

    def _map(self, fn):
        return Vec(tuple(fn(a) for a in self.coords))

    def _coords(self):
        return self.coords

    def __repr__(self):
        return "Vec(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class FinSupSeq(LatticeOps):
    """Finitely supported sequence, stored as sorted ``(index, value)`` pairs."""

    items: tuple = ()
    __hash__ = LatticeOps._cached_hash

    def __post_init__(self):
        cleaned = {}
        for i, v in self.items:
            if not isinstance(i, int) or i < 1:
                raise ValueError(f"sequence index must be a positive integer, got {i!r}")
            if i in cleaned:
                raise ValueError(f"duplicate index {i}")
            cleaned[i] = q(v)
        object.__setattr__(
            self, "items", tuple(sorted((i, v) for i, v in cleaned.items() if v != 0))
        )

    @classmethod
    def from_dict(cls, d: dict) -> "FinSupSeq":
        return cls(tuple(d.items()))

    @classmethod
    @functools.lru_cache(maxsize=None)
    def unit(cls, i: int) -> "FinSupSeq":
        return cls(((i, ONE),))

    def as_dict(self) -> dict:
        return dict(self.items)

    def __getitem__(self, i: int) -> Fraction:
        for j, v in self.items:
            if j == i:
                return v
        return ZERO

    def support(self) -> tuple:
        return tuple(i for i, _ in self.items)

    @property
    def bound(self) -> int:
        return self.items[-1][0] if self.items else 0

    def total(self) -> Fraction:
        return sum((v for _, v in self.items), ZERO)

    def _zip(self, other, fn):
        a, b = self.as_dict(), other.as_dict()
        return FinSupSeq(tuple((i, fn(a.get(i, ZERO), b.get(i, ZERO))) for i in set(a) | set(b)))

    def _map(self, fn):
        return FinSupSeq(tuple((i, fn(v)) for i, v in self.items))

    def _coords(self):
        return [v for _, v in self.items]

    def __repr__(self):
        body = ", ".join(f"{i}: {v}" for i, v in self.items)
        return f"FinSupSeq({{{body}}})"


@dataclass(frozen=True)
class EvConstSeq(LatticeOps):
    """Eventually constant sequence: ``prefix[i-1]`` for ``i <= len(prefix)``, else ``tail``.

    The canonical form (last prefix entry differs from the tail) is enforced
    on construction, so structural equality is sequence equality.
    """

    prefix: tuple = ()
    tail: Fraction = ZERO
    __hash__ = LatticeOps._cached_hash

    def __post_init__(self):
        tail = q(self.tail)
        prefix = [q(v) for v in self.prefix]
        while prefix and prefix[-1] == tail:
            prefix.pop()
        object.__setattr__(self, "prefix", tuple(prefix))
        object.__setattr__(self, "tail", tail)

    @classmethod
    def constant(cls, c) -> "EvConstSeq":
        return cls((), c)

    @classmethod
    @functools.lru_cache(maxsize=None)
    def ones(cls) -> "EvConstSeq":
        return cls((), ONE)

    @classmethod
    @functools.lru_cache(maxsize=None)
    def delta(cls, i: int) -> "EvConstSeq":
        if i < 1:
            raise IndexError(i)
        return cls((ZERO,) * (i - 1) + (ONE,), ZERO)

    def __getitem__(self, i: int) -> Fraction:
        if i < 1:
            raise IndexError(i)
        return self.prefix[i - 1] if i <= len(self.prefix) else self.tail

    @property
    def bound(self) -> int:
        return len(self.prefix)

    def window(self, n: int) -> tuple:
        return tuple(self[i] for i in range(1, n + 1))

    def _zip(self, other, fn):
        n = max(len(self.prefix), len(other.prefix))
        return EvConstSeq(
            tuple(fn(a, b) for a, b in zip(self.window(n), other.window(n))),
            fn(self.tail, other.tail),
        )

    def _map(self, fn):
        return EvConstSeq(tuple(fn(a) for a in self.prefix), fn(self.tail))

    def _coords(self):
        return list(self.prefix) + [self.tail]

    def __repr__(self):
        return f"EvConstSeq([{', '.join(str(v) for v in self.prefix)}], tail={self.tail})"


def bound(x) -> int:
    """Largest index at which ``x`` can differ from its eventual behaviour."""
    return getattr(x, "bound", 0)


# -- operations -------------------------------------------------------------


@dataclass(frozen=True)
class LatticeRecord:
    sup: object
    inf: object
    abs: object
    pos: object
    neg: object


def lattice_ops(x, y, space) -> LatticeRecord:
    check_member(x, space)
    check_member(y, space)
    return LatticeRecord(x.sup(y), x.inf(y), x.abs(), x.pos(), x.neg())


def order_leq(x, y, space) -> bool:
    check_member(x, space)
    check_member(y, space)
    return (y - x).is_positive()


def pairing(f, x, space) -> Fraction:
    """Evaluate the dual-model element ``f`` at the primal element ``x``."""
    check_member(x, space)
    if is_findim_like(space):
        if not isinstance(f, Vec) or len(f) != len(x):
            raise DomainMismatch(f"{f!r} is not a functional on {space}")
        return f.dot(x)
    if isinstance(space, SeqL1):
        if not isinstance(f, EvConstSeq):
            raise DomainMismatch(f"{f!r} is not a functional on l1")
        return sum((f[i] * v for i, v in x.items), ZERO)
    if isinstance(space, SeqC):
        if not hasattr(f, "b"):
            raise DomainMismatch(f"{f!r} is not a functional on c")
        return f.b * x.tail + sum((v * x[i] for i, v in f.a.items), ZERO)
    raise DomainMismatch(f"unknown space {space!r}")


def dual_contains(space, f) -> bool:
    if is_findim_like(space):
        return isinstance(f, Vec) and len(f) == space.dim
    if isinstance(space, SeqL1):
        return isinstance(f, EvConstSeq)
    if isinstance(space, SeqC):
        return hasattr(f, "b") and hasattr(f, "a")
    return False


def probes(space, horizon: int) -> list:
    """Positive generators used to read off a functional on ``space``.

    For sequence models these are the unit vectors up to ``horizon`` (and the
    constant-one sequence for ``SeqC``).
    """
    if is_findim_like(space):
        return [Vec.unit(space.dim, i) for i in range(1, space.dim + 1)]
    if isinstance(space, SeqL1):
        return [FinSupSeq.unit(i) for i in range(1, horizon + 1)]
    if isinstance(space, SeqC):
        return [EvConstSeq.delta(i) for i in range(1, horizon + 1)] + [EvConstSeq.ones()]
    raise DomainMismatch(f"unknown space {space!r}")


# -- Riesz homomorphisms between finite-dimensional spaces ------------------


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: object = None
    certificate: str = ""

    def __bool__(self):
        return self.holds


def _matvec(rows: Sequence[Vec], x: Vec) -> Vec:
    return Vec(tuple(r.dot(x) for r in rows))


def sign_patterns(n: int, support: Iterable[int]) -> Iterable[Vec]:
    """All vectors with entries +-1 on ``support`` and 0 elsewhere (1-based)."""
    support = list(support)
    for signs in itertools.product((ONE, -ONE), repeat=len(support)):
        coords = [ZERO] * n
        for i, s in zip(support, signs):
            coords[i - 1] = s
        yield Vec(tuple(coords))


def random_rational(rng: random.Random, span: int = 5, max_den: int = 4, zero_weight: float = 0.2):
    if rng.random() < zero_weight:
        return ZERO
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def is_riesz_hom(matrix, budget: int = 200, seed: int = 0) -> Verdict:
    """Decide whether the rational matrix ``matrix`` (rows) is a Riesz homomorphism.

    The structural certificate (every row has at most one nonzero entry, and
    it is positive) is cross-checked against the definition |Tx| = T|x| on all
    sign patterns over the columns in use plus ``budget`` seeded random
    vectors.  A disagreement between the two is an internal error.
    """
    rows = [r if isinstance(r, Vec) else Vec(tuple(r)) for r in matrix]
    if not rows:
        return Verdict(True, None, "empty map")
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise DomainMismatch("ragged matrix")
    structural = all(
        len(r.support()) <= 1 and all(c >= 0 for c in r.coords) for r in rows
    )

    def violates(x: Vec) -> bool:
        return _matvec(rows, x).abs() != _matvec(rows, x.abs())

    columns = sorted({i for r in rows for i in r.support()})
    witness = None
    for x in sign_patterns(n, columns):
        if violates(x):
            witness = x
            break
    if witness is None:
        rng = random.Random(seed)
        for _ in range(budget):
            x = Vec(tuple(random_rational(rng) for _ in range(n)))
            if violates(x):
                witness = x
                break
    if structural and witness is not None:
        raise InternalInvariantViolation(f"hom certificate contradicted by {witness!r}")
    if not structural and witness is None:
        raise InternalInvariantViolation("no witness found for a non-hom matrix")
    if structural:
        return Verdict(True, None, "each row has at most one nonzero entry, and it is positive")
    return Verdict(False, witness, "")


def is_hom_functional(f, space) -> bool:
    """Positive functional that is a Riesz homomorphism (a multiple of a point evaluation)."""
    return _signed_atom(f, space) in (0, 1)


def _signed_atom(f, space):
    """Return +1/-1 if ``f`` is +-(lattice hom), 0 if ``f`` is zero, None otherwise."""
    if is_findim_like(space):
        coords = [c for c in f.coords if c != 0]
    elif isinstance(space, SeqL1):
        if f.tail != 0:
            return None
        coords = [c for c in f.prefix if c != 0]
    elif isinstance(space, SeqC):
        coords = [c for c in [f.b] + [v for _, v in f.a.items] if c != 0]
    else:
        raise DomainMismatch(f"unknown space {space!r}")
    if not coords:
        return 0
    if len(coords) > 1:
        return None
    return 1 if coords[0] > 0 else -1


signed_atom = _signed_atom


def sup_norm(x) -> Fraction:
    return max((abs(c) for c in x._coords()), default=ZERO)


def combine(terms: Iterable[tuple], zero) -> object:
    """Linear combination ``sum(c * x)`` starting from ``zero``."""
    out = zero
    for c, x in terms:
        if c != 0:
            out = out + x.scale(c)
    return out


def coordinatewise(fn: Callable, *xs):
    return xs[0]._zip(xs[1], fn) if len(xs) == 2 else xs[0]._map(fn)
