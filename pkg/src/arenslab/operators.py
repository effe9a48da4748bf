"""Regular multilinear operators and their lattice calculus.

Every operator knows how to

* ``evaluate`` itself on primal arguments,
* produce a *scalar slice*: for a dual functional ``y'`` on the codomain and
  all but one argument fixed, the functional ``x -> y'(A(..., x, ...))``
  represented exactly in the dual model of that slot,
* report a *horizon*: an index past which all of its slices are settled (see
  :mod:`arenslab.bidual`), given the bounds of whatever data is fixed.

The catalog of sequence-model operators is deliberately small; each variant
carries a closed-form slice rule.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from . import bidual as bd
from .errors import DomainMismatch, NotMultimorphism, Unsupported, InternalInvariantViolation
from .lattice import (
    ONE,
    ZERO,
    EvConstSeq,
    FinDim,
    FinSupSeq,
    SCALARS,
    SeqL1,
    Vec,
    Verdict,
    bound,
    check_member,
    is_findim_like,
    is_riesz_hom,
    pairing,
    q,
    random_rational,
    signed_atom,
)


def _prod(values):
    return reduce(lambda a, b: a * b, values, ONE)


# -- permutations -----------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    images: tuple

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{list(self.images)} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def theta(cls, m: int) -> "Permutation":
        """Backward shift: 1 -> m and k -> k-1 otherwise."""
        return cls((m,) + tuple(range(1, m)))

    @classmethod
    def all(cls, m: int) -> list:
        return [cls(p) for p in itertools.permutations(range(1, m + 1))]

    @property
    def m(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def label(self) -> str:
        if self == Permutation.identity(self.m):
            return "id"
        if self == Permutation.theta(self.m):
            return "theta"
        return "".join(str(i) for i in self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"


# -- linear maps between codomains ------------------------------------------


class LinearMap:
    """Regular linear map ``u`` with its adjoint and bidual action."""

    domain = None
    codomain = None

    def apply(self, x):
        raise NotImplementedError

    def adjoint(self, y):
        raise NotImplementedError

    def bidual_apply(self, x):
        raise NotImplementedError

    def is_hom(self) -> bool:
        raise NotImplementedError

    horizon = 0


@dataclass(frozen=True)
class MatrixMap(LinearMap):
    rows: tuple
    domain: object
    codomain: object

    def __post_init__(self):
        rows = tuple(r if isinstance(r, Vec) else Vec(tuple(r)) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not (is_findim_like(self.domain) and is_findim_like(self.codomain)):
            raise DomainMismatch("matrix maps act between finite-dimensional spaces")
        if len(rows) != self.codomain.dim or any(len(r) != self.domain.dim for r in rows):
            raise DomainMismatch("matrix shape does not match its spaces")

    @classmethod
    def identity(cls, space) -> "MatrixMap":
        return cls(tuple(Vec.unit(space.dim, i) for i in range(1, space.dim + 1)), space, space)

    @classmethod
    def projection(cls, space, coords) -> "MatrixMap":
        """Coordinate projection onto ``coords`` (1-based), as a map into R^len(coords)."""
        return cls(tuple(Vec.unit(space.dim, i) for i in coords), space, FinDim(len(coords)))

    def apply(self, x):
        check_member(x, self.domain)
        return Vec(tuple(r.dot(x) for r in self.rows))

    def adjoint(self, y):
        if not isinstance(y, Vec) or len(y) != self.codomain.dim:
            raise DomainMismatch(f"{y!r} is not a functional on {self.codomain}")
        out = Vec.zeros(self.domain.dim)
        for c, r in zip(y.coords, self.rows):
            if c != 0:
                out = out + r.scale(c)
        return out

    def bidual_apply(self, x):
        return self.apply(x)

    def is_hom(self) -> bool:
        return is_riesz_hom(self.rows).holds

    def is_identity(self) -> bool:
        return self.domain == self.codomain and self == MatrixMap.identity(self.domain)


@dataclass(frozen=True)
class FunctionalMap(LinearMap):
    """A dual-model functional viewed as a linear map into the scalars."""

    phi: object
    domain: object
    codomain: object = SCALARS

    def __post_init__(self):
        if not bd.dual_contains_safe(self.domain, self.phi):
            raise DomainMismatch(f"{self.phi!r} is not a functional on {self.domain}")

    @property
    def horizon(self):
        return bound(self.phi)

    def apply(self, x):
        return Vec((pairing(self.phi, x, self.domain),))

    def adjoint(self, y):
        if not isinstance(y, Vec) or len(y) != 1:
            raise DomainMismatch(f"{y!r} is not a functional on the scalars")
        return self.phi.scale(y[1])

    def bidual_apply(self, x):
        return Vec((bd.bidual_pair(x, self.phi, self.domain),))

    def is_hom(self) -> bool:
        return signed_atom(self.phi, self.domain) in (0, 1)


# -- operators --------------------------------------------------------------


class RegOperator:
    """Base class; subclasses set ``domain`` (tuple of spaces) and ``codomain``."""

    domain: tuple = ()
    codomain = None

    @property
    def arity(self) -> int:
        return len(self.domain)

    def horizon(self) -> int:
        return 0

    def evaluate(self, args):
        args = tuple(args)
        if len(args) != self.arity:
            raise DomainMismatch(f"expected {self.arity} arguments, got {len(args)}")
        for x, space in zip(args, self.domain):
            check_member(x, space, "argument")
        return self._evaluate(args)

    def scalar_slice(self, y, fixed: dict, slot: int):
        """Dual-model element of ``domain[slot-1]`` representing ``x -> y(A(..x at slot..))``."""
        if not 1 <= slot <= self.arity:
            raise DomainMismatch(f"slot {slot} outside 1..{self.arity}")
        if set(fixed) != set(range(1, self.arity + 1)) - {slot}:
            raise DomainMismatch("every slot but the open one must be fixed")
        for r, x in fixed.items():
            check_member(x, self.domain[r - 1], "fixed argument")
        if not bd.dual_contains_safe(self.codomain, y):
            raise DomainMismatch(f"{y!r} is not a functional on {self.codomain}")
        return self._slice(y, fixed, slot)

    def scalar_value(self, y, args) -> Fraction:
        return pairing(y, self.evaluate(args), self.codomain)

    # lattice calculus; subclasses override
    def is_positive(self) -> bool:
        raise Unsupported(f"positivity rule unknown for {self.describe()}")

    def modulus(self) -> "RegOperator":
        raise Unsupported(f"no modulus rule for {self.describe()}")

    def pos_part(self) -> "RegOperator":
        raise Unsupported(f"no decomposition rule for {self.describe()}")

    def neg_part(self) -> "RegOperator":
        raise Unsupported(f"no decomposition rule for {self.describe()}")

    def multimorphism_rule(self):
        """True/False when the catalog knows the answer, None otherwise."""
        return None

    def describe(self) -> str:
        return type(self).__name__

    def _evaluate(self, args):
        raise NotImplementedError

    def _slice(self, y, fixed, slot):
        raise NotImplementedError


class OpCombination(RegOperator):
    """Finite linear combination ``sum c_k A_k`` of operators sharing spaces."""

    def __init__(self, terms, domain, codomain):
        self.terms = tuple((q(c), op) for c, op in terms if q(c) != 0)
        self.domain = tuple(domain)
        self.codomain = codomain
        for _, op in self.terms:
            if op.domain != self.domain or op.codomain != codomain:
                raise DomainMismatch("combined operators must share domain and codomain")

    @classmethod
    def zero(cls, domain, codomain) -> "OpCombination":
        return cls((), domain, codomain)

    def horizon(self):
        return max((op.horizon() for _, op in self.terms), default=0)

    def _evaluate(self, args):
        out = bd.primal_zero(self.codomain)
        for c, op in self.terms:
            out = out + op._evaluate(args).scale(c)
        return out

    def _slice(self, y, fixed, slot):
        out = bd.dual_zero(self.domain[slot - 1])
        for c, op in self.terms:
            out = out + op._slice(y, fixed, slot).scale(c)
        return out

    def is_positive(self):
        if all(c > 0 and op.is_positive() for c, op in self.terms):
            return True
        if all(is_findim_like(s) for s in self.domain) and is_findim_like(self.codomain):
            return materialize(self).is_positive()
        raise Unsupported("positivity of a signed combination on sequence models")

    def modulus(self):
        if all(is_findim_like(s) for s in self.domain) and is_findim_like(self.codomain):
            return materialize(self).modulus()
        if all(c > 0 and op.is_positive() for c, op in self.terms):
            return self
        raise Unsupported("modulus of a signed combination on sequence models")

    def pos_part(self):
        if all(c > 0 and op.is_positive() for c, op in self.terms):
            return self
        return materialize(self).pos_part()

    def neg_part(self):
        if all(c > 0 and op.is_positive() for c, op in self.terms):
            return OpCombination.zero(self.domain, self.codomain)
        return materialize(self).neg_part()

    def multimorphism_rule(self):
        if not self.terms:
            return True
        return None

    def describe(self):
        if not self.terms:
            return "zero"
        return " + ".join(f"{c}*({op.describe()})" for c, op in self.terms)


class TensorOp(RegOperator):
    """Operator on finite-dimensional spaces given by its (sparse) coefficient array.

    ``entries`` maps ``(i_1, ..., i_m, j)`` (1-based) to the coefficient of
    ``x_{1,i_1} ... x_{m,i_m}`` in output coordinate ``j``.
    """

    def __init__(self, dims, codomain, entries):
        self.dims = tuple(int(n) for n in dims)
        self.domain = tuple(FinDim(n) for n in self.dims)
        self.codomain = FinDim(codomain) if isinstance(codomain, int) else codomain
        if not is_findim_like(self.codomain):
            raise DomainMismatch("tensor codomain must be finite-dimensional")
        clean = {}
        for key, value in dict(entries).items():
            key = tuple(int(k) for k in key)
            if len(key) != len(self.dims) + 1:
                raise DomainMismatch(f"entry index {key} has the wrong length")
            for k, n in zip(key, self.dims + (self.codomain.dim,)):
                if not 1 <= k <= n:
                    raise DomainMismatch(f"entry index {key} out of range")
            value = q(value)
            if value != 0:
                clean[key] = clean.get(key, ZERO) + value
        self.entries = {k: v for k, v in sorted(clean.items()) if v != 0}

    def __eq__(self, other):
        return (
            isinstance(other, TensorOp)
            and self.dims == other.dims
            and self.codomain == other.codomain
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.dims, self.codomain, tuple(self.entries.items())))

    def __repr__(self):
        return f"TensorOp(dims={self.dims}, codomain={self.codomain.dim}, entries={self.entries})"

    def _evaluate(self, args):
        out = [ZERO] * self.codomain.dim
        for key, c in self.entries.items():
            term = c
            for r, x in enumerate(args):
                term *= x.coords[key[r] - 1]
                if term == 0:
                    break
            out[key[-1] - 1] += term
        return Vec(tuple(out))

    def _slice(self, y, fixed, slot):
        out = [ZERO] * self.dims[slot - 1]
        for key, c in self.entries.items():
            term = c * y.coords[key[-1] - 1]
            for r, x in fixed.items():
                if term == 0:
                    break
                term *= x.coords[key[r - 1] - 1]
            out[key[slot - 1] - 1] += term
        return Vec(tuple(out))

    def map_entries(self, fn) -> "TensorOp":
        return TensorOp(self.dims, self.codomain, {k: fn(v) for k, v in self.entries.items()})

    def is_positive(self):
        return all(v > 0 for v in self.entries.values())

    def modulus(self):
        return self.map_entries(abs)

    def pos_part(self):
        return self.map_entries(lambda v: max(v, ZERO))

    def neg_part(self):
        return self.map_entries(lambda v: max(-v, ZERO))

    def structural_multimorphism(self) -> bool:
        """Each output coordinate is carried by at most one entry, which is positive."""
        seen = set()
        for key, v in self.entries.items():
            if v < 0 or key[-1] in seen:
                return False
            seen.add(key[-1])
        return True

    def describe(self):
        return f"tensor dims={list(self.dims)} codomain={self.codomain.dim}"


class CoordProduct(RegOperator):
    """Coordinatewise product ``(x_1 x_2 ... x_m)_i`` of ``arity`` arguments in one model."""

    def __init__(self, model, arity: int = 2):
        if arity < 1:
            raise ValueError("arity must be positive")
        self.model = model
        self.domain = (model,) * arity
        self.codomain = model

    def _evaluate(self, args):
        out = args[0]
        for x in args[1:]:
            out = out._zip(x, lambda a, b: a * b)
        return out

    def _slice(self, y, fixed, slot):
        others = list(fixed.values())
        if is_findim_like(self.model):
            return Vec(tuple(
                c * _prod(x.coords[i] for x in others) for i, c in enumerate(y.coords)
            ))
        if isinstance(self.model, SeqL1):
            if not others:
                return y
            common = set.intersection(*(set(x.support()) for x in others))
            n = max(common, default=0)
            return EvConstSeq(tuple(
                y[i] * _prod(x[i] for x in others) if i in common else ZERO
                for i in range(1, n + 1)
            ), ZERO)
        a = FinSupSeq(tuple((i, v * _prod(x[i] for x in others)) for i, v in y.a.items))
        return bd.CDualElem(y.b * _prod(x.tail for x in others), a)

    def is_positive(self):
        return True

    def modulus(self):
        return self

    def pos_part(self):
        return self

    def neg_part(self):
        return OpCombination.zero(self.domain, self.codomain)

    def multimorphism_rule(self):
        return True

    def describe(self):
        return f"coord_product on {self.model} arity {self.arity}"


class UpperTriangular(RegOperator):
    """The form ``B(x, y) = sum_{i <= j} x_i y_j`` on l_1 x l_1."""

    def __init__(self):
        self.domain = (SeqL1(), SeqL1())
        self.codomain = SCALARS

    def _evaluate(self, args):
        x, y = args
        return Vec((sum((v * _suffix(y, i) for i, v in x.items), ZERO),))

    def _slice(self, y, fixed, slot):
        c = y[1]
        if slot == 1:
            other = fixed[2]
            n = other.bound
            return EvConstSeq(tuple(c * _suffix(other, i) for i in range(1, n + 1)), ZERO)
        other = fixed[1]
        n = other.bound
        return EvConstSeq(tuple(c * _prefix(other, j) for j in range(1, n + 1)), c * other.total())

    def is_positive(self):
        return True

    def modulus(self):
        return self

    def pos_part(self):
        return self

    def neg_part(self):
        return OpCombination.zero(self.domain, self.codomain)

    def multimorphism_rule(self):
        return False

    def describe(self):
        return "upper_triangular"


def _suffix(x: FinSupSeq, i: int) -> Fraction:
    return sum((v for k, v in x.items if k >= i), ZERO)


def _prefix(x: FinSupSeq, j: int) -> Fraction:
    return sum((v for k, v in x.items if k <= j), ZERO)


class WeightedDiagonal(RegOperator):
    """``sum_i w_i x_{1,i} ... x_{m,i}`` on l_1^m with eventually constant weights."""

    def __init__(self, weights: EvConstSeq, arity: int = 2):
        if arity < 1:
            raise ValueError("arity must be positive")
        self.weights = weights
        self.domain = (SeqL1(),) * arity
        self.codomain = SCALARS

    def horizon(self):
        return self.weights.bound

    def _evaluate(self, args):
        common = set.intersection(*(set(x.support()) for x in args))
        return Vec((sum(
            (self.weights[i] * _prod(x[i] for x in args) for i in common), ZERO
        ),))

    def _slice(self, y, fixed, slot):
        c = y[1]
        others = list(fixed.values())
        if not others:
            return self.weights.scale(c)
        common = set.intersection(*(set(x.support()) for x in others))
        n = max(common, default=0)
        return EvConstSeq(tuple(
            c * self.weights[i] * _prod(x[i] for x in others) if i in common else ZERO
            for i in range(1, n + 1)
        ), ZERO)

    def is_positive(self):
        return self.weights.is_positive()

    def modulus(self):
        return WeightedDiagonal(self.weights.abs(), self.arity)

    def pos_part(self):
        return WeightedDiagonal(self.weights.pos(), self.arity)

    def neg_part(self):
        return WeightedDiagonal(self.weights.neg(), self.arity)

    def multimorphism_rule(self):
        w = self.weights
        return w.tail == 0 and w.is_positive() and sum(1 for v in w.prefix if v != 0) <= 1

    def describe(self):
        return f"weighted_diagonal arity {self.arity}"


class FiniteRankProduct(RegOperator):
    """``A(x_1, ..., x_m) = phi_1(x_1) ... phi_m(x_m) * v``."""

    def __init__(self, functionals, vector, domain, codomain):
        self.functionals = tuple(functionals)
        self.vector = vector
        self.domain = tuple(domain)
        self.codomain = codomain
        if len(self.functionals) != len(self.domain):
            raise DomainMismatch("one functional per slot is required")
        for phi, space in zip(self.functionals, self.domain):
            if not bd.dual_contains_safe(space, phi):
                raise DomainMismatch(f"{phi!r} is not a functional on {space}")
        check_member(vector, codomain, "vector")

    def horizon(self):
        return max([bound(self.vector)] + [bound(p) for p in self.functionals])

    def _evaluate(self, args):
        c = _prod(pairing(p, x, s) for p, x, s in zip(self.functionals, args, self.domain))
        return self.vector.scale(c)

    def _slice(self, y, fixed, slot):
        c = pairing(y, self.vector, self.codomain)
        for r, x in fixed.items():
            if c == 0:
                break
            c *= pairing(self.functionals[r - 1], x, self.domain[r - 1])
        return self.functionals[slot - 1].scale(c)

    def is_zero(self):
        return self.vector.is_zero() or any(p.is_zero() for p in self.functionals)

    def _signs(self):
        """Sign (+1/-1) of each factor, or None when some factor is mixed."""
        out = []
        for f in self.functionals + (self.vector,):
            if f.is_positive():
                out.append(1)
            elif (-f).is_positive():
                out.append(-1)
            else:
                return None
        return out

    def is_positive(self):
        if self.is_zero():
            return True
        signs = self._signs()
        return signs is not None and _prod(signs) == 1

    def modulus(self):
        return FiniteRankProduct(
            [p.abs() for p in self.functionals], self.vector.abs(), self.domain, self.codomain
        )

    def _expansion(self, sign):
        factors = list(self.functionals) + [self.vector]
        terms = []
        for xi in itertools.product((1, -1), repeat=len(factors)):
            if _prod(xi) != sign:
                continue
            parts = [f.pos() if s == 1 else f.neg() for f, s in zip(factors, xi)]
            if any(p.is_zero() for p in parts):
                continue
            terms.append((ONE, FiniteRankProduct(parts[:-1], parts[-1], self.domain, self.codomain)))
        return OpCombination(terms, self.domain, self.codomain)

    def pos_part(self):
        return self._expansion(1)

    def neg_part(self):
        return self._expansion(-1)

    def multimorphism_rule(self):
        if self.is_zero():
            return True
        signs = []
        for p, s in zip(self.functionals, self.domain):
            a = signed_atom(p, s)
            if a is None:
                return False
            signs.append(a)
        if self.vector.is_positive():
            signs.append(1)
        elif (-self.vector).is_positive():
            signs.append(-1)
        else:
            return False
        return _prod(signs) == 1

    def describe(self):
        return f"finite_rank on {', '.join(str(s) for s in self.domain)} -> {self.codomain}"


class HomComposite(RegOperator):
    """``u o A`` for a linear map ``u`` on the codomain of ``A``."""

    def __init__(self, hom: LinearMap, inner: RegOperator):
        if hom.domain != inner.codomain:
            raise DomainMismatch(f"cannot compose a map on {hom.domain} after an operator into {inner.codomain}")
        self.hom = hom
        self.inner = inner
        self.domain = inner.domain
        self.codomain = hom.codomain

    def horizon(self):
        return max(self.inner.horizon(), self.hom.horizon)

    def _evaluate(self, args):
        return self.hom.apply(self.inner._evaluate(args))

    def _slice(self, y, fixed, slot):
        return self.inner._slice(self.hom.adjoint(y), fixed, slot)

    def _require_hom(self):
        if not self.hom.is_hom():
            raise Unsupported("lattice calculus of u o A needs u to be a Riesz homomorphism")

    def is_positive(self):
        if self.hom.is_hom():
            return self.inner.is_positive()
        raise Unsupported("positivity of u o A for non-lattice u")

    def modulus(self):
        self._require_hom()
        return HomComposite(self.hom, self.inner.modulus())

    def pos_part(self):
        self._require_hom()
        return HomComposite(self.hom, self.inner.pos_part())

    def neg_part(self):
        self._require_hom()
        return HomComposite(self.hom, self.inner.neg_part())

    def multimorphism_rule(self):
        if self.hom.is_hom() and self.inner.multimorphism_rule():
            return True
        return None

    def describe(self):
        return f"hom_composite of {self.inner.describe()}"


def compose_hom(u: LinearMap, A: RegOperator) -> RegOperator:
    if isinstance(u, MatrixMap) and u.is_identity() and u.domain == A.codomain:
        return A
    return HomComposite(u, A)


def materialize(A: RegOperator) -> TensorOp:
    """Coefficient array of an operator between finite-dimensional spaces."""
    if not (all(is_findim_like(s) for s in A.domain) and is_findim_like(A.codomain)):
        raise Unsupported("only operators between finite-dimensional spaces can be materialized")
    dims = [s.dim for s in A.domain]
    entries = {}
    for idx in itertools.product(*(range(1, n + 1) for n in dims)):
        value = A.evaluate([Vec.unit(n, i) for n, i in zip(dims, idx)])
        for j, v in enumerate(value.coords, 1):
            if v != 0:
                entries[idx + (j,)] = v
    return TensorOp(dims, A.codomain, entries)


# -- definitional checks ----------------------------------------------------


def window_for(space, horizon: int) -> int:
    return max(2, min(horizon + 1, 4))


def sign_elements(space, horizon: int) -> list:
    """All +-1 patterns on the coordinates that matter for ``space``."""
    if is_findim_like(space):
        return [Vec(s) for s in itertools.product((ONE, -ONE), repeat=space.dim)]
    w = window_for(space, horizon)
    if isinstance(space, SeqL1):
        return [FinSupSeq(tuple(enumerate(s, 1))) for s in itertools.product((ONE, -ONE), repeat=w)]
    return [
        EvConstSeq(s[:-1], s[-1]) for s in itertools.product((ONE, -ONE), repeat=w + 1)
    ]


def basis_elements(space, horizon: int) -> list:
    """Positive generators of the primal space up to the check window."""
    if is_findim_like(space):
        return [Vec.unit(space.dim, i) for i in range(1, space.dim + 1)]
    w = window_for(space, horizon)
    if isinstance(space, SeqL1):
        return [FinSupSeq.unit(i) for i in range(1, w + 1)]
    return [EvConstSeq.delta(i) for i in range(1, w + 1)] + [EvConstSeq.ones()]


def random_element(space, rng: random.Random, horizon: int = 3):
    if is_findim_like(space):
        return Vec(tuple(random_rational(rng) for _ in range(space.dim)))
    w = window_for(space, horizon) + 1
    if isinstance(space, SeqL1):
        return FinSupSeq(tuple((i, random_rational(rng)) for i in range(1, w + 1)))
    return EvConstSeq(tuple(random_rational(rng) for _ in range(w)), random_rational(rng))


def multimorphism_witness(A: RegOperator, budget: int = 200, seed: int = 0):
    """First argument tuple violating ``|A(x)| = A(|x|)``, or None."""

    def violates(args):
        return A.evaluate(args).abs() != A.evaluate([x.abs() for x in args])

    h = A.horizon()
    for args in itertools.product(*(sign_elements(s, h) for s in A.domain)):
        if violates(args):
            return tuple(args)
    rng = random.Random(seed)
    for _ in range(budget):
        args = [random_element(s, rng, h) for s in A.domain]
        if violates(args):
            return tuple(args)
    return None


def is_multimorphism(A: RegOperator, budget: int = 200, seed: int = 0) -> Verdict:
    """Certify ``|A(x_1..x_m)| = A(|x_1|..|x_m|)``.

    A structural answer (tensor fast path or catalog rule) is always
    cross-checked against the definition; disagreement raises
    :class:`InternalInvariantViolation`.
    """
    if isinstance(A, TensorOp):
        rule = A.structural_multimorphism()
        why = "each output coordinate has at most one entry, and it is positive"
    else:
        rule = A.multimorphism_rule()
        why = f"catalog rule for {A.describe()}"
    witness = multimorphism_witness(A, budget, seed)
    if rule is True and witness is not None:
        raise InternalInvariantViolation(f"{why} contradicted by {witness!r}")
    if rule is False and witness is None:
        raise InternalInvariantViolation(f"no witness found although the rule for {A.describe()} says no")
    if witness is not None:
        return Verdict(False, witness, "")
    if rule is None:
        why = "definitional check (sign patterns and random tuples)"
    return Verdict(True, None, why)


def is_positive_op(A: RegOperator) -> bool:
    """Rule-based positivity, cross-checked on positive basis tuples."""
    rule = A.is_positive()
    h = A.horizon()
    on_basis = all(
        A.evaluate(args).is_positive()
        for args in itertools.product(*(basis_elements(s, h) for s in A.domain))
    )
    if rule and not on_basis:
        raise InternalInvariantViolation(f"{A.describe()} claimed positive but is negative on a basis tuple")
    return rule


def kusraev_factor(B: TensorOp) -> list:
    """Factor a scalar multimorphism tensor as ``phi_1 (x) ... (x) phi_m``.

    All of the scale is placed on ``phi_1``; the other factors are coordinate
    functionals.  The zero form factors as zero functionals.
    """
    if not isinstance(B, TensorOp) or B.codomain.dim != 1:
        raise NotMultimorphism("factorization needs a scalar-valued tensor")
    if not B.structural_multimorphism():
        raise NotMultimorphism(f"{B!r} is not a multimorphism")
    if not B.entries:
        return [Vec.zeros(n) for n in B.dims]
    ((key, lam),) = B.entries.items()
    factors = [Vec.unit(n, i) for n, i in zip(B.dims, key[:-1])]
    factors[0] = factors[0].scale(lam)
    return factors


def tensor_from_factors(factors, codomain_vector=None) -> TensorOp:
    """The operator ``phi_1(x_1) ... phi_m(x_m) * v`` as a tensor (``v`` defaults to 1)."""
    v = codomain_vector if codomain_vector is not None else Vec((ONE,))
    dims = [len(f) for f in factors]
    entries = {}
    for idx in itertools.product(*(range(1, n + 1) for n in dims)):
        c = _prod(f[i] for f, i in zip(factors, idx))
        if c == 0:
            continue
        for j, vj in enumerate(v.coords, 1):
            if vj != 0:
                entries[idx + (j,)] = c * vj
    return TensorOp(dims, len(v), entries)
