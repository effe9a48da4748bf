"""Arens extensions of regular multilinear operators.

The extension ``AR^rho(A)`` is evaluated, never materialized: for bidual
arguments ``x''_1..x''_m`` and a dual functional ``y'`` on the codomain, the
scalar form ``y' o A`` is lifted slot by slot, first through ``x''_{rho(1)}``,
then ``x''_{rho(2)}``, and so on.  Lifting ``x''`` through slot ``s`` replaces
a form ``Phi`` by ``args -> x''(Phi(args; . at s))``.

Two independent routes are provided as cross-checks:

* :class:`StarChain` builds ``A*, A**, ...`` literally, materializing each
  intermediate dual element by probing plain evaluations of ``A``;
* :func:`davie_gamelin_eval` computes iterated limits of ``A`` along
  approximant sequences of the bidual arguments.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from . import bidual as bd
from . import sampling
from .errors import DomainMismatch, NotRepresentable, StabilizationFailure, Unsupported
from .lattice import ZERO, EvConstSeq, SeqL1, bound, is_findim_like, pairing, signed_atom
from .operators import (
    FiniteRankProduct,
    FunctionalMap,
    HomComposite,
    MatrixMap,
    Permutation,
    RegOperator,
    TensorOp,
    basis_elements,
    compose_hom,
    is_positive_op,
    materialize,
)

log = logging.getLogger(__name__)

FORM_CACHE_LIMIT = 20_000


# -- forms and bar lifts -----------------------------------------------------


class ScalarForm:
    """Scalar-valued multilinear form on the primal spaces of ``open_slots``."""

    spaces: dict
    open_slots: frozenset

    def value(self, assign: dict) -> Fraction:
        raise NotImplementedError

    def horizon(self, assign: dict) -> int:
        raise NotImplementedError

    def lift_value(self, x2, slot: int, rest: dict) -> Fraction:
        """``x2`` applied to the slice of this form at ``slot`` with ``rest`` fixed."""
        return bd.bidual_apply_lazy(
            x2, self.spaces[slot], lambda p: self.value({**rest, slot: p}), self.horizon(rest)
        )

    def __call__(self, **kwargs):
        return self.value({int(k.lstrip("x")): v for k, v in kwargs.items()})


class OperatorForm(ScalarForm):
    """``y' o A`` with closed-form slices."""

    def __init__(self, op: RegOperator, y):
        self.op = op
        self.y = y
        self.spaces = dict(enumerate(op.domain, 1))
        self.open_slots = frozenset(self.spaces)
        self._base_horizon = max(op.horizon(), bound(y))

    def value(self, assign):
        args = [assign[s] for s in range(1, self.op.arity + 1)]
        return pairing(self.y, self.op.evaluate(args), self.op.codomain)

    def horizon(self, assign):
        return max([self._base_horizon] + [bound(x) for x in assign.values()])

    def slice(self, slot, rest):
        return self.op.scalar_slice(self.y, rest, slot)

    def lift_value(self, x2, slot, rest):
        # arguments were validated on entry to the extension
        return bd.pair_unchecked(x2, self.op._slice(self.y, rest, slot))


class TensorForm(ScalarForm):
    """Form on finite-dimensional slots given by its coefficient array.

    Lifting through a slot contracts that index against the bidual element,
    which for a reflexive space is exactly the bar lift.
    """

    def __init__(self, spaces: dict, slots: tuple, coeffs: dict):
        self.spaces = spaces
        self.slots = slots
        self.open_slots = frozenset(slots)
        self.coeffs = coeffs

    @classmethod
    def from_tensor(cls, tensor, y):
        coeffs = {}
        for key, c in tensor.entries.items():
            w = c * y.coords[key[-1] - 1]
            if w != 0:
                coeffs[key[:-1]] = coeffs.get(key[:-1], ZERO) + w
        slots = tuple(range(1, len(tensor.dims) + 1))
        return cls(dict(enumerate(tensor.domain, 1)), slots, coeffs)

    def value(self, assign):
        total = ZERO
        for idx, c in self.coeffs.items():
            for s, i in zip(self.slots, idx):
                c *= assign[s].coords[i - 1]
                if c == 0:
                    break
            total += c
        return total

    def horizon(self, assign):
        return 0

    def lift(self, x2, slot):
        pos = self.slots.index(slot)
        out = {}
        for idx, c in self.coeffs.items():
            w = c * x2.coords[idx[pos] - 1]
            if w != 0:
                key = idx[:pos] + idx[pos + 1:]
                out[key] = out.get(key, ZERO) + w
        return TensorForm(self.spaces, self.slots[:pos] + self.slots[pos + 1:], out)

    def lift_value(self, x2, slot, rest):
        return self.lift(x2, slot).value(rest)


class RankOneForm(ScalarForm):
    """``c * prod_s phi_s(x_s)``; the slice at ``s`` is a multiple of ``phi_s``,
    so lifting ``x''`` through ``s`` multiplies ``c`` by ``x''(phi_s)``."""

    def __init__(self, spaces: dict, const, functionals: dict):
        self.spaces = spaces
        self.const = const
        self.functionals = functionals
        self.open_slots = frozenset(functionals)

    def value(self, assign):
        c = self.const
        for s, phi in self.functionals.items():
            if c == 0:
                break
            c *= pairing(phi, assign[s], self.spaces[s])
        return c

    def horizon(self, assign):
        return max([bound(p) for p in self.functionals.values()] + [bound(x) for x in assign.values()])

    def lift(self, x2, slot):
        rest = {s: p for s, p in self.functionals.items() if s != slot}
        c = self.const * bd.pair_unchecked(x2, self.functionals[slot]) if self.const else ZERO
        return RankOneForm(self.spaces, c, rest)

    def lift_value(self, x2, slot, rest):
        return self.lift(x2, slot).value(rest)


def symbolic_form(op, y, cache: dict):
    """Closed-form base form for ``y o op`` when one is available."""
    if isinstance(op, FiniteRankProduct):
        c = pairing(y, op.vector, op.codomain)
        return RankOneForm(dict(enumerate(op.domain, 1)), c, dict(enumerate(op.functionals, 1)))
    if isinstance(op, HomComposite) and isinstance(op.inner, FiniteRankProduct):
        return symbolic_form(op.inner, op.hom.adjoint(y), cache)
    if all(is_findim_like(s) for s in op.domain) and is_findim_like(op.codomain):
        if "tensor" not in cache:
            cache["tensor"] = op if isinstance(op, TensorOp) else materialize(op)
        return TensorForm.from_tensor(cache["tensor"], y)
    return None


class LiftedForm(ScalarForm):
    """The form obtained by lifting ``x2`` through ``slot`` of ``inner``."""

    def __init__(self, inner: ScalarForm, slot: int, x2):
        if slot not in inner.open_slots:
            raise DomainMismatch(f"slot {slot} is not open")
        bd.check_bidual(x2, inner.spaces[slot])
        self.inner = inner
        self.slot = slot
        self.x2 = x2
        self.spaces = inner.spaces
        self.open_slots = inner.open_slots - {slot}
        self._memo = {}

    def value(self, assign):
        key = tuple(sorted(assign.items()))
        hit = self._memo.get(key)
        if hit is None:
            hit = self.inner.lift_value(self.x2, self.slot, assign)
            self._memo[key] = hit
        return hit

    def horizon(self, assign):
        return max(self.inner.horizon(assign), bound(self.x2))


def bar_lift(x2, slot: int, form: ScalarForm) -> LiftedForm:
    """Lift the bidual element ``x2`` through ``slot`` of ``form``."""
    return LiftedForm(form, slot, x2)


def lifted_slice(form: ScalarForm, slot: int, rest: dict):
    """Dual-model element of the slice of ``form`` at ``slot``."""
    h = form.horizon(rest)
    return bd.functional_to_dual(form.spaces[slot], lambda p: form.value({**rest, slot: p}), h)


# -- the extension -----------------------------------------------------------


def _check_args(op, args):
    args = tuple(args)
    if len(args) != op.arity:
        raise DomainMismatch(f"expected {op.arity} bidual arguments, got {len(args)}")
    for x, s in zip(args, op.domain):
        bd.check_bidual(x, s)
    return args


def codomain_horizon(op, args) -> int:
    return max([op.horizon()] + [bound(x) for x in args])


class ExtendedOp:
    """``AR^rho(A)`` as an evaluator.

    Lifted forms are cached per ``(y', lifted prefix)``; each cache entry is
    written once with a value that depends only on its key, so sharing an
    instance between readers cannot change results.
    """

    def __init__(self, op: RegOperator, rho: Permutation, symbolic: bool = True):
        if rho.m != op.arity:
            raise DomainMismatch(f"permutation of {rho.m} letters for an operator of arity {op.arity}")
        self.op = op
        self.rho = rho
        self.symbolic = symbolic
        self._forms = {}
        self._aux = {}

    def _form(self, y, lifted: tuple) -> ScalarForm:
        key = (y, lifted)
        form = self._forms.get(key)
        if form is None:
            if not lifted:
                form = symbolic_form(self.op, y, self._aux) if self.symbolic else None
                form = form or OperatorForm(self.op, y)
            else:
                k = len(lifted)
                inner = self._form(y, lifted[:-1])
                if hasattr(inner, "lift"):
                    form = inner.lift(lifted[-1], self.rho(k))
                else:
                    form = LiftedForm(inner, self.rho(k), lifted[-1])
            if len(self._forms) > FORM_CACHE_LIMIT:
                self._forms.clear()
            self._forms[key] = form
        return form

    def scalar(self, args, y) -> Fraction:
        """``AR^rho(A)(args)(y)``."""
        args = _check_args(self.op, args)
        if not bd.dual_contains_safe(self.op.codomain, y):
            raise DomainMismatch(f"{y!r} is not a functional on {self.op.codomain}")
        m = self.op.arity
        lifted = tuple(args[self.rho(k) - 1] for k in range(1, m))
        last = self.rho(m)
        return self._form(y, lifted).lift_value(args[last - 1], last, {})

    def __call__(self, args):
        """``AR^rho(A)(args)`` as an element of the codomain's bidual model."""
        args = _check_args(self.op, args)
        return bd.reconstruct_bidual(
            self.op.codomain, lambda f: self.scalar(args, f), codomain_horizon(self.op, args)
        )

    def clear_cache(self):
        self._forms.clear()


def arens_extend(op: RegOperator, rho: Permutation, symbolic: bool = True) -> ExtendedOp:
    """``AR^rho(op)``.  With ``symbolic=False`` every lift goes through the
    generic probing route, even where a closed form exists."""
    return ExtendedOp(op, rho, symbolic)


class StarChain:
    """The iterated adjoints ``A*, A**, ..., A^{*(m+1)}`` built from their definitions.

    ``A*(y', x_1..x_{m-1})`` is the functional ``x_m -> y'(A(x))``;
    ``A^{*(k+1)}(x''_{m-k+1}, .., x''_m, y', x_1..x_{m-k-1})`` is the functional
    ``x_{m-k} -> x''_{m-k+1}(A^{*k}(x''_{m-k+2}, .., y', x_1..x_{m-k}))``.
    Every intermediate functional is read off by probing, so this route never
    touches the closed-form slice rules.
    """

    def __init__(self, op: RegOperator):
        self.op = op
        self._memo = {}

    def star(self, k: int, biduals: tuple, y, primals: tuple):
        """``A^{*k}(biduals, y, primals)`` as a dual-model element of ``E_{m-k+1}``."""
        key = (k, biduals, y, primals)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        m = self.op.arity
        slot = m - k + 1
        space = self.op.domain[slot - 1]
        h = max([self.op.horizon(), bound(y)] + [bound(x) for x in biduals + primals])
        if k == 1:
            def value_at(p):
                return pairing(y, self.op.evaluate(primals + (p,)), self.op.codomain)
        else:
            def value_at(p):
                inner = self.star(k - 1, biduals[1:], y, primals + (p,))
                return bd.bidual_pair(biduals[0], inner, self.op.domain[slot])
        hit = bd.functional_to_dual(space, value_at, h)
        self._memo[key] = hit
        return hit

    def scalar(self, args, y) -> Fraction:
        args = _check_args(self.op, args)
        m = self.op.arity
        return bd.bidual_pair(args[0], self.star(m, args[1:], y, ()), self.op.domain[0])

    def __call__(self, args):
        args = _check_args(self.op, args)
        return bd.reconstruct_bidual(
            self.op.codomain, lambda f: self.scalar(args, f), codomain_horizon(self.op, args)
        )


def star_chain(op: RegOperator) -> StarChain:
    return StarChain(op)


# -- Davie-Gamelin iterated limits ------------------------------------------


@dataclass
class LimitTrace:
    """Record of one limit: the slot, the indices of the enclosing limits and
    the sampled ``(index, value)`` pairs."""

    slot: int
    outer: dict
    samples: list


@dataclass
class DGResult:
    value: object
    traces: list = field(default_factory=list)


def _settled_limit(g, start: int, cap: int, slot: int, outer: dict, traces: list) -> Fraction:
    d = 1
    while True:
        idx = [start + d, start + 2 * d, start + 4 * d]
        if idx[-1] > cap:
            raise StabilizationFailure(f"limit over slot {slot} did not settle before index {cap}")
        vals = [g(n) for n in idx]
        if vals[0] == vals[1] == vals[2]:
            traces.append(LimitTrace(slot, dict(outer), list(zip(idx, vals))))
            return vals[0]
        d *= 2


def davie_gamelin_scalar(op, rho, args, y, cap: int = 64, traces=None) -> Fraction:
    """``lim_{N_rho(m)} ... lim_{N_rho(1)} y'(A(x_{N_1}, ..., x_{N_m}))``.

    ``x_N`` is the ``N``-th approximant of the corresponding bidual argument.
    The innermost limit runs over the slot lifted first.  Each limit starts
    past the bounds of the data and past the reach of every enclosing
    approximant, and is
    accepted once three samples at offsets 1, 2, 4 (times a doubling step)
    agree exactly.
    """
    args = _check_args(op, args)
    traces = [] if traces is None else traces
    m = op.arity
    data = max([op.horizon(), bound(y)] + [bound(x) for x in args])

    def level(k: int, fixed: dict) -> Fraction:
        if k == 0:
            prim = [bd.approximants(args[s - 1], fixed[s], op.domain[s - 1]) for s in range(1, m + 1)]
            return pairing(y, op.evaluate(prim), op.codomain)
        slot = rho(k)
        # an approximant with index n moves mass out to n + bound + 1, so the
        # window opens past every point where the fixed approximants interact
        start = max([data] + [n + bound(args[s - 1]) + 1 for s, n in fixed.items()])
        return _settled_limit(
            lambda n: level(k - 1, {**fixed, slot: n}), start, cap, slot, fixed, traces
        )

    return level(m, {})


def davie_gamelin_eval(op, rho, args, cap: int = 64) -> DGResult:
    """Codomain bidual element of the iterated-limit formula, with its traces."""
    args = _check_args(op, args)
    traces = []
    value = bd.reconstruct_bidual(
        op.codomain,
        lambda f: davie_gamelin_scalar(op, rho, args, f, cap, traces),
        codomain_horizon(op, args),
    )
    return DGResult(value, traces)


# -- checks -----------------------------------------------------------------


@dataclass
class Outcome:
    """Result of one check.  ``status`` is "pass", "fail" or "not-representable"."""

    status: str
    cases: int = 0
    witness: object = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def dual_grid(op, tuples) -> list:
    h = max([codomain_horizon(op, t) for t in tuples] + [0]) + 1
    return bd.dual_generators(op.codomain, h)


def _guarded(fn):
    """Turn NotRepresentable into a first-class outcome."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NotRepresentable as exc:
            return Outcome("not-representable", detail={"location": str(exc)})

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


@dataclass
class Comparison:
    perms: list
    equal: list
    witnesses: dict
    cases: int

    @property
    def all_equal(self) -> bool:
        return all(all(row) for row in self.equal)


def compare_all_extensions(op, tuples=None, duals=None, perms=None) -> Comparison:
    """Evaluate every ``AR^rho`` on the generator grid and compare them pairwise."""
    if op.arity > 4:
        raise Unsupported("comparing all extensions is limited to arity 4")
    perms = perms or Permutation.all(op.arity)
    tuples = tuples if tuples is not None else sampling.grid_tuples(op.domain)
    duals = duals if duals is not None else dual_grid(op, tuples)
    exts = [arens_extend(op, r) for r in perms]
    n = len(perms)
    equal = [[True] * n for _ in range(n)]
    witnesses = {}
    cases = 0
    for args in tuples:
        for y in duals:
            vals = [e.scalar(args, y) for e in exts]
            cases += 1
            for i, j in itertools.combinations(range(n), 2):
                if vals[i] != vals[j] and equal[i][j]:
                    equal[i][j] = equal[j][i] = False
                    witnesses[(perms[i].label(), perms[j].label())] = (args, y, vals[i], vals[j])
    return Comparison(perms, equal, witnesses, cases)


def multimorphism_identity_on(ext: ExtendedOp, tuples):
    """First tuple with ``|AR(x'')| != AR(|x''|)``, and the number of tuples checked."""
    count = 0
    for args in tuples:
        count += 1
        lhs = ext(args).abs()
        rhs = ext([x.abs() for x in args])
        if lhs != rhs:
            return (args, lhs, rhs), count
    return None, count


@_guarded
def check_main_theorem(op, tuples=None, perms=None, symbolic: bool = True) -> Outcome:
    """All extensions agree and each satisfies ``|AR(x'')| = AR(|x''|)``.

    Both sides are compared as codomain bidual elements, which is the same as
    comparing them on every dual generator of the codomain.
    """
    tuples = tuples if tuples is not None else sampling.grid_tuples(op.domain)
    perms = perms or Permutation.all(op.arity)
    exts = [arens_extend(op, r, symbolic) for r in perms]
    cases = 0
    for args in tuples:
        cases += 1
        values = [e(args) for e in exts]
        for r, v in zip(perms[1:], values[1:]):
            if v != values[0]:
                return Outcome("fail", cases, {"pair": (perms[0].label(), r.label()), "args": args, "values": (values[0], v)})
        rhs = exts[0]([x.abs() for x in args])
        if values[0].abs() != rhs:
            return Outcome("fail", cases, {"rho": perms[0].label(), "args": args, "lhs": values[0].abs(), "rhs": rhs})
    return Outcome("pass", cases, detail={"extensions": len(perms)})


def default_hom(codomain):
    """A canonical Riesz homomorphism out of ``codomain``."""
    if is_findim_like(codomain):
        return MatrixMap.projection(codomain, [1])
    if isinstance(codomain, SeqL1):
        return FunctionalMap(EvConstSeq.delta(1), codomain)
    return FunctionalMap(bd.LIMIT_FUNCTIONAL, codomain)


def sign_variants(args):
    """Yield ``(P(xi), parts)`` over ``xi in {+1,-1}^m`` where ``parts`` takes
    the positive part for +1 and the negative part for -1."""
    for xi in itertools.product((1, -1), repeat=len(args)):
        sign = 1
        for s in xi:
            sign *= s
        yield sign, tuple(x.pos() if s == 1 else x.neg() for x, s in zip(args, xi))


@dataclass
class PropsRecord:
    extends: Outcome
    positive_transfer: Outcome
    naturality: Outcome
    sign_expansion: Outcome

    def all_pass(self) -> bool:
        return all(o.passed for o in self.outcomes())

    def outcomes(self):
        return [self.extends, self.positive_transfer, self.naturality, self.sign_expansion]


def verify_extension_props(op, rho, u=None, tuples=None) -> PropsRecord:
    ext = arens_extend(op, rho)
    tuples = tuples if tuples is not None else sampling.grid_tuples(op.domain)
    duals = dual_grid(op, tuples)
    return PropsRecord(
        _check_extends(op, ext),
        _check_positive(op, ext, tuples, duals),
        _check_naturality(op, rho, ext, u or default_hom(op.codomain), tuples),
        _check_sign_expansion(ext, tuples, duals),
    )


@_guarded
def _check_extends(op, ext) -> Outcome:
    h = op.horizon()
    basis = list(itertools.product(*(basis_elements(s, h) for s in op.domain)))
    duals = bd.dual_generators(op.codomain, max([h] + [bound(x) for t in basis for x in t]) + 1)
    cases = 0
    for xs in basis:
        lifted = tuple(bd.embed_J(x, s) for x, s in zip(xs, op.domain))
        value = op.evaluate(xs)
        for y in duals:
            cases += 1
            if ext.scalar(lifted, y) != pairing(y, value, op.codomain):
                return Outcome("fail", cases, {"args": xs, "y": y})
    return Outcome("pass", cases)


@_guarded
def _check_positive(op, ext, tuples, duals) -> Outcome:
    try:
        positive = is_positive_op(op)
    except Unsupported as exc:
        return Outcome("pass", detail={"vacuous": str(exc)})
    if not positive:
        return Outcome("pass", detail={"vacuous": "operator is not positive"})
    cases = 0
    for args in tuples:
        if not all(x.is_positive() for x in args):
            continue
        for y in duals:
            if not y.is_positive():
                continue
            cases += 1
            if ext.scalar(args, y) < 0:
                return Outcome("fail", cases, {"args": args, "y": y})
    return Outcome("pass", cases)


@_guarded
def _check_naturality(op, rho, ext, u, tuples) -> Outcome:
    composed = arens_extend(compose_hom(u, op), rho)
    cases = 0
    for args in tuples:
        cases += 1
        if composed(args) != u.bidual_apply(ext(args)):
            return Outcome("fail", cases, {"args": args})
    return Outcome("pass", cases, detail={"hom": type(u).__name__})


@_guarded
def _check_sign_expansion(ext, tuples, duals) -> Outcome:
    cases = 0
    for args in tuples:
        for y in duals:
            cases += 1
            total = sum((s * ext.scalar(parts, y) for s, parts in sign_variants(args)), ZERO)
            if total != ext.scalar(args, y):
                return Outcome("fail", cases, {"args": args, "y": y})
    return Outcome("pass", cases)


@_guarded
def check_star_chain(op, tuples, duals=None, rho=None) -> Outcome:
    """``AR^theta(A)`` against the literal iterated-adjoint chain."""
    rho = rho or Permutation.theta(op.arity)
    ext, chain = arens_extend(op, rho), star_chain(op)
    duals = duals if duals is not None else dual_grid(op, tuples)
    cases = 0
    for args in tuples:
        for y in duals:
            cases += 1
            a, b = ext.scalar(args, y), chain.scalar(args, y)
            if a != b:
                return Outcome("fail", cases, {"args": args, "y": y, "extension": a, "chain": b})
    return Outcome("pass", cases)


@_guarded
def check_dg_oracle(op, rho, tuples, cap: int = 64, duals=None) -> Outcome:
    """Iterated limits agree with the bar-lift evaluator."""
    ext = arens_extend(op, rho)
    duals = duals if duals is not None else dual_grid(op, tuples)
    cases = 0
    for args in tuples:
        for y in duals:
            cases += 1
            try:
                lim = davie_gamelin_scalar(op, rho, args, y, cap)
            except StabilizationFailure as exc:
                return Outcome("fail", cases, {"args": args, "y": y, "error": str(exc)})
            if lim != ext.scalar(args, y):
                return Outcome("fail", cases, {"args": args, "y": y, "limit": lim, "extension": ext.scalar(args, y)})
    return Outcome("pass", cases)


def is_dual_hom(y, space) -> bool:
    """Whether evaluation at ``y`` is a Riesz homomorphism on the bidual model."""
    return signed_atom(y, space) in (0, 1)


@_guarded
def check_hom_composite(op, rho, y, tuples) -> Outcome:
    """``x'' -> AR(x'')(y')`` is a multimorphism for a homomorphism ``y'``."""
    if not is_dual_hom(y, op.codomain):
        raise DomainMismatch(f"{y!r} is not a Riesz homomorphism on the bidual model")
    ext = arens_extend(op, rho)
    cases = 0
    for args in tuples:
        cases += 1
        lhs = abs(ext.scalar(args, y))
        rhs = ext.scalar([x.abs() for x in args], y)
        if lhs != rhs:
            return Outcome("fail", cases, {"args": args, "y": y, "lhs": lhs, "rhs": rhs})
    return Outcome("pass", cases)


def hom_span_element(terms, space):
    """``sum c_j phi_j`` for homomorphism generators ``phi_j``; rejects anything else."""
    total = bd.dual_zero(space)
    for c, phi in terms:
        if signed_atom(phi, space) not in (0, 1):
            raise DomainMismatch(f"{phi!r} is not a homomorphism generator")
        total = total + phi.scale(c)
    return total


@_guarded
def check_modulus_identity(op, rho, y, tuples) -> Outcome:
    """``|AR(x'')|(y') = AR(|x''|)(y')``, with the modulus taken in the codomain model."""
    ext = arens_extend(op, rho)
    cases = 0
    for args in tuples:
        cases += 1
        lhs = bd.bidual_pair(ext(args).abs(), y, op.codomain)
        rhs = ext.scalar([x.abs() for x in args], y)
        if lhs != rhs:
            return Outcome("fail", cases, {"args": args, "y": y, "lhs": lhs, "rhs": rhs})
    return Outcome("pass", cases)


@_guarded
def check_oc_restriction(op, rho, tuples) -> Outcome:
    """Multimorphism identity on tuples without singular parts."""
    regular = [
        t for t in tuples if all(bd.is_singular_free(x, s) for x, s in zip(t, op.domain))
    ]
    witness, n = multimorphism_identity_on(arens_extend(op, rho), regular)
    if witness is not None:
        return Outcome("fail", n, {"args": witness[0], "lhs": witness[1], "rhs": witness[2]})
    return Outcome("pass", n)
