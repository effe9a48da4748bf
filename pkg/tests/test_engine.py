from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arenslab import bidual as bd
from arenslab import engine, sampling
from arenslab.errors import DomainMismatch
from arenslab.lattice import EvConstSeq, FinDim, FinSupSeq, SeqC, SeqL1, Vec, pairing
from arenslab.operators import (
    SCALARS,
    CoordProduct,
    FiniteRankProduct,
    MatrixMap,
    Permutation,
    RegOperator,
    TensorOp,
    UpperTriangular,
    WeightedDiagonal,
)
from strategies import bidual_tuple, l1_biduals

L1, C = SeqL1(), SeqC()
L = bd.GEN_LIMIT
ONE_Y = Vec.of(1)
ID2, TH2 = Permutation.identity(2), Permutation.theta(2)


class Triangular3(RegOperator):
    """``sum_{i <= j <= k} x_i y_j z_k`` on l_1^3, sliced by probing."""

    def __init__(self):
        self.domain = (L1, L1, L1)
        self.codomain = SCALARS

    def _evaluate(self, args):
        x, y, z = args
        total = Fraction(0)
        for i, a in x.items:
            for j, b in y.items:
                for k, c in z.items:
                    if i <= j <= k:
                        total += a * b * c
        return Vec.of(total)

    def _slice(self, y, fixed, slot):
        h = max(x.bound for x in fixed.values())

        def value(p):
            return pairing(y, self.evaluate([fixed.get(s, p) for s in (1, 2, 3)]), SCALARS)

        return bd.functional_to_dual(L1, value, h)


def brute_limits(indicator, order, depth=40):
    """Iterated limits of ``indicator(N)`` with the innermost limit over ``order[0]``.

    Each limit is read at index ``depth`` past all enclosing indices, which is
    exact for indicators of ``<=`` chains.
    """

    def level(k, fixed):
        if k < 0:
            return indicator(fixed)
        slot = order[k]
        n = max(fixed.values(), default=0) + depth * (k + 1)
        return level(k - 1, {**fixed, slot: n})

    return level(len(order) - 1, {})


# -- bar lift ---------------------------------------------------------------------


def test_bar_lift_of_limit_through_each_slot():
    form = engine.OperatorForm(UpperTriangular(), ONE_Y)
    # with x = e_n fixed the slot-2 slice is j -> [n <= j], whose tail is 1
    through_second = engine.bar_lift(L, 2, form)
    for n in range(1, 6):
        assert through_second.value({1: FinSupSeq.unit(n)}) == 1
    assert engine.lifted_slice(through_second, 1, {}) == EvConstSeq((), 1)
    # with y = e_n fixed the slot-1 slice is i -> [i <= n], whose tail is 0
    through_first = engine.bar_lift(L, 1, form)
    for n in range(1, 6):
        assert through_first.value({2: FinSupSeq.unit(n)}) == 0
    assert engine.lifted_slice(through_first, 2, {}).is_zero()


def test_bar_lift_rejects_closed_slot():
    form = engine.bar_lift(L, 1, engine.OperatorForm(UpperTriangular(), ONE_Y))
    with pytest.raises(DomainMismatch):
        engine.bar_lift(L, 1, form)


# -- the irregular form ------------------------------------------------------------


def test_upper_triangular_extensions_differ_at_limit_pair():
    B = UpperTriangular()
    # oracle: iterated limits of [N_1 <= N_2] computed by hand
    def le(n):
        return Fraction(int(n[1] <= n[2]))

    want_id = brute_limits(le, (1, 2))
    want_theta = brute_limits(le, (2, 1))
    assert (want_id, want_theta) == (0, 1)
    assert engine.arens_extend(B, ID2).scalar((L, L), ONE_Y) == want_id
    assert engine.arens_extend(B, TH2).scalar((L, L), ONE_Y) == want_theta
    assert engine.davie_gamelin_scalar(B, ID2, (L, L), ONE_Y) == want_id
    assert engine.davie_gamelin_scalar(B, TH2, (L, L), ONE_Y) == want_theta
    assert engine.star_chain(B).scalar((L, L), ONE_Y) == want_theta


def test_upper_triangular_at_embedded_and_limit():
    B = UpperTriangular()
    args = (bd.embed_J(FinSupSeq.unit(1), L1), L)
    for rho in (ID2, TH2):
        assert engine.arens_extend(B, rho).scalar(args, ONE_Y) == 1


def test_c_product_extension():
    # both extensions of the coordinatewise product on c multiply the
    # limit parts and the sequence parts separately
    prod = CoordProduct(C)
    x = bd.CBidualElem(Fraction(2), EvConstSeq((1, -1), 3))
    z = bd.CBidualElem(Fraction(-1), EvConstSeq((0, 2), Fraction(1, 2)))
    want = bd.CBidualElem(Fraction(-2), EvConstSeq((0, -2), Fraction(3, 2)))
    for rho in (ID2, TH2):
        assert engine.arens_extend(prod, rho)((x, z)) == want


def test_star_chain_is_theta_for_two_slots():
    B = UpperTriangular()
    tuples = sampling.grid_tuples(B.domain)
    assert engine.check_star_chain(B, tuples).passed


def test_three_slot_chain_follows_reversal_not_theta():
    T = Triangular3()
    args = (L, L, L)

    def chain(n):
        return Fraction(int(n[1] <= n[2] <= n[3]))

    reverse = Permutation((3, 2, 1))
    theta = Permutation.theta(3)
    assert brute_limits(chain, reverse.images) == 1
    assert brute_limits(chain, theta.images) == 0
    assert engine.star_chain(T).scalar(args, ONE_Y) == 1
    assert engine.arens_extend(T, reverse).scalar(args, ONE_Y) == 1
    assert engine.arens_extend(T, theta).scalar(args, ONE_Y) == 0


# -- routes agree -------------------------------------------------------------------


SEQ_OPS = [
    UpperTriangular(),
    CoordProduct(L1),
    CoordProduct(C),
    WeightedDiagonal(EvConstSeq((2, -1), 1)),
    FiniteRankProduct([EvConstSeq((1,), 0), bd.LIMIT_FUNCTIONAL], Vec.of(1, -1), [L1, C], FinDim(2)),
]


@pytest.mark.parametrize("op", SEQ_OPS, ids=lambda op: op.describe())
def test_dg_oracle_on_grid(op):
    tuples = sampling.grid_tuples(op.domain)[::3]
    for rho in Permutation.all(op.arity):
        assert engine.check_dg_oracle(op, rho, tuples).passed


@pytest.mark.parametrize("op", SEQ_OPS, ids=lambda op: op.describe())
def test_star_chain_on_grid(op):
    tuples = sampling.grid_tuples(op.domain)[::2]
    assert engine.check_star_chain(op, tuples).passed


@settings(max_examples=25)
@given(st.data())
def test_symbolic_and_generic_routes_agree(data):
    A = TensorOp([2, 3], 2, {(1, 2, 1): 2, (2, 1, 2): Fraction(-1, 2), (2, 3, 1): 1})
    args = data.draw(bidual_tuple(A))
    rho = data.draw(st.sampled_from(Permutation.all(2)))
    assert engine.arens_extend(A, rho)(args) == engine.arens_extend(A, rho, symbolic=False)(args)


@settings(max_examples=25)
@given(l1_biduals, l1_biduals)
def test_rank_one_closed_form_matches_probing(x, z):
    op = FiniteRankProduct([EvConstSeq((1, -1), 2), EvConstSeq((0, 3), -1)], Vec.of(2), [L1, L1], FinDim(1))
    for rho in (ID2, TH2):
        a = engine.arens_extend(op, rho).scalar((x, z), ONE_Y)
        b = engine.arens_extend(op, rho, symbolic=False).scalar((x, z), ONE_Y)
        assert a == b


# -- comparisons and properties -------------------------------------------------------


def test_compare_all_finds_witness():
    cmp = engine.compare_all_extensions(UpperTriangular())
    assert not cmp.all_equal
    args, y, a, b = cmp.witnesses[("id", "theta")]
    assert a != b
    assert all(isinstance(x, bd.L1BidualElem) for x in args)


def test_compare_all_on_multimorphism():
    assert engine.compare_all_extensions(CoordProduct(L1)).all_equal


def test_main_theorem_examples():
    assert engine.check_main_theorem(CoordProduct(C)).passed
    out = engine.check_main_theorem(UpperTriangular())
    assert out.status == "fail"


@pytest.mark.parametrize("op", SEQ_OPS[:4], ids=lambda op: op.describe())
def test_extension_props(op):
    tuples = sampling.grid_tuples(op.domain)[::4]
    for rho in Permutation.all(op.arity):
        rec = engine.verify_extension_props(op, rho, tuples=tuples)
        assert rec.all_pass(), [o.status for o in rec.outcomes()]


def test_naturality_with_projection():
    A = TensorOp([2, 2], 2, {(1, 1, 1): 1, (2, 2, 2): 1})
    u = MatrixMap([[1, 0]], FinDim(2), FinDim(1))
    rec = engine.verify_extension_props(A, ID2, u=u)
    assert rec.naturality.passed
    assert rec.naturality.detail["hom"] == "MatrixMap"


def test_sign_variants_cover_all_patterns():
    args = (Vec.of(1, -2), Vec.of(-3, 4))
    variants = list(engine.sign_variants(args))
    assert len(variants) == 4
    assert [s for s, _ in variants] == [1, -1, -1, 1]


# -- homomorphism composites and modulus ---------------------------------------------------


def test_hom_composite_examples():
    B = UpperTriangular()
    tuples = sampling.grid_tuples(B.domain)
    prod = CoordProduct(L1)
    assert engine.check_hom_composite(prod, ID2, EvConstSeq.delta(2), sampling.grid_tuples(prod.domain)).passed
    assert engine.check_hom_composite(B, ID2, ONE_Y, tuples).status == "fail"


def test_hom_composite_rejects_non_hom():
    prod = CoordProduct(L1)
    with pytest.raises(DomainMismatch):
        engine.check_hom_composite(prod, ID2, EvConstSeq((1, 1), 0), [])


def test_hom_span_element():
    y = engine.hom_span_element([(2, EvConstSeq.delta(1)), (-3, EvConstSeq.delta(4))], L1)
    assert y == EvConstSeq((2, 0, 0, -3), 0)
    with pytest.raises(DomainMismatch):
        engine.hom_span_element([(1, EvConstSeq((1, 1), 0))], L1)


def test_modulus_identity_on_c_product():
    prod = CoordProduct(C)
    y = engine.hom_span_element([(Fraction(1, 2), bd.LIMIT_FUNCTIONAL), (-2, bd.CDualElem.coord(1))], C)
    tuples = sampling.grid_tuples(prod.domain)
    for rho in (ID2, TH2):
        assert engine.check_modulus_identity(prod, rho, y, tuples).passed


def test_oc_restriction_skips_singular_tuples():
    B = UpperTriangular()
    tuples = sampling.grid_tuples(B.domain)
    out = engine.check_oc_restriction(B, ID2, tuples)
    regular = [t for t in tuples if all(bd.is_singular_free(x, L1) for x in t)]
    assert out.cases == len(regular) < len(tuples)


def test_not_representable_is_an_outcome():
    class Harmonic(RegOperator):
        # x -> sum x_i / i has no eventually constant representative
        def __init__(self):
            self.domain = (L1,)
            self.codomain = SCALARS

        def _evaluate(self, args):
            return Vec.of(sum((v / i for i, v in args[0].items), Fraction(0)))

        def _slice(self, y, fixed, slot):
            return bd.functional_to_dual(L1, lambda p: self.evaluate([p])[1], 3)

    out = engine.check_star_chain(Harmonic(), [(bd.embed_J(FinSupSeq.unit(1), L1),)])
    assert out.status == "not-representable"
    assert "location" in out.detail


def test_wrong_argument_count():
    with pytest.raises(DomainMismatch):
        engine.arens_extend(UpperTriangular(), ID2).scalar((L,), ONE_Y)
    with pytest.raises(DomainMismatch):
        engine.arens_extend(UpperTriangular(), Permutation.identity(3))


def test_dg_traces_record_samples():
    res = engine.davie_gamelin_eval(UpperTriangular(), TH2, (L, L))
    assert res.value == Vec.of(1)
    assert {t.slot for t in res.traces} == {1, 2}
    for t in res.traces:
        assert len({v for _, v in t.samples}) == 1
