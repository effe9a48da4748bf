from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arenslab import bidual as bd
from arenslab.errors import DomainMismatch, NotRepresentable
from arenslab.lattice import EvConstSeq, FinDim, FinSupSeq, SeqC, SeqL1, Vec, pairing
from strategies import c_biduals, c_duals, evconsts, finsups, l1_biduals, rationals

L1, C = SeqL1(), SeqC()


def test_embed_examples():
    assert bd.embed_J(FinSupSeq.unit(3), L1) == bd.L1BidualElem(FinSupSeq.unit(3), 0)
    assert bd.embed_J(EvConstSeq((5,), 2), C) == bd.CBidualElem(2, EvConstSeq((5,), 2))
    assert bd.embed_J(Vec.of(1, -1), FinDim(2)) == Vec.of(1, -1)


def test_modulus_examples():
    x = bd.L1BidualElem(FinSupSeq.unit(1).scale(-2), -3)
    assert bd.model_modulus(x) == bd.L1BidualElem(FinSupSeq.unit(1).scale(2), 3)
    y = bd.CBidualElem(-1, EvConstSeq((2, -2), 0))
    assert bd.model_modulus(y) == bd.CBidualElem(1, EvConstSeq((2, 2), 0))
    assert bd.model_modulus(bd.embed_J(Vec.of(1, -4), FinDim(2))) == Vec.of(1, 4)


def test_classify_examples():
    s = bd.classify_order_continuity(bd.L1BidualElem(FinSupSeq.unit(2), 5), L1)
    assert s.oc_part == bd.L1BidualElem(FinSupSeq.unit(2), 0)
    assert s.singular_part == bd.L1BidualElem(FinSupSeq(), 5)
    s = bd.classify_order_continuity(bd.embed_J(FinSupSeq.unit(7), L1), L1)
    assert s.singular_part.is_zero()
    s = bd.classify_order_continuity(bd.CBidualElem(3, EvConstSeq((), 1)), C)
    assert s.oc_part == bd.embed_J(EvConstSeq.ones(), C)
    assert s.singular_part == bd.CBidualElem(2, EvConstSeq())


def test_c_singular_part_kills_coordinate_functionals():
    # the singular remainder only sees the limit functional
    s = bd.classify_order_continuity(bd.CBidualElem(3, EvConstSeq((4, -1), 1)), C)
    for i in range(1, 8):
        assert bd.bidual_pair(s.singular_part, bd.CDualElem.coord(i), C) == 0
    assert bd.bidual_pair(s.singular_part, bd.LIMIT_FUNCTIONAL, C) == 2


@given(l1_biduals)
def test_l1_split_recombines(x):
    s = bd.classify_order_continuity(x, L1)
    assert s.oc_part + s.singular_part == x


@given(c_biduals)
def test_c_split_recombines(x):
    s = bd.classify_order_continuity(x, C)
    assert s.oc_part + s.singular_part == x
    assert bd.is_singular_free(s.oc_part, C)


def test_approximant_example():
    L = bd.GEN_LIMIT
    assert bd.approximants(L, 3, L1) == FinSupSeq.unit(4)
    assert pairing(EvConstSeq.ones(), bd.approximants(L, 3, L1), L1) == 1
    assert bd.bidual_pair(L, EvConstSeq.ones(), L1) == 1


@given(l1_biduals, evconsts, st.integers(min_value=0, max_value=4))
def test_l1_approximants_settle(x, f, extra):
    threshold = max(x.a.bound, f.bound) + 1
    assert pairing(f, bd.approximants(x, threshold + extra, L1), L1) == bd.bidual_pair(x, f, L1)


@given(c_biduals, c_duals, st.integers(min_value=0, max_value=4))
def test_c_approximants_settle(x, f, extra):
    threshold = max(x.t.bound, f.bound) + 1
    assert pairing(f, bd.approximants(x, threshold + extra, C), C) == bd.bidual_pair(x, f, C)


@given(finsups, st.integers(min_value=1, max_value=5))
def test_J_approximants_are_exact(x, n):
    assert bd.approximants(bd.embed_J(x, L1), x.bound + n, L1) == x


@given(finsups, evconsts)
def test_J_pairs_like_the_primal(x, f):
    assert bd.bidual_pair(bd.embed_J(x, L1), f, L1) == pairing(f, x, L1)


@given(evconsts, c_duals)
def test_J_pairs_like_the_primal_c(x, f):
    assert bd.bidual_pair(bd.embed_J(x, C), f, C) == pairing(f, x, C)


@given(l1_biduals, l1_biduals, evconsts)
def test_bidual_pairing_is_bilinear(x, y, f):
    assert bd.bidual_pair(x + y, f, L1) == bd.bidual_pair(x, f, L1) + bd.bidual_pair(y, f, L1)


@given(c_biduals)
def test_c_modulus_is_lattice_hom_on_positive_duals(x):
    # x -> x(f) for a positive atom f is a lattice homomorphism of the model
    for f in (bd.LIMIT_FUNCTIONAL, bd.CDualElem.coord(2)):
        assert bd.bidual_pair(x.abs(), f, C) == abs(bd.bidual_pair(x, f, C))


def test_reconstruct_round_trip():
    x = bd.CBidualElem(Fraction(2), EvConstSeq((1, -1), 3))
    back = bd.reconstruct_bidual(C, lambda f: bd.bidual_pair(x, f, C), 3)
    assert back == x
    y = bd.L1BidualElem(FinSupSeq(((1, 1), (3, -2))), 1)
    assert bd.reconstruct_bidual(L1, lambda f: bd.bidual_pair(y, f, L1), 4) == y


def test_functional_outside_model_is_not_representable():
    # x -> sum_i x_i / i is not eventually constant, so not an l1-model dual element
    with pytest.raises(NotRepresentable):
        bd.functional_to_dual(L1, lambda p: Fraction(1, p.bound), 3)


def test_wrong_space_raises():
    with pytest.raises(DomainMismatch):
        bd.bidual_pair(bd.GEN_LIMIT, bd.LIMIT_FUNCTIONAL, L1)


@given(rationals)
def test_generalized_limit_reads_tail(c):
    assert bd.bidual_pair(bd.GEN_LIMIT, EvConstSeq((7, -3), c), L1) == c
