from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arenslab.errors import DomainMismatch
from arenslab.lattice import (
    EvConstSeq,
    FinDim,
    FinSupSeq,
    SeqC,
    SeqL1,
    Vec,
    is_riesz_hom,
    lattice_ops,
    order_leq,
    pairing,
    q,
)
from strategies import evconsts, finsups, rationals, vecs

R2 = FinDim(2)


def V(*cs):
    return Vec.of(*cs)


# -- rationals ----------------------------------------------------------------


def test_q_forms():
    assert q(3) == 3
    assert q("2/6") == Fraction(1, 3)
    assert q([3, -6]) == Fraction(-1, 2)
    with pytest.raises(TypeError):
        q(True)
    with pytest.raises((TypeError, ValueError)):
        q(0.5)


# -- lattice operations ---------------------------------------------------------


def test_sup_and_abs_examples():
    rec = lattice_ops(V(1, -2), V(0, 3), R2)
    assert rec.sup == V(1, 3)
    assert rec.inf == V(0, -2)
    assert lattice_ops(V(-1, 2), V(0, 0), R2).abs == V(1, 2)


def test_evconst_abs_is_canonical():
    x = EvConstSeq((2, -1), 1)
    assert x.abs() == EvConstSeq((2, 1), 1)
    # trailing entries equal to the tail are dropped
    assert x.abs().prefix == (2,)


def test_order_examples():
    assert order_leq(V(0, 0), V(1, 2), R2)
    assert not order_leq(V(1, 0), V(0, 1), R2)


def test_mismatched_space_raises():
    with pytest.raises(DomainMismatch):
        lattice_ops(V(1, 2), V(1, 2, 3), R2)
    with pytest.raises(DomainMismatch):
        order_leq(FinSupSeq.unit(1), V(1, 2), R2)


@given(finsups, finsups)
def test_l1_riesz_identities(x, y):
    assert x.sup(y) + x.inf(y) == x + y
    assert x.pos() - x.neg() == x
    assert x.abs() == x.pos() + x.neg()
    assert x.pos().inf(x.neg()).is_zero()


@given(evconsts, evconsts, evconsts)
def test_c_lattice_laws(x, y, z):
    assert x.sup(y) == y.sup(x)
    assert x.sup(y.sup(z)) == x.sup(y).sup(z)
    assert x.sup(x.inf(y)) == x
    # translation invariance of the order
    assert (x + z).sup(y + z) == x.sup(y) + z


@given(vecs(3), vecs(3), rationals)
def test_vec_abs_homogeneous(x, y, c):
    assert x.scale(c).abs() == x.abs().scale(abs(c))
    assert (x + y).abs().sup(x.abs() + y.abs()) == x.abs() + y.abs()


@given(evconsts)
def test_evconst_canonical_form(x):
    assert EvConstSeq(x.prefix + (x.tail, x.tail), x.tail) == x
    assert hash(EvConstSeq(x.prefix + (x.tail,), x.tail)) == hash(x)


# -- pairing -------------------------------------------------------------------


def test_pairing_examples():
    assert pairing(V(1, 2), V(3, 4), R2) == 11
    assert pairing(EvConstSeq((), 1), FinSupSeq.unit(5), SeqL1()) == 1
    assert pairing(EvConstSeq((0,), 1), FinSupSeq.unit(1), SeqL1()) == 0


@given(evconsts, finsups, finsups)
def test_pairing_linear_l1(f, x, y):
    assert pairing(f, x + y, SeqL1()) == pairing(f, x, SeqL1()) + pairing(f, y, SeqL1())


@given(evconsts)
def test_limit_functional_reads_tail(x):
    from arenslab.bidual import LIMIT_FUNCTIONAL

    assert pairing(LIMIT_FUNCTIONAL, x, SeqC()) == x.tail


def test_finsup_rejects_bad_indices():
    with pytest.raises(ValueError):
        FinSupSeq(((0, 1),))
    with pytest.raises(ValueError):
        FinSupSeq(((2, 1), (2, 3)))


# -- Riesz homomorphisms -------------------------------------------------------------


def test_riesz_hom_examples():
    assert is_riesz_hom([[2, 0], [0, 3]]).holds
    verdict = is_riesz_hom([[1, 1]])
    assert not verdict.holds
    x = verdict.witness
    assert x == V(1, -1)
    # the witness really violates |Tx| = T|x|: 0 against 2
    assert abs(x.dot(V(1, 1))) == 0 and x.abs().dot(V(1, 1)) == 2
    assert is_riesz_hom([[0, 0], [0, 0]]).holds


@given(st.lists(st.lists(st.sampled_from([0, 0, 1, 2, -1]), min_size=3, max_size=3), min_size=1, max_size=3))
def test_riesz_hom_matches_definition(rows):
    # definitional oracle: |Tx| = T|x| on every sign pattern of R^3
    import itertools

    def hom_on_signs():
        for s in itertools.product((1, -1), repeat=3):
            x = V(*s)
            tx = V(*(V(*r).dot(x) for r in rows))
            t_abs = V(*(V(*r).dot(x.abs()) for r in rows))
            if tx.abs() != t_abs:
                return False
        return True

    assert is_riesz_hom(rows).holds == hom_on_signs()
