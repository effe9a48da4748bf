import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arenslab.errors import DomainMismatch, InternalInvariantViolation, NotMultimorphism
from arenslab.lattice import EvConstSeq, FinDim, FinSupSeq, SeqC, SeqL1, Vec
from arenslab.operators import (
    CoordProduct,
    FiniteRankProduct,
    MatrixMap,
    Permutation,
    TensorOp,
    UpperTriangular,
    WeightedDiagonal,
    basis_elements,
    compose_hom,
    is_multimorphism,
    is_positive_op,
    kusraev_factor,
    tensor_from_factors,
)
from strategies import evconsts, finsups, rationals, vecs

L1, C = SeqL1(), SeqC()
B3 = TensorOp([2, 2], 1, {(2, 1, 1): 3})  # 3 x_2 y_1


def tensors(dims, cod, signed=True):
    keys = list(itertools.product(*(range(1, n + 1) for n in dims + [cod])))
    values = rationals if signed else st.fractions(min_value=0, max_value=5, max_denominator=4)
    return st.dictionaries(st.sampled_from(keys), values, max_size=len(keys)).map(
        lambda e: TensorOp(dims, cod, e)
    )


# -- evaluation and slices ---------------------------------------------------------


def test_evaluate_examples():
    assert B3.evaluate([Vec.of(0, 1), Vec.of(2, 0)]) == Vec.of(6)
    assert UpperTriangular().evaluate([FinSupSeq.unit(1), FinSupSeq.unit(2)]) == Vec.of(1)
    assert UpperTriangular().evaluate([FinSupSeq.unit(2), FinSupSeq.unit(1)]) == Vec.of(0)
    prod = CoordProduct(C)
    assert prod.evaluate([EvConstSeq((1,), 2), EvConstSeq((3,), 1)]) == EvConstSeq((3,), 2)


def test_slice_examples():
    B = UpperTriangular()
    y = Vec.of(1)
    assert B.scalar_slice(y, {1: FinSupSeq.unit(2)}, 2) == EvConstSeq((0,), 1)
    assert B.scalar_slice(y, {2: FinSupSeq.unit(2)}, 1) == EvConstSeq((1, 1), 0)
    assert B3.scalar_slice(y, {2: Vec.of(1, 0)}, 1) == Vec.of(0, 3)


@given(finsups, finsups)
def test_upper_triangular_slices_agree_with_evaluation(x, z):
    B = UpperTriangular()
    y = Vec.of(1)
    from arenslab.lattice import pairing

    value = B.evaluate([x, z])[1]
    assert pairing(B.scalar_slice(y, {2: z}, 1), x, L1) == value
    assert pairing(B.scalar_slice(y, {1: x}, 2), z, L1) == value


@given(evconsts, evconsts, evconsts)
def test_c_product_slice_agrees_with_evaluation(x, z, f_prefix):
    from arenslab.bidual import CDualElem
    from arenslab.lattice import pairing

    prod = CoordProduct(C)
    f = CDualElem(f_prefix.tail, FinSupSeq(tuple((i, v) for i, v in enumerate(f_prefix.prefix, 1) if v)))
    value = pairing(f, prod.evaluate([x, z]), C)
    assert pairing(prod.scalar_slice(f, {1: x}, 2), z, C) == value


def test_slice_rejects_wrong_dual():
    with pytest.raises(DomainMismatch):
        UpperTriangular().scalar_slice(Vec.of(1, 2), {1: FinSupSeq.unit(1)}, 2)


# -- order structure -----------------------------------------------------------------


def test_modulus_example():
    A = TensorOp([2, 2], 1, {(1, 1, 1): -2, (2, 2, 1): 3})
    assert A.modulus().entries == {(1, 1, 1): 2, (2, 2, 1): 3}


@given(tensors([2, 2], 2))
def test_modulus_dominates_on_positive_basis(A):
    M, P, N = A.modulus(), A.pos_part(), A.neg_part()
    for args in itertools.product(*(basis_elements(s, 1) for s in A.domain)):
        a, m = A.evaluate(args), M.evaluate(args)
        assert (m - a).is_positive() and (m + a).is_positive()
        assert P.evaluate(args) - N.evaluate(args) == a


def test_positivity_examples():
    assert CoordProduct(L1).is_positive()
    assert is_positive_op(UpperTriangular())
    assert not is_positive_op(TensorOp([1], 1, {(1, 1): -1}))


def test_weighted_diagonal_positivity():
    assert is_positive_op(WeightedDiagonal(EvConstSeq((1, 2), 3)))
    assert not is_positive_op(WeightedDiagonal(EvConstSeq((1, -2), 3)))


# -- multimorphisms ------------------------------------------------------------------


def test_multimorphism_examples():
    assert is_multimorphism(B3).holds
    dot = TensorOp([2, 2], 1, {(1, 1, 1): 1, (2, 2, 1): 1})
    verdict = is_multimorphism(dot)
    assert not verdict.holds
    assert verdict.witness == (Vec.of(1, 1), Vec.of(1, -1))
    assert is_multimorphism(CoordProduct(L1)).holds
    assert is_multimorphism(CoordProduct(C, 3)).holds
    assert not is_multimorphism(UpperTriangular()).holds


@given(tensors([2, 2], 2))
def test_tensor_rule_matches_definition(A):
    # oracle: the definition on every sign pattern of R^2 x R^2
    def definitional():
        for a in itertools.product((1, -1), repeat=2):
            for b in itertools.product((1, -1), repeat=2):
                x, y = Vec.of(*a), Vec.of(*b)
                if A.evaluate([x, y]).abs() != A.evaluate([x.abs(), y.abs()]):
                    return False
        return True

    assert is_multimorphism(A, budget=10).holds == definitional()


def test_contradicting_rule_is_an_internal_error():
    class Liar(TensorOp):
        def structural_multimorphism(self):
            return True

    with pytest.raises(InternalInvariantViolation):
        is_multimorphism(Liar([2], 1, {(1, 1): 1, (2, 1): 1}))


def test_finite_rank_rule():
    neg = EvConstSeq((-1,), 0)
    both_negative = FiniteRankProduct([neg, neg], Vec.of(2), [L1, L1], FinDim(1))
    assert is_multimorphism(both_negative).holds
    one_negative = FiniteRankProduct([neg, EvConstSeq((1,), 0)], Vec.of(2), [L1, L1], FinDim(1))
    assert not is_multimorphism(one_negative).holds


# -- factorization and composition -------------------------------------------------------


def test_kusraev_examples():
    factors = kusraev_factor(B3)
    assert factors == [Vec.of(0, 3), Vec.of(1, 0)]
    assert tensor_from_factors(factors) == B3
    zero = TensorOp([2, 2], 1, {})
    assert kusraev_factor(zero) == [Vec.zeros(2), Vec.zeros(2)]
    cube = TensorOp([1, 1, 1], 1, {(1, 1, 1, 1): 1})
    assert kusraev_factor(cube) == [Vec.of(1)] * 3


def test_kusraev_rejects_non_multimorphisms():
    with pytest.raises(NotMultimorphism):
        kusraev_factor(TensorOp([2, 2], 1, {(1, 1, 1): 1, (2, 2, 1): 1}))


@given(
    st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=3).flatmap(
        lambda dims: st.tuples(
            st.just(dims),
            st.tuples(*(st.integers(min_value=1, max_value=n) for n in dims)),
            st.sampled_from([Fraction(1), Fraction(3), Fraction(1, 2)]),
        )
    )
)
def test_kusraev_reconstructs(case):
    dims, idx, value = case
    B = TensorOp(dims, 1, {idx + (1,): value})
    assert tensor_from_factors(kusraev_factor(B)) == B


def test_compose_hom_examples():
    prod = TensorOp([2, 2], 2, {(1, 1, 1): 1, (2, 2, 2): 1})  # coordinatewise product on R^2
    u = MatrixMap([[1, 0]], FinDim(2), FinDim(1))
    composed = compose_hom(u, prod)
    for x, y in [(Vec.of(2, 3), Vec.of(5, 7)), (Vec.of(-1, 4), Vec.of(1, 1))]:
        assert composed.evaluate([x, y]) == Vec.of(x[1] * y[1])
    assert compose_hom(MatrixMap.identity(FinDim(2)), prod) is prod


def test_compose_hom_domain_check():
    with pytest.raises(DomainMismatch):
        compose_hom(MatrixMap([[1, 0, 0]], FinDim(3), FinDim(1)), B3)


def test_permutations():
    assert Permutation.theta(3).images == (3, 1, 2)
    assert Permutation.theta(2) == Permutation((2, 1))
    assert len(Permutation.all(3)) == 6
    assert Permutation.identity(3).label() == "id"
    assert Permutation((2, 3, 1)).label() == "231"
    with pytest.raises(ValueError):
        Permutation((1, 1))


@given(vecs(2), vecs(2))
def test_tensor_is_bilinear(x, y):
    A = TensorOp([2, 2], 1, {(1, 2, 1): 2, (2, 1, 1): -1})
    assert A.evaluate([x + y, y]) == A.evaluate([x, y]) + A.evaluate([y, y])
