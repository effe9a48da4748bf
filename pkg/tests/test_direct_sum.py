import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arenslab import engine, sampling
from arenslab.direct_sum import (
    DirectSumElem,
    DirectSumSpace,
    band_project,
    component_operator,
    embed_component,
    gamma_maps,
    project_component,
    psi,
    psi_inv,
    psi_maps,
    transport_check,
)
from arenslab.errors import DomainMismatch
from arenslab.lattice import Vec
from arenslab.operators import Permutation, TensorOp
from strategies import rationals

S = DirectSumSpace("p", (1, 2), 2)
R1R1 = DirectSumSpace("p", (1, 1), 3)


def blocks_by_slicing(space, x):
    # oracle: with standard bases every identification is a reshaping
    out, pos = {}, 0
    for k, n in enumerate(space.components, 1):
        out[k] = Vec(x.coords[pos:pos + n])
        pos += n
    return DirectSumElem(space, tuple(out.items()))


def test_injection_example():
    z = embed_component(S, 2, Vec.of(1, -1))
    assert z.blocks == ((2, Vec.of(1, -1)),)
    assert z.to_flat() == Vec.of(0, 1, -1)
    assert project_component(S, 2, z.to_flat()) == Vec.of(1, -1)


def test_psi_example():
    assert psi(R1R1, Vec.of(1, 2)) == DirectSumElem(R1R1, ((1, Vec.of(1)), (2, Vec.of(2))))


def test_space_validation():
    with pytest.raises(ValueError):
        DirectSumSpace("p", (1, 2), 1)
    with pytest.raises(ValueError):
        DirectSumSpace("q", (1,))
    with pytest.raises(DomainMismatch):
        S.component(3)
    with pytest.raises(DomainMismatch):
        gamma_maps("gamma", Vec.of(1, 2, 3), S)
    with pytest.raises(DomainMismatch):
        psi_maps("psi", Vec.of(1, 2), DirectSumSpace("zero", (1, 1)))


@given(st.lists(rationals, min_size=3, max_size=3))
def test_psi_round_trip_and_oracle(cs):
    x = Vec(tuple(cs))
    assert psi(S, x) == blocks_by_slicing(S, x)
    assert psi_inv(S, psi(S, x)) == x


@given(st.lists(rationals, min_size=4, max_size=4))
def test_gamma_round_trip(cs):
    Z = DirectSumSpace("zero", (1, 1, 2))
    x = Vec(tuple(cs))
    assert gamma_maps("gamma_inv", gamma_maps("gamma", x, Z), Z) == x
    assert gamma_maps("gamma", x, Z) == blocks_by_slicing(Z, x)


@given(st.lists(rationals, min_size=3, max_size=3), st.lists(rationals, min_size=3, max_size=3))
def test_block_view_is_a_lattice_map(a, b):
    x, y = Vec(tuple(a)), Vec(tuple(b))
    bx, by = DirectSumElem.from_flat(S, x), DirectSumElem.from_flat(S, y)
    assert bx.sup(by).to_flat() == x.sup(y)
    assert bx.abs().to_flat() == x.abs()


def test_transport_for_blockwise_products():
    # x1 y1 into the first component and x2 y2 into the second
    A = TensorOp([2, 2], R1R1, {(1, 1, 1): 1, (2, 2, 2): 1})
    tuples = sampling.grid_tuples(A.domain)
    for rho in Permutation.all(2):
        ok, witness, cases = transport_check(A, rho, tuples, engine.arens_extend)
        assert ok, witness
        assert cases == len(tuples)


def test_transport_zero_sum_three_slots():
    Z = DirectSumSpace("zero", (1, 1, 1))
    A = TensorOp([2, 2, 2], Z, {(1, 1, 1, 1): 1, (2, 2, 2, 2): 2, (1, 2, 1, 3): 4})
    tuples = sampling.grid_tuples(A.domain)[::5]
    for rho in (Permutation.identity(3), Permutation.theta(3)):
        ok, witness, _ = transport_check(A, rho, tuples, engine.arens_extend)
        assert ok, witness


def test_component_operator():
    A = TensorOp([2, 2], R1R1, {(1, 1, 1): 1, (2, 2, 2): 5})
    second = component_operator(A, 2)
    assert second.evaluate([Vec.of(0, 1), Vec.of(0, 2)]) == Vec.of(10)


def test_band_projection():
    P = band_project(S, [1, 3])
    assert P.apply(Vec.of(4, -5, 6)) == Vec.of(4, 0, 6)
    assert P.is_hom()
    for e in itertools.islice(sampling.bidual_grid(S), 6):
        assert P.apply(P.apply(e)) == P.apply(e)
    with pytest.raises(DomainMismatch):
        band_project(S, [4])
