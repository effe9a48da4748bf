"""Hypothesis strategies for model elements."""
from fractions import Fraction

from hypothesis import strategies as st

from arenslab import bidual as bd
from arenslab.lattice import EvConstSeq, FinSupSeq, SeqC, SeqL1, Vec, is_findim_like

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)
small_index = st.integers(min_value=1, max_value=6)


def vecs(n):
    return st.lists(rationals, min_size=n, max_size=n).map(lambda cs: Vec(tuple(cs)))


finsups = st.dictionaries(small_index, rationals, max_size=4).map(FinSupSeq.from_dict)
evconsts = st.builds(
    lambda prefix, tail: EvConstSeq(tuple(prefix), tail),
    st.lists(rationals, max_size=5),
    rationals,
)
c_duals = st.builds(bd.CDualElem, rationals, finsups)
l1_biduals = st.builds(bd.L1BidualElem, finsups, rationals)
c_biduals = st.builds(bd.CBidualElem, rationals, evconsts)


def primal(space):
    if is_findim_like(space):
        return vecs(space.dim)
    return finsups if isinstance(space, SeqL1) else evconsts


def dual(space):
    if is_findim_like(space):
        return vecs(space.dim)
    return evconsts if isinstance(space, SeqL1) else c_duals


def bidual(space):
    if is_findim_like(space):
        return vecs(space.dim)
    if isinstance(space, SeqL1):
        return l1_biduals
    if isinstance(space, SeqC):
        return c_biduals
    raise TypeError(space)


def bidual_tuple(op):
    return st.tuples(*(bidual(s) for s in op.domain))


positive_rationals = st.fractions(min_value=Fraction(1, 4), max_value=5, max_denominator=4)
