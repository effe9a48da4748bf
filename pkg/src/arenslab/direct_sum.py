"""Finite direct sums of finite-dimensional lattices.

Elements of a sum are stored flat (a :class:`Vec` over all coordinates), so
every operator and extension routine treats a sum like R^n.  The block view
:class:`DirectSumElem` and the maps ``psi``/``gamma`` between the sum, its
dual, its bidual and the blockwise duals/biduals are explicit functions, each
computed from its defining formula and read off on bases.

With finitely many components the exponent ``p`` has no effect on the order;
it is kept so the space description round-trips.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainMismatch
from .lattice import ZERO, FinDim, Vec, q
from .operators import MatrixMap, compose_hom


@dataclass(frozen=True)
class DirectSumSpace:
    mode: str
    components: tuple
    p: Fraction = Fraction(2)

    def __post_init__(self):
        if self.mode not in ("p", "zero"):
            raise ValueError(f"mode must be 'p' or 'zero', got {self.mode!r}")
        comps = tuple(int(n) for n in self.components)
        if not comps or any(n < 1 for n in comps):
            raise ValueError("components must be positive dimensions")
        object.__setattr__(self, "components", comps)
        p = q(self.p)
        if self.mode == "p" and p <= 1:
            raise ValueError("p must exceed 1")
        object.__setattr__(self, "p", p)

    @property
    def dim(self) -> int:
        return sum(self.components)

    @property
    def count(self) -> int:
        return len(self.components)

    def offset(self, k: int) -> int:
        self._check_index(k)
        return sum(self.components[: k - 1])

    def component(self, k: int) -> FinDim:
        self._check_index(k)
        return FinDim(self.components[k - 1])

    def contains(self, x) -> bool:
        return isinstance(x, Vec) and len(x) == self.dim

    def zero(self) -> Vec:
        return Vec.zeros(self.dim)

    def _check_index(self, k):
        if not 1 <= k <= len(self.components):
            raise DomainMismatch(f"component {k} outside 1..{len(self.components)}")

    def __str__(self):
        inner = " + ".join(f"R^{n}" for n in self.components)
        return f"({inner})_{self.p}" if self.mode == "p" else f"({inner})_0"


@dataclass(frozen=True)
class DirectSumElem:
    """Block view: component index -> vector.  Missing components are zero."""

    space: DirectSumSpace
    blocks: tuple

    def __post_init__(self):
        clean = {}
        for k, v in dict(self.blocks).items():
            comp = self.space.component(k)
            if not comp.contains(v):
                raise DomainMismatch(f"block {k} must have length {comp.n}")
            if not v.is_zero():
                clean[k] = v
        object.__setattr__(self, "blocks", tuple(sorted(clean.items())))

    @classmethod
    def from_flat(cls, space: DirectSumSpace, x: Vec) -> "DirectSumElem":
        if not space.contains(x):
            raise DomainMismatch(f"{x!r} does not belong to {space}")
        blocks = {}
        for k, n in enumerate(space.components, 1):
            o = space.offset(k)
            blocks[k] = Vec(x.coords[o : o + n])
        return cls(space, tuple(blocks.items()))

    def block(self, k: int) -> Vec:
        return dict(self.blocks).get(k, Vec.zeros(self.space.components[k - 1]))

    def to_flat(self) -> Vec:
        coords = []
        for k in range(1, self.space.count + 1):
            coords.extend(self.block(k).coords)
        return Vec(tuple(coords))

    def _lift(self, fn):
        return DirectSumElem.from_flat(self.space, fn(self.to_flat()))

    def __add__(self, other):
        return self._lift(lambda x: x + other.to_flat())

    def __sub__(self, other):
        return self._lift(lambda x: x - other.to_flat())

    def sup(self, other):
        return self._lift(lambda x: x.sup(other.to_flat()))

    def inf(self, other):
        return self._lift(lambda x: x.inf(other.to_flat()))

    def abs(self):
        return self._lift(Vec.abs)

    def is_positive(self):
        return self.to_flat().is_positive()


def embed_component(space: DirectSumSpace, k: int, y: Vec) -> DirectSumElem:
    return DirectSumElem(space, ((k, y),))


def project_component(space: DirectSumSpace, k: int, z) -> Vec:
    if isinstance(z, Vec):
        z = DirectSumElem.from_flat(space, z)
    if z.space != space:
        raise DomainMismatch("element belongs to a different sum")
    return z.block(k)


def injection_map(space: DirectSumSpace, k: int) -> MatrixMap:
    comp = space.component(k)
    o = space.offset(k)
    rows = tuple(
        Vec.unit(comp.n, j - o) if o < j <= o + comp.n else Vec.zeros(comp.n)
        for j in range(1, space.dim + 1)
    )
    return MatrixMap(rows, comp, space)


def projection_map(space: DirectSumSpace, k: int) -> MatrixMap:
    comp = space.component(k)
    o = space.offset(k)
    return MatrixMap(tuple(Vec.unit(space.dim, o + i) for i in range(1, comp.n + 1)), space, comp)


def band_project(space, band) -> MatrixMap:
    """Projection onto the band spanned by the coordinates in ``band`` (1-based)."""
    band = set(band)
    n = space.dim
    if not band <= set(range(1, n + 1)):
        raise DomainMismatch(f"band {sorted(band)} not within 1..{n}")
    return MatrixMap(
        tuple(Vec.unit(n, i) if i in band else Vec.zeros(n) for i in range(1, n + 1)), space, space
    )


def component_operator(op, k: int):
    """``pi_k o A`` for an operator into a direct sum."""
    return compose_hom(projection_map(op.codomain, k), op)


# -- psi and gamma ---------------------------------------------------------
#
# Representations used below (all components finite-dimensional):
#   sum primal / sum dual / sum bidual      -> flat Vec over the sum's coordinates
#   blockwise duals / blockwise biduals     -> DirectSumElem
#   functionals on the blockwise duals      -> flat Vec of their values on the
#                                              block unit vectors


def _block_units(space):
    for k, n in enumerate(space.components, 1):
        for i in range(1, n + 1):
            yield DirectSumElem(space, ((k, Vec.unit(n, i)),))


def _blockwise_pairing(duals: DirectSumElem, primal: DirectSumElem) -> Fraction:
    return sum((duals.block(k).dot(primal.block(k)) for k in range(1, duals.space.count + 1)), ZERO)


def psi1(space, duals: DirectSumElem) -> Vec:
    """Blockwise duals -> functional on the sum: ``(y_n) -> sum y*_n(y_n)``."""
    return Vec(tuple(
        _blockwise_pairing(duals, DirectSumElem.from_flat(space, Vec.unit(space.dim, j)))
        for j in range(1, space.dim + 1)
    ))


def psi1_inv(space, f: Vec) -> DirectSumElem:
    """Functional on the sum -> its restrictions ``f o i_n`` to the components."""
    blocks = {}
    for k in range(1, space.count + 1):
        inj = injection_map(space, k)
        n = space.components[k - 1]
        blocks[k] = Vec(tuple(f.dot(inj.apply(Vec.unit(n, i))) for i in range(1, n + 1)))
    return DirectSumElem(space, tuple(blocks.items()))


def psi2(space, biduals: DirectSumElem) -> Vec:
    """Blockwise biduals -> functional on blockwise duals: ``(y*_n) -> sum y**_n(y*_n)``."""
    return Vec(tuple(_blockwise_pairing(biduals, u) for u in _block_units(space)))


def psi2_inv(space, phi: Vec) -> DirectSumElem:
    """Functional on blockwise duals -> ``(phi o i_n)_n``."""
    blocks = {}
    units = list(_block_units(space))
    pos = 0
    for k, n in enumerate(space.components, 1):
        blocks[k] = Vec(phi.coords[pos : pos + n])
        pos += n
    assert len(units) == pos
    return DirectSumElem(space, tuple(blocks.items()))


def psi3(space, phi: Vec) -> Vec:
    """``(psi1^{-1})*``: functional on blockwise duals -> sum bidual, ``X(f) = phi(psi1^{-1} f)``."""
    out = []
    for j in range(1, space.dim + 1):
        blocks = psi1_inv(space, Vec.unit(space.dim, j))
        out.append(_apply_block_functional(space, phi, blocks))
    return Vec(tuple(out))


def psi3_inv(space, x: Vec) -> Vec:
    """``psi1*``: sum bidual -> functional on blockwise duals, ``(y*_n) -> X(psi1(y*_n))``."""
    return Vec(tuple(x.dot(psi1(space, u)) for u in _block_units(space)))


def _apply_block_functional(space, phi: Vec, duals: DirectSumElem) -> Fraction:
    return sum(
        (c * _blockwise_pairing(duals, u) for c, u in zip(phi.coords, _block_units(space))), ZERO
    )


def psi(space, x: Vec) -> DirectSumElem:
    """Sum bidual -> blockwise biduals, ``psi2^{-1} o psi3^{-1}``."""
    return psi2_inv(space, psi3_inv(space, x))


def psi_inv(space, blocks: DirectSumElem) -> Vec:
    return psi3(space, psi2(space, blocks))


_PSI = {
    "psi1": psi1, "psi1_inv": psi1_inv, "psi2": psi2, "psi2_inv": psi2_inv,
    "psi3": psi3, "psi3_inv": psi3_inv, "psi": psi, "psi_inv": psi_inv,
}


def psi_maps(direction: str, x, space: DirectSumSpace):
    if space.mode != "p":
        raise DomainMismatch("psi maps belong to p-sums; use gamma_maps for zero sums")
    return _PSI[direction](space, x)


def gamma_maps(direction: str, x, space: DirectSumSpace):
    """The zero-sum analogues: the same defining formulas with the 1/infinity pairing."""
    if space.mode != "zero":
        raise DomainMismatch("gamma maps belong to zero sums")
    return _PSI[direction.replace("gamma", "psi")](space, x)


def sum_iso(space):
    return psi_maps if space.mode == "p" else gamma_maps


def transport_check(op, rho, tuples, ext_factory):
    """Check ``psi(AR(A)(x'')) = (AR(pi_n o A)(x''))_n`` and the modulus step.

    ``ext_factory(op, rho)`` builds the extension evaluator (normally
    :func:`arenslab.engine.arens_extend`).  Returns ``(ok, witness, cases)``.
    """
    space = op.codomain
    iso = sum_iso(space)
    name = "psi" if space.mode == "p" else "gamma"
    whole = ext_factory(op, rho)
    parts = [ext_factory(component_operator(op, k), rho) for k in range(1, space.count + 1)]
    cases = 0
    for args in tuples:
        cases += 1
        left = iso(name, whole(args), space)
        right = DirectSumElem(space, tuple((k, e(args)) for k, e in enumerate(parts, 1)))
        if left != right:
            return False, ("blockwise", args), cases
        abs_args = [x.abs() for x in args]
        mod_left = iso(name, whole(abs_args), space)
        mod_right = DirectSumElem(space, tuple((k, e(args).abs()) for k, e in enumerate(parts, 1)))
        if mod_left != mod_right or left.abs() != mod_left:
            return False, ("modulus", args), cases
    return True, None, cases
