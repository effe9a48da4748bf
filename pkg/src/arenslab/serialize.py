"""JSON forms of rationals, elements and operators.

Rationals travel as ``[numerator, denominator]``; nothing is ever written in
decimal.  Element forms are read relative to a space and a role ("primal",
"dual" or "bidual"), because e.g. an eventually constant sequence is a primal
element of the c-model but a dual element of the l_1-model.
"""
from __future__ import annotations

from fractions import Fraction

from . import bidual as bd
from .direct_sum import DirectSumElem, DirectSumSpace
from .errors import ScenarioError
from .lattice import EvConstSeq, FinDim, FinSupSeq, SeqC, SeqL1, Vec, is_findim_like, q
from .operators import Permutation, TensorOp


def rational_to_json(x: Fraction) -> list:
    return [x.numerator, x.denominator]


def to_json(obj):
    """Serialize anything a check can put in a witness or detail record."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return rational_to_json(obj)
    if isinstance(obj, Vec):
        return [rational_to_json(c) for c in obj.coords]
    if isinstance(obj, FinSupSeq):
        return {"finsup": [[i, v.numerator, v.denominator] for i, v in obj.items]}
    if isinstance(obj, EvConstSeq):
        return {"prefix": [rational_to_json(c) for c in obj.prefix], "tail": rational_to_json(obj.tail)}
    if isinstance(obj, bd.CDualElem):
        return {"c_dual": {"b": rational_to_json(obj.b), "a": to_json(obj.a)["finsup"]}}
    if isinstance(obj, bd.L1BidualElem):
        return {"l1_bidual": {"a": to_json(obj.a)["finsup"], "mu": rational_to_json(obj.mu)}}
    if isinstance(obj, bd.CBidualElem):
        t = to_json(obj.t)
        return {"c_bidual": {"beta": rational_to_json(obj.beta), "prefix": t["prefix"], "tail": t["tail"]}}
    if isinstance(obj, DirectSumElem):
        return {"blocks": [[k, to_json(v)] for k, v in obj.blocks]}
    if isinstance(obj, Permutation):
        return obj.label()
    if isinstance(obj, TensorOp):
        return tensor_to_json(obj)
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else "/".join(map(str, k)): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    return str(obj)


def tensor_to_json(op: TensorOp) -> dict:
    """The scenario form of a tensor, so a witness can be pasted back in."""
    cod = op.codomain.n if isinstance(op.codomain, FinDim) else space_to_json(op.codomain)
    entries = [list(k) + [v.numerator, v.denominator] for k, v in op.entries.items()]
    return {"kind": "tensor", "dims": list(op.dims), "codomain": cod, "entries": entries}


def space_to_json(space) -> dict:
    if isinstance(space, DirectSumSpace):
        return {"kind": "direct_sum", "mode": space.mode, "p": rational_to_json(space.p),
                "components": list(space.components)}
    if isinstance(space, FinDim):
        return {"kind": "findim", "n": space.n}
    if isinstance(space, SeqL1):
        return {"kind": "l1"}
    return {"kind": "c"}


# -- reading ---------------------------------------------------------------


def read_rational(value, where: str) -> Fraction:
    try:
        return q(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(f"expected a rational [num, den], got {value!r} ({exc})", where)


def _read_finsup(items, where) -> FinSupSeq:
    if not isinstance(items, list):
        raise ScenarioError("expected a list of [index, num, den]", where)
    out = []
    for k, it in enumerate(items):
        if not (isinstance(it, list) and len(it) == 3 and all(isinstance(v, int) for v in it)):
            raise ScenarioError("expected [index, num, den]", f"{where}[{k}]")
        if it[2] == 0:
            raise ScenarioError("zero denominator", f"{where}[{k}]")
        out.append((it[0], Fraction(it[1], it[2])))
    try:
        return FinSupSeq(tuple(out))
    except ValueError as exc:
        raise ScenarioError(str(exc), where)


def _read_evconst(obj, where) -> EvConstSeq:
    if not isinstance(obj, dict) or "tail" not in obj:
        raise ScenarioError('expected {"prefix": [...], "tail": r}', where)
    prefix = [read_rational(v, f"{where}.prefix[{i}]") for i, v in enumerate(obj.get("prefix", []))]
    return EvConstSeq(tuple(prefix), read_rational(obj["tail"], f"{where}.tail"))


def _read_vec(obj, n, where) -> Vec:
    if not isinstance(obj, list) or len(obj) != n:
        raise ScenarioError(f"expected a list of {n} rationals", where)
    return Vec(tuple(read_rational(v, f"{where}[{i}]") for i, v in enumerate(obj)))


def read_element(obj, space, role: str, where: str):
    """Parse ``obj`` as a primal/dual/bidual element of ``space``."""
    if isinstance(obj, dict) and "J" in obj:
        if role != "bidual":
            raise ScenarioError("J(...) only makes sense for bidual arguments", where)
        return bd.embed_J(read_element(obj["J"], space, "primal", f"{where}.J"), space)
    if is_findim_like(space):
        return _read_vec(obj, space.dim, where)
    if isinstance(space, SeqL1):
        if role == "primal":
            if not isinstance(obj, dict) or "finsup" not in obj:
                raise ScenarioError('expected {"finsup": [[index, num, den], ...]}', where)
            return _read_finsup(obj["finsup"], f"{where}.finsup")
        if role == "dual":
            return _read_evconst(obj, where)
        if obj == "L":
            return bd.GEN_LIMIT
        if not isinstance(obj, dict) or "l1_bidual" not in obj:
            raise ScenarioError('expected {"l1_bidual": {"a": [...], "mu": r}} or "L"', where)
        body = obj["l1_bidual"]
        return bd.L1BidualElem(
            _read_finsup(body.get("a", []), f"{where}.l1_bidual.a"),
            read_rational(body.get("mu", 0), f"{where}.l1_bidual.mu"),
        )
    if isinstance(space, SeqC):
        if role == "primal":
            return _read_evconst(obj, where)
        if role == "dual":
            if obj == "lim":
                return bd.LIMIT_FUNCTIONAL
            if not isinstance(obj, dict) or "c_dual" not in obj:
                raise ScenarioError('expected {"c_dual": {"b": r, "a": [...]}} or "lim"', where)
            body = obj["c_dual"]
            return bd.CDualElem(
                read_rational(body.get("b", 0), f"{where}.c_dual.b"),
                _read_finsup(body.get("a", []), f"{where}.c_dual.a"),
            )
        if not isinstance(obj, dict) or "c_bidual" not in obj:
            raise ScenarioError('expected {"c_bidual": {"beta": r, "prefix": [...], "tail": r}}', where)
        body = obj["c_bidual"]
        return bd.CBidualElem(
            read_rational(body.get("beta", 0), f"{where}.c_bidual.beta"),
            _read_evconst({"prefix": body.get("prefix", []), "tail": body.get("tail", 0)}, f"{where}.c_bidual"),
        )
    raise ScenarioError(f"unknown space {space!r}", where)
