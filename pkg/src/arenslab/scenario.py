"""Scenario files: spaces, named operators and a list of checks.

A scenario is a JSON object::

    {
      "name": "irregularity",
      "seed": 7,
      "samples": 50,
      "spaces": [{"name": "X", "kind": "l1"}],
      "operators": {"B": {"kind": "upper_triangular"}},
      "checks": [{"check": "evaluate", "operator": "B", "args": ["L", "L"]}]
    }

Spaces may also be given as an object keyed by name.  Wherever a space is
expected, a name, one of the built-in names ``l1``, ``c``, ``R``, ``R^n``, or an
inline space object may be used.  Schema errors carry a dotted path to the
offending value; JSON syntax errors carry line and column.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .direct_sum import DirectSumSpace, band_project, projection_map
from .errors import ScenarioError, WorkbenchError
from .lattice import SCALARS, FinDim, SeqC, SeqL1
from .operators import (
    CoordProduct,
    FiniteRankProduct,
    FunctionalMap,
    HomComposite,
    MatrixMap,
    Permutation,
    TensorOp,
    UpperTriangular,
    WeightedDiagonal,
)
from .serialize import read_element, read_rational

DEFAULT_SEED = 0
DEFAULT_SAMPLES = 100

SPACE_KINDS = {
    "findim": "R^n with the coordinatewise order; field n",
    "l1": "finitely supported sequences (l_1-model); dual = eventually constant sequences",
    "c": "eventually constant sequences (c-model); dual = b*lim + finitely supported",
    "direct_sum": "finite p-sum or zero-sum of R^n blocks; fields mode (p|zero), components, p",
}

OPERATOR_KINDS = {
    "tensor": "rational tensor on R^n spaces (nonzero entries only); fields dims, codomain, entries [[i1..im, j, num, den]]",
    "coord_product": "coordinatewise product in one sequence or R^n model; fields space, arity",
    "upper_triangular": "B(x, y) = sum_{i<=j} x_i y_j on l_1 x l_1 (not a multimorphism)",
    "weighted_diagonal": "sum_i w_i x_1i ... x_mi on l_1^m; fields weights {prefix, tail}, arity",
    "finite_rank": "phi_1(x_1) ... phi_m(x_m) v; fields functionals, vector, domain, codomain",
    "hom_composite": "u o A for a linear map u; fields map, inner",
}

MAP_KINDS = {
    "matrix": "fields rows, domain, codomain",
    "functional": "fields phi, domain (map into the scalars)",
    "coords": "coordinate projection; fields space, coords",
    "component": "projection of a direct sum onto a block; fields space, component",
    "band": "band projection; fields space, band (1-based coordinates)",
}

CHECK_KINDS = {
    "evaluate": "AR^rho(A)(args) by bar lifts, iterated limits and (where it applies) the adjoint chain",
    "compare_all": "all m! extensions agree on the generator grid",
    "main_theorem": "extensions coincide and satisfy |AR(x'')| = AR(|x''|) on grid, sign patterns and random tuples",
    "star_chain": "AR^theta(A) equals the literal iterated-adjoint chain",
    "star_chain_random": "the same on seeded random tensors",
    "props": "extension identity, positivity transfer, naturality and sign expansion for each rho",
    "dg_oracle": "iterated limits agree with the bar-lift evaluator",
    "hom_composite": "x'' -> AR(x'')(y') is a multimorphism for a homomorphism y'",
    "modulus_identity": "|AR(x'')|(y') = AR(|x''|)(y') for y' in the span of homomorphisms",
    "oc_restriction": "multimorphism identity on tuples without singular parts",
    "kusraev": "multimorphism tensors factor as products of functionals",
    "multimorphism": "certify or refute |A(x)| = A(|x|)",
    "riesz_hom": "certify or refute |Tx| = T|x| for a matrix",
    "finite_rank": "sublattice closure, atoms and the reduction A = I^-1 o (I o A)",
    "transport": "blockwise transport of extensions into a direct sum",
    "band_projection": "composing with a band projection preserves the extension properties",
}

EXPECTATIONS = ("pass", "fail", "not-representable")


@dataclass
class CheckSpec:
    index: int
    kind: str
    params: dict
    where: str

    @property
    def expect(self) -> str:
        return self.params.get("expect", "pass")

    @property
    def label(self) -> str:
        return self.params.get("label", f"{self.kind}:{self.params.get('operator', '-')}")


@dataclass
class Scenario:
    name: str
    seed: int
    samples: int
    spaces: dict
    operators: dict
    checks: list
    source: dict = field(repr=False, default_factory=dict)

    def operator(self, ref, where):
        if isinstance(ref, str):
            if ref not in self.operators:
                raise ScenarioError(f"unknown operator {ref!r}", where)
            return self.operators[ref]
        return build_operator(ref, self, where)

    def space(self, ref, where):
        return resolve_space(ref, self.spaces, where)


# -- loading -----------------------------------------------------------------


def bundled_names() -> list:
    root = resources.files("arenslab") / "scenarios"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def read_scenario_text(path) -> tuple:
    """Return ``(text, display_name)``; bare names fall back to the bundled corpus."""
    p = Path(path)
    if p.is_file():
        return p.read_text(encoding="utf-8"), str(p)
    name = p.name if p.name.endswith(".json") else p.name + ".json"
    if p.parent == Path(".") and name in bundled_names():
        return (resources.files("arenslab") / "scenarios" / name).read_text(encoding="utf-8"), name
    raise ScenarioError(f"no such scenario file: {path}")


def parse_json(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(exc.msg, f"line {exc.lineno} column {exc.colno}")
    if not isinstance(data, dict):
        raise ScenarioError("a scenario must be a JSON object", "line 1 column 1")
    return data


def load_scenario(path) -> Scenario:
    text, _ = read_scenario_text(path)
    return parse_scenario(parse_json(text))


def _int_field(data, key, default, where):
    value = data.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ScenarioError(f"{key} must be a non-negative integer", f"{where}{key}")
    return value


def parse_scenario(data: dict) -> Scenario:
    unknown = set(data) - {"name", "description", "seed", "samples", "spaces", "operators", "checks"}
    if unknown:
        raise ScenarioError(f"unknown top-level keys {sorted(unknown)}", "$")
    sc = Scenario(
        name=str(data.get("name", "scenario")),
        seed=_int_field(data, "seed", DEFAULT_SEED, ""),
        samples=_int_field(data, "samples", DEFAULT_SAMPLES, ""),
        spaces={},
        operators={},
        checks=[],
        source=data,
    )
    spaces = data.get("spaces", [])
    if isinstance(spaces, dict):
        spaces = [{"name": k, **v} if isinstance(v, dict) else v for k, v in spaces.items()]
    if not isinstance(spaces, list):
        raise ScenarioError("spaces must be a list or an object", "spaces")
    for i, spec in enumerate(spaces):
        where = f"spaces[{i}]"
        if not isinstance(spec, dict) or not isinstance(spec.get("name"), str):
            raise ScenarioError("each space needs a string name", where)
        if spec["name"] in sc.spaces:
            raise ScenarioError(f"duplicate space {spec['name']!r}", where)
        sc.spaces[spec["name"]] = build_space(spec, sc.spaces, where)
    ops = data.get("operators", {})
    if not isinstance(ops, dict):
        raise ScenarioError("operators must be an object keyed by name", "operators")
    for name, spec in ops.items():
        sc.operators[name] = build_operator(spec, sc, f"operators.{name}")
    checks = data.get("checks", [])
    if not isinstance(checks, list) or not checks:
        raise ScenarioError("checks must be a non-empty list", "checks")
    for i, spec in enumerate(checks):
        where = f"checks[{i}]"
        if not isinstance(spec, dict) or spec.get("check") not in CHECK_KINDS:
            got = spec.get("check") if isinstance(spec, dict) else spec
            raise ScenarioError(f"unknown check kind {got!r}", where)
        if spec.get("expect", "pass") not in EXPECTATIONS:
            raise ScenarioError(f"expect must be one of {EXPECTATIONS}", f"{where}.expect")
        if "operator" in spec:
            sc.operator(spec["operator"], f"{where}.operator")
        sc.checks.append(CheckSpec(i, spec["check"], spec, where))
    return sc


# -- spaces ------------------------------------------------------------------

_RN = re.compile(r"^R\^(\d+)$")


def build_space(spec: dict, known: dict, where: str):
    kind = spec.get("kind")
    try:
        if kind == "findim":
            n = spec.get("n")
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise ScenarioError("n must be a positive integer", f"{where}.n")
            return FinDim(n)
        if kind == "l1":
            return SeqL1()
        if kind == "c":
            return SeqC()
        if kind == "direct_sum":
            comps = spec.get("components")
            if not isinstance(comps, list) or not all(isinstance(n, int) for n in comps):
                raise ScenarioError("components must be a list of dimensions", f"{where}.components")
            p = read_rational(spec.get("p", 2), f"{where}.p")
            return DirectSumSpace(spec.get("mode", "p"), tuple(comps), p)
    except ValueError as exc:
        raise ScenarioError(str(exc), where)
    raise ScenarioError(f"unknown space kind {kind!r}", f"{where}.kind")


def resolve_space(ref, known: dict, where: str):
    if isinstance(ref, dict):
        return build_space(ref, known, where)
    if not isinstance(ref, str):
        raise ScenarioError("expected a space name or object", where)
    if ref in known:
        return known[ref]
    if ref == "l1":
        return SeqL1()
    if ref == "c":
        return SeqC()
    if ref == "R":
        return SCALARS
    m = _RN.match(ref)
    if m and int(m.group(1)) > 0:
        return FinDim(int(m.group(1)))
    raise ScenarioError(f"unknown space {ref!r}", where)


# -- maps and operators -------------------------------------------------------


def build_map(spec, sc: Scenario, where: str):
    if not isinstance(spec, dict):
        raise ScenarioError("expected a map object", where)
    kind = spec.get("kind")
    try:
        if kind == "matrix":
            dom = sc.space(spec.get("domain"), f"{where}.domain")
            cod = sc.space(spec.get("codomain"), f"{where}.codomain")
            rows = spec.get("rows")
            if not isinstance(rows, list):
                raise ScenarioError("rows must be a list", f"{where}.rows")
            rows = tuple(
                tuple(read_rational(v, f"{where}.rows[{i}][{j}]") for j, v in enumerate(r))
                for i, r in enumerate(rows)
            )
            return MatrixMap(rows, dom, cod)
        if kind == "functional":
            dom = sc.space(spec.get("domain"), f"{where}.domain")
            return FunctionalMap(read_element(spec.get("phi"), dom, "dual", f"{where}.phi"), dom)
        if kind == "coords":
            space = sc.space(spec.get("space"), f"{where}.space")
            return MatrixMap.projection(space, _int_list(spec.get("coords"), f"{where}.coords"))
        if kind == "component":
            space = sc.space(spec.get("space"), f"{where}.space")
            if not isinstance(space, DirectSumSpace):
                raise ScenarioError("component maps need a direct sum", f"{where}.space")
            return projection_map(space, spec.get("component", 1))
        if kind == "band":
            space = sc.space(spec.get("space"), f"{where}.space")
            return band_project(space, _int_list(spec.get("band"), f"{where}.band"))
    except WorkbenchError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(str(exc), where)
    raise ScenarioError(f"unknown map kind {kind!r}", f"{where}.kind")


def _int_list(value, where):
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ScenarioError("expected a list of integers", where)
    return value


def _arity(spec, where, default=2):
    m = spec.get("arity", default)
    if isinstance(m, bool) or not isinstance(m, int) or not 1 <= m <= 4:
        raise ScenarioError("arity must be an integer in 1..4", f"{where}.arity")
    return m


def build_operator(spec, sc: Scenario, where: str):
    if not isinstance(spec, dict):
        raise ScenarioError("expected an operator object", where)
    kind = spec.get("kind")
    try:
        if kind == "tensor":
            dims = _int_list(spec.get("dims"), f"{where}.dims")
            cod = spec.get("codomain", 1)
            cod = cod if isinstance(cod, int) and not isinstance(cod, bool) else sc.space(cod, f"{where}.codomain")
            entries = {}
            for k, e in enumerate(spec.get("entries", [])):
                if not (isinstance(e, list) and len(e) == len(dims) + 3 and all(isinstance(v, int) for v in e)):
                    raise ScenarioError(f"expected [i_1..i_{len(dims)}, j, num, den]", f"{where}.entries[{k}]")
                key = tuple(e[: len(dims) + 1])
                entries[key] = entries.get(key, 0) + read_rational(e[-2:], f"{where}.entries[{k}]")
            return TensorOp(dims, cod, entries)
        if kind == "coord_product":
            return CoordProduct(sc.space(spec.get("space", "l1"), f"{where}.space"), _arity(spec, where))
        if kind == "upper_triangular":
            return UpperTriangular()
        if kind == "weighted_diagonal":
            w = read_element(spec.get("weights"), SeqL1(), "dual", f"{where}.weights")
            return WeightedDiagonal(w, _arity(spec, where))
        if kind == "finite_rank":
            domain_refs = spec.get("domain")
            if not isinstance(domain_refs, list) or not domain_refs:
                raise ScenarioError("domain must be a non-empty list of spaces", f"{where}.domain")
            domain = [sc.space(r, f"{where}.domain[{i}]") for i, r in enumerate(domain_refs)]
            cod = sc.space(spec.get("codomain", "R"), f"{where}.codomain")
            phis = spec.get("functionals")
            if not isinstance(phis, list) or len(phis) != len(domain):
                raise ScenarioError("one functional per domain slot", f"{where}.functionals")
            funcs = [read_element(p, s, "dual", f"{where}.functionals[{i}]") for i, (p, s) in enumerate(zip(phis, domain))]
            vec = read_element(spec.get("vector", [[1, 1]]), cod, "primal", f"{where}.vector")
            return FiniteRankProduct(funcs, vec, domain, cod)
        if kind == "hom_composite":
            inner = sc.operator(spec.get("inner"), f"{where}.inner")
            return HomComposite(build_map(spec.get("map"), sc, f"{where}.map"), inner)
    except WorkbenchError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(str(exc), where)
    raise ScenarioError(f"unknown operator kind {kind!r}", f"{where}.kind")


# -- check parameters ----------------------------------------------------------


def read_perms(value, m: int, where: str) -> list:
    """``"all"``, ``"id"``, ``"theta"``, a digit label, a list of images, or a list of those."""
    if value == "all":
        return Permutation.all(m)
    items = value if isinstance(value, list) and value and not all(isinstance(v, int) for v in value) else [value]
    out = []
    for k, v in enumerate(items):
        try:
            if v == "id":
                out.append(Permutation.identity(m))
            elif v == "theta":
                out.append(Permutation.theta(m))
            elif isinstance(v, str) and v.isdigit():
                out.append(Permutation(tuple(int(c) for c in v)))
            elif isinstance(v, list):
                out.append(Permutation(tuple(v)))
            else:
                raise ValueError(f"unrecognized permutation {v!r}")
        except (ValueError, TypeError) as exc:
            raise ScenarioError(str(exc), f"{where}[{k}]")
        if out[-1].m != m:
            raise ScenarioError(f"permutation {v!r} has the wrong size (arity {m})", f"{where}[{k}]")
    return out


def read_args(values, op, where: str) -> tuple:
    if not isinstance(values, list) or len(values) != op.arity:
        raise ScenarioError(f"expected {op.arity} bidual arguments", where)
    return tuple(read_element(v, s, "bidual", f"{where}[{i}]") for i, (v, s) in enumerate(zip(values, op.domain)))


def read_dual(value, space, where: str):
    return read_element(value, space, "dual", where)
