"""Execute scenario checks and assemble reports."""
from __future__ import annotations

import itertools
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__

from . import engine, sampling
from .closure import finite_rank_reduce, in_span
from .direct_sum import DirectSumSpace, band_project, sum_iso, transport_check
from .errors import (
    InternalInvariantViolation,
    NotRepresentable,
    ScenarioError,
    WorkbenchError,
)
from .lattice import Vec, is_findim_like, is_riesz_hom
from .operators import (
    Permutation,
    TensorOp,
    compose_hom,
    is_multimorphism,
    kusraev_factor,
    tensor_from_factors,
)
from .scenario import Scenario, build_map, parse_json, parse_scenario, read_args, read_dual, read_perms, read_scenario_text
from .serialize import read_element, read_rational, to_json

log = logging.getLogger(__name__)

DG_CAP = 64


class Context:
    """What a check needs: its parameters, the scenario and its own seed."""

    def __init__(self, scenario: Scenario, spec, samples: int):
        self.sc = scenario
        self.spec = spec
        self.p = spec.params
        self.samples = self.p.get("samples", samples)
        self.seed = scenario.seed + spec.index + self.p.get("seed", 0)

    def at(self, key):
        return f"{self.spec.where}.{key}"

    def op(self):
        if "operator" not in self.p:
            raise ScenarioError("this check needs an operator", self.at("operator"))
        return self.sc.operator(self.p["operator"], self.at("operator"))

    def perms(self, op, default="all"):
        return read_perms(self.p.get("rho", default), op.arity, self.at("rho"))

    def tuples(self, op, grid=True, random_count=None, singular=True):
        out = sampling.grid_tuples(op.domain) if grid and self.p.get("grid", True) else []
        n = self.samples if random_count is None else random_count
        return out + sampling.random_tuples(op.domain, n, self.seed, singular)


def _fail(cases, witness, **detail):
    return engine.Outcome("fail", cases, witness, detail)


# -- individual checks ---------------------------------------------------------


def check_evaluate(ctx: Context):
    op = ctx.op()
    args = read_args(ctx.p.get("args"), op, ctx.at("args"))
    perms = ctx.perms(op, ["id", "theta"] if op.arity > 1 else "id")
    expected = ctx.p.get("expected", {})
    reversal = Permutation(tuple(range(op.arity, 0, -1)))
    values, traces = {}, {}
    for r in perms:
        value = engine.arens_extend(op, r)(args)
        dg = engine.davie_gamelin_eval(op, r, args, ctx.p.get("cap", DG_CAP))
        routes = {"bar_lift": value, "limits": dg.value}
        if r == reversal:
            routes["adjoint_chain"] = engine.star_chain(op)(args)
        values[r.label()] = value
        traces[r.label()] = [
            {"slot": t.slot, "outer": t.outer, "samples": t.samples} for t in dg.traces
        ]
        if any(v != value for v in routes.values()):
            return _fail(len(values), {"rho": r.label(), "args": args, "routes": routes})
        if r.label() in expected:
            want = read_element(expected[r.label()], op.codomain, "bidual", ctx.at(f"expected.{r.label()}"))
            if want != value:
                return _fail(len(values), {"rho": r.label(), "args": args, "expected": want, "got": value})
    return engine.Outcome("pass", len(values), None, {"args": args, "values": values, "limits": traces})


def check_compare_all(ctx: Context):
    op = ctx.op()
    cmp = engine.compare_all_extensions(op, ctx.tuples(op, random_count=ctx.p.get("random", 0)))
    detail = {"perms": [r.label() for r in cmp.perms], "equal": cmp.equal}
    if cmp.all_equal:
        return engine.Outcome("pass", cmp.cases, None, detail)
    (pair, (args, y, a, b)), *_ = sorted(cmp.witnesses.items())
    return engine.Outcome("fail", cmp.cases, {"pair": pair, "args": args, "y": y, "values": [a, b]}, detail)


def check_main_theorem(ctx: Context):
    op = ctx.op()
    perms = ctx.perms(op)
    grid = sampling.grid_tuples(op.domain)
    signs = sampling.sign_pattern_tuples(op.domain) if ctx.p.get("sign_patterns", True) else []
    rand = sampling.random_tuples(op.domain, ctx.samples, ctx.seed)
    total = 0
    parts = [("grid", grid, True), ("sign_patterns", signs, True), ("random", rand, True)]
    if ctx.p.get("generic_grid", True):
        # the same grid through the route that never uses closed-form slices
        parts.append(("grid_generic", grid, False))
    counts = {}
    for name, tuples, symbolic in parts:
        out = engine.check_main_theorem(op, tuples, perms, symbolic)
        total += out.cases
        counts[name] = out.cases
        if not out.passed:
            out.cases = total
            out.detail = {**out.detail, "part": name}
            return out
    return engine.Outcome("pass", total, None, {"extensions": len(perms), "cases": counts})


def check_star_chain(ctx: Context):
    op = ctx.op()
    rho = read_perms(ctx.p.get("rho", "theta"), op.arity, ctx.at("rho"))[0]
    return engine.check_star_chain(op, ctx.tuples(op, random_count=ctx.p.get("random", ctx.samples)), rho=rho)


def random_regular_tensor(rng: random.Random, max_arity: int, max_dim: int) -> TensorOp:
    m = rng.randint(1, max_arity)
    dims = [rng.randint(1, max_dim) for _ in range(m)]
    cod = rng.randint(1, max_dim)
    return TensorOp(dims, cod, sampling.random_tensor(rng, dims, cod))


def check_star_chain_random(ctx: Context):
    rng = random.Random(ctx.seed)
    count = ctx.p.get("count", 100)
    total = 0
    for k in range(count):
        A = random_regular_tensor(rng, ctx.p.get("max_arity", 3), ctx.p.get("max_dim", 4))
        tuples = sampling.random_tuples(A.domain, ctx.p.get("tuples", 5), rng.randrange(2**31))
        tuples += list(itertools.islice(sampling.grid_tuples(A.domain), ctx.p.get("grid_tuples", 8)))
        out = engine.check_star_chain(A, tuples)
        total += out.cases
        if not out.passed:
            return _fail(total, {"tensor": A, "inner": out.witness}, index=k)
    return engine.Outcome("pass", total, None, {"tensors": count})


def check_props(ctx: Context):
    op = ctx.op()
    u = build_map(ctx.p["hom"], ctx.sc, ctx.at("hom")) if "hom" in ctx.p else None
    tuples = ctx.tuples(op, random_count=ctx.p.get("random", ctx.samples))
    cases = 0
    per_rho = {}
    for r in ctx.perms(op):
        rec = engine.verify_extension_props(op, r, u, tuples)
        names = ("extends", "positive_transfer", "naturality", "sign_expansion")
        per_rho[r.label()] = {n: o.status for n, o in zip(names, rec.outcomes())}
        for n, o in zip(names, rec.outcomes()):
            cases += o.cases
            if not o.passed:
                status = o.status
                return engine.Outcome(status, cases, {"rho": r.label(), "property": n, "inner": o.witness}, o.detail)
    return engine.Outcome("pass", cases, None, {"properties": per_rho})


def check_dg_oracle(ctx: Context):
    op = ctx.op()
    tuples = ctx.tuples(op, grid=ctx.p.get("grid", True), random_count=ctx.p.get("random", ctx.samples))
    cap = ctx.p.get("cap", DG_CAP)
    cases = 0
    for r in ctx.perms(op):
        out = engine.check_dg_oracle(op, r, tuples, cap)
        cases += out.cases
        if not out.passed:
            out.cases = cases
            out.witness = {"rho": r.label(), "inner": out.witness}
            return out
    return engine.Outcome("pass", cases, None, {"cap": cap})


def check_hom_composite(ctx: Context):
    op = ctx.op()
    y = read_dual(ctx.p.get("y"), op.codomain, ctx.at("y"))
    cases = 0
    for r in ctx.perms(op, "id"):
        out = engine.check_hom_composite(op, r, y, ctx.tuples(op))
        cases += out.cases
        if not out.passed:
            out.cases = cases
            out.witness = {"rho": r.label(), "inner": out.witness}
            return out
    return engine.Outcome("pass", cases)


def check_modulus_identity(ctx: Context):
    op = ctx.op()
    terms = ctx.p.get("terms")
    if not isinstance(terms, list) or not terms:
        raise ScenarioError("terms must be a non-empty list of [coefficient, functional]", ctx.at("terms"))
    parsed = [
        (read_rational(c, ctx.at(f"terms[{i}][0]")), read_dual(phi, op.codomain, ctx.at(f"terms[{i}][1]")))
        for i, (c, phi) in enumerate(terms)
    ]
    y = engine.hom_span_element(parsed, op.codomain)
    cases = 0
    for r in ctx.perms(op, "id"):
        out = engine.check_modulus_identity(op, r, y, ctx.tuples(op))
        cases += out.cases
        if not out.passed:
            out.cases = cases
            out.witness = {"rho": r.label(), "inner": out.witness}
            return out
    return engine.Outcome("pass", cases, None, {"y": y})


def check_oc_restriction(ctx: Context):
    op = ctx.op()
    tuples = ctx.tuples(op, singular=False)
    cases = 0
    for r in ctx.perms(op, "id"):
        out = engine.check_oc_restriction(op, r, tuples)
        cases += out.cases
        if not out.passed:
            out.cases = cases
            out.witness = {"rho": r.label(), "inner": out.witness}
            return out
    return engine.Outcome("pass", cases)


def single_entry_tensors(max_arity: int, max_dim: int, values) -> list:
    out = []
    for m in range(1, max_arity + 1):
        for dims in itertools.product(range(1, max_dim + 1), repeat=m):
            for idx in itertools.product(*(range(1, n + 1) for n in dims)):
                for v in values:
                    out.append(TensorOp(dims, 1, {idx + (1,): v}))
    return out


def check_kusraev(ctx: Context):
    if "operator" in ctx.p:
        tensors = [ctx.op()]
    else:
        values = [read_rational(v, ctx.at(f"values[{i}]")) for i, v in enumerate(ctx.p.get("values", [[1, 2], 1, 3]))]
        tensors = single_entry_tensors(ctx.p.get("max_arity", 3), ctx.p.get("max_dim", 3), values)
    for k, B in enumerate(tensors):
        if not isinstance(B, TensorOp):
            raise ScenarioError("factorization needs a tensor operator", ctx.at("operator"))
        verdict = is_multimorphism(B, budget=ctx.p.get("budget", 20), seed=ctx.seed)
        if not verdict.holds:
            return _fail(k + 1, {"tensor": B, "not_multimorphism": verdict.witness})
        factors = kusraev_factor(B)
        if tensor_from_factors(factors) != B:
            return _fail(k + 1, {"tensor": B, "factors": factors})
    return engine.Outcome("pass", len(tensors), None, {"tensors": len(tensors)})


def check_multimorphism(ctx: Context):
    op = ctx.op()
    verdict = is_multimorphism(op, budget=ctx.p.get("budget", 200), seed=ctx.seed)
    if verdict.holds:
        return engine.Outcome("pass", 1, None, {"certificate": verdict.certificate})
    return _fail(1, {"args": verdict.witness})


def check_riesz_hom(ctx: Context):
    rows = ctx.p.get("matrix")
    if not isinstance(rows, list) or not rows:
        raise ScenarioError("matrix must be a non-empty list of rows", ctx.at("matrix"))
    rows = [tuple(read_rational(v, ctx.at(f"matrix[{i}][{j}]")) for j, v in enumerate(r)) for i, r in enumerate(rows)]
    verdict = is_riesz_hom(rows, ctx.p.get("budget", 200), ctx.seed)
    if verdict.holds:
        return engine.Outcome("pass", 1, None, {"certificate": verdict.certificate})
    return _fail(1, {"x": verdict.witness})


def check_finite_rank(ctx: Context):
    op = ctx.op()
    red = finite_rank_reduce(op, ctx.seed)
    detail = {"dim": red.dim, "atoms": red.atoms}
    cases = 0
    for i, a in enumerate(red.atoms):
        for b in red.atoms[i + 1:]:
            cases += 1
            if not a.inf(b).is_zero():
                return _fail(cases, {"overlapping_atoms": [a, b]}, **detail)
    if red.atoms and not red.iso.is_hom():
        return _fail(cases, {"coordinate_map_not_hom": red.iso.rows}, **detail)
    for g in red.basis:
        cases += 1
        if red.from_coords(red.to_coords(g)) != g:
            return _fail(cases, {"round_trip": g}, **detail)
    inverse = red.inverse
    for args in ctx.tuples(op, random_count=ctx.p.get("random", 20)):
        for r in ctx.perms(op, "id"):
            cases += 1
            direct = engine.arens_extend(op, r)(args)
            inside = in_span(direct, red.basis) if red.basis else direct.is_zero()
            if not inside:
                return _fail(cases, {"outside_sublattice": args}, **detail)
            via = inverse.bidual_apply(engine.arens_extend(red.reduced, r)(args))
            if via != direct:
                return _fail(cases, {"rho": r.label(), "args": args, "direct": direct, "reduced": via}, **detail)
    return engine.Outcome("pass", cases, None, detail)


def check_transport(ctx: Context):
    op = ctx.op()
    if not isinstance(op.codomain, DirectSumSpace):
        raise ScenarioError("transport needs an operator into a direct sum", ctx.at("operator"))
    space = op.codomain
    iso = sum_iso(space)
    name = "psi" if space.mode == "p" else "gamma"
    cases = 0
    for j in range(1, space.dim + 1):
        # the isomorphisms invert each other on a basis
        cases += 1
        x = Vec.unit(space.dim, j)
        if iso(name + "_inv", iso(name, x, space), space) != x:
            return _fail(cases, {"round_trip": x})
    tuples = ctx.tuples(op)
    for r in ctx.perms(op):
        ok, witness, n = transport_check(op, r, tuples, engine.arens_extend)
        cases += n
        if not ok:
            return _fail(cases, {"rho": r.label(), "step": witness[0], "args": witness[1]})
    return engine.Outcome("pass", cases, None, {"components": space.count, "mode": space.mode})


def check_band_projection(ctx: Context):
    op = ctx.op()
    if not is_findim_like(op.codomain):
        raise ScenarioError("band projections act on finite-dimensional codomains", ctx.at("operator"))
    band = ctx.p.get("band")
    P = band_project(op.codomain, band)
    cases = 1
    idempotent = all(P.apply(P.apply(e)) == P.apply(e) for e in sampling.bidual_grid(op.codomain))
    if not (P.is_hom() and idempotent):
        return _fail(cases, {"projection": P.rows})
    composed = compose_hom(P, op)
    tuples = ctx.tuples(op, random_count=ctx.p.get("random", ctx.samples))
    for r in ctx.perms(op):
        rec = engine.verify_extension_props(composed, r, None, tuples)
        for n, o in zip(("extends", "positive_transfer", "naturality", "sign_expansion"), rec.outcomes()):
            cases += o.cases
            if not o.passed:
                return engine.Outcome(o.status, cases, {"rho": r.label(), "property": n, "inner": o.witness})
    if op.multimorphism_rule() is not False and is_multimorphism(op, budget=50, seed=ctx.seed).holds:
        out = engine.check_main_theorem(composed, tuples)
        cases += out.cases
        if not out.passed:
            out.cases = cases
            return out
    return engine.Outcome("pass", cases, None, {"band": sorted(band)})


CHECKS = {
    "evaluate": check_evaluate,
    "compare_all": check_compare_all,
    "main_theorem": check_main_theorem,
    "star_chain": check_star_chain,
    "star_chain_random": check_star_chain_random,
    "props": check_props,
    "dg_oracle": check_dg_oracle,
    "hom_composite": check_hom_composite,
    "modulus_identity": check_modulus_identity,
    "oc_restriction": check_oc_restriction,
    "kusraev": check_kusraev,
    "multimorphism": check_multimorphism,
    "riesz_hom": check_riesz_hom,
    "finite_rank": check_finite_rank,
    "transport": check_transport,
    "band_projection": check_band_projection,
}


# -- running -------------------------------------------------------------------


def run_check(scenario: Scenario, spec, samples: int) -> dict:
    """One check as a JSON-ready record.  Internal invariant violations propagate."""
    ctx = Context(scenario, spec, samples)
    log.info("check %d: %s", spec.index, spec.label)
    start = time.perf_counter()
    try:
        out = CHECKS[spec.kind](ctx)
    except NotRepresentable as exc:
        out = engine.Outcome("not-representable", 0, None, {"location": str(exc)})
    except (InternalInvariantViolation, ScenarioError):
        raise
    except WorkbenchError as exc:
        out = engine.Outcome("error", 0, None, {"error": f"{type(exc).__name__}: {exc}"})
    elapsed = time.perf_counter() - start
    log.debug("check %d finished in %.3fs with %s", spec.index, elapsed, out.status)
    record = {
        "index": spec.index,
        "check": spec.kind,
        "label": spec.label,
        "expect": spec.expect,
        "status": out.status,
        "ok": out.status == spec.expect,
        "cases": out.cases,
        "witness": to_json(out.witness),
        "detail": to_json(out.detail),
    }
    if "operator" in spec.params and isinstance(spec.params["operator"], str):
        record["operator"] = spec.params["operator"]
    return record, elapsed


def _run_indexed(text: str, index: int, seed, samples):
    sc = prepare(parse_json(text), seed, samples)
    return run_check(sc, sc.checks[index], sc.samples)


def prepare(data: dict, seed=None, samples=None) -> Scenario:
    """Parse, then apply command-line overrides.  An explicit sample count
    replaces both the scenario default and every per-check count."""
    sc = parse_scenario(data)
    if seed is not None:
        sc.seed = seed
    if samples is not None:
        sc.samples = samples
        for spec in sc.checks:
            spec.params = {k: v for k, v in spec.params.items() if k != "samples"}
    return sc


def run_scenario(path, seed=None, samples=None, jobs: int = 1, timing: bool = False) -> dict:
    """Parse and run a scenario file; the returned report is deterministic
    unless ``timing`` is set."""
    text, display = read_scenario_text(path)
    sc = prepare(parse_json(text), seed, samples)
    n_samples = sc.samples
    if jobs > 1 and len(sc.checks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_indexed, text, spec.index, seed, samples) for spec in sc.checks]
            results = [f.result() for f in futures]
    else:
        results = [run_check(sc, spec, n_samples) for spec in sc.checks]
    results.sort(key=lambda rec: rec[0]["index"])
    return build_report(sc, n_samples, results, timing)


def build_report(sc: Scenario, samples: int, results, timing: bool) -> dict:
    checks = []
    for record, elapsed in results:
        if timing:
            record = {**record, "seconds": round(elapsed, 4)}
        checks.append(record)
    counts = {"total": len(checks), "ok": sum(r["ok"] for r in checks)}
    for status in ("pass", "fail", "not-representable", "error"):
        counts[status] = sum(r["status"] == status for r in checks)
    report = {
        "artifact": {"name": "arenslab", "version": __version__},
        "scenario": sc.name,
        "seed": sc.seed,
        "samples": samples,
        "checks": checks,
        "counts": counts,
        "status": "pass" if counts["ok"] == counts["total"] else "fail",
    }
    if timing:
        report["seconds"] = round(sum(e for _, e in results), 4)
    return report
