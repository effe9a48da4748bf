"""Command line entry point: ``arenslab verify | catalog | demo``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__, engine
from . import bidual as bd
from .errors import InternalInvariantViolation, ScenarioError
from .operators import Permutation, UpperTriangular
from .report import to_json_text, to_text
from .runner import run_scenario
from .scenario import CHECK_KINDS, MAP_KINDS, OPERATOR_KINDS, SPACE_KINDS, bundled_names
from .serialize import to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("arenslab")


def _setup_logging():
    level = os.environ.get("WORKBENCH_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    try:
        report = run_scenario(args.scenario, seed=args.seed, samples=args.samples, jobs=args.jobs, timing=args.timing)
    except ScenarioError as exc:
        print(f"arenslab: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalInvariantViolation as exc:
        print(f"arenslab: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    text = to_json_text(report) if args.report == "json" else to_text(report)
    _emit(text, args.out)
    if args.figures:
        from .figures import render

        for path in render(report, args.figures):
            log.info("wrote %s", path)
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


def catalog() -> dict:
    return {
        "version": __version__,
        "spaces": SPACE_KINDS,
        "operators": OPERATOR_KINDS,
        "maps": MAP_KINDS,
        "checks": CHECK_KINDS,
        "scenarios": bundled_names(),
    }


def cmd_catalog(args) -> int:
    cat = catalog()
    if args.format == "json":
        sys.stdout.write(json.dumps(cat, sort_keys=True, indent=2) + "\n")
        return EXIT_OK
    print(f"arenslab {cat['version']}")
    for section in ("spaces", "operators", "maps", "checks"):
        print(f"\n{section}:")
        for name, desc in cat[section].items():
            print(f"  {name:<20} {desc}")
    print("\nbundled scenarios:")
    for name in cat["scenarios"]:
        print(f"  {name}")
    return EXIT_OK


def _fmt(x) -> str:
    return json.dumps(to_json(x), separators=(",", ":"))


def demo_irregularity(out=None) -> int:
    """The upper-triangular form on l_1 x l_1 at the pair (L, L)."""
    out = out or sys.stdout
    B = UpperTriangular()
    args = (bd.GEN_LIMIT, bd.GEN_LIMIT)
    y = bd.dual_generators(B.codomain, 1)[0]
    print("B(x, y) = sum_{i<=j} x_i y_j on l_1 x l_1;  L = generalized limit (a = 0, mu = 1)", file=out)
    print("B(e_i, e_j) = 1 if i <= j else 0", file=out)
    values = {}
    for rho in (Permutation.identity(2), Permutation.theta(2)):
        order = " then ".join(f"x''_{rho(k)}" for k in (1, 2))
        print(f"\nAR^{rho.label()}: lift {order}", file=out)
        fixed = {rho(2): bd.approximants(bd.GEN_LIMIT, 5, B.domain[rho(2) - 1])}
        sl = B.scalar_slice(y, fixed, rho(1))
        n = fixed[rho(2)].support()[0]
        print(f"  slice in slot {rho(1)} with x_{rho(2)} = e_{n} fixed: {_fmt(sl)}", file=out)
        print(f"  L applied to that slice (its tail value): {bd.bidual_pair(bd.GEN_LIMIT, sl, B.domain[0])}", file=out)
        value = engine.arens_extend(B, rho).scalar(args, y)
        traces = []
        dg = engine.davie_gamelin_scalar(B, rho, args, y, traces=traces)
        chain = engine.star_chain(B).scalar(args, y) if rho == Permutation.theta(2) else None
        print(f"  bar-lift evaluator:      {value}", file=out)
        print(f"  iterated limits:         {dg}", file=out)
        for t in traces:
            outer = ", ".join(f"N_{s}={n}" for s, n in sorted(t.outer.items())) or "outermost"
            samples = ", ".join(f"N_{t.slot}={n}: {v}" for n, v in t.samples)
            print(f"    limit over N_{t.slot} ({outer}): {samples}", file=out)
        if chain is not None:
            print(f"  iterated adjoints B***:  {chain}", file=out)
        values[rho.label()] = value
        if len({value, dg} | ({chain} if chain is not None else set())) != 1:
            print("  routes disagree", file=out)
            return EXIT_FAIL
    print(f"\nAR^id(B)(L, L) = {values['id']}  and  AR^theta(B)(L, L) = {values['theta']}", file=out)
    return EXIT_OK if (values["id"], values["theta"]) == (0, 1) else EXIT_FAIL


def cmd_demo(args) -> int:
    return demo_irregularity()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arenslab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"arenslab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a scenario file (or a bundled scenario by name)")
    v.add_argument("scenario")
    v.add_argument("--report", choices=("text", "json"), default="text")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--seed", type=int, help="override the scenario seed")
    v.add_argument("--samples", type=int, help="override the random sample count of every check")
    v.add_argument("--jobs", type=int, default=1, help="run checks in N worker processes")
    v.add_argument("--figures", metavar="DIR", help="also render matplotlib figures into DIR")
    v.add_argument("--timing", action="store_true", help="include wall-clock seconds (breaks byte-stability)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("catalog", help="list spaces, operators, maps and check kinds")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_catalog)

    d = sub.add_parser("demo", help="print a worked derivation")
    d.add_argument("name", choices=("irregularity",))
    d.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
