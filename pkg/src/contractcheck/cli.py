"""Command-line front end producing machine-readable reports.

Exit codes: 0 when every requested verdict passes, 1 when any fails or is
inconclusive, 2 on usage or validation errors. Reports are JSON by
default and deterministic given (command, inputs, seed, mode); the
timestamp is omitted under --reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__, family as fam_mod
from .auxfn import (
    AuxFn,
    check_C1,
    check_F2,
    check_F3,
    check_strictly_increasing,
    check_thm35_condition,
    check_thm45_conditions,
    estimate_right_limit,
    parse_fn,
)
from .certify import (
    certify_EF,
    certify_F_contraction,
    certify_phi_F,
    meir_keeler_finite,
)
from .errors import ContractCheckError
from .metric import (
    FiniteMetricSpace,
    SelfMap,
    is_contractive,
    lipschitz_constant,
    picard_iterate,
    validate_metric,
)
from .rational import rat
from .verdict import FAIL, PASS, Verdict
from .volterra import VolterraProblem, parse_grid_fn, parse_kernel, picard_solve

DEFAULT_GRID = "0.1:10:0.1"


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", choices=["exact", "float"], default="float")
    parser.add_argument("--margin", type=float, default=1e-12,
                        help="strictness margin for float-mode comparisons")
    parser.add_argument("--format", choices=["json", "text"], default="json")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--reproducible", action="store_true",
                        help="omit the timestamp so identical runs are byte-identical")


def _parse_grid(spec: str):
    lo, hi, step = (Fraction(s) for s in spec.split(":"))
    out = []
    t = lo
    while t <= hi:
        out.append(float(t))
        t += step
    return out


def _load_space(ref: str) -> FiniteMetricSpace:
    with open(_strip_at(ref)) as fh:
        return FiniteMetricSpace.from_json(json.load(fh))


def _load_map(ref: str) -> SelfMap:
    with open(_strip_at(ref)) as fh:
        return SelfMap.from_json(json.load(fh))


def _strip_at(ref: str) -> str:
    return ref[1:] if ref.startswith("@") else ref


def _payload_passes(payload: dict) -> bool:
    if "pass" in payload:
        return bool(payload["pass"])
    if "verdict" in payload:
        return payload["verdict"] == "pass"
    return True


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="contractcheck")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fn-class", help="certify functional hypotheses of one function")
    _common_flags(p)
    p.add_argument("--fn", required=True)
    p.add_argument("--check", action="append", required=True,
                   choices=["increasing", "nondecreasing", "f2", "f3", "jump",
                            "c1", "thm35", "thm45", "all"])
    p.add_argument("--other", help="second function (phi or E) for paired checks")
    p.add_argument("--k", type=float, default=0.5, help="exponent for the f3 check")
    p.add_argument("--t0", default=None, help="point for the jump check")
    p.add_argument("--grid", default=DEFAULT_GRID, help="lo:hi:step")
    p.set_defaults(func=cmd_fn_class)

    p = sub.add_parser("certify", help="certify a contraction condition on a space")
    _common_flags(p)
    p.add_argument("--condition", required=True, choices=["banach", "f", "phif", "ef"])
    p.add_argument("--space", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--fn", help="F for f/phif/ef")
    p.add_argument("--tau", default=None)
    p.add_argument("--phi")
    p.add_argument("--E", dest="E")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("mk-check", help="Meir-Keeler audit on a finite space")
    _common_flags(p)
    p.add_argument("--space", required=True)
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_mk_check)

    p = sub.add_parser("counterexample",
                       help="build/verify/witness/audit the jump-driven counterexample")
    _common_flags(p)
    p.add_argument("action", choices=["build", "verify", "witness", "audit"])
    p.add_argument("--fn", default="step:1,1")
    p.add_argument("--t0", default="1")
    p.add_argument("--N", type=int, default=10)
    p.add_argument("--delta", default="0.01")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("picard", help="Picard orbit on a finite space")
    _common_flags(p)
    p.add_argument("--space", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--csv", help="write the trace as CSV to this path")
    p.set_defaults(func=cmd_picard)

    p = sub.add_parser("volterra", help="Picard-solve a Volterra integral equation")
    _common_flags(p)
    p.add_argument("--kernel", required=True)
    p.add_argument("--forcing", required=True)
    p.add_argument("--tend", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--atol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--csv", help="write (t, x) to this path")
    p.set_defaults(func=cmd_volterra)
    return top


# ---------------------------------------------------------------------------
# subcommand bodies: each returns a list of verdict payload dicts + inputs echo


def cmd_fn_class(args):
    f = parse_fn(args.fn)
    grid = _parse_grid(args.grid)
    checks = []
    for c in args.check:
        checks.extend(["increasing", "f2", "f3"] if c == "all" else [c])
    payloads = []
    for check in checks:
        if check in ("increasing", "nondecreasing"):
            entry = check_strictly_increasing(f, grid, strict=check == "increasing")
        elif check == "f2":
            entry = check_F2(f)
        elif check == "f3":
            entry = check_F3(f, args.k)
        elif check == "jump":
            if args.t0 is None:
                raise ContractCheckError("--t0 is required for the jump check")
            payloads.append(estimate_right_limit(f, rat(args.t0)).to_json())
            continue
        elif check == "c1":
            entry = check_C1(parse_fn(args.other), f, grid, mu=args.margin)
        elif check == "thm35":
            _, entry = check_thm35_condition(parse_fn(args.other), f, grid, mu=args.margin)
        elif check == "thm45":
            e_i, e_ii = check_thm45_conditions(parse_fn(args.other), f, grid, mu=args.margin)
            payloads.extend([e_i.to_json(), e_ii.to_json()])
            continue
        payloads.append(entry.to_json())
    inputs = {"fn": args.fn, "checks": checks, "grid": args.grid, "other": args.other}
    return inputs, payloads


def cmd_certify(args):
    space = _load_space(args.space)
    smap = _load_map(args.map)
    vm = validate_metric(space)
    payloads = [vm.to_json()]
    if vm.passed:
        if args.condition == "banach":
            lam = lipschitz_constant(space, smap)
            v = Verdict("Banach", PASS if lam < 1 else FAIL, margin=1.0 - lam,
                        pairs_checked=space.n * (space.n - 1) // 2, mode="float",
                        details={"lipschitz": lam})
            payloads.append(v.to_json())
        elif args.condition == "f":
            payloads.append(certify_F_contraction(
                space, smap, parse_fn(args.fn), rat(args.tau) if args.mode == "exact"
                else float(Fraction(args.tau)), mode=args.mode, mu=args.margin).to_json())
        elif args.condition == "phif":
            payloads.append(certify_phi_F(
                space, smap, parse_fn(args.phi), parse_fn(args.fn),
                mode=args.mode, mu=args.margin).to_json())
        else:
            payloads.append(certify_EF(
                space, smap, parse_fn(args.E), parse_fn(args.fn),
                mode=args.mode, mu=args.margin).to_json())
    inputs = {"condition": args.condition, "space": args.space, "map": args.map,
              "fn": args.fn, "tau": args.tau, "phi": args.phi, "E": args.E}
    return inputs, payloads


def cmd_mk_check(args):
    space = _load_space(args.space)
    smap = _load_map(args.map)
    payloads = [validate_metric(space).to_json(),
                meir_keeler_finite(space, smap, mode=args.mode, mu=args.margin).to_json()]
    return {"space": args.space, "map": args.map}, payloads


def cmd_counterexample(args):
    F = parse_fn(args.fn)
    t0 = rat(args.t0)
    fam = fam_mod.build_family(F, t0)
    if args.mode == "exact" and not fam.exact:
        raise ContractCheckError("exact mode requested but F or t0 is not exact-capable")
    inputs = {"fn": args.fn, "t0": args.t0, "N": args.N, "delta": args.delta,
              "family": fam.describe()}
    payloads = []
    if args.action == "build":
        payloads.append({"kind": "family", "pass": True, **fam.describe(),
                         "gamma_head": [float(fam.gamma_at(m)) for m in range(1, 6)]})
    elif args.action == "verify":
        payloads.append(fam_mod.verify_family_F_contraction(
            fam, args.N, mu=args.margin).to_json())
    elif args.action == "witness":
        wit = fam_mod.mk_falsification_witness(fam, rat(args.delta))
        payloads.append({"kind": "mk-witness", "pass": True, **wit.to_json()})
    else:
        payloads.extend(e.to_json() for e in fam_mod.audit_distance_claims(fam, args.N))
    return inputs, payloads


def cmd_picard(args):
    space = _load_space(args.space)
    smap = _load_map(args.map)
    trace = picard_iterate(space, smap, args.start)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(trace.to_csv())
    payload = {"kind": "picard-trace", "pass": trace.termination == "fixed-point",
               **trace.to_json()}
    return {"space": args.space, "map": args.map, "start": args.start}, [payload]


def cmd_volterra(args):
    problem = VolterraProblem(parse_kernel(args.kernel), parse_grid_fn(args.forcing),
                              args.tend, args.step)
    sol = picard_solve(problem, atol=args.atol, max_iter=args.max_iter)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(sol.to_csv())
    payload = {
        "kind": "volterra", "pass": sol.converged, "iterations": sol.iterations,
        "contraction_factor": problem.contraction_factor(),
        "residual": sol.residual(), "sup_steps": [float(s) for s in sol.steps],
        "x_end": float(sol.x[-1]),
    }
    inputs = {"kernel": args.kernel, "forcing": args.forcing, "tend": args.tend,
              "step": args.step, "atol": args.atol}
    return inputs, [payload]


# ---------------------------------------------------------------------------


def _render_text(report: dict) -> str:
    lines = [f"command: {report['command']}  mode: {report['mode']}"]
    for v in report["verdicts"]:
        tag = "PASS" if _payload_passes(v) else "FAIL"
        name = v.get("condition") or v.get("kind") or "result"
        extra = ""
        if v.get("margin") is not None:
            extra = f" margin={v['margin']:.6g}"
        if v.get("witness"):
            extra += f" witness={v['witness']}"
        lines.append(f"  [{tag}] {name}{extra}")
    return "\n".join(lines)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        inputs, payloads = args.func(args)
    except ContractCheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "inputs": inputs,
        "verdicts": payloads,
        "seed": args.seed,
        "mode": args.mode,
        "version": __version__,
    }
    if not args.reproducible:
        report["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(_render_text(report))
    return 0 if all(_payload_passes(p) for p in payloads) else 1


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
