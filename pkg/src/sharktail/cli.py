"""Command-line interface: shark, cycles, conley, rds, realize.

Exit codes: 0 all verdicts pass, 2 a verdict failed, 3 a precondition
or stage error.  The default simulation seed comes from SHARKTAIL_SEED
when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import certify, conley, cycles, random_cocycle, sharkovskii
from .errors import SharktailError
from .maps import logistic_handle, tent_map, truncated_tent
from .numbers import rational_from_str

EXIT_PASS = 0
EXIT_FAIL = 2
EXIT_ERROR = 3


def _default_seed() -> int:
    return int(os.environ.get("SHARKTAIL_SEED", "0"))


def _emit(obj) -> None:
    print(json.dumps(certify.to_jsonable(obj), sort_keys=True, indent=2))


def _cmd_shark(args) -> int:
    if args.shark_cmd == "order":
        print("true" if sharkovskii.shark_less(args.a, args.b) else "false")
        return EXIT_PASS
    for m in sorted(sharkovskii.tail(args.n, args.bound),
                    key=sharkovskii.shark_sort_key):
        print(m)
    return EXIT_PASS


def _cmd_cycles(args) -> int:
    if args.cycles_cmd == "enum":
        if args.map == "tent":
            found = list(cycles.enumerate_tent_cycles(args.period))
        else:
            height = rational_from_str(args.height)
            found = [c for c in cycles.enumerate_truncated_cycles(height, args.period)
                     if c.minimal_period == args.period]
        _emit(found)
        return EXIT_PASS
    if args.cycles_cmd == "height":
        _emit({"period": args.m, "critical_height": cycles.critical_height(args.m)})
        return EXIT_PASS
    # tail-check
    h = cycles.realization_height(args.m)
    periods = cycles.minimal_periods(h, args.bound)
    expected = sharkovskii.tail(args.m, args.bound)
    _emit({"period": args.m, "height": h,
           "minimal_periods": sorted(periods), "tail": sorted(expected),
           "match": periods == expected})
    return EXIT_PASS if periods == expected else EXIT_FAIL


def _cmd_conley(args) -> int:
    if args.map == "logistic":
        mp = logistic_handle(args.c)
        found = cycles.logistic_cycles(args.c, args.period)
        found = [c for c in found if min(c.points) > 0]
        map_desc = {"family": "logistic", "c": args.c}
    else:
        height = rational_from_str(args.height) if args.height else Fraction(1)
        mp = truncated_tent(height) if height != 1 else tent_map()
        pool = (cycles.enumerate_tent_cycles(args.period) if height == 1 else
                [c for c in cycles.enumerate_truncated_cycles(height, args.period)
                 if c.minimal_period == args.period])
        found = [c for c in pool if min(c.points) > 0]
        map_desc = {"family": "truncated_tent", "height": str(height)}
    if not found:
        print(f"no interior cycle of period {args.period}", file=sys.stderr)
        return EXIT_ERROR
    cycle = found[0]
    nbhds, budget = conley.certify_tail(mp, {args.period: cycle})
    cert = certify.conley_certificate(mp, cycle, nbhds[args.period], budget, map_desc)
    text = cert.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return EXIT_PASS if cert.all_verdicts_true else EXIT_FAIL


def _make_noise(args):
    if args.family == "logistic":
        return random_cocycle.logistic_noise(args.c_lo, args.c_hi, seed=args.seed)
    xi = rational_from_str(args.xi)
    height = rational_from_str(args.height)
    lam = Fraction(args.lam).limit_denominator(1 << 20)
    return random_cocycle.asymmetric_tent_noise(xi, seed=args.seed,
                                                height=height, lam=lam)


def _cmd_rds(args) -> int:
    noise = _make_noise(args)
    x0 = rational_from_str(args.x0) if args.family != "logistic" else float(
        Fraction(rational_from_str(args.x0)))
    if args.rds_cmd == "simulate":
        records = random_cocycle.cocycle_iterate(noise, x0, args.steps, k=args.k)
        if args.csv:
            certify.emit_trajectory_csv(records, args.csv)
            print(args.csv)
        else:
            for rec in records:
                print(f"{rec.base_index},{certify._csv_value(rec.state)},{rec.fibre_label}")
        return EXIT_PASS
    delta = rational_from_str(args.delta)
    verdict = random_cocycle.detect_delta_k_orbit(noise, x0, args.k, delta,
                                                  args.window)
    _emit({"passed": verdict.passed, "delta": delta,
           "max_diameter": verdict.max_diameter,
           "min_separation": verdict.min_separation,
           "violation": verdict.violation})
    return EXIT_PASS if verdict.passed else EXIT_FAIL


def _cmd_realize(args) -> int:
    seeds = [int(s) for s in args.seeds.split(",")] if "," in args.seeds \
        else list(range(args.seed, args.seed + int(args.seeds)))
    result = certify.run_realization(
        args.head, args.bound, rational_from_str(args.xi), seeds,
        window=args.window, clamp=not args.no_clamp,
        negative_control=args.negative_control)
    text = result.certificate.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(args.out)
    else:
        print(text, end="")
    return EXIT_PASS if result.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sharktail",
        description="Certified periodic-orbit forcing for randomly perturbed interval maps")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("shark", help="Sharkovskii order queries")
    ssub = p.add_subparsers(dest="shark_cmd", required=True)
    p_order = ssub.add_parser("order", help="does a precede b?")
    p_order.add_argument("a", type=int)
    p_order.add_argument("b", type=int)
    p_tail = ssub.add_parser("tail", help="print the truncated tail of n")
    p_tail.add_argument("n", type=int)
    p_tail.add_argument("--bound", type=int, default=64)

    p = sub.add_parser("cycles", help="periodic-orbit enumeration")
    csub = p.add_subparsers(dest="cycles_cmd", required=True)
    p_enum = csub.add_parser("enum", help="enumerate cycles of a given period")
    p_enum.add_argument("--map", choices=["tent", "truncated"], default="tent")
    p_enum.add_argument("--period", type=int, required=True)
    p_enum.add_argument("--height", default="1/1", help="truncation height p/q")
    p_height = csub.add_parser("height", help="critical height of a period")
    p_height.add_argument("m", type=int)
    p_check = csub.add_parser("tail-check", help="verify the realized period set")
    p_check.add_argument("m", type=int)
    p_check.add_argument("--bound", type=int, default=12)

    p = sub.add_parser("conley", help="certified neighborhoods and indices")
    csub2 = p.add_subparsers(dest="conley_cmd", required=True)
    p_cert = csub2.add_parser("certify", help="emit a neighborhood/index certificate")
    p_cert.add_argument("--map", choices=["tent", "truncated", "logistic"],
                        default="tent")
    p_cert.add_argument("--period", type=int, required=True)
    p_cert.add_argument("--height", help="truncation height p/q")
    p_cert.add_argument("--c", type=float, default=3.2, help="logistic parameter")
    p_cert.add_argument("--out", help="write certificate JSON here")

    p = sub.add_parser("rds", help="random cocycle simulation and detection")
    rsub = p.add_subparsers(dest="rds_cmd", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=["tent", "logistic"], default="tent")
    common.add_argument("--xi", default="1/100", help="peak displacement bound p/q")
    common.add_argument("--height", default="1/1", help="tent truncation height p/q")
    common.add_argument("--lambda", dest="lam", type=float, default=1.0,
                        help="noise amplitude scale")
    common.add_argument("--c-lo", type=float, default=3.15)
    common.add_argument("--c-hi", type=float, default=3.25)
    common.add_argument("--seed", type=int, default=_default_seed())
    common.add_argument("--x0", default="2/3")
    common.add_argument("--k", type=int, default=1, help="fibre period")
    p_sim = rsub.add_parser("simulate", parents=[common],
                            help="emit a trajectory (CSV with --csv)")
    p_sim.add_argument("--steps", type=int, default=100)
    p_sim.add_argument("--csv", help="write index,state,fibre CSV here")
    p_det = rsub.add_parser("detect", parents=[common],
                            help="fibre smallness/separation verdict")
    p_det.add_argument("--delta", required=True, help="geometric tolerance p/q")
    p_det.add_argument("--window", type=int, default=300)

    p = sub.add_parser("realize", help="full finite-tail realization pipeline")
    p.add_argument("--head", type=int, required=True, help="head period of the tail")
    p.add_argument("--bound", type=int, default=8, help="largest tracked period")
    p.add_argument("--xi", default="1/1000", help="requested noise halfwidth p/q")
    p.add_argument("--seeds", default="8",
                   help="seed count (from --seed) or comma-separated list")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--window", type=int, default=300)
    p.add_argument("--no-clamp", action="store_true",
                   help="do not clamp xi to the admissible budget (negative control)")
    p.add_argument("--negative-control", action="store_true",
                   help="also run an unclamped 10x-budget control block")
    p.add_argument("--out", help="write certificate JSON here")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "shark":
            return _cmd_shark(args)
        if args.cmd == "cycles":
            return _cmd_cycles(args)
        if args.cmd == "conley":
            return _cmd_conley(args)
        if args.cmd == "rds":
            return _cmd_rds(args)
        return _cmd_realize(args)
    except SharktailError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
