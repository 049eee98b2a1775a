"""Command-line driver: ``relsim compile | run | check``.

Exit codes: 0 success; 1 compile errors or failed assertions; 2 malformed
scenario, script or assertion file; 3 r-code fault during a run.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from relsim.ariel import disassemble
from relsim.check import AssertionSyntaxError, check, parse_assertions
from relsim.harness import compile_file, run_scenario
from relsim.sim.scenario import ScenarioError
from relsim.sim.trace import read_trace
from relsim.vm import VmFault

SEED_ENV = "RELSIM_SEED"


def cmd_compile(args: argparse.Namespace) -> int:
    art = compile_file(args.source, args.constants, args.out_dir)
    for d in art.diagnostics:
        print(f"{args.source}: {d}", file=sys.stderr)
    if not art.ok:
        return 1
    print(f"wrote {art.rcode_path} ({len(art.program.instructions)} instructions)")
    print(f"wrote {art.config_path} ({len(art.script.configs)} records)")
    if args.disassemble:
        print(disassemble(art.program))
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    try:
        world = run_scenario(args.scenario, seed=args.seed, until=args.until, trace_path=args.trace)
    except (ScenarioError, OSError) as exc:
        print(f"{args.scenario}: {exc}", file=sys.stderr)
        return 2
    except VmFault as exc:
        print(f"r-code fault: {exc}", file=sys.stderr)
        return 3
    if args.trace is None:
        sys.stdout.write(world.tracer.text())
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    try:
        assertions = parse_assertions(Path(args.assertions).read_text(encoding="utf-8"))
        lines = read_trace(args.trace)
    except (AssertionSyntaxError, ValueError, OSError) as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return 2
    failed = 0
    for out in check(lines, assertions):
        status = "PASS" if out.passed else "FAIL"
        print(f"{status} {out.assertion}")
        if not out.passed:
            failed += 1
            print(f"     {out.message}")
    print(f"{len(assertions) - failed}/{len(assertions)} assertions passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relsim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="translate an ARIEL source into r-code and a BT configuration")
    c.add_argument("source")
    c.add_argument("--constants", help="C header with #define constants")
    c.add_argument("-o", "--out-dir", help="output directory (default: next to the source)")
    c.add_argument("--disassemble", action="store_true", help="print the r-code listing")
    c.set_defaults(fn=cmd_compile)

    r = sub.add_parser("run", help="simulate a scenario and write its trace")
    r.add_argument("scenario")
    r.add_argument("--seed", type=int, default=int(os.environ.get(SEED_ENV, "0")),
                   help=f"RNG seed (default: ${SEED_ENV} or 0)")
    r.add_argument("--until", type=float, default=None,
                   help="simulated horizon in ms (default: the scenario's [RUN] until, else 10000)")
    r.add_argument("--trace", help="trace output file (default: stdout)")
    r.set_defaults(fn=cmd_run)

    k = sub.add_parser("check", help="evaluate trace assertions")
    k.add_argument("trace")
    k.add_argument("assertions")
    k.set_defaults(fn=cmd_check)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
