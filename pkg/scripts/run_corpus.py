"""Run every scenario in the corpus and check it against its assertion file."""

import argparse
from pathlib import Path

from relsim.check import check, parse_assertions
from relsim.harness import run_scenario

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", type=Path, default=ROOT / "scenarios")
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()

    failed = 0
    for scn in sorted(args.dir.glob("*.scn")):
        assert_file = scn.with_suffix(".assert")
        assertions = parse_assertions(assert_file.read_text()) if assert_file.exists() else []
        for seed in range(args.seeds):
            w = run_scenario(scn, seed=seed)
            outcomes = check(w.tracer.lines, assertions)
            bad = [o for o in outcomes if not o.passed]
            failed += bool(bad)
            print(f"{scn.name:18s} seed={seed} lines={len(w.tracer.lines):5d} "
                  f"assertions={len(outcomes) - len(bad)}/{len(outcomes)}")
            for o in bad:
                print(f"    FAIL {o.assertion.source_line}: {o.message}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
