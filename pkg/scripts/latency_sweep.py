"""Watchdog detection latency across seeds and heartbeat periods.

Latency is the gap between the last heartbeat emitted before the crash and the
WD_TIMEOUT notification, both read from the hosting node's local clock.
"""

import argparse
import statistics
from dataclasses import replace
from pathlib import Path

from relsim.harness import load_recovery, run_scenario
from relsim.sim.scenario import load_scenario

ROOT = Path(__file__).resolve().parent.parent


def latencies(sc, seeds):
    out = []
    for seed in range(seeds):
        w = run_scenario(sc, seed=seed)
        crash = w.tracer.select("FAULT", fault="CRASH_TASK")[0].time
        beats = [l for l in w.tracer.select("HB") if l.time <= crash]
        notes = w.tracer.select("NOTIFY", **{"class": "WD_TIMEOUT"})
        if beats and notes:
            out.append(float(notes[0].fields()["local"]) - float(beats[-1].fields()["local"]))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--d-max", type=float, nargs="+", default=[2.0, 10.0, 25.0])
    args = ap.parse_args()

    base = load_scenario(ROOT / "scenarios" / "watchdog.scn")
    _, configs = load_recovery(base)
    period = configs[0].period_ms
    print(f"period={period} ms, {args.seeds} seeds per row")
    print(f"{'d_max':>6} {'mean':>9} {'max':>9} {'bound':>7} ok")
    for d in args.d_max:
        sc = replace(base, net={**base.net, "d_max": d})
        lat = latencies(sc, args.seeds)
        bound = period + d + 1
        print(f"{d:6.1f} {statistics.mean(lat):9.3f} {max(lat):9.3f} {bound:7.1f} {max(lat) <= bound}")


if __name__ == "__main__":
    main()
