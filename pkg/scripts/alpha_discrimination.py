"""Sweep the inter-fault gap and report which recovery branch alpha-count selects.

A single task sees a fixed number of transient exceptions separated by ``gap``
judgment periods. Small gaps push the score over T and reconfigure; wide gaps
decay the score and keep restarting.
"""

import argparse

from relsim.backbone.alpha import alpha_run


def first_permanent(n_faults, gap, K, T):
    stream = []
    for i in range(n_faults):
        stream.append(True)
        if i < n_faults - 1:
            stream.extend([False] * gap)
    for i, a in enumerate(alpha_run(stream, K, T)):
        if a.permanent:
            return stream[: i + 1].count(True), a.score
    return None, max(a.score for a in alpha_run(stream, K, T))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--K", type=float, default=0.9)
    ap.add_argument("--T", type=float, default=3.0)
    ap.add_argument("--faults", type=int, default=10)
    ap.add_argument("--max-gap", type=int, default=12)
    args = ap.parse_args()

    print(f"K={args.K} T={args.T} faults={args.faults}")
    print(f"{'gap':>4} {'branch':>12} {'at fault':>9} {'score':>7}")
    for gap in range(args.max_gap + 1):
        k, score = first_permanent(args.faults, gap, args.K, args.T)
        branch = "reconfigure" if k else "restart"
        print(f"{gap:4d} {branch:>12} {k or '-':>9} {score:7.3f}")


if __name__ == "__main__":
    main()
