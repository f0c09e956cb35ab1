#!/usr/bin/env python3
"""Reproduce the cycle-length table: for each type, aggregate the lengths
used by minimum-length generating bases over a sweep and compare with the
known row."""

import argparse
import json

from subexpr import sweeps


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--types", nargs="+",
                    default=["A1", "An:2", "An:3", "B2", "Bn:3", "Dn:4",
                             "F4", "G2"])
    ap.add_argument("--max-len", type=int, default=None)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    failed = False
    for spec in args.types:
        name, _, rank = spec.partition(":")
        rep = sweeps.table1_report(name, int(rank) if rank else None,
                                   args.max_len, jobs=args.jobs)
        print(json.dumps(rep, sort_keys=True))
        failed = failed or not rep["ok"]
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
