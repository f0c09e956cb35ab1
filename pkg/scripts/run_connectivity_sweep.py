#!/usr/bin/env python3
"""Connectivity sweep: every Sub(s,w) over the chosen types is connected.

Exhaustive over all expressions up to --max-len for rank-2 types, plus
random sampling for the rank-3 types.
"""

import argparse
import json
import time

from subexpr import sweeps
from subexpr.coxeter import coxeter_matrix_for


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--types", nargs="+", default=["A2", "B2", "G2"])
    ap.add_argument("--max-len", type=int, default=10)
    ap.add_argument("--random-types", nargs="+", default=["A3", "A2~"])
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    failed = False
    for t in args.types:
        matrix = coxeter_matrix_for(t)
        words = sweeps.sweep_words(matrix, args.max_len,
                                   exhaustive_cap=args.max_len)
        t0 = time.time()
        rep = sweeps.run_sweep(matrix, words, "connectivity", jobs=args.jobs)
        rep["type"] = t
        rep["seconds"] = round(time.time() - t0, 1)
        print(json.dumps(rep, sort_keys=True))
        failed = failed or not rep["ok"]
    for t in args.random_types:
        matrix = coxeter_matrix_for(t)
        words = sweeps.random_words(len(matrix), args.samples, args.max_len,
                                    args.seed)
        t0 = time.time()
        rep = sweeps.run_sweep(matrix, words, "connectivity", jobs=args.jobs)
        rep["type"] = t
        rep["seconds"] = round(time.time() - t0, 1)
        print(json.dumps(rep, sort_keys=True))
        failed = failed or not rep["ok"]
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
