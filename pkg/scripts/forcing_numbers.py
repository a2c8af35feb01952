"""Forcing (Rado) numbers for a few equations, as a table or JSON.

    python3 scripts/forcing_numbers.py
    python3 scripts/forcing_numbers.py --max-n 80 --json
"""

import argparse
import json
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from partreg.search import rado_number  # noqa: E402

JOBS = [
    ("x + y = z", 2, "ANY"),
    ("x + y = z", 3, "ANY"),
    ("x + z = 2*y", 2, "DISTINCT"),
    ("x + z = 2*y", 3, "DISTINCT"),
    ("x + y = z*w", 2, "ANY"),
    ("x + y = z*w", 2, "NONDEGENERATE"),
    ("x + y = z*w", 2, "DISTINCT"),
    ("2*x1 + 7*x2 = 2*x3", 2, "ANY"),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=60)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rows = []
    for eq, k, mode in JOBS:
        t0 = time.perf_counter()
        r = rado_number(eq, k, mode, args.max_n, workers=args.workers)
        rows.append(dict(r.to_json(), coloring=str(r.witness), seconds=round(time.perf_counter() - t0, 2)))
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'equation':<22}{'k':>3} {'mode':<14}{'N*':>6}{'nodes':>12}{'sec':>8}  witness at N*-1")
    for r in rows:
        n = r["rado_number"] if r["rado_number"] is not None else f">{r['max_N']}"
        print(f"{r['equation']:<22}{r['k']:>3} {r['constraint']:<14}{n:>6}{r['nodes']:>12}{r['seconds']:>8}  {r['coloring']}")


if __name__ == "__main__":
    main()
