"""Decide every corpus entry and, for linear ones, probe the coloring search.

PR entries get their forcing number for k = 2, 3 (up to --max-n); NOT_PR
entries get the least k <= 6 admitting an avoiding coloring of 1..--avoid-n.
"""

import argparse
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from partreg.cli import decide_poly  # noqa: E402
from partreg.parser import as_polynomial, default_corpus_path, load_corpus  # noqa: E402
from partreg.poly import is_linear  # noqa: E402
from partreg.search import find_avoiding_coloring, rado_number  # noqa: E402


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--corpus", default=str(default_corpus_path()))
    ap.add_argument("--max-n", type=int, default=30)
    ap.add_argument("--avoid-n", type=int, default=50)
    args = ap.parse_args(argv)
    entries = load_corpus(args.corpus)
    polys = [e.equation.poly for e in entries]
    for e in entries:
        p = e.equation.poly
        hints = [as_polynomial(h) for h in e.extra.get("hints", [])] + [q for q in polys if q != p]
        factors = [as_polynomial(f) for f in e.extra.get("factors", [])]
        rep = decide_poly(p, factors, hints)
        line = f"{e.id:<18} {rep['equation']:<32} expected {e.expected_status:<7} got {rep['status']:<7} ({rep['method']})"
        if is_linear(p) and not p.coefficient(()):
            t0 = time.perf_counter()
            if rep["status"] == "PR":
                parts = []
                for k in (2, 3):
                    r = rado_number(p, k, "ANY", args.max_n)
                    parts.append(f"k={k}: N*={r.n_star if r.n_star else '>' + str(args.max_n)}")
                line += "  " + ", ".join(parts)
            else:
                k_min = next((k for k in range(1, 7)
                              if find_avoiding_coloring(p, k, args.avoid_n).witness is not None), None)
                line += f"  least avoiding k at N={args.avoid_n}: {k_min if k_min else '>6'}"
            line += f"  [{time.perf_counter() - t0:.1f}s]"
        print(line)


if __name__ == "__main__":
    main()
