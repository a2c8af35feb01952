"""Run the generator-calculus verifiers and print their reports.

    python3 scripts/verify_generators.py                 # ap3, xyzw, two chains
    python3 scripts/verify_generators.py --random 50     # plus random chains
"""

import argparse
import json
import os
import random
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from partreg.hypergen import verify_ap3, verify_chain, verify_xyzw  # noqa: E402


def random_chain(rng, k_max=4, n_max=9):
    k = rng.randint(1, k_max)
    n = [rng.randint(1, n_max)]
    while len(n) < k + 1:
        v = rng.randint(1, n_max)
        if v != n[-1]:
            n.append(v)
    return k, n


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--random", type=int, default=0, help="number of random chain instances")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="print full JSON reports")
    args = ap.parse_args(argv)
    reports = [verify_ap3(), verify_ap3(additive_idempotent=False), verify_xyzw(),
               verify_chain(1, [2, 1]), verify_chain(2, [2, 1, 3])]
    rng = random.Random(args.seed)
    reports += [verify_chain(*random_chain(rng)) for _ in range(args.random)]
    for rep in reports:
        if args.json:
            print(json.dumps(rep.to_json(), ensure_ascii=False, indent=2))
            continue
        print(f"{rep.name}: {'ok' if rep.ok else 'FAILED'} ({len(rep.checks)} checks)")
        for c in rep.failures():
            print(f"   fail {c.check}: {c.lhs} vs {c.rhs} {c.detail}")
        for c in rep.checks:
            if c.status == "note":
                print(f"   note {c.check}: {c.lhs} ({c.detail})")
        for note in rep.notes:
            print(f"   note {note}")
    bad = sum(not r.ok for r in reports)
    print(f"{len(reports) - bad}/{len(reports)} reports ok (the second ap3 run drops idempotency and is expected to fail)")


if __name__ == "__main__":
    main()
