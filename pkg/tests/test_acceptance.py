"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``.
"""

import io
import itertools
import json
import os
import random
import sys
import time
from contextlib import redirect_stdout
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from partreg import cli  # noqa: E402
from partreg.construct import (  # noqa: E402
    disjoint_sum,
    monomial_lift,
    LiftSpec,
    multiple,
    reciprocal,
    reciprocal_solution_transport,
    sum_solution_transport,
)
from partreg.errors import WorkbenchError  # noqa: E402
from partreg.hypergen import (  # noqa: E402
    Atom,
    Base,
    HyperTerm,
    ODot,
    OPlus,
    S,
    Scale,
    Assumptions,
    concretize,
    normalize,
    random_valuation,
    verify_ap3,
    verify_chain,
    verify_xyzw,
)
from partreg.parser import default_corpus_path, load_corpus, parse_poly, print_poly  # noqa: E402
from partreg.poly import Polynomial, coefficient_vector, evaluate, is_linear, make_monomial  # noqa: E402
from partreg.rado import rado_decide  # noqa: E402
from partreg.search import (  # noqa: E402
    Coloring,
    check_coloring,
    find_avoiding_coloring,
    rado_number,
)

RESULTS: dict[int, bool] = {}

# [DERIVED] regression values, each backed by an oracle below
XYZW_FORCING_N = 2          # (2, 2, 2, 2) solves x + y = z*w
XYZW_WITNESS = (1,)         # the only coloring of {1}
NOT_PR_MIN_AVOIDING_K = {   # least k with an avoiding k-coloring of 1..50
    "x + y - 3*z": 3,
    "x + y - 4*z": 3,
    "x - 2*y": 2,
    "w + z": 1,
    "u + 3*v": 1,
    "x + y + z": 1,
}


_CAPTURE = {}


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    _CAPTURE["capsys"] = capsys
    yield
    _CAPTURE.clear()


def report(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = ok
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    with _CAPTURE["capsys"].disabled():
        print("\n" + line)
    assert ok, line


# independent oracles


def naive_solutions(p, N, mode="ANY"):
    out = []
    for t in itertools.product(range(1, N + 1), repeat=len(p.variables)):
        if evaluate(p, dict(zip(p.variables, t))) != 0:
            continue
        if mode == "DISTINCT" and len(set(t)) < len(t):
            continue
        if mode == "NONDEGENERATE" and len(set(t)) == 1:
            continue
        out.append(t)
    return out


def brute_avoiding_count(sols, N, k, chunk=1 << 20):
    """Number of k-colorings of 1..N (all of them, not just canonical ones)
    with no monochromatic solution, by vectorized exhaustion."""
    total = k ** N
    tuples = [sorted(set(t)) for t in sols]
    count = 0
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = np.empty((N + 1, len(idx)), dtype=np.int8)
        rest = idx.copy()
        for x in range(1, N + 1):
            digits[x] = rest % k
            rest //= k
        bad = np.zeros(len(idx), dtype=bool)
        for t in tuples:
            mono = np.ones(len(idx), dtype=bool)
            for a, b in zip(t, t[1:]):
                mono &= digits[a] == digits[b]
            bad |= mono
        count += int((~bad).sum())
    return count


def naive_least_avoiding(p, k, N, mode="ANY"):
    sols = naive_solutions(p, N, mode)
    for cols in itertools.product(range(1, k + 1), repeat=N):
        try:
            col = Coloring(cols)
        except WorkbenchError:
            continue
        if not any(len({cols[x - 1] for x in t}) == 1 for t in sols):
            return col
    return None


def subset_sum_oracle(coefs):
    return any(sum(c) == 0 for r in range(1, len(coefs) + 1) for c in itertools.combinations(coefs, r))


# criteria


def test_criterion_1_rado_decision():
    cases = {"x - y + z": "PR", "y - x + w": "PR", "x + y - z": "PR", "2*x1 + 7*x2 - 2*x3": "PR",
             "z + w": "NOT_PR", "x + y - 3*z": "NOT_PR", "u + 3*v": "NOT_PR"}
    bad = []
    for text, want in cases.items():
        p = parse_poly(text)
        got = rado_decide(p).status
        oracle = "PR" if subset_sum_oracle([c for _, c in coefficient_vector(p)]) else "NOT_PR"
        if not got == want == oracle:
            bad.append(f"{text}: got {got}, oracle {oracle}, expected {want}")
    report(1, not bad, "; ".join(bad) or f"{len(cases)} forms agree with subset-sum enumeration")


def test_criterion_2_schur_forcing():
    t0 = time.perf_counter()
    r2 = rado_number("x + y = z", 2)
    r3 = rado_number("x + y = z", 3)
    search_s = time.perf_counter() - t0
    p = parse_poly("x + y - z")
    problems = []
    if r2.n_star != 5 or str(r2.witness) != "{1,4}/{2,3}":
        problems.append(f"k=2 gave {r2.n_star} with {r2.witness}")
    if r3.n_star != 14 or r3.witness is None or r3.witness.n_max != 13 or r3.witness.k > 3 \
            or check_coloring(p, r3.witness) is not None:
        problems.append(f"k=3 gave {r3.n_star} with {r3.witness}")
    # brute force over every coloring, no symmetry breaking and no DFS
    for k, n_star in ((2, 5), (3, 14)):
        before = brute_avoiding_count(naive_solutions(p, n_star - 1), n_star - 1, k)
        at = brute_avoiding_count(naive_solutions(p, n_star), n_star, k)
        if not (before > 0 and at == 0):
            problems.append(f"oracle k={k}: {before} avoiding at N={n_star - 1}, {at} at N={n_star}")
    if search_s >= 5:
        problems.append(f"search took {search_s:.1f}s")
    report(2, not problems, "; ".join(problems) or
           f"S(2)=5 {r2.witness}, S(3)=14 {r3.witness}; search {search_s:.2f}s; brute-force oracle agrees")


def test_criterion_3_ap3_forcing():
    p = parse_poly("x + z - 2*y")
    r = rado_number(p, 2, "DISTINCT")
    problems = []
    if r.n_star != 9:
        problems.append(f"got {r.n_star}")
    for N in range(1, 10):
        want = naive_least_avoiding(p, 2, N, "DISTINCT")
        got = find_avoiding_coloring(p, 2, N, "DISTINCT").witness
        if got != want:
            problems.append(f"N={N}: search {got}, oracle {want}")
    report(3, not problems, "; ".join(problems) or f"W(3;2)=9, witness {r.witness}, oracle agrees for N<=9")


def test_criterion_4_xyzw():
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(["--no-cache", "decide", "x + y = z*w"])
    rep = json.loads(buf.getvalue())
    cert = rep["certificate"]
    base = parse_poly(cert["data"]["base"]) if cert else None
    renamed_ok = False
    if base is not None and is_linear(base) and len(base.variables) == 3:
        xs = base.variables
        neg = [v for v in xs if base.coefficient(make_monomial({v: 1})) < 0]
        pos = [v for v in xs if v not in neg]
        if len(neg) == 1:
            renamed = base.rename({pos[0]: "x", pos[1]: "y", neg[0]: "z"})
            renamed_ok = renamed == parse_poly("x + y - z")
    t0 = time.perf_counter()
    r = rado_number("x + y = z*w", 2, "ANY", max_N=200)
    secs = time.perf_counter() - t0
    p = parse_poly("x + y - z*w")
    witness_ok = r.witness is not None and r.witness.n_max == r.n_star - 1 and check_coloring(p, r.witness) is None
    ok = (code == 0 and rep["method"] == "C-LIFT" and renamed_ok and r.n_star == XYZW_FORCING_N
          and witness_ok and r.witness.colors == XYZW_WITNESS and secs < 60)
    report(4, ok, f"decide {rep['status']} via {rep['method']} (base {cert['data']['base'] if cert else None}); "
                  f"N*={r.n_star} (pinned {XYZW_FORCING_N}), witness {r.witness} re-validated; {secs:.2f}s")


def _random_homogeneous(rng, names):
    d = rng.randint(1, 4)
    while True:
        terms = {}
        for _ in range(rng.randint(1, 4)):
            exps = dict.fromkeys(names, 0)
            for _ in range(d):
                exps[rng.choice(names)] += 1
            terms[make_monomial(exps)] = rng.choice([-1, 1]) * rng.randint(1, 9)
        p = Polynomial(terms)
        if p:
            return p


def test_criterion_5_constructors():
    rng = random.Random(55)
    names = ["a", "b", "c", "d"]
    problems = []
    for _ in range(200):
        p = _random_homogeneous(rng, names)
        d = max(sum(e for _, e in m) for m in p.terms)
        pt = {v: Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 4)) for v in p.variables}
        scale = Fraction(1)
        for v in p.variables:
            scale *= pt[v] ** d
        if evaluate(reciprocal(p), pt) != scale * evaluate(p, {v: 1 / x for v, x in pt.items()}):
            problems.append(f"reciprocal identity fails for {p}")
    for _ in range(200):
        d = rng.randint(1, 3)
        a_val, b_val = rng.randint(1, 30), Fraction(rng.randint(1, 30), rng.randint(1, 6))
        p = rng.randint(1, 5) * (Polynomial.var("x", d) - Polynomial.var("y", d))
        q = Polynomial.var("s", d) + Polynomial.var("t", d) - 2 * Polynomial.var("u", d)
        pt = sum_solution_transport(p, q, {"x": a_val, "y": a_val}, {"s": b_val, "t": b_val, "u": b_val})
        if evaluate(p + q, pt) != 0:
            problems.append("sum transport")
    done = 0
    while done < 200:
        coefs = {"x": rng.randint(1, 5), "y": rng.randint(1, 5), "z": -rng.randint(1, 5)}
        p = Polynomial.linear(coefs)
        sols = naive_solutions(p, 10)
        if not sols:
            continue
        out = reciprocal_solution_transport(p, dict(zip(p.variables, rng.choice(sols))))
        if evaluate(reciprocal(p), out) != 0 or min(out.values()) < 1:
            problems.append("reciprocal transport")
        done += 1
    linear_outputs = 0
    for _ in range(100):
        c = rng.randint(1, 6)
        base = Polynomial.linear({"x": c, "y": -c, "z": rng.randint(1, 6)})
        other = Polynomial.linear({"u": 1, "v": 1, "t": -2})
        for con in (disjoint_sum(base, other), multiple(base, rng.randint(2, 7))):
            linear_outputs += 1
            if con.status != "PR" or rado_decide(con.poly).status != "PR":
                problems.append(f"constructor output {con.poly} disagrees with Rado")
    lift = monomial_lift(LiftSpec(parse_poly("2*x1 + 7*x2 - 2*x3"), 2, ((1,), (), (1, 2))))
    if lift.poly != parse_poly("2*x1*y1 + 7*x2 - 2*x3*y1*y2"):
        problems.append("lift example")
    report(5, not problems, "; ".join(sorted(set(problems))) or
           f"200 reciprocal identities, 200+200 transports exact, {linear_outputs} linear outputs agree with Rado")


def _chain_params(rng):
    k = rng.randint(1, 4)
    n = [rng.randint(1, 9)]
    while len(n) < k + 1:
        v = rng.randint(1, 9)
        if v != n[-1]:
            n.append(v)
    return k, n


def test_criterion_6_symbolic():
    problems = []
    ap3 = verify_ap3()
    t = ap3.terms
    if not ap3.ok or not (t["beta"] - t["alpha"] == t["gamma"] - t["beta"] == S(1, "eta")):
        problems.append("ap3")
    if not all(c.lhs == "2U ⊕ U" for c in ap3.checks if c.check.startswith("class(")):
        problems.append("ap3 classes")
    rng = random.Random(66)
    instances = [(1, [2, 1]), (2, [2, 1, 3])] + [_chain_params(rng) for _ in range(50)]
    asm = Assumptions({"xi": "U"}, frozenset({"U"}))
    for k, n in instances:
        rep = verify_chain(k, n)
        target = str(normalize(OPlus(tuple(Scale(v, Base("U")) for v in n)), asm))
        classes = [c for c in rep.checks if c.check.startswith("class(")]
        if not rep.ok or len(classes) != 3 * k or any(c.lhs != target for c in classes):
            problems.append(f"chain k={k} n={n}")
    xyzw = verify_xyzw()
    xi = xyzw.terms
    expansion = xi["xi1"] + xi["xi2"] - (S(0, "alpha") + S(0, "beta")) * xi["xi4"]
    if not xyzw.ok or expansion != HyperTerm():
        problems.append("xyzw")
    report(6, not problems, "; ".join(problems) or
           f"ap3 ok, chain ok on {len(instances)} instances, xyzw identity expands to 0")


def test_criterion_7_cross_layer():
    entries = load_corpus(default_corpus_path())
    failures, notes = [], []
    for e in entries:
        p = e.equation.poly
        if not (p and is_linear(p) and not p.coefficient(())):
            continue
        status = rado_decide(p).status
        if status == "PR":
            for k in (2, 3):
                r = rado_number(p, k, "ANY", max_N=30)
                if r.n_star is None:
                    failures.append(f"{e.id} ({print_poly(p)}) k={k}: still avoidable at N=30")
                else:
                    notes.append(f"{e.id} k={k}: N*={r.n_star}")
        else:
            if find_avoiding_coloring(p, 2, 50).witness is not None:
                notes.append(f"{e.id}: 2-coloring avoids at N=50")
                continue
            k_min = next((k for k in range(3, 7) if find_avoiding_coloring(p, k, 50).witness is not None), None)
            pinned = NOT_PR_MIN_AVOIDING_K.get(print_poly(p))
            if k_min is None or k_min != pinned:
                failures.append(f"{e.id}: least avoiding k at N=50 is {k_min}, pinned {pinned}")
            else:
                notes.append(f"{e.id}: least avoiding k={k_min} (pinned)")
    report(7, not failures, "; ".join(failures) if failures else f"{len(notes)} checks: " + "; ".join(notes))


def test_criterion_8_property_suites():
    t0 = time.perf_counter()
    rng = random.Random(88)
    counts = {}
    names = ["w", "x", "y", "z"]

    def rpoly():
        terms = {}
        for _ in range(rng.randint(0, 4)):
            terms[make_monomial({v: rng.randint(0, 2) for v in rng.sample(names, 2)})] = rng.randint(-9, 9)
        return Polynomial(terms)

    n = 0
    for _ in range(300):
        p, q, r = rpoly(), rpoly(), rpoly()
        pt = {v: rng.randint(-5, 5) for v in names}
        assert p + q == q + p and p * q == q * p
        assert (p + q) + r == p + (q + r) and (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r and not (p - p)
        assert evaluate(p * q, pt) == evaluate(p, pt) * evaluate(q, pt)
        n += 1
    counts["poly ring axioms"] = n

    n = 0
    for _ in range(300):
        p = rpoly()
        assert parse_poly(print_poly(p)) == p
        n += 1
    counts["parser round-trip"] = n

    n = 0
    for _ in range(120):
        a, b, c = (rng.choice([-1, 1]) * rng.randint(1, 3) for _ in range(3))
        p = Polynomial.linear({"x": a, "y": b, "z": c})
        N, k = rng.randint(1, 8), rng.randint(1, 3)
        mode = rng.choice(["ANY", "DISTINCT"])
        assert find_avoiding_coloring(p, k, N, mode).witness == naive_least_avoiding(p, k, N, mode)
        n += 1
    counts["search oracle N<=8"] = n

    def rexpr(depth):
        if depth == 0 or rng.random() < 0.3:
            return Base(rng.choice("UVW"))
        kind = rng.randrange(3)
        if kind == 0:
            return Scale(rng.randint(1, 3), rexpr(depth - 1))
        kids = tuple(rexpr(depth - 1) for _ in range(rng.randint(1, 3)))
        return OPlus(kids) if kind == 1 else ODot(kids)

    n = 0
    for _ in range(300):
        e = rexpr(3)
        asm = Assumptions({}, frozenset(rng.sample("UVW", rng.randint(0, 3))),
                          frozenset(rng.sample("UVW", rng.randint(0, 3))))
        nf = normalize(e, asm)
        assert all(normalize(e, asm, random.Random(rng.random())) == nf for _ in range(3))
        n += 1
    counts["UExpr confluence"] = n

    n = 0
    for _ in range(200):
        def rterm():
            t = HyperTerm.const(rng.randint(-3, 3))
            for _ in range(rng.randint(1, 3)):
                t = t + rng.randint(-4, 4) * S(rng.randint(0, 3), rng.choice("ab")) * S(rng.randint(0, 3), "a")
            return t
        a, b = rterm(), rterm()
        val = random_valuation({Atom(s, m) for s in "ab" for m in range(4)}, rng)
        assert concretize(a + b, val) == concretize(a, val) + concretize(b, val)
        assert concretize(a * b, val) == concretize(a, val) * concretize(b, val)
        n += 1
    counts["concretize homomorphism"] = n

    total, secs = sum(counts.values()), time.perf_counter() - t0
    report(8, total >= 1000 and secs < 30,
           f"{total} randomized cases in {secs:.1f}s: " + ", ".join(f"{k} {v}" for k, v in counts.items()))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
