"""Command-line front end: ``python3 -m partreg <command> ...``.

Every command prints one JSON report (sorted keys) on standard output.
Exit codes: decide uses 0/1/2 for PR/NOT_PR/UNKNOWN; construct, symbolic
and batch use 0 when every check passes and 1 otherwise; 3 means a search
budget ran out (E_LIMIT); 4 is any other error.  Errors go to standard
error as a JSON object with ``error`` and ``message``.

Results are cached on disk, keyed by the engine version, the command and
its canonicalized inputs.  The cache lives in ``$PARTREG_CACHE_DIR``
(default ``~/.cache/partreg``); ``--no-cache`` bypasses it.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

from . import ENGINE_VERSION
from .construct import LiftSpec, disjoint_sum, factor_check, monomial_lift, multiple, reciprocal
from .errors import SearchLimitError, WorkbenchError
from .hypergen import verify_ap3, verify_chain, verify_xyzw
from .parser import as_polynomial, default_corpus_path, load_corpus, print_poly
from .poly import Polynomial, is_linear
from .rado import derive_certificate, r_lin, rado_decide, validate_certificate
from .search import DEFAULT_NODE_BUDGET, MODES, find_avoiding_coloring, rado_number

CACHE_ENV = "PARTREG_CACHE_DIR"
EXIT_LIMIT = 3
EXIT_ERROR = 4
DECIDE_EXIT = {"PR": 0, "NOT_PR": 1, "UNKNOWN": 2}


@dataclass
class JobRecord:
    command: str
    inputs_hash: str
    result: dict
    exit_code: int
    wall_ms: float
    engine_version: str = ENGINE_VERSION


def schema_path(name: str) -> Path:
    """Published JSON schema for a report (``decide``, ``search``, ..., ``error``)."""
    return Path(__file__).with_name("schemas") / f"{name}.schema.json"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2)


def inputs_hash(command: str, inputs: dict) -> str:
    blob = json.dumps({"engine": ENGINE_VERSION, "command": command, "inputs": inputs},
                      sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class Cache:
    def __init__(self, root: Path | None):
        self.root = root

    @classmethod
    def from_env(cls, disabled: bool = False) -> "Cache":
        if disabled:
            return cls(None)
        root = os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "partreg"
        return cls(Path(root))

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, command: str, key: str) -> JobRecord | None:
        if self.root is None:
            return None
        try:
            rec = JobRecord(**json.loads(self._path(key).read_text(encoding="utf-8")))
        except (OSError, ValueError, TypeError):
            return None
        if rec.inputs_hash != key or rec.engine_version != ENGINE_VERSION or rec.command != command:
            return None
        return rec

    def put(self, rec: JobRecord) -> None:
        if self.root is None:
            return
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            tmp = self._path(rec.inputs_hash).with_suffix(".tmp")
            tmp.write_text(json.dumps(asdict(rec), sort_keys=True, ensure_ascii=False), encoding="utf-8")
            tmp.replace(self._path(rec.inputs_hash))
        except OSError:
            pass  # a read-only cache is not an error


# commands: each returns (report, exit_code) from canonical inputs


def _canon(text: str) -> str:
    return print_poly(as_polynomial(text))


def _split(text: str | None) -> list[str]:
    return [s.strip() for s in (text or "").split(";") if s.strip()]


def decide_poly(p: Polynomial, factors=(), hints=()) -> dict:
    """Status report for ``p = 0``; the shared core of decide and batch."""
    report: dict = {"equation": print_poly(p), "certificate": None}
    if p and is_linear(p) and not p.coefficient(()):
        verdict = rado_decide(p)
        report.update(status=verdict.status, method="rado", J=list(verdict.witness or []))
        if verdict.status == "PR":
            report["certificate"] = r_lin(p).to_json()
        return report
    if factors:
        fr = factor_check(p, factors)
        report["factors"] = fr.to_json()["factors"]
        if fr.conclusion != "UNKNOWN":
            report.update(status=fr.conclusion, method="factor-check", certificate=fr.certificate.to_json())
            return report
    cert = derive_certificate(p, hints=tuple(hints)) if p else None
    if cert is None:
        report.update(status="UNKNOWN", method="none")
    else:
        report.update(status="PR", method=cert.rule, certificate=cert.to_json())
    return report


def run_decide(inp: dict):
    p = as_polynomial(inp["equation"])
    report = decide_poly(p, [as_polynomial(f) for f in inp["factors"]], [as_polynomial(h) for h in inp["hints"]])
    report["command"] = "decide"
    return report, DECIDE_EXIT[report["status"]]


def run_search(inp: dict):
    eq = inp["equation"]
    if inp["find"] == "witness":
        out = find_avoiding_coloring(eq, inp["colors"], inp["max_n"], inp["mode"],
                                     node_budget=inp["node_budget"], workers=inp["workers"])
        report = out.to_json(timing=False)
        report["coloring"] = str(out.witness) if out.witness else None
    else:
        res = rado_number(eq, inp["colors"], inp["mode"], inp["max_n"],
                          node_budget=inp["node_budget"], workers=inp["workers"])
        report = res.to_json()
        report["coloring"] = str(res.witness) if res.witness is not None else None
    report.update(command="search", find=inp["find"])
    return report, 0


def _parse_f_sets(text: str) -> list[list[int]]:
    sets = []
    for chunk in text.split(";"):
        chunk = chunk.strip().strip("{}").strip()
        try:
            sets.append([int(x) for x in chunk.split(",") if x.strip()])
        except ValueError:
            raise WorkbenchError("E_BAD_LIFT", f"cannot read index set {chunk!r}") from None
    return sets


def run_construct(inp: dict):
    op = inp["op"]
    checks = []
    report: dict = {"command": "construct", "op": op}
    if op == "factor-check":
        fr = factor_check(inp["poly"], inp["factors"])
        report.update(fr.to_json())
        report["status"] = fr.conclusion
        cert = fr.certificate
        poly = fr.poly
    elif op == "reciprocal":
        poly = reciprocal(inp["poly"])
        report["input"] = inp["poly"]
        cert = None
        checks.append({"check": "homogeneous input", "status": "pass"})
    else:
        if op == "multiple":
            con = multiple(inp["poly"], inp["other"])
        elif op == "sum":
            con = disjoint_sum(inp["poly"], inp["other"])
        elif op == "lift":
            f_sets = _parse_f_sets(inp["F"])
            m = inp["m"] or max((j for f in f_sets for j in f), default=0)
            con = monomial_lift(LiftSpec(as_polynomial(inp["base"]), m, tuple(f_sets), tuple(inp["aux"])))
        else:
            raise WorkbenchError("E_BAD_ARGS", f"unknown operation {op!r}")
        poly, cert = con.poly, con.certificate
        report["status"] = con.status
        report["homogeneous"] = con.homogeneous
    report["poly"] = print_poly(poly)
    report["certificate"] = cert.to_json() if cert is not None else None
    if cert is not None:
        v = validate_certificate(cert)
        checks.append({"check": "certificate validates", "status": "pass" if v else "fail"})
    if cert is not None and cert.status == "PR" and is_linear(poly) and not poly.coefficient(()):
        agree = rado_decide(poly).status == "PR"
        checks.append({"check": "agrees with Rado's criterion", "status": "pass" if agree else "fail"})
    report["checks"] = checks
    ok = all(c["status"] == "pass" for c in checks)
    return report, 0 if ok else 1


def run_symbolic(inp: dict):
    which = inp["verify"]
    idem = not inp["no_idempotent"]
    if which == "ap3":
        rep = verify_ap3(additive_idempotent=idem)
    elif which == "chain":
        rep = verify_chain(inp["k"], inp["n"], additive_idempotent=idem)
    else:
        rep = verify_xyzw(multiplicative_idempotent=idem)
    report = rep.to_json()
    report["command"] = "symbolic"
    return report, 0 if rep.ok else 1


def run_batch(inp: dict):
    entries = load_corpus(inp["corpus"])
    polys = [e.equation.poly for e in entries]
    rows, counts = [], {"agree": 0, "disagree": 0, "open": 0}
    for e in entries:
        hints = [as_polynomial(h) for h in e.extra.get("hints", [])]
        hints += [q for q in polys if q != e.equation.poly]
        factors = [as_polynomial(f) for f in e.extra.get("factors", [])]
        rep = decide_poly(e.equation.poly, factors, hints)
        got, want = rep["status"], e.expected_status
        if got == want:
            verdict = "agree"
        elif "UNKNOWN" in (got, want):
            verdict = "open"
        else:
            verdict = "disagree"
        counts[verdict] += 1
        rows.append({"id": e.id, "equation": rep["equation"], "expected": want, "status": got,
                     "method": rep["method"], "verdict": verdict})
    report = {"command": "batch", "entries": rows, "summary": counts, "total": len(rows)}
    return report, 0 if counts["disagree"] == 0 else 1


COMMANDS: dict[str, Callable] = {
    "decide": run_decide,
    "search": run_search,
    "construct": run_construct,
    "symbolic": run_symbolic,
    "batch": run_batch,
}


def canonical_inputs(args: argparse.Namespace) -> dict:
    """Inputs that determine the report, with polynomials in canonical text."""
    c = args.command
    if c == "decide":
        return {"equation": _canon(args.equation), "factors": [_canon(f) for f in _split(args.factors)],
                "hints": [_canon(h) for h in args.hint]}
    if c == "search":
        return {"equation": _canon(args.equation), "colors": args.colors, "max_n": args.max_n,
                "mode": args.mode, "find": args.find, "node_budget": args.node_budget,
                "workers": args.workers}
    if c == "construct":
        return {"op": args.op,
                "poly": _canon(args.poly) if args.poly else None,
                "other": _canon(args.other) if args.other else None,
                "base": _canon(args.base) if args.base else None,
                "F": args.F, "m": args.m, "aux": _split(args.aux.replace(",", ";")) if args.aux else [],
                "factors": [_canon(f) for f in _split(args.factors)]}
    if c == "symbolic":
        n = [int(x) for x in args.n.split(",")] if args.n else []
        return {"verify": args.verify, "k": args.k if args.k is not None else max(len(n) - 1, 1),
                "n": n, "no_idempotent": args.no_idempotent}
    if c == "batch":
        path = Path(args.corpus) if args.corpus else default_corpus_path()
        try:
            digest = hashlib.sha256(path.read_bytes()).hexdigest()
        except OSError as exc:
            raise WorkbenchError("E_IO", f"cannot read {path}: {exc.strerror}") from None
        return {"corpus": str(path), "corpus_sha256": digest}
    raise WorkbenchError("E_BAD_ARGS", f"unknown command {c!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="partreg", description=__doc__.splitlines()[0])
    ap.add_argument("--timing", action="store_true", help="add wall_ms to the report")
    ap.add_argument("--no-cache", action="store_true", help="neither read nor write the result cache")
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="PR / NOT_PR / UNKNOWN with a certificate")
    d.add_argument("equation")
    d.add_argument("--factors", help="semicolon-separated factorization to check")
    d.add_argument("--hint", action="append", default=[], help="candidate divisor for C-MULT (repeatable)")

    s = sub.add_parser("search", help="finite coloring search")
    s.add_argument("equation")
    s.add_argument("--colors", "-k", type=int, default=2)
    s.add_argument("--max-n", type=int, default=100)
    s.add_argument("--mode", choices=MODES, default="ANY")
    s.add_argument("--find", choices=("rado-number", "witness"), default="rado-number")
    s.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    s.add_argument("--workers", type=int, default=1)

    c = sub.add_parser("construct", help="closure constructions")
    c.add_argument("--op", required=True, choices=("multiple", "sum", "reciprocal", "lift", "factor-check"))
    c.add_argument("--poly")
    c.add_argument("--other", help="second operand of multiple/sum")
    c.add_argument("--base", help="linear base of a lift")
    c.add_argument("--F", help='index sets of a lift, e.g. "{1};{};{1,2}"')
    c.add_argument("--m", type=int, help="number of auxiliary variables (default: largest index)")
    c.add_argument("--aux", help="comma-separated auxiliary names")
    c.add_argument("--factors", help="semicolon-separated factors for factor-check")

    y = sub.add_parser("symbolic", help="generator-calculus verifiers")
    y.add_argument("--verify", required=True, choices=("ap3", "chain", "xyzw"))
    y.add_argument("--k", type=int)
    y.add_argument("--n", help="comma-separated n_1..n_{k+1}")
    y.add_argument("--no-idempotent", action="store_true", help="drop the idempotency assumption")

    b = sub.add_parser("batch", help="decide every entry of a corpus file")
    b.add_argument("--corpus", help="JSONL corpus (default: bundled corpus)")
    return ap


def _missing(args) -> str | None:
    if args.command == "construct":
        need = {"multiple": ("poly", "other"), "sum": ("poly", "other"), "reciprocal": ("poly",),
                "lift": ("base", "F"), "factor-check": ("poly", "factors")}[args.op]
        for name in need:
            if not getattr(args, name):
                return f"--op {args.op} needs --{name}"
    if args.command == "symbolic" and args.verify == "chain" and not args.n:
        return "--verify chain needs --n"
    if args.command == "search" and (args.colors < 1 or args.max_n < 1):
        return "--colors and --max-n must be at least 1"
    return None


def _fail(code: str, message: str, extra: dict | None = None) -> None:
    err = {"error": code, "message": message}
    err.update(extra or {})
    print(dumps(err), file=sys.stderr)


def main(argv=None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            return 0
        # argparse uses 2, which decide reserves for UNKNOWN
        _fail("E_BAD_ARGS", "invalid command line")
        return EXIT_ERROR
    problem = _missing(args)
    if problem:
        _fail("E_BAD_ARGS", problem)
        return EXIT_ERROR
    cache = Cache.from_env(args.no_cache)
    try:
        inputs = canonical_inputs(args)
        key = inputs_hash(args.command, inputs)
        rec = cache.get(args.command, key)
        if rec is None:
            t0 = time.perf_counter()
            report, code = COMMANDS[args.command](inputs)
            rec = JobRecord(args.command, key, report, code, (time.perf_counter() - t0) * 1000)
            cache.put(rec)
    except SearchLimitError as exc:
        _fail(exc.code, exc.message, {"stats": exc.stats})
        return EXIT_LIMIT
    except WorkbenchError as exc:
        _fail(exc.code, exc.message)
        return EXIT_ERROR
    report = dict(rec.result)
    if args.timing:
        report["wall_ms"] = round(rec.wall_ms, 3)
    print(dumps(report))
    return rec.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
