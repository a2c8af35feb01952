"""Rado's criterion for linear equations and proof certificates for the rest.

A single linear equation ``sum a_i x_i = 0`` with nonzero coefficients is
partition regular exactly when some nonempty set of coefficients sums to
zero.  :func:`rado_decide` searches for the smallest such set
(meet-in-the-middle, up to 40 variables).

Nonlinear polynomials get a bounded proof search instead of a decision
procedure.  A :class:`Certificate` is a tree whose nodes are closure rules:

``R-LIN``
    linear polynomial with a zero-sum coefficient subset.
``C-LIFT``
    ``sum a_i x_i Q_{F_i}(y)`` over a partition-regular linear base.
``C-MULT``
    a multiple of a certified polynomial.
``C-SUM``
    sum of two certified homogeneous polynomials in disjoint variables.
``C-FACTOR-NEG``
    a product of linear factors that all fail Rado's criterion, so the
    product is *not* partition regular.

:func:`validate_certificate` re-checks every node from scratch, so a
certificate read back from JSON is as trustworthy as a fresh one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import WorkbenchError
from .parser import as_polynomial, parse_poly, print_poly
from .poly import (
    Polynomial,
    coefficient_vector,
    constant_term,
    divide_exact,
    is_homogeneous,
    is_linear,
    is_squarefree_monomial,
    make_monomial,
    monomial_degree,
    product,
)

MAX_RADO_VARS = 40

RULES = ("R-LIN", "C-MULT", "C-SUM", "C-LIFT", "C-FACTOR-NEG")


@dataclass(frozen=True)
class RadoVerdict:
    status: str  # "PR" or "NOT_PR"
    witness: tuple[str, ...] | None = None

    def to_json(self) -> dict:
        return {"status": self.status, "J": list(self.witness) if self.witness else None}


def _coefficients(p) -> list[tuple[str, int]]:
    if isinstance(p, (Polynomial, str)):
        p = as_polynomial(p)
        if not is_linear(p):
            raise WorkbenchError("E_NOT_LINEAR", f"{p} is not linear")
        if constant_term(p):
            raise WorkbenchError("E_CONST_TERM", f"{p} has a nonzero constant term")
        return coefficient_vector(p)
    pairs = sorted((str(v), int(c)) for v, c in p)
    if len({v for v, _ in pairs}) != len(pairs):
        raise WorkbenchError("E_DUPLICATE_VAR", "repeated variable in coefficient list")
    if any(c == 0 for _, c in pairs):
        raise WorkbenchError("E_ZERO_COEFF", "Rado's criterion needs nonzero coefficients")
    return pairs


def _half_table(coefs: Sequence[int]) -> dict:
    """Map (subset sum, subset size) -> lexicographically least subset.

    Subsets are bit keys where index i has weight 2**(L-1-i); among subsets
    of equal size the largest key is the lexicographically least index
    tuple, and adding a later index never changes that ranking, so keeping
    one key per state is enough.
    """
    L = len(coefs)
    table = {(0, 0): 0}
    for i, c in enumerate(coefs):
        bit = 1 << (L - 1 - i)
        for (s, k), key in list(table.items()):
            state = (s + c, k + 1)
            cand = key | bit
            if table.get(state, -1) < cand:
                table[state] = cand
    return table


def _key_to_indices(key: int, L: int, offset: int) -> tuple[int, ...]:
    return tuple(offset + i for i in range(L) if key >> (L - 1 - i) & 1)


def _mitm_dict(coefs: Sequence[int]) -> tuple[int, ...] | None:
    n = len(coefs)
    h = n // 2
    left, right = coefs[:h], coefs[h:]
    tl = _half_table(left)
    by_sum: dict[int, list[tuple[int, int]]] = {}
    for (s, kb), b in _half_table(right).items():
        by_sum.setdefault(s, []).append((kb, b))
    best: tuple[int, tuple[int, ...]] | None = None
    for (s, ka), a in tl.items():
        for kb, b in by_sum.get(-s, ()):
            if ka + kb == 0 or best is not None and ka + kb > best[0]:
                continue
            cand = (ka + kb, _key_to_indices(a, len(left), 0) + _key_to_indices(b, len(right), h))
            if best is None or cand < best:
                best = cand
    return None if best is None else best[1]


def _half_arrays(coefs: Sequence[int]):
    """All subsets of one half as (sums, sizes, keys) with the bit-key
    convention of :func:`_half_table`."""
    L = len(coefs)
    sums = np.zeros(1, dtype=np.int64)
    sizes = np.zeros(1, dtype=np.int64)
    keys = np.zeros(1, dtype=np.int64)
    for i, c in enumerate(coefs):
        bit = 1 << (L - 1 - i)
        sums = np.concatenate([sums, sums + c])
        sizes = np.concatenate([sizes, sizes + 1])
        keys = np.concatenate([keys, keys | bit])
    return sums, sizes, keys


def _best_per_sum(sums, sizes, keys):
    # least size per sum, and among those the largest key (lex-least subset)
    # keys < 2**20 and sizes <= 20, so (size, -key) packs into one int64
    tie = np.argsort(sizes * (1 << 21) - keys, kind="stable")
    order = tie[np.argsort(sums[tie], kind="stable")]
    s, k, b = sums[order], sizes[order], keys[order]
    first = np.ones(len(s), dtype=bool)
    first[1:] = s[1:] != s[:-1]
    return s[first], k[first], b[first]


def _mitm_numpy(coefs: Sequence[int]) -> tuple[int, ...] | None:
    n = len(coefs)
    h = n // 2
    halves = (coefs[:h], coefs[h:])
    full = [_half_arrays(c) for c in halves]
    (ls, lk, lb), (rs, rk, rb) = (_best_per_sum(*f) for f in full)
    cands = []  # (size, indices)
    # zero sums inside one half (the other half contributes nothing)
    for (sums, sizes, keys), L, off in ((full[0], h, 0), (full[1], n - h, h)):
        mask = (sums == 0) & (sizes > 0)
        if mask.any():
            zs, zk, zb = _best_per_sum(sums[mask], sizes[mask], keys[mask])
            cands.append((int(zk[0]), _key_to_indices(int(zb[0]), L, off)))
    # both halves nonempty: left sum s, right sum -s, s != 0
    common, li, ri = np.intersect1d(ls, -rs, assume_unique=True, return_indices=True)
    keep = common != 0
    li, ri = li[keep], ri[keep]
    if len(li):
        total = lk[li] + rk[ri]
        best = total.min()
        for i, j in zip(li[total == best], ri[total == best]):
            idx = _key_to_indices(int(lb[i]), h, 0) + _key_to_indices(int(rb[j]), n - h, h)
            cands.append((int(best), idx))
    return min(cands)[1] if cands else None


_NUMPY_MIN_VARS = 18


def minimal_zero_subset(coefs: Sequence[int]) -> tuple[int, ...] | None:
    """Smallest nonempty index set with zero coefficient sum, ties broken
    lexicographically; None when there is none."""
    coefs = [int(c) for c in coefs]
    if len(coefs) >= _NUMPY_MIN_VARS and sum(abs(c) for c in coefs) < 2 ** 62:
        return _mitm_numpy(coefs)
    return _mitm_dict(coefs)


def rado_decide(p) -> RadoVerdict:
    """Decide partition regularity of a linear form.

    ``p`` is a Polynomial (or its text) or a sequence of ``(variable,
    coefficient)`` pairs.
    """
    pairs = _coefficients(p)
    if not pairs:
        raise WorkbenchError("E_ZERO_POLY", "the zero polynomial has no variables")
    if len(pairs) > MAX_RADO_VARS:
        raise WorkbenchError("E_TOO_MANY_VARS", f"{len(pairs)} variables exceeds {MAX_RADO_VARS}")
    idx = minimal_zero_subset([c for _, c in pairs])
    if idx is None:
        return RadoVerdict("NOT_PR")
    return RadoVerdict("PR", tuple(pairs[i][0] for i in idx))


def brute_force_zero_subset(coefs: Sequence[int]) -> tuple[int, ...] | None:
    """Reference search by increasing size; exponential, for small inputs."""
    for size in range(1, len(coefs) + 1):
        for combo in combinations(range(len(coefs)), size):
            if sum(coefs[i] for i in combo) == 0:
                return combo
    return None


# certificates


@dataclass(frozen=True)
class Certificate:
    root: Polynomial
    rule: str
    premises: tuple["Certificate", ...] = ()
    data: dict = field(default_factory=dict, compare=False)

    @property
    def status(self) -> str:
        return "NOT_PR" if self.rule == "C-FACTOR-NEG" else "PR"

    def to_json(self) -> dict:
        data = {}
        for k, v in self.data.items():
            if isinstance(v, Polynomial):
                v = print_poly(v)
            elif isinstance(v, (list, tuple)):
                v = [print_poly(x) if isinstance(x, Polynomial) else _plain(x) for x in v]
            data[k] = v
        return {
            "rule": self.rule,
            "root": print_poly(self.root),
            "status": self.status,
            "data": data,
            "premises": [c.to_json() for c in self.premises],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        data = dict(obj.get("data", {}))
        for k in ("base", "divisor", "cofactor"):
            if k in data:
                data[k] = parse_poly(data[k])
        if "factors" in data:
            data["factors"] = [parse_poly(f) for f in data["factors"]]
        return cls(
            parse_poly(obj["root"]),
            obj["rule"],
            tuple(cls.from_json(c) for c in obj.get("premises", [])),
            data,
        )


def _plain(x):
    if isinstance(x, (set, frozenset, tuple)):
        return sorted(x) if isinstance(x, (set, frozenset)) else list(x)
    return x


@dataclass
class Validation:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def lift_polynomial(base: Polynomial, xs: Sequence[str], f_sets: Sequence[Iterable[int]],
                    aux: Sequence[str]) -> Polynomial:
    """``sum_i a_i x_i prod_{j in F_i} aux_j`` with 1-based indices into ``aux``."""
    coeffs = dict(coefficient_vector(base))
    terms = {}
    for x, fs in zip(xs, f_sets):
        exps = {x: 1}
        for j in fs:
            exps[aux[j - 1]] = exps.get(aux[j - 1], 0) + 1
        terms[make_monomial(exps)] = coeffs[x]
    return Polynomial(terms)


def r_lin(p: Polynomial) -> Certificate | None:
    verdict = rado_decide(p)
    if verdict.status != "PR":
        return None
    return Certificate(p, "R-LIN", (), {"J": list(verdict.witness)})


def _check_lin(c: Certificate, problems: list[str]) -> None:
    try:
        pairs = dict(_coefficients(c.root))
    except WorkbenchError as exc:
        problems.append(f"R-LIN root {c.root}: {exc.code}")
        return
    J = list(c.data.get("J") or [])
    if not J:
        problems.append("R-LIN: empty witness set")
    elif any(v not in pairs for v in J) or len(set(J)) != len(J):
        problems.append(f"R-LIN: witness {J} is not a set of variables of {c.root}")
    elif sum(pairs[v] for v in J) != 0:
        problems.append(f"R-LIN: coefficients of {J} sum to {sum(pairs[v] for v in J)}, not 0")


def _check_lift(c: Certificate, problems: list[str]) -> None:
    d = c.data
    base, xs, aux, fsets = d.get("base"), list(d.get("xs", [])), list(d.get("aux", [])), d.get("F", [])
    if not isinstance(base, Polynomial):
        problems.append("C-LIFT: missing base polynomial")
        return
    try:
        verdict = rado_decide(base)
    except WorkbenchError as exc:
        problems.append(f"C-LIFT: base {base} unusable: {exc.code}")
        return
    n = len(xs)
    if tuple(sorted(xs)) != base.variables:
        problems.append(f"C-LIFT: xs {xs} do not match base variables {list(base.variables)}")
        return
    if n < 2:
        problems.append("C-LIFT: base needs at least two variables")
    if verdict.status != "PR":
        problems.append(f"C-LIFT: base {base} fails Rado's criterion")
    if len(set(aux)) != len(aux) or set(aux) & set(xs):
        problems.append("C-LIFT: auxiliary variables must be distinct and disjoint from the base")
    fsets = [sorted(set(f)) for f in fsets]
    if len(fsets) != n or any(j < 1 or j > len(aux) for f in fsets for j in f):
        problems.append("C-LIFT: need one subset of {1..m} per base variable")
        return
    if n == 2 and not (fsets[0] or fsets[1]):
        problems.append("C-LIFT: with two base variables F1 and F2 cannot both be empty")
    if problems:
        return
    lifted = lift_polynomial(base, xs, fsets, aux)
    if lifted != c.root:
        problems.append(f"C-LIFT: lift gives {lifted}, not {c.root}")
    if len(c.premises) != 1 or c.premises[0].root != base:
        problems.append("C-LIFT: needs exactly one premise certifying the base")


def _check_sum(c: Certificate, problems: list[str]) -> None:
    if len(c.premises) != 2:
        problems.append("C-SUM: needs exactly two premises")
        return
    p, q = (x.root for x in c.premises)
    for x in (p, q):
        if not x or not is_homogeneous(x):
            problems.append(f"C-SUM: summand {x} is not homogeneous")
    if set(p.variables) & set(q.variables):
        problems.append(f"C-SUM: summands share variables {sorted(set(p.variables) & set(q.variables))}")
    if p + q != c.root:
        problems.append(f"C-SUM: {p} + {q} is not {c.root}")


def _check_mult(c: Certificate, problems: list[str]) -> None:
    divisor, cofactor = c.data.get("divisor"), c.data.get("cofactor")
    if len(c.premises) != 1 or not isinstance(divisor, Polynomial) or not isinstance(cofactor, Polynomial):
        problems.append("C-MULT: needs one premise, a divisor and a cofactor")
        return
    if c.premises[0].root != divisor:
        problems.append("C-MULT: premise does not certify the divisor")
    if not cofactor:
        problems.append("C-MULT: zero cofactor")
    if divisor * cofactor != c.root:
        problems.append(f"C-MULT: ({divisor}) * ({cofactor}) is not {c.root}")


def factor_status(q: Polynomial) -> str:
    """PR / NOT_PR for a linear factor; nonzero constants never vanish."""
    if not q.variables:
        return "NOT_PR"
    return rado_decide(q).status


def _check_factor_neg(c: Certificate, problems: list[str]) -> None:
    factors = list(c.data.get("factors") or [])
    if not factors:
        problems.append("C-FACTOR-NEG: no factors")
        return
    for f in factors:
        if not f:
            problems.append("C-FACTOR-NEG: zero factor")
            continue
        try:
            st = factor_status(f)
        except WorkbenchError as exc:
            problems.append(f"C-FACTOR-NEG: factor {f} not decidable: {exc.code}")
            continue
        if st != "NOT_PR":
            problems.append(f"C-FACTOR-NEG: factor {f} is partition regular")
    if product(factors) != c.root:
        problems.append("C-FACTOR-NEG: factors do not multiply to the root")
    if c.premises:
        problems.append("C-FACTOR-NEG: takes no premises")


_CHECKS = {
    "R-LIN": _check_lin,
    "C-LIFT": _check_lift,
    "C-SUM": _check_sum,
    "C-MULT": _check_mult,
    "C-FACTOR-NEG": _check_factor_neg,
}


def validate_certificate(c: Certificate) -> Validation:
    """Re-check every node; the result is falsy with diagnostics on failure."""
    problems: list[str] = []
    _validate(c, problems)
    return Validation(not problems, problems)


def _validate(c: Certificate, problems: list[str]) -> None:
    check = _CHECKS.get(c.rule)
    if check is None:
        problems.append(f"unknown rule {c.rule!r}")
        return
    if constant_term(c.root):
        problems.append(f"{c.rule}: root {c.root} has a nonzero constant term")
    check(c, problems)
    for prem in c.premises:
        if prem.status != "PR":
            problems.append(f"{c.rule}: premise {prem.root} is not a partition-regularity proof")
        _validate(prem, problems)


# proof search


class _Budget:
    def __init__(self, steps: int):
        self.left = steps
        self.seen: dict[Polynomial, Certificate | None] = {}

    def spend(self) -> bool:
        self.left -= 1
        return self.left >= 0


def match_lift(p: Polynomial):
    """Recognise ``p = sum a_i x_i M_i`` and return ``(base, xs, aux, F)``.

    Each monomial must be squarefree and contain a variable that occurs in
    no other monomial; the alphabetically first such variable becomes
    ``x_i`` and the rest are auxiliary.  Returns None if the shape fails.
    """
    if constant_term(p) or len(p) < 2:
        return None
    occurrences: dict[str, int] = {}
    for m in p:
        if not is_squarefree_monomial(m):
            return None
        for v, _ in m:
            occurrences[v] = occurrences.get(v, 0) + 1
    xs, rest = [], []
    for m in p:
        unique = [v for v, _ in m if occurrences[v] == 1]
        if not unique:
            return None
        xs.append(unique[0])
        rest.append([v for v, _ in m if v != unique[0]])
    aux = sorted({v for r in rest for v in r})
    if set(aux) & set(xs):
        return None
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    base = Polynomial.linear({xs[i]: c for i, (_, c) in enumerate(p.items())})
    f_sets = [[aux.index(v) + 1 for v in rest[i]] for i in order]
    return base, [xs[i] for i in order], aux, f_sets


def _components(p: Polynomial) -> list[Polynomial]:
    """Split ``p`` into summands whose variable sets are pairwise disjoint."""
    parent: dict[str, str] = {}

    def find(v):
        while parent.setdefault(v, v) != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for m in p:
        vs = [v for v, _ in m]
        for v in vs[1:]:
            parent[find(v)] = find(vs[0])
        if vs:
            find(vs[0])
    groups: dict[str, dict] = {}
    for m, c in p.items():
        root = find(m[0][0])
        groups.setdefault(root, {})[m] = c
    comps = [Polynomial(t) for t in groups.values()]
    return sorted(comps, key=lambda q: q.variables)


def derive_certificate(p, budget: int = 10_000, hints: Sequence[Polynomial] = ()) -> Certificate | None:
    """Bounded proof search for partition regularity.

    ``hints`` are candidate divisors (for instance from a corpus); a hint
    that divides ``p`` and is itself certified yields a ``C-MULT`` node.
    Returns None (status UNKNOWN) when no certificate is found within
    ``budget`` steps.
    """
    p = as_polynomial(p)
    if constant_term(p):
        raise WorkbenchError("E_CONST_TERM", f"{p} has nonzero constant term {constant_term(p)}")
    if not p:
        raise WorkbenchError("E_ZERO_POLY", "the zero polynomial is out of scope")
    return _derive(p, _Budget(budget), tuple(as_polynomial(h) for h in hints))


def _derive(p: Polynomial, budget: _Budget, hints: tuple) -> Certificate | None:
    if p in budget.seen:
        return budget.seen[p]
    if not budget.spend():
        return None
    cert = _derive_uncached(p, budget, hints)
    budget.seen[p] = cert
    return cert


def _derive_uncached(p: Polynomial, budget: _Budget, hints: tuple) -> Certificate | None:
    if is_linear(p):
        return r_lin(p) if len(p.variables) <= MAX_RADO_VARS else None

    lift = match_lift(p)
    if lift is not None:
        base, xs, aux, fsets = lift
        guard_ok = len(xs) > 2 or bool(fsets[0] or fsets[1])
        if len(xs) >= 2 and guard_ok and len(xs) <= MAX_RADO_VARS:
            base_cert = r_lin(base)
            if base_cert is not None:
                return Certificate(p, "C-LIFT", (base_cert,),
                                   {"base": base, "xs": xs, "aux": aux, "F": fsets})

    cert = _derive_sum(p, budget, hints)
    if cert is not None:
        return cert

    for h in hints:
        if not h or not h.variables or h == p or h == -p:
            continue
        cof = divide_exact(p, h)
        if cof is None:
            continue
        sub = _derive(h, budget, hints)
        if sub is not None and sub.status == "PR":
            return Certificate(p, "C-MULT", (sub,), {"divisor": h, "cofactor": cof})
    return None


def _derive_sum(p: Polynomial, budget: _Budget, hints: tuple) -> Certificate | None:
    """Try every split of ``p`` into two homogeneous, variable-disjoint parts.

    Splits are unions of the variable-connected components, smallest left
    part first; the left part always holds the first component so each
    split is tried once.
    """
    comps = _components(p)
    c = len(comps)
    if c < 2:
        return None
    first, others = comps[0], comps[1:]
    for size in range(0, c - 1):
        for chosen in combinations(range(c - 1), size):
            left = first + sum((others[i] for i in chosen), Polynomial())
            right = p - left
            if not (is_homogeneous(left) and is_homogeneous(right)):
                continue
            lc = _derive(left, budget, hints)
            if lc is None or lc.status != "PR":
                if budget.left < 0:
                    return None
                continue
            rc = _derive(right, budget, hints)
            if rc is None or rc.status != "PR":
                if budget.left < 0:
                    return None
                continue
            same = monomial_degree(next(iter(left))) == monomial_degree(next(iter(right)))
            return Certificate(p, "C-SUM", (lc, rc), {"homogeneous": same})
    return None
