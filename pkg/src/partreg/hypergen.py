"""Formal calculus of ultrafilter generators in iterated hyperextensions.

A :class:`HyperTerm` is an integer polynomial in *atoms* ``S_m(s)``: a
base symbol ``s`` (a hypernatural of the first extension, level 0) with
the star map applied ``m`` times.  The module provides

* height, star shift and the sum/product combination rules;
* :func:`infer_class`, which reads a term back as an ultrafilter
  expression (:class:`UExpr`) built from base ultrafilters with
  ``OPLUS``, ``ODOT`` and image scaling ``SCALE(n, .)``;
* a small rewriting system that normalizes ``UExpr`` trees, using
  idempotency assumptions per ultrafilter;
* the three verifiers :func:`verify_ap3`, :func:`verify_chain` and
  :func:`verify_xyzw`, which rebuild known generator constructions and
  check every claimed property as an exact term identity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .errors import WorkbenchError


class Atom(NamedTuple):
    base: str
    level: int = 0

    def __str__(self) -> str:
        return self.base if self.level == 0 else f"S{self.level}({self.base})"


# a monomial is a sorted tuple of (Atom, multiplicity); () is the constant 1
HMono = tuple


def _mono_mul(a: HMono, b: HMono) -> HMono:
    exps = dict(a)
    for at, e in b:
        exps[at] = exps.get(at, 0) + e
    return tuple(sorted(exps.items()))


def _mono_str(m: HMono) -> str:
    return "*".join(str(a) if e == 1 else f"{a}^{e}" for a, e in m)


class HyperTerm:
    """Immutable integer combination of products of atoms."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[HMono, int] | None = None):
        clean: dict = {}
        for m, c in (terms or {}).items():
            m = tuple(sorted(m))
            if c:
                clean[m] = clean.get(m, 0) + int(c)
        self._terms = {m: c for m, c in sorted(clean.items(), key=_term_order) if c}

    @classmethod
    def atom(cls, base: str, level: int = 0, coeff: int = 1) -> "HyperTerm":
        if level < 0:
            raise WorkbenchError("E_BAD_LEVEL", "atom levels are nonnegative")
        return cls({((Atom(base, level), 1),): coeff})

    @classmethod
    def const(cls, n: int) -> "HyperTerm":
        return cls({(): n})

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = HyperTerm.const(other)
        return isinstance(other, HyperTerm) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other) -> "HyperTerm":
        other = _coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return HyperTerm(out)

    __radd__ = __add__

    def __neg__(self) -> "HyperTerm":
        return HyperTerm({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "HyperTerm":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "HyperTerm":
        return _coerce(other) - self

    def __mul__(self, other) -> "HyperTerm":
        other = _coerce(other)
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return HyperTerm(out)

    __rmul__ = __mul__

    def atoms(self) -> set[Atom]:
        return {a for m in self._terms for a, _ in m}

    def is_linear(self) -> bool:
        return all(len(m) == 1 and m[0][1] == 1 for m in self._terms)

    def substitute(self, mapping: Mapping[Atom, "HyperTerm"]) -> "HyperTerm":
        out = HyperTerm()
        for m, c in self._terms.items():
            piece = HyperTerm.const(c)
            for a, e in m:
                factor = mapping.get(a, HyperTerm({((a, 1),): 1}))
                for _ in range(e):
                    piece = piece * factor
            out = out + piece
        return out

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self._terms.items()):
            a = abs(c)
            body = str(a) if not m else (_mono_str(m) if a == 1 else f"{a}*{_mono_str(m)}")
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    __repr__ = lambda self: f"HyperTerm({str(self)!r})"


def _term_order(mc):
    m, _ = mc
    return (max((a.level for a, _ in m), default=-1), m)


def _coerce(x) -> HyperTerm:
    if isinstance(x, HyperTerm):
        return x
    if isinstance(x, int):
        return HyperTerm.const(x)
    raise TypeError(f"cannot combine HyperTerm with {type(x).__name__}")


def S(level: int, base: str, coeff: int = 1) -> HyperTerm:
    """``coeff * S_level(base)`` as a term."""
    return HyperTerm.atom(base, level, coeff)


def height(t: HyperTerm) -> int:
    """0 for a standard term, else one more than the highest atom level."""
    levels = [a.level for a in t.atoms()]
    return max(levels) + 1 if levels else 0


def star_shift(t: HyperTerm, m: int) -> HyperTerm:
    if m < 0:
        raise WorkbenchError("E_BAD_LEVEL", "shift must be nonnegative")
    if m == 0:
        return t
    return HyperTerm({tuple((Atom(a.base, a.level + m), e) for a, e in mono): c for mono, c in t.items()})


def combine_add(a: HyperTerm, b: HyperTerm) -> HyperTerm:
    """``a + S_{h(a)}(b)``, a generator of the sum of the two classes."""
    h = height(a)
    if h == 0:
        raise WorkbenchError("E_STANDARD_LEFT", "left operand has no atoms")
    return a + star_shift(b, h)


def combine_mul(a: HyperTerm, b: HyperTerm) -> HyperTerm:
    """``a * S_{h(a)}(b)``, a generator of the product of the two classes."""
    h = height(a)
    if h == 0:
        raise WorkbenchError("E_STANDARD_LEFT", "left operand has no atoms")
    return a * star_shift(b, h)


def concretize(t: HyperTerm, valuation: Mapping[Atom, int]) -> int:
    """Evaluate ``t`` with every atom replaced by an integer."""
    total = 0
    for m, c in t.items():
        val = c
        for a, e in m:
            try:
                val *= valuation[a] ** e
            except KeyError:
                raise WorkbenchError("E_UNBOUND_ATOM", f"no value for atom {a}") from None
        total += val
    return total


def term_compare(s: HyperTerm, t: HyperTerm) -> int:
    """Order of two linear terms over one base symbol: -1, 0 or 1.

    A positive multiple of a level-(m+1) atom exceeds every combination of
    lower levels, so terms compare by coefficients from the top level
    down, with the standard part last.
    """
    bases = set()
    for x in (s, t):
        for m, _ in x.items():
            if len(m) > 1 or (m and m[0][1] != 1):
                raise WorkbenchError("E_NONLINEAR_ORDER", f"{x} is not a linear term")
            bases.update(a.base for a, _ in m)
    if len(bases) > 1:
        raise WorkbenchError("E_MIXED_BASE", f"terms mention several base symbols {sorted(bases)}")

    def coeffs(x: HyperTerm) -> dict[int, int]:
        return {(m[0][0].level if m else -1): c for m, c in x.items()}

    cs, ct = coeffs(s), coeffs(t)
    for level in sorted(set(cs) | set(ct), reverse=True):
        a, b = cs.get(level, 0), ct.get(level, 0)
        if a != b:
            return -1 if a < b else 1
    return 0


# ultrafilter expressions


class UExpr:
    """Base class of ultrafilter expression nodes."""

    def children(self) -> tuple["UExpr", ...]:
        return ()

    def with_children(self, kids: Sequence["UExpr"]) -> "UExpr":
        return self


@dataclass(frozen=True)
class Base(UExpr):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Scale(UExpr):
    """Image of ``arg`` under multiplication by ``n`` (not an n-fold sum)."""

    n: int
    arg: UExpr

    def __post_init__(self):
        if self.n < 1:
            raise WorkbenchError("E_BAD_SCALE", "scale factors are positive integers")

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        return Scale(self.n, kids[0])

    def __str__(self) -> str:
        inner = str(self.arg)
        return f"{self.n}{inner}" if isinstance(self.arg, Base) else f"{self.n}({inner})"


@dataclass(frozen=True)
class OPlus(UExpr):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise WorkbenchError("E_EMPTY_EXPR", "OPLUS needs at least one operand")

    def children(self):
        return self.args

    def with_children(self, kids):
        return OPlus(tuple(kids))

    def __str__(self) -> str:
        return " ⊕ ".join(_wrap(a, OPlus) for a in self.args)


@dataclass(frozen=True)
class ODot(UExpr):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise WorkbenchError("E_EMPTY_EXPR", "ODOT needs at least one operand")

    def children(self):
        return self.args

    def with_children(self, kids):
        return ODot(tuple(kids))

    def __str__(self) -> str:
        return " ⊙ ".join(_wrap(a, ODot) for a in self.args)


def _wrap(x: UExpr, parent: type) -> str:
    return f"({x})" if isinstance(x, (OPlus, ODot)) and not isinstance(x, parent) else str(x)


def uexpr_to_json(x: UExpr):
    if isinstance(x, Base):
        return x.name
    if isinstance(x, Scale):
        return {"SCALE": [x.n, uexpr_to_json(x.arg)]}
    tag = "OPLUS" if isinstance(x, OPlus) else "ODOT"
    return {tag: [uexpr_to_json(a) for a in x.args]}


@dataclass(frozen=True)
class Assumptions:
    """Which base symbol generates which ultrafilter, and idempotency flags.

    Symbols missing from ``generators`` name their own ultrafilter.
    """

    generators: Mapping[str, str] = field(default_factory=dict)
    additive: frozenset = frozenset()
    multiplicative: frozenset = frozenset()

    def ultrafilter(self, symbol: str) -> str:
        return self.generators.get(symbol, symbol)


def add_idempotent(x: UExpr, asm: Assumptions) -> bool:
    # nU + nU = n(U + U) = nU
    if isinstance(x, Base):
        return x.name in asm.additive
    if isinstance(x, Scale):
        return add_idempotent(x.arg, asm)
    return False


def mul_idempotent(x: UExpr, asm: Assumptions) -> bool:
    if isinstance(x, Base):
        return x.name in asm.multiplicative
    if isinstance(x, Scale) and x.n == 1:
        return mul_idempotent(x.arg, asm)
    return False


def _scale_bottom(x: UExpr) -> UExpr:
    while isinstance(x, Scale):
        x = x.arg
    return x


# Each rule rewrites one node in place or returns None.
Rule = Callable[[UExpr, Assumptions], "UExpr | None"]


def r_flatten(x, asm):
    for cls in (OPlus, ODot):
        if isinstance(x, cls):
            for i, a in enumerate(x.args):
                if isinstance(a, cls):
                    return cls(x.args[:i] + a.args + x.args[i + 1:])
    return None


def r_singleton(x, asm):
    if isinstance(x, (OPlus, ODot)) and len(x.args) == 1:
        return x.args[0]
    return None


def r_distribute(x, asm):
    if isinstance(x, Scale) and isinstance(x.arg, OPlus):
        return OPlus(tuple(Scale(x.n, a) for a in x.arg.args))
    return None


def r_compose(x, asm):
    if isinstance(x, Scale) and isinstance(x.arg, Scale):
        return Scale(x.n * x.arg.n, x.arg.arg)
    return None


def r_unit(x, asm):
    if isinstance(x, Scale) and x.n == 1:
        return x.arg
    return None


def r_pull_scale(x, asm):
    # n(U . V) = (nU) . V = U . (nV); scalings over an OPLUS are distributed instead
    if isinstance(x, ODot):
        for i, a in enumerate(x.args):
            if isinstance(a, Scale) and not isinstance(_scale_bottom(a), OPlus):
                return Scale(a.n, ODot(x.args[:i] + (a.arg,) + x.args[i + 1:]))
    return None


def r_merge_add(x, asm):
    if isinstance(x, OPlus):
        for i in range(len(x.args) - 1):
            a = x.args[i]
            if a == x.args[i + 1] and add_idempotent(a, asm):
                return OPlus(x.args[:i] + x.args[i + 1:])
    return None


def r_merge_mul(x, asm):
    if isinstance(x, ODot):
        for i in range(len(x.args) - 1):
            a = x.args[i]
            if a == x.args[i + 1] and mul_idempotent(a, asm):
                return ODot(x.args[:i] + x.args[i + 1:])
    return None


RULES: dict[str, Rule] = {
    "flatten": r_flatten,
    "singleton": r_singleton,
    "distribute": r_distribute,
    "compose": r_compose,
    "unit": r_unit,
    "pull-scale": r_pull_scale,
    "merge-add": r_merge_add,
    "merge-mul": r_merge_mul,
}


def _redexes(x: UExpr, asm: Assumptions, path=()):
    for name, rule in RULES.items():
        out = rule(x, asm)
        if out is not None:
            yield path, name, out
    for i, kid in enumerate(x.children()):
        yield from _redexes(kid, asm, path + (i,))


def _replace(x: UExpr, path: tuple, new: UExpr) -> UExpr:
    if not path:
        return new
    kids = list(x.children())
    kids[path[0]] = _replace(kids[path[0]], path[1:], new)
    return x.with_children(kids)


def normalize(x: UExpr, asm: Assumptions = Assumptions(), rng: random.Random | None = None,
              max_steps: int = 100_000) -> UExpr:
    """Rewrite ``x`` until no rule applies.

    The default strategy rewrites the first redex in pre-order; with
    ``rng`` a random redex is chosen each step (used to test confluence).
    """
    for _ in range(max_steps):
        if rng is None:
            step = next(_redexes(x, asm), None)
        else:
            found = list(_redexes(x, asm))
            step = rng.choice(found) if found else None
        if step is None:
            return x
        path, _, new = step
        x = _replace(x, path, new)
    raise WorkbenchError("E_LIMIT", "normalization did not terminate")


def oplus(*xs: UExpr) -> UExpr:
    return OPlus(tuple(xs)) if len(xs) > 1 else xs[0]


def odot(*xs: UExpr) -> UExpr:
    return ODot(tuple(xs)) if len(xs) > 1 else xs[0]


# class inference


def _levels(m: HMono) -> tuple[int, int]:
    lv = [a.level for a, _ in m]
    return min(lv), max(lv)


def infer_class(t: HyperTerm, asm: Assumptions = Assumptions()) -> UExpr:
    """Ultrafilter expression generated by ``t``, in normal form.

    Sums split at the lowest level ``L`` that separates the monomials into
    a lower block and an upper block (the upper block is a star shift of a
    smaller term, level gaps included); products split their atoms the
    same way; ``n * S_m(s)`` is ``SCALE(n, U_s)``.  Terms of any other
    shape raise ``E_NO_DECOMPOSITION``.
    """
    if not t:
        raise WorkbenchError("E_NO_DECOMPOSITION", "the zero term generates nothing")
    return normalize(_infer(t, asm), asm)


def _infer(t: HyperTerm, asm: Assumptions) -> UExpr:
    items = list(t.items())
    if any(not m for m, _ in items):
        raise WorkbenchError("E_NO_DECOMPOSITION", f"{t} has a standard summand")
    if len(items) > 1:
        spans = [_levels(m) for m, _ in items]
        for cut in sorted({lo for lo, _ in spans})[1:]:
            if all(hi < cut or lo >= cut for lo, hi in spans):
                lower = HyperTerm({m: c for (m, c), (lo, hi) in zip(items, spans) if hi < cut})
                upper = HyperTerm({m: c for (m, c), (lo, hi) in zip(items, spans) if lo >= cut})
                return OPlus((_infer(lower, asm), _infer(upper, asm)))
        raise WorkbenchError("E_NO_DECOMPOSITION", f"{t} does not split into level blocks")
    (m, c), = items
    if c < 1:
        raise WorkbenchError("E_NO_DECOMPOSITION", f"{t} has a nonpositive coefficient")
    if len(m) == 1 and m[0][1] == 1:
        return Scale(c, Base(asm.ultrafilter(m[0][0].base)))
    levels = sorted({a.level for a, _ in m})
    if len(levels) == 1:
        raise WorkbenchError("E_NO_DECOMPOSITION", f"{t} multiplies atoms of the same level")
    cut = levels[1]
    low = HyperTerm({tuple((a, e) for a, e in m if a.level < cut): 1})
    high = HyperTerm({tuple((a, e) for a, e in m if a.level >= cut): 1})
    return Scale(c, ODot((_infer(low, asm), _infer(high, asm))))


# verifiers


@dataclass
class Check:
    check: str
    status: str  # "pass", "fail" or "note"
    lhs: str = ""
    rhs: str = ""
    detail: str = ""

    def to_json(self) -> dict:
        out = {"check": self.check, "status": self.status, "lhs": self.lhs, "rhs": self.rhs}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class VerificationReport:
    name: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    terms: dict[str, HyperTerm] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def to_json(self) -> dict:
        return {
            "verifier": self.name,
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
            "terms": {k: str(v) for k, v in self.terms.items()},
            "notes": list(self.notes),
        }

    def identity(self, name: str, lhs: HyperTerm, rhs: HyperTerm) -> None:
        self.checks.append(Check(name, "pass" if lhs == rhs else "fail", str(lhs), str(rhs)))

    def less(self, name: str, lhs: HyperTerm, rhs: HyperTerm) -> None:
        try:
            ok = term_compare(lhs, rhs) < 0
            detail = ""
        except WorkbenchError as exc:
            ok, detail = False, exc.code
        self.checks.append(Check(name, "pass" if ok else "fail", str(lhs), str(rhs), detail))

    def klass(self, name: str, t: HyperTerm, target: UExpr, asm: Assumptions) -> None:
        target = normalize(target, asm)
        try:
            got = infer_class(t, asm)
        except WorkbenchError as exc:
            self.checks.append(Check(name, "fail", str(t), str(target), exc.code))
            return
        status = "pass" if got == target else "fail"
        self.checks.append(Check(name, status, str(got), str(target)))


def verify_ap3(additive_idempotent: bool = True, symbol: str = "eta", uf: str = "U") -> VerificationReport:
    """Three generators of ``2U + U`` forming a 3-term progression."""
    asm = Assumptions({symbol: uf}, frozenset({uf}) if additive_idempotent else frozenset())
    eta = lambda lv, c=1: S(lv, symbol, c)
    alpha = eta(0, 2) + eta(2)
    beta = eta(0, 2) + eta(1) + eta(2)
    gamma = eta(0, 2) + eta(1, 2) + eta(2)
    rep = VerificationReport("ap3", terms={"alpha": alpha, "beta": beta, "gamma": gamma})
    target = OPlus((Scale(2, Base(uf)), Base(uf)))
    for name, t in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        rep.klass(f"class({name})", t, target, asm)
    rep.less("alpha < beta", alpha, beta)
    rep.less("beta < gamma", beta, gamma)
    rep.identity("beta - alpha = gamma - beta", beta - alpha, gamma - beta)
    rep.identity("common difference = S1(eta)", beta - alpha, eta(1))
    if not additive_idempotent:
        rep.notes.append(f"{uf} not assumed additively idempotent")
    return rep


def chain_terms(k: int, n: Sequence[int], symbol: str = "xi"):
    """``(alpha_i, beta_i, gamma_i)`` for ``i = 1..k``.

    ``alpha_1 = sum_{i<=k+1} n_i S_{2(i-1)}``; then ``beta_i = alpha_i +
    n_i S_{2i-1}``, ``gamma_i = alpha_i + n_{i+1} S_{2i-1}`` and
    ``alpha_{i+1} = gamma_i``.
    """
    alpha = HyperTerm()
    for i in range(1, k + 2):
        alpha = alpha + S(2 * (i - 1), symbol, n[i - 1])
    out = []
    for i in range(1, k + 1):
        beta = alpha + S(2 * i - 1, symbol, n[i - 1])
        gamma = alpha + S(2 * i - 1, symbol, n[i])
        out.append((alpha, beta, gamma))
        alpha = gamma
    return out


def verify_chain(k: int, n: Sequence[int], additive_idempotent: bool = True,
                 symbol: str = "xi", uf: str = "U") -> VerificationReport:
    """Generators ``x_i = alpha_i, y_i = beta_i, z_i = gamma_i`` of
    ``n_1 U + ... + n_{k+1} U`` with ``x_i < y_i``, ``x_i < z_i``,
    ``n_i (z_i - x_i) = n_{i+1} (y_i - x_i)`` and ``x_{i+1} = z_i``."""
    n = [int(v) for v in n]
    if k < 1 or len(n) != k + 1 or any(v < 1 for v in n):
        raise WorkbenchError("E_BAD_ARGS", f"need k >= 1 and k+1 positive integers, got k={k}, n={n}")
    for i in range(k):
        if n[i] == n[i + 1]:
            raise WorkbenchError("E_HYPOTHESIS", f"n_{i + 1} = n_{i + 2} = {n[i]}")
    asm = Assumptions({symbol: uf}, frozenset({uf}) if additive_idempotent else frozenset())
    target = OPlus(tuple(Scale(v, Base(uf)) for v in n))
    triples = chain_terms(k, n, symbol)
    rep = VerificationReport(f"chain k={k} n={tuple(n)}")
    for i, (a, b, g) in enumerate(triples, start=1):
        rep.terms.update({f"alpha{i}": a, f"beta{i}": b, f"gamma{i}": g})
        rep.less(f"(1) alpha{i} < beta{i}", a, b)
        rep.less(f"(1) alpha{i} < gamma{i}", a, g)
        rep.identity(f"(2) n{i}(gamma{i} - alpha{i}) = n{i + 1}(beta{i} - alpha{i})",
                     n[i - 1] * (g - a), n[i] * (b - a))
        if i < k:
            rep.identity(f"(3) alpha{i + 1} = gamma{i}", triples[i][0], g)
        for name, t in ((f"alpha{i}", a), (f"beta{i}", b), (f"gamma{i}", g)):
            rep.klass(f"class({name})", t, target, asm)
    rep.notes.append("beta_i carries n_i and gamma_i carries n_{i+1}; for k=1, n=(2,1) this swaps the "
                     "names of the middle and top 3-AP terms (gamma1 lies between alpha1 and beta1)")
    rep.notes.append(f"target class has k+1 = {k + 1} summands n_1..n_{k + 1}")
    return rep


def verify_xyzw(multiplicative_idempotent: bool = True, uf: str = "U") -> VerificationReport:
    """Generators of one ultrafilter solving ``x + y = z*w``.

    From ``alpha + beta = gamma`` (all generating U):
    ``xi1 = alpha*S1(alpha)``, ``xi2 = beta*S1(alpha)``, ``xi3 = gamma``,
    ``xi4 = S1(alpha)``.
    """
    asm = Assumptions({"alpha": uf, "beta": uf, "gamma": uf},
                      multiplicative=frozenset({uf}) if multiplicative_idempotent else frozenset())
    a, b, g = S(0, "alpha"), S(0, "beta"), S(0, "gamma")
    a1 = S(1, "alpha")
    xi = {"xi1": a * a1, "xi2": b * a1, "xi3": g, "xi4": a1}
    rep = VerificationReport("xyzw", terms=dict(xi))
    relation = {Atom("gamma", 0): a + b}
    expr = xi["xi1"] + xi["xi2"] - xi["xi3"] * xi["xi4"]
    rep.identity("xi1 + xi2 - xi3*xi4 = 0 given gamma = alpha + beta", expr.substitute(relation), HyperTerm())
    for name, t in xi.items():
        rep.klass(f"class({name})", t, Base(uf), asm)
    residue = xi["xi1"] + xi["xi2"] - a * xi["xi4"]
    rep.checks.append(Check("with xi3 = alpha instead of gamma", "note", str(residue), "0",
                            "nonzero: the identity needs xi3 = gamma"))
    if not multiplicative_idempotent:
        rep.notes.append(f"{uf} not assumed multiplicatively idempotent")
    return rep


def random_valuation(atoms: Iterable[Atom], rng: random.Random, spread: int = 10) -> dict[Atom, int]:
    """Positive integers that grow fast with the level, mimicking the tiers."""
    out = {}
    for a in sorted(atoms):
        lo = spread ** (2 * a.level)
        out[a] = rng.randint(lo, lo * spread)
    return out
