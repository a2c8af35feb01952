"""Exact sparse multivariate polynomials over the integers.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable
name, with every exponent positive; the empty tuple is the constant
monomial.  A polynomial maps monomials to nonzero ``int`` coefficients.

    x*y^2 - 3  ->  {(("x", 1), ("y", 2)): 1, (): -3}

Terms are kept in graded lexicographic order: lower total degree first, and
within one degree the monomial with the larger exponent on the
alphabetically smaller variable first.  That order drives printing and
iteration, so both are deterministic.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import WorkbenchError

Monomial = tuple  # tuple[tuple[str, int], ...]
Number = Union[int, Fraction]

VAR_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

ONE: Monomial = ()


def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial_key(m: Monomial):
    """Sort key implementing the graded lexicographic order."""
    return (monomial_degree(m), tuple((v, -e) for v, e in m))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def make_monomial(exponents: Mapping[str, int]) -> Monomial:
    for v, e in exponents.items():
        if not VAR_RE.match(v):
            raise WorkbenchError("E_BAD_VAR", f"invalid variable name {v!r}")
        if e < 0:
            raise WorkbenchError("E_BAD_EXPONENT", f"negative exponent {e} on {v}")
    return tuple(sorted((v, int(e)) for v, e in exponents.items() if e != 0))


class Polynomial:
    """Immutable polynomial with integer coefficients.

    Construct from a mapping ``{monomial: coefficient}``; zero coefficients
    are dropped.  Use :meth:`var` and :meth:`const` plus the arithmetic
    operators for everything else.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            if not isinstance(c, int):
                if isinstance(c, Fraction) and c.denominator == 1:
                    c = int(c)
                else:
                    raise WorkbenchError("E_BAD_COEFF", f"non-integer coefficient {c!r}")
            if c:
                clean[m] = clean.get(m, 0) + c
        ordered = sorted(((m, c) for m, c in clean.items() if c), key=lambda mc: monomial_key(mc[0]))
        self._terms = dict(ordered)
        self._hash = None

    # construction helpers

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Polynomial":
        return cls({make_monomial({name: power}): 1})

    @classmethod
    def const(cls, c: int) -> "Polynomial":
        return cls({ONE: c})

    @classmethod
    def linear(cls, coeffs: Mapping[str, int]) -> "Polynomial":
        return cls({make_monomial({v: 1}): c for v, c in coeffs.items()})

    # container protocol

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self._terms.items())

    def __iter__(self):
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, m: Monomial) -> int:
        return self._terms.get(m, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        from .parser import print_poly

        return f"Polynomial({print_poly(self)!r})"

    def __str__(self) -> str:
        from .parser import print_poly

        return print_poly(self)

    # arithmetic

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int):
            return Polynomial.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(other, -self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise WorkbenchError("E_BAD_EXPONENT", "negative power of a polynomial")
        out = Polynomial.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # structure

    @property
    def variables(self) -> tuple[str, ...]:
        """Sorted tuple of the variables that occur in some monomial."""
        return tuple(sorted({v for m in self._terms for v, _ in m}))

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return degree(self)

    def is_homogeneous(self) -> bool:
        return is_homogeneous(self)

    def evaluate(self, point: Mapping[str, Number]) -> Fraction:
        return evaluate(self, point)

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        """Substitute variables by variables; unmapped names are kept."""
        out: dict = {}
        for m, c in self._terms.items():
            exps: dict[str, int] = {}
            for v, e in m:
                w = mapping.get(v, v)
                exps[w] = exps.get(w, 0) + e
            key = make_monomial(exps)
            out[key] = out.get(key, 0) + c
        return Polynomial(out)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    out = dict(p._terms)
    for m, c in q._terms.items():
        out[m] = out.get(m, 0) + c
    return Polynomial(out)


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    out: dict = {}
    for m1, c1 in p._terms.items():
        for m2, c2 in q._terms.items():
            m = monomial_mul(m1, m2)
            out[m] = out.get(m, 0) + c1 * c2
    return Polynomial(out)


def evaluate(p: Polynomial, point: Mapping[str, Number]) -> Fraction:
    """Exact value of ``p`` at ``point`` (ints or Fractions, never floats)."""
    total = Fraction(0)
    for m, c in p._terms.items():
        val = Fraction(c)
        for v, e in m:
            try:
                x = point[v]
            except KeyError:
                raise WorkbenchError("E_UNBOUND_VAR", f"no value for variable {v}") from None
            if isinstance(x, float):
                raise WorkbenchError("E_INEXACT", f"float value for {v}; use int or Fraction")
            val *= Fraction(x) ** e
        total += val
    return total


def degree(p: Polynomial) -> int:
    if not p:
        raise WorkbenchError("E_ZERO_POLY", "degree of the zero polynomial")
    return max(monomial_degree(m) for m in p)


def is_homogeneous(p: Polynomial) -> bool:
    # the zero polynomial is vacuously homogeneous
    return len({monomial_degree(m) for m in p}) <= 1


def constant_term(p: Polynomial) -> int:
    return p.coefficient(ONE)


def is_linear(p: Polynomial) -> bool:
    """True when every monomial has total degree at most one."""
    return all(monomial_degree(m) <= 1 for m in p)


def coefficient_vector(p: Polynomial) -> list[tuple[str, int]]:
    """Coefficients of a linear form, in variable-name order."""
    if not is_linear(p):
        raise WorkbenchError("E_NOT_LINEAR", f"{p} is not linear")
    if constant_term(p):
        raise WorkbenchError("E_CONST_TERM", f"{p} has nonzero constant term {constant_term(p)}")
    return sorted((m[0][0], c) for m, c in p.items())


def is_squarefree_monomial(m: Monomial) -> bool:
    return all(e == 1 for _, e in m)


def divide_exact(p: Polynomial, d: Polynomial) -> Polynomial | None:
    """Return ``q`` with ``d*q == p``, or None when ``d`` does not divide ``p``.

    Plain leading-term division; exact divisibility in Z[X] means every
    step divides, so failing any step proves non-divisibility.
    """
    if not d:
        raise WorkbenchError("E_ZERO_POLY", "division by the zero polynomial")
    lead_m, lead_c = max(d.items(), key=lambda mc: monomial_key(mc[0]))
    lead_exps = dict(lead_m)
    rem = p
    quot: dict = {}
    while rem:
        rm, rc = max(rem.items(), key=lambda mc: monomial_key(mc[0]))
        if rc % lead_c:
            return None
        rexps = dict(rm)
        qexps = {}
        for v, e in rexps.items():
            qexps[v] = e - lead_exps.get(v, 0)
        if any(v not in rexps for v in lead_exps) or any(e < 0 for e in qexps.values()):
            return None
        qm = make_monomial(qexps)
        qc = rc // lead_c
        quot[qm] = quot.get(qm, 0) + qc
        rem = rem - Polynomial({qm: qc}) * d
    return Polynomial(quot)


def product(polys: Iterable[Polynomial]) -> Polynomial:
    out = Polynomial.const(1)
    for q in polys:
        out = out * q
    return out
