"""Operators that build partition-regular polynomials from known ones.

Each constructor returns a :class:`Construction`: the new polynomial plus,
where one is available, a certificate that :func:`validate_certificate`
accepts.  The two ``*_solution_transport`` functions turn concrete roots of
the inputs into concrete roots of the output, with exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from .errors import WorkbenchError
from .parser import as_polynomial
from .poly import Polynomial, degree, evaluate, is_homogeneous, is_linear, make_monomial, product
from .rado import (
    Certificate,
    derive_certificate,
    factor_status,
    lift_polynomial,
    r_lin,
    rado_decide,
    validate_certificate,
)


@dataclass
class Construction:
    poly: Polynomial
    certificate: Certificate | None = None
    homogeneous: bool = False

    @property
    def status(self) -> str:
        return self.certificate.status if self.certificate else "UNKNOWN"


def _require_evidence(cert: Certificate | None, p: Polynomial) -> Certificate:
    if cert is None:
        cert = derive_certificate(p)
    if cert is None:
        raise WorkbenchError("E_NO_EVIDENCE", f"no partition-regularity certificate for {p}")
    if cert.root != p or cert.status != "PR" or not validate_certificate(cert):
        raise WorkbenchError("E_BAD_CERTIFICATE", f"certificate does not prove {p} partition regular")
    return cert


def multiple(p: Polynomial, q: Polynomial, cert: Certificate | None = None) -> Construction:
    """``p*q``, certified whenever ``p`` is (multiples inherit regularity)."""
    p, q = as_polynomial(p), as_polynomial(q)
    if not q:
        raise WorkbenchError("E_ZERO_POLY", "multiplier is the zero polynomial")
    out = p * q
    if cert is None and p:
        try:
            cert = derive_certificate(p)
        except WorkbenchError:
            cert = None
    if cert is not None:
        cert = _require_evidence(cert, p)
        if q == 1:
            return Construction(out, cert, is_homogeneous(out))
        cert = Certificate(out, "C-MULT", (cert,), {"divisor": p, "cofactor": q})
    return Construction(out, cert, bool(out) and is_homogeneous(out))


def disjoint_sum(p: Polynomial, q: Polynomial, cert_p: Certificate | None = None,
                 cert_q: Certificate | None = None) -> Construction:
    """Sum of two homogeneous partition-regular polynomials with no shared
    variables.  Missing certificates are searched for; failing that the
    call raises ``E_NO_EVIDENCE``."""
    p, q = as_polynomial(p), as_polynomial(q)
    shared = set(p.variables) & set(q.variables)
    if shared:
        raise WorkbenchError("E_SHARED_VARS", f"summands share variables {sorted(shared)}")
    for x in (p, q):
        if not x or not is_homogeneous(x):
            raise WorkbenchError("E_NOT_HOMOGENEOUS", f"{x} is not homogeneous")
    cert_p = _require_evidence(cert_p, p)
    cert_q = _require_evidence(cert_q, q)
    same = degree(p) == degree(q)
    cert = Certificate(p + q, "C-SUM", (cert_p, cert_q), {"homogeneous": same})
    return Construction(p + q, cert, same)


def reciprocal(p: Polynomial) -> Polynomial:
    """``(x_1 ... x_n)^d * p(1/x_1, ..., 1/x_n)`` for homogeneous ``p`` of degree d."""
    p = as_polynomial(p)
    if not p:
        raise WorkbenchError("E_ZERO_POLY", "reciprocal of the zero polynomial")
    if not is_homogeneous(p):
        raise WorkbenchError("E_NOT_HOMOGENEOUS", f"{p} is not homogeneous")
    d = degree(p)
    names = p.variables
    out = {}
    for m, c in p.items():
        exps = dict(m)
        out[make_monomial({v: d - exps.get(v, 0) for v in names})] = c
    return Polynomial(out)


@dataclass(frozen=True)
class LiftSpec:
    """Data for ``sum_i a_i x_i prod_{j in F_i} y_j``.

    ``f_sets[i]`` belongs to the i-th base variable in name order and holds
    1-based indices into ``aux_names``.  Without ``aux_names`` the
    auxiliaries are ``y1..ym``.
    """

    base: Polynomial
    m: int
    f_sets: tuple
    aux_names: tuple = ()

    def names(self) -> tuple[str, ...]:
        return tuple(self.aux_names) or tuple(f"y{j}" for j in range(1, self.m + 1))


def monomial_lift(spec: LiftSpec) -> Construction:
    base = as_polynomial(spec.base)
    verdict = rado_decide(base)
    xs = list(base.variables)
    aux = spec.names()
    if spec.m < 1 or len(aux) != spec.m:
        raise WorkbenchError("E_BAD_LIFT", f"need m >= 1 and exactly m auxiliary names, got {len(aux)}")
    if len(set(aux)) != len(aux) or set(aux) & set(xs):
        raise WorkbenchError("E_VAR_CLASH", f"auxiliary names {list(aux)} clash with base variables {xs}")
    f_sets = [sorted(set(f)) for f in spec.f_sets]
    if len(f_sets) != len(xs):
        raise WorkbenchError("E_BAD_LIFT", f"{len(xs)} base variables but {len(f_sets)} index sets")
    if any(j < 1 or j > spec.m for f in f_sets for j in f):
        raise WorkbenchError("E_BAD_LIFT", f"index sets must lie in 1..{spec.m}")
    if len(xs) < 2:
        raise WorkbenchError("E_BAD_LIFT", "the base needs at least two variables")
    if verdict.status != "PR":
        raise WorkbenchError("E_BASE_NOT_PR", f"{base} fails Rado's criterion")
    if len(xs) == 2 and not (f_sets[0] or f_sets[1]):
        raise WorkbenchError("E_LIFT_GUARD", "with two base variables F1 and F2 cannot both be empty")
    out = lift_polynomial(base, xs, f_sets, aux)
    cert = Certificate(out, "C-LIFT", (r_lin(base),),
                       {"base": base, "xs": xs, "aux": list(aux), "F": f_sets})
    return Construction(out, cert, is_homogeneous(out))


Point = Mapping[str, "int | Fraction"]


def _check_root(p: Polynomial, point: Point, label: str) -> None:
    if evaluate(p, point) != 0:
        raise WorkbenchError("E_NOT_A_SOLUTION", f"{label} is not a root of {p}")


def sum_solution_transport(p: Polynomial, q: Polynomial, a: Point, b: Point) -> dict[str, Fraction]:
    """Root of ``p+q`` from a root ``a`` of ``p`` and a root ``b`` of ``q``.

    ``x_i = a_i * b_1`` and ``y_j = a_1 * b_j``, where ``a_1``, ``b_1`` are
    the values of the alphabetically first variable of each side.
    Homogeneity makes both halves vanish.
    """
    p, q = as_polynomial(p), as_polynomial(q)
    if set(p.variables) & set(q.variables):
        raise WorkbenchError("E_SHARED_VARS", "summands share variables")
    for x in (p, q):
        if not x or not is_homogeneous(x):
            raise WorkbenchError("E_NOT_HOMOGENEOUS", f"{x} is not homogeneous")
    _check_root(p, a, "a")
    _check_root(q, b, "b")
    a1 = Fraction(a[p.variables[0]])
    b1 = Fraction(b[q.variables[0]])
    if a1 == 0 or b1 == 0:
        raise WorkbenchError("E_ZERO_ANCHOR", "anchor coordinates a_1 and b_1 must be nonzero")
    point = {v: Fraction(a[v]) * b1 for v in p.variables}
    point.update({v: a1 * Fraction(b[v]) for v in q.variables})
    if evaluate(p + q, point) != 0:  # pragma: no cover - guaranteed by homogeneity
        raise AssertionError("transported point is not a root")
    return point


def reciprocal_solution_transport(p: Polynomial, a: Point) -> dict[str, int]:
    """Positive integer root of ``reciprocal(p)`` from one of ``p``:
    ``L / a_i`` with ``L = lcm(a_1, ..., a_n)``."""
    p = as_polynomial(p)
    if not p or not is_homogeneous(p):
        raise WorkbenchError("E_NOT_HOMOGENEOUS", f"{p} is not homogeneous")
    vals = {}
    for v in p.variables:
        x = Fraction(a[v])
        if x.denominator != 1 or x <= 0:
            raise WorkbenchError("E_NONPOSITIVE", f"{v} = {x} is not a positive integer")
        vals[v] = int(x)
    _check_root(p, vals, "a")
    L = lcm(*vals.values())
    out = {v: L // x for v, x in vals.items()}
    if evaluate(reciprocal(p), out) != 0:  # pragma: no cover - guaranteed by homogeneity
        raise AssertionError("transported point is not a root")
    return out


@dataclass
class FactorReport:
    poly: Polynomial
    factors: list[Polynomial]
    statuses: list[str]
    conclusion: str
    certificate: Certificate | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "poly": str(self.poly),
            "factors": [{"factor": str(f), "status": s} for f, s in zip(self.factors, self.statuses)],
            "conclusion": self.conclusion,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "notes": list(self.notes),
        }


def factor_check(p: Polynomial, factors: Sequence[Polynomial]) -> FactorReport:
    """Check a supplied factorisation and draw what conclusions it allows.

    A certified factor makes ``p`` partition regular (it is a multiple).
    If every factor is linear and fails Rado's criterion, ``p`` is not.
    Anything else stays UNKNOWN.
    """
    p = as_polynomial(p)
    factors = [as_polynomial(f) for f in factors]
    if not factors:
        raise WorkbenchError("E_BAD_FACTORIZATION", "empty factor list")
    if product(factors) != p:
        raise WorkbenchError("E_BAD_FACTORIZATION", "factors do not multiply to the polynomial")
    statuses, certs = [], []
    for f in factors:
        cert = None
        if not f.variables:
            st = "NOT_PR"  # nonzero constant
        elif is_linear(f) and not f.coefficient(()):
            st = factor_status(f)
            cert = r_lin(f) if st == "PR" else None
        else:
            try:
                cert = derive_certificate(f)
            except WorkbenchError:
                cert = None
            st = "PR" if cert is not None else "UNKNOWN"
        statuses.append(st)
        certs.append(cert)
    report = FactorReport(p, factors, statuses, "UNKNOWN")
    for i, (f, cert) in enumerate(zip(factors, certs)):
        if cert is not None:
            cofactor = product(factors[:i] + factors[i + 1:])
            report.conclusion = "PR"
            report.certificate = (cert if cofactor == 1 else
                                  Certificate(p, "C-MULT", (cert,), {"divisor": f, "cofactor": cofactor}))
            report.notes.append(f"factor {f} is partition regular, so its multiple is too")
            return report
    if all(s == "NOT_PR" for s in statuses) and all(is_linear(f) for f in factors):
        report.conclusion = "NOT_PR"
        report.certificate = Certificate(p, "C-FACTOR-NEG", (), {"factors": factors})
        report.notes.append("no linear factor is partition regular, hence neither is the product")
    return report
