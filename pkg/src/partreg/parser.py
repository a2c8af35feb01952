"""Text syntax for polynomials, equations and corpus files.

Grammar (whitespace-insensitive)::

    poly    := ['-'] term (('+' | '-') ['-'] term)*
    term    := factor (['*'] factor)*      # '*' optional after INT or ')': "2x", "(x-y)(x+y)"
    factor  := atom ['^' INT]
    atom    := INT | NAME | '(' poly ')'

``^`` binds tighter than ``*``.  A unary minus may only open a term, so
``x + + y`` and ``x * -y`` are rejected.  The Unicode minus sign is read as
``-``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import ParseError, WorkbenchError
from .poly import Polynomial, monomial_degree

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^()=])
    """,
    re.VERBOSE,
)

STATUSES = ("PR", "NOT_PR", "UNKNOWN")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    text = text.replace("−", "-").replace("·", "*")
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for i, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line += 1
                    line_start = i + 1
        else:
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ParseError(f"{message}, found {found!r}", tok.line, tok.column)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def poly(self) -> Polynomial:
        total = self.signed_term()
        while True:
            if self.accept("+"):
                total = total + self.signed_term()
            elif self.accept("-"):
                total = total - self.signed_term()
            else:
                return total

    def signed_term(self) -> Polynomial:
        if self.accept("-"):
            return -self.term()
        return self.term()

    def implicit_product(self) -> bool:
        # "2x", "2(x+y)", "(x-y)(x+y)" and "(x-y)z"; never "x y" or "2 3"
        prev, t = self.tokens[self.i - 1], self.tok
        opens = t.kind == "name" or (t.kind == "op" and t.text == "(")
        if prev.kind == "int":
            return opens
        if prev.kind == "op" and prev.text == ")":
            return opens
        return False

    def term(self) -> Polynomial:
        value = self.factor()
        while True:
            if self.accept("*"):
                value = value * self.factor()
            elif self.implicit_product():
                value = value * self.factor()
            else:
                return value

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.accept("^"):
            sign_tok = self.tok
            if self.accept("-"):
                raise ParseError("exponent must be a positive integer", sign_tok.line, sign_tok.column,
                                 code="E_BAD_EXPONENT")
            tok = self.tok
            if tok.kind != "int":
                self.error("expected an integer exponent")
            self.i += 1
            n = int(tok.text)
            if n <= 0:
                raise ParseError("exponent must be a positive integer", tok.line, tok.column,
                                 code="E_BAD_EXPONENT")
            base = base ** n
        return base

    def atom(self) -> Polynomial:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return Polynomial.const(int(tok.text))
        if tok.kind == "name":
            self.i += 1
            return Polynomial.var(tok.text)
        if self.accept("("):
            inner = self.poly()
            if not self.accept(")"):
                self.error("expected ')'")
            return inner
        self.error("expected a number, a variable or '('")


def parse_poly(text: str) -> Polynomial:
    """Parse ``text`` into a canonical :class:`Polynomial`."""
    p = _Parser(tokenize(text))
    result = p.poly()
    if p.tok.kind != "eof":
        p.error("unexpected token")
    return result


def _format_monomial(m) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


def print_poly(p: Polynomial) -> str:
    """Canonical text form; ``parse_poly(print_poly(p)) == p``."""
    if not p:
        return "0"
    parts = []
    for idx, (m, c) in enumerate(p.items()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if monomial_degree(m) == 0:
            body = str(a)
        elif a == 1:
            body = _format_monomial(m)
        else:
            body = f"{a}*{_format_monomial(m)}"
        if idx == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


@dataclass(frozen=True)
class Equation:
    """``poly = 0``; any ``A = B`` is stored as ``A - B = 0``."""

    poly: Polynomial

    @property
    def variables(self) -> tuple[str, ...]:
        return self.poly.variables

    def __str__(self) -> str:
        return f"{print_poly(self.poly)} = 0"


def parse_equation(text: str) -> Equation:
    tokens = tokenize(text)
    eqs = [i for i, t in enumerate(tokens) if t.kind == "op" and t.text == "="]
    if len(eqs) != 1:
        tok = tokens[eqs[1]] if len(eqs) > 1 else tokens[-1]
        raise ParseError(f"an equation needs exactly one '=', got {len(eqs)}", tok.line, tok.column)
    k = eqs[0]
    eq_tok = tokens[k]
    sides = []
    # the right side keeps the real end-of-input token
    for chunk in (tokens[:k] + [Token("eof", "", eq_tok.line, eq_tok.column)], tokens[k + 1:]):
        if len(chunk) == 1:
            raise ParseError("empty side of equation", eq_tok.line, eq_tok.column)
        p = _Parser(chunk)
        side = p.poly()
        if p.tok.kind != "eof":
            p.error("unexpected token")
        sides.append(side)
    return Equation(sides[0] - sides[1])


def as_polynomial(obj) -> Polynomial:
    """Accept a Polynomial, an int, an Equation, or equation/polynomial text."""
    if isinstance(obj, Polynomial):
        return obj
    if isinstance(obj, int):
        return Polynomial.const(obj)
    if isinstance(obj, Equation):
        return obj.poly
    if isinstance(obj, str):
        return parse_equation(obj).poly if "=" in obj else parse_poly(obj)
    raise TypeError(f"cannot read a polynomial from {type(obj).__name__}")


# corpus files


@dataclass
class CorpusEntry:
    id: str
    equation: Equation
    tags: list[str] = field(default_factory=list)
    expected_status: str = "UNKNOWN"
    text: str = ""
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = dict(self.extra)
        out.update(
            id=self.id,
            equation=self.text or str(self.equation),
            tags=list(self.tags),
            expected_status=self.expected_status,
        )
        return out


_KNOWN_FIELDS = {"id", "equation", "tags", "expected_status"}


def parse_corpus(lines: Iterable[str], source: str = "<corpus>") -> list[CorpusEntry]:
    entries: list[CorpusEntry] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{source}: invalid JSON ({exc.msg})", lineno, exc.colno) from None
        if not isinstance(obj, dict) or "id" not in obj or "equation" not in obj:
            raise ParseError(f"{source}: entry needs 'id' and 'equation'", lineno, 1)
        eid = str(obj["id"])
        if eid in seen:
            raise WorkbenchError("E_DUPLICATE_ID", f"{source}:{lineno}: duplicate id {eid!r}")
        seen.add(eid)
        status = obj.get("expected_status", "UNKNOWN")
        if status not in STATUSES:
            raise ParseError(f"{source}: bad expected_status {status!r}", lineno, 1)
        try:
            eq = parse_equation(obj["equation"])
        except ParseError as exc:
            raise ParseError(f"{source}: entry {eid!r}: {exc.message}", lineno, exc.column) from None
        extra = {k: v for k, v in obj.items() if k not in _KNOWN_FIELDS}
        entries.append(CorpusEntry(eid, eq, list(obj.get("tags", [])), status, obj["equation"], extra))
    return entries


def load_corpus(path) -> list[CorpusEntry]:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_corpus(fh, source=str(path))
    except OSError as exc:
        raise WorkbenchError("E_IO", f"cannot read {path}: {exc.strerror}") from None


def write_corpus(path, entries: Iterable[CorpusEntry]) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for e in entries:
                fh.write(json.dumps(e.to_json(), ensure_ascii=False) + "\n")
    except OSError as exc:
        raise WorkbenchError("E_IO", f"cannot write {path}: {exc.strerror}") from None


def default_corpus_path() -> Path:
    return Path(__file__).with_name("data") / "corpus.jsonl"
