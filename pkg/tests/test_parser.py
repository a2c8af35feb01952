import json

import pytest
from hypothesis import given, settings

from conftest import polynomials
from partreg.errors import ParseError, WorkbenchError
from partreg.parser import (
    as_polynomial,
    default_corpus_path,
    load_corpus,
    parse_corpus,
    parse_equation,
    parse_poly,
    print_poly,
    write_corpus,
)
from partreg.poly import Polynomial

x, y, z, w = (Polynomial.var(v) for v in "xyzw")


@settings(max_examples=300)
@given(polynomials(max_terms=5))
def test_print_parse_round_trip(p):
    text = print_poly(p)
    assert parse_poly(text) == p
    assert print_poly(parse_poly(text)) == text


@pytest.mark.parametrize("text, expected", [
    ("x + y - z*w", x + y - z * w),
    ("2x1y1", 2 * Polynomial.var("x1y1")),
    ("(x - y)(x + y)", x * x - y * y),
    ("2(x+y)", 2 * x + 2 * y),
    ("x^2^1", None),
    ("-x - -y", -x + y),
    ("x − y", x - y),
    ("3·x", 3 * x),
    ("0", Polynomial()),
])
def test_parse_examples(text, expected):
    if expected is None:
        with pytest.raises(ParseError):
            parse_poly(text)
    else:
        assert parse_poly(text) == expected


def test_canonical_print():
    assert print_poly(parse_poly("x + y - z*w")) == "x + y - w*z"
    assert print_poly(parse_poly("-2*x3*y1*y2 + 7*x2 + 2*x1*y1")) == "7*x2 + 2*x1*y1 - 2*x3*y1*y2"
    assert print_poly(Polynomial()) == "0"
    assert print_poly(parse_poly("x^2 - 1")) == "-1 + x^2"


@pytest.mark.parametrize("text, line, col", [
    ("x +", 1, 4),
    ("x + * y", 1, 5),
    ("x y", 1, 3),
    ("x +\n  $", 2, 3),
    ("(x + y", 1, 7),
])
def test_syntax_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_poly(text)
    assert e.value.code == "E_SYNTAX"
    assert (e.value.line, e.value.column) == (line, col)


def test_bad_exponent():
    for text in ("x^0", "x^-1"):
        with pytest.raises(ParseError) as e:
            parse_poly(text)
        assert e.value.code == "E_BAD_EXPONENT"


def test_equations():
    assert parse_equation("x + y = z").poly == x + y - z
    assert parse_equation("x + y = z*w").poly == as_polynomial("x + y - z*w")
    assert as_polynomial("x = y") == x - y
    for bad in ("x = y = z", "x + y", "= x", "x ="):
        with pytest.raises(ParseError):
            parse_equation(bad)


def test_corpus_round_trip(tmp_path):
    entries = load_corpus(default_corpus_path())
    assert len(entries) >= 20
    out = tmp_path / "c.jsonl"
    write_corpus(out, entries)
    again = load_corpus(out)
    assert [e.to_json() for e in again] == [e.to_json() for e in entries]
    assert any("factors" in e.extra for e in again)


def test_corpus_errors():
    good = json.dumps({"id": "a", "equation": "x = y"})
    with pytest.raises(WorkbenchError) as e:
        parse_corpus([good, good])
    assert e.value.code == "E_DUPLICATE_ID"
    with pytest.raises(ParseError) as e:
        parse_corpus([good, "{not json"])
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse_corpus([json.dumps({"id": "b", "equation": "x +"})])
    with pytest.raises(ParseError):
        parse_corpus([json.dumps({"id": "c", "equation": "x = y", "expected_status": "MAYBE"})])
    with pytest.raises(WorkbenchError) as e:
        load_corpus("/nonexistent/corpus.jsonl")
    assert e.value.code == "E_IO"
