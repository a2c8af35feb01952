import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest
from referencing import Registry, Resource

from partreg import cli
from partreg.cli import Cache, main, schema_path

SRC = str(Path(__file__).resolve().parents[1] / "src")
SCHEMA_NAMES = ("certificate", "decide", "search", "construct", "symbolic", "batch", "error")
REGISTRY = Registry().with_resources(
    (f"{n}.schema.json", Resource.from_contents(json.loads(schema_path(n).read_text()))) for n in SCHEMA_NAMES)


def validate(report, name):
    schema = json.loads(schema_path(name).read_text())
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(report)


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path / "cache"))
    return tmp_path / "cache"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


CASES = [
    (("decide", "x - y + z = 0"), 0, "decide"),
    (("decide", "x + y = z*w"), 0, "decide"),
    (("decide", "z + w = 0"), 1, "decide"),
    (("decide", "x*y = z^2"), 2, "decide"),
    (("decide", "(z + w)*(u + 3*v) = 0", "--factors", "z + w; u + 3*v"), 1, "decide"),
    (("decide", "(x - y)*(z + w) = 0", "--hint", "x - y"), 0, "decide"),
    (("search", "x+y=z", "--colors", "2", "--find", "rado-number"), 0, "search"),
    (("search", "x+z=2*y", "--colors", "2", "--mode", "DISTINCT"), 0, "search"),
    (("search", "x+y=z", "--colors", "2", "--max-n", "4", "--find", "witness"), 0, "search"),
    (("construct", "--op", "lift", "--base", "2x1+7x2-2x3", "--F", "{1};{};{1,2}"), 0, "construct"),
    (("construct", "--op", "reciprocal", "--poly", "x+y-z"), 0, "construct"),
    (("construct", "--op", "multiple", "--poly", "x+y-z", "--other", "w"), 0, "construct"),
    (("construct", "--op", "sum", "--poly", "x-y", "--other", "u+v-t"), 0, "construct"),
    (("construct", "--op", "factor-check", "--poly", "(z+w)*(u+3*v)", "--factors", "z+w;u+3*v"), 0, "construct"),
    (("symbolic", "--verify", "ap3"), 0, "symbolic"),
    (("symbolic", "--verify", "chain", "--k", "2", "--n", "2,1,3"), 0, "symbolic"),
    (("symbolic", "--verify", "xyzw"), 0, "symbolic"),
    (("symbolic", "--verify", "ap3", "--no-idempotent"), 1, "symbolic"),
    (("batch",), 0, "batch"),
]


@pytest.mark.parametrize("argv, code, schema", CASES)
def test_reports_validate_and_exit_codes(capsys, argv, code, schema):
    got, out, err = run(capsys, "--no-cache", *argv)
    assert got == code, err
    validate(json.loads(out), schema)
    got, out, _ = run(capsys, "--no-cache", "--timing", *argv)
    report = json.loads(out)
    validate(report, schema)
    assert report["wall_ms"] >= 0


def test_documented_examples(capsys):
    _, out, _ = run(capsys, "decide", "x - y + z = 0")
    r = json.loads(out)
    assert r["status"] == "PR" and r["J"] == ["x", "y"] and r["certificate"]["rule"] == "R-LIN"
    _, out, _ = run(capsys, "decide", "x + y = z*w")
    assert json.loads(out)["method"] == "C-LIFT"
    _, out, _ = run(capsys, "search", "x+y=z", "--colors", "2")
    assert json.loads(out)["rado_number"] == 5
    _, out, _ = run(capsys, "search", "x+z=2*y", "--colors", "2", "--mode", "DISTINCT")
    assert json.loads(out)["rado_number"] == 9
    _, out, _ = run(capsys, "search", "x+y=z", "--max-n", "4", "--find", "witness")
    assert json.loads(out)["coloring"] == "{1,4}/{2,3}"
    _, out, _ = run(capsys, "construct", "--op", "lift", "--base", "2x1+7x2-2x3", "--F", "{1};{};{1,2}")
    assert json.loads(out)["poly"] == "7*x2 + 2*x1*y1 - 2*x3*y1*y2"
    _, out, _ = run(capsys, "construct", "--op", "reciprocal", "--poly", "x+y-z")
    assert json.loads(out)["poly"] == "-x*y + x*z + y*z"


@pytest.mark.parametrize("argv, code, err_code", [
    (("decide", "x +"), 4, "E_SYNTAX"),
    (("symbolic", "--verify", "chain", "--n", "2,2,3"), 4, "E_HYPOTHESIS"),
    (("construct", "--op", "lift", "--base", "x-y", "--F", "{};{}", "--m", "1"), 4, "E_LIFT_GUARD"),
    (("construct", "--op", "sum", "--poly", "x-y"), 4, "E_BAD_ARGS"),
    (("search", "x+y=z", "-k", "3", "--max-n", "20", "--node-budget", "10"), 3, "E_LIMIT"),
    (("batch", "--corpus", "/nonexistent.jsonl"), 4, "E_IO"),
])
def test_error_exit_codes(capsys, argv, code, err_code):
    got, out, err = run(capsys, "--no-cache", *argv)
    assert got == code and out == ""
    e = json.loads(err)
    validate(e, "error")
    assert e["error"] == err_code
    if err_code == "E_LIMIT":
        assert e["stats"]["nodes"] > 0


def test_byte_identical_across_processes(tmp_path):
    env = dict(os.environ, PYTHONPATH=SRC)
    outs = []
    for i in range(2):
        env[cli.CACHE_ENV] = str(tmp_path / f"c{i}")
        for argv in (["search", "x+y=z", "-k", "3", "--max-n", "14"], ["symbolic", "--verify", "xyzw"],
                     ["decide", "2*x1*y1 + 7*x2 - 2*x3*y1*y2 = 0"]):
            r = subprocess.run([sys.executable, "-m", "partreg", *argv], capture_output=True, env=env)
            outs.append((argv[0], r.returncode, r.stdout))
    assert outs[:3] == outs[3:]


def test_cache_hit_matches_fresh_result(capsys, cache_dir):
    argv = ("search", "x+z=2*y", "--colors", "2", "--mode", "DISTINCT")
    code1, fresh, _ = run(capsys, *argv)
    files = list(cache_dir.glob("*.json"))
    assert len(files) == 1
    rec = json.loads(files[0].read_text())
    assert rec["engine_version"] == cli.ENGINE_VERSION and rec["wall_ms"] >= 0
    code2, cached, _ = run(capsys, *argv)
    code3, recomputed, _ = run(capsys, "--no-cache", *argv)
    assert code1 == code2 == code3 and fresh == cached == recomputed


def test_cache_key_uses_canonical_inputs(capsys, cache_dir):
    run(capsys, "decide", "x + y = z")
    run(capsys, "decide", "x+y-z=0")
    assert len(list(cache_dir.glob("*.json"))) == 1


def test_cache_rejects_stale_engine(capsys, cache_dir, monkeypatch):
    run(capsys, "decide", "x + y = z")
    path, = cache_dir.glob("*.json")
    rec = json.loads(path.read_text())
    rec["result"]["status"] = "NOT_PR"
    rec["engine_version"] = "0.0.0"
    path.write_text(json.dumps(rec))
    code, out, _ = run(capsys, "decide", "x + y = z")
    assert code == 0 and json.loads(out)["status"] == "PR"


def test_cache_record_roundtrip(tmp_path):
    c = Cache(tmp_path)
    rec = cli.JobRecord("decide", "abc", {"x": 1}, 0, 1.5)
    c.put(rec)
    assert c.get("decide", "abc") == rec
    assert c.get("search", "abc") is None
    assert Cache(None).get("decide", "abc") is None


def test_batch_over_custom_corpus(capsys, tmp_path):
    corpus = tmp_path / "c.jsonl"
    corpus.write_text("\n".join(json.dumps(e) for e in [
        {"id": "a", "equation": "x + y = z", "expected_status": "PR"},
        {"id": "b", "equation": "x + y = 3*z", "expected_status": "PR"},
    ]))
    code, out, _ = run(capsys, "--no-cache", "batch", "--corpus", str(corpus))
    r = json.loads(out)
    assert code == 1 and r["summary"] == {"agree": 1, "disagree": 1, "open": 0}


def test_usage_error_is_not_unknown(capsys):
    code, out, err = run(capsys, "decide")
    assert code == 4 and out == ""
    e = json.loads(err[err.index("{"):])
    validate(e, "error")
    assert e["error"] == "E_BAD_ARGS"
