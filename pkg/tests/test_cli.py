import io
import json
import os
import subprocess
import sys

import pytest

from lensurg.cli import main, solutions
from lensurg.output import HEADER, ReportCache, digest, parse_csv, parse_jsonl


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_d_lens():
    assert run("d", "--lens", "37", "2", "--t", "34") == (0, "94/37\n")
    assert run("d", "--lens", "1", "0", "--t", "0") == (0, "0/1\n")
    assert run("d", "--lens", "37", "2", "--t", "34", "--reverse")[1] == "-94/37\n"
    code, out = run("d", "--lens", "29", "3", "--t", "22", "--trace")
    lines = out.splitlines()
    assert lines[0] == "2/29" and len(lines) == 1 + 3


def test_d_plumbing():
    assert run("d", "--plumbing", "7", "7", "2", "--s", "1")[1] == "52/45\n"
    assert run("d", "--plumbing", "7", "-1", "2", "--framing", "neg", "--s", "2")[1] == "-1/22\n"


def test_dedekind():
    assert run("dedekind", "1", "3")[1] == "1/18\n"
    assert run("dedekind", "2", "5", "--reciprocity")[1] == "0/1\n"
    assert run("dedekind", "-1", "5")[1] == "-1/5\n"


def test_casson_walker():
    assert run("casson-walker", "--lens", "5", "1")[1] == "-1/10\n"
    code, out = run("casson-walker", "--surgery", "7", "3", "2", "--filter")
    assert out.splitlines()[1] == "admissible q: -17"
    assert run("casson-walker", "--fibers", "1/2", "1/3", "-1/1")[0] == 0


def test_seifert():
    code, out = run("seifert", "to-lens", "--pkm", "7", "1", "2")
    assert out == "L(13,2)\n"
    code, out = run("seifert", "to-lens", "--pkm", "11", "3", "9")
    assert "not a lens space" in out
    code, out = run("seifert", "normalize", "--fibers", "1/3", "5/4", "-2/1")
    assert out.startswith("M(0,0; 1/3, 1/4, -1)") and "e=-5/12" in out
    code, out = run("seifert", "constructions", "3")
    assert "omitted" in out and "L(5,2)" in out and "L(7,2)" in out


def test_plumbing_d():
    code, out = run("plumbing-d", "9", "-1", "3", "--framing", "neg", "--closed")
    assert "MISMATCH" in out
    assert out.splitlines()[0] == "n=9 det=-18"


def test_check_text_and_formats():
    code, out = run("check", "19", "-37")
    assert code == 0 and "REFUTED" in out and "2N15=6" in out
    code, out = run("check", "7", "13", "--format", "json")
    recs = parse_jsonl(out)
    assert any(r["verdict"] == "CONSTRUCTED" for r in recs)
    code, out = run("check", "9", "-27", "--format", "csv")
    rows = parse_csv(out)
    assert ["9", "-27", "4", "3", "0", "1", "0", "1"] in [r[:8] for r in rows]


def test_check_no_solution():
    assert "no homological solutions" in run("check", "9", "-15")[1]


def test_solutions():
    assert solutions(9, -27) == [(-2, 3), (4, 3)]
    assert (1, 2) in solutions(13, -9)


def test_domain_error_exit_code():
    assert run("d", "--lens", "6", "2", "--t", "0")[0] == 2
    assert run("plumbing-d", "7", "4", "2", "--framing", "pos")[0] == 2


def _rows(text):
    return parse_csv(text)


def test_enumerate_csv_jsonl(tmp_path):
    code, csv_text = run("enumerate", "--p-max", "9", "--q-bound", "30")
    assert code == 0
    assert csv_text.splitlines()[0] == ",".join(HEADER)
    rows = _rows(csv_text)
    assert all(len(r) == len(HEADER) for r in rows)
    code, jl = run("enumerate", "--p-max", "9", "--q-bound", "30", "--format", "jsonl")
    recs = parse_jsonl(jl)
    assert len(recs) == len({(r["p"], r["q"], r["m"], r["k"]) for r in recs})
    assert jl == "".join(json.dumps(r, sort_keys=True) + "\n" for r in recs)


def test_enumerate_cache_and_manifest(tmp_path, monkeypatch):
    a, b = tmp_path / "a", tmp_path / "env"
    monkeypatch.setenv("SURGERY_CACHE_DIR", str(b))
    out = tmp_path / "o.csv"
    man = tmp_path / "m.json"
    args = ["enumerate", "--p-max", "9", "--q-bound", "30", "--cache-dir", str(a),
            "-o", str(out), "--manifest", str(man)]
    assert run(*args)[0] == 0
    assert not a.exists() and any(b.rglob("*.json"))
    cold = out.read_text()
    assert run(*args)[0] == 0
    assert out.read_text() == cold
    meta = json.loads(man.read_text())
    assert meta["output_digest"] == digest(cold)
    assert meta["parameters"]["p_max"] == 9
    monkeypatch.delenv("SURGERY_CACHE_DIR")
    code, plain = run("enumerate", "--p-max", "9", "--q-bound", "30")
    assert plain == cold


def test_cache_atomic_roundtrip(tmp_path):
    c = ReportCache(str(tmp_path))
    k = c.key(7, 13, 2, 1, "x")
    assert c.get(k) is None
    c.put(k, {"a": [1, "2/3"]})
    assert c.get(k) == {"a": [1, "2/3"]}
    assert not list(tmp_path.rglob("*.tmp"))
    assert c.key(7, 13, 2, 1, "x") != c.key(7, 13, 2, 1, "y")


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "lensurg", "dedekind", "1", "3"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "1/18\n"


def test_enumerate_parallel_matches_serial():
    _, serial = run("enumerate", "--p-max", "11", "--q-bound", "40")
    _, par = run("enumerate", "--p-max", "11", "--q-bound", "40", "--workers", "2")
    assert par == serial


def test_benchmark_script_runs():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    out = subprocess.run([sys.executable, os.path.join(root, "benchmarks", "bench_kernels.py"),
                          "--repeat", "1"], capture_output=True, text=True, check=True)
    assert "tree_dp" in out.stdout and "box_max" in out.stdout
