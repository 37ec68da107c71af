import json
import subprocess
import sys

import pytest

from cube_om.cli import EXIT_CAP, EXIT_FAILED, EXIT_INPUT, EXIT_OK, main, parse_vertex, render, show_vertex
from cube_om.errors import CubeError


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("CUBE_OM_CACHE_DIR", str(tmp_path / "cache"))
    return tmp_path / "cache"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_enumerate_counts(capsys, cache_dir):
    code, rec = run_json(capsys, "enumerate", "--n", "3")
    assert code == EXIT_OK
    assert (rec["hyperplanes"], rec["rectangles"]) == (20, 12)
    assert rec["facets"] == 6 and rec["skew_facets"] == 6
    assert (cache_dir / "catalog-n3.jsonl").exists()
    code, rec = run_json(capsys, "enumerate", "--n", "2")
    assert {k: rec[k] for k in ("hyperplanes", "rectangles")} == {"hyperplanes": 6, "rectangles": 1}


def test_cap_errors(capsys):
    assert run(capsys, "enumerate", "--n", "9")[0] == EXIT_CAP
    assert run(capsys, "selftest", "--n", "5")[0] == EXIT_CAP
    assert run(capsys, "verify", "--n", "5", "--exhaustive")[0] == EXIT_CAP


def test_usage_errors(capsys):
    assert run(capsys, "enumerate")[0] == EXIT_INPUT
    assert run(capsys, "bogus", "--n", "3")[0] == EXIT_INPUT
    assert run(capsys, "classify-triple", "--n", "3", "+++", "+++", "++-")[0] == EXIT_INPUT
    assert run(capsys, "subcube", "--n", "3", "+++", "++-", "+-+")[0] == EXIT_INPUT


def test_stale_cache_rejected_then_rebuilt(capsys, cache_dir):
    run(capsys, "enumerate", "--n", "2")
    cache_dir.joinpath("catalog-n3.jsonl").write_text(cache_dir.joinpath("catalog-n2.jsonl").read_text())
    code, _, err = run(capsys, "verify", "--n", "3")
    assert code == EXIT_INPUT and "--rebuild-cache" in err
    assert run(capsys, "verify", "--n", "3", "--rebuild-cache")[0] == EXIT_OK
    assert run(capsys, "verify", "--n", "3")[0] == EXIT_OK


def test_explicit_cache_path(capsys, tmp_path):
    path = tmp_path / "mine.jsonl"
    assert run(capsys, "enumerate", "--n", "3", "--cache", str(path))[0] == EXIT_OK
    assert path.exists()
    assert run(capsys, "verify", "--n", "4", "--cache", str(path))[0] == EXIT_INPUT


def test_vertex_parsing():
    assert parse_vertex("+-+", 3) == 0b010
    assert parse_vertex("1,-1,1", 3) == 0b010
    assert parse_vertex("v:---", 3) == 0b111
    assert show_vertex(0b110, 3) == "+--"
    with pytest.raises(CubeError):
        parse_vertex("++", 3)
    with pytest.raises(CubeError):
        parse_vertex("a,b,c", 3)


def test_classify_triple(capsys):
    code, rec = run_json(capsys, "classify-triple", "--n", "3", "+++", "-++", "+-+")
    assert code == EXIT_OK and rec == {"kind": "DisjointCompletion", "fourth": "--+"}
    code, rec = run_json(capsys, "classify-triple", "--n", "3", "1,1,1", "-1,-1,1", "1,-1,-1")
    assert rec == {"kind": "NoFourthPoint", "fourth": None}


def test_subcube_recognize_and_generate(capsys):
    code, rec = run_json(capsys, "subcube", "--n", "3", "+++", "+--", "-++", "---")
    assert code == EXIT_OK and rec["k"] == 2 and rec["blocks"] == [[1], [2, 3]]
    code, rec2 = run_json(capsys, "subcube", "--n", "3", "--base", "---", "--block", "1", "--block", "2,3")
    assert rec2 == rec
    assert run(capsys, "subcube", "--n", "3", "--base", "+++", "--block", "1", "--block", "1,2")[0] == EXIT_INPUT


def test_rectangles_listing(capsys):
    code, rec = run_json(capsys, "rectangles", "--n", "3")
    assert rec["count"] == len(rec["rectangles"]) == 12
    code, out, _ = run(capsys, "rectangles", "--n", "3", "--format", "csv")
    assert out.splitlines()[0] == "base,I,J,cycle" and len(out.splitlines()) == 13


def test_normalize_roundtrip(capsys, tmp_path):
    src, out = tmp_path / "in.jsonl", tmp_path / "out.jsonl"
    aff = tmp_path / "aff.jsonl"
    run(capsys, "enumerate", "--n", "3", "--aff-out", str(aff))
    code, rec = run_json(capsys, "normalize", "--n", "3", str(aff))
    assert code == EXIT_OK and rec == {"A": "00", "branch": "alternating", "verified": True}
    run(capsys, "enumerate", "--n", "3", "--aff-out", str(src), "--reorient", "b4")
    code, rec = run_json(capsys, "normalize", "--n", "3", str(src), "--output", str(out))
    assert code == EXIT_OK and rec["A"] in ("b4", "4b") and rec["verified"]
    assert out.read_text() == aff.read_text()


def test_normalize_rejects_corrupt_file(capsys, tmp_path):
    aff = tmp_path / "aff.jsonl"
    run(capsys, "enumerate", "--n", "3", "--aff-out", str(aff))
    lines = aff.read_text().splitlines()
    rec = json.loads(lines[1])
    rec["negative"] = rec["positive"]
    lines[1] = json.dumps(rec)
    aff.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "normalize", "--n", "3", str(aff))
    assert code == EXIT_INPUT and "overlap" in err


def test_normalize_garbage_fails_verification(capsys, tmp_path):
    aff = tmp_path / "aff.jsonl"
    run(capsys, "enumerate", "--n", "3", "--aff-out", str(aff))
    lines = aff.read_text().splitlines()
    for i in range(1, len(lines)):
        rec = json.loads(lines[i])
        both = int(rec["positive"], 16) | int(rec["negative"], 16)
        rec["positive"], rec["negative"] = format(both, "02x"), "00"
        lines[i] = json.dumps(rec)
    aff.write_text("\n".join(lines) + "\n")
    code, rec = run_json(capsys, "normalize", "--n", "3", str(aff))
    assert code == EXIT_FAILED and rec["verified"] is False


def test_verify_and_reconstruct(capsys):
    code, rec = run_json(capsys, "verify", "--n", "4")
    assert code == EXIT_OK and rec["verdict"] == "Verified" and "wall_time_ms" not in rec
    code, rec = run_json(capsys, "verify", "--n", "3", "--rect-subset", "faces")
    assert code == EXIT_OK and rec["rect_subset"] == "faces"
    code, rec = run_json(capsys, "verify", "--n", "4", "--rect-subset", "faces")
    assert code == EXIT_FAILED and rec["verdict"] == "NotDecided"
    code, rec = run_json(capsys, "reconstruct", "--n", "4", "--rect-subset", "faces")
    assert code == EXIT_OK and rec["underdetermined"] > 0
    code, rec = run_json(capsys, "verify", "--n", "3", "--timing")
    assert isinstance(rec["wall_time_ms"], int)


def test_selftest(capsys):
    code, rec = run_json(capsys, "selftest", "--n", "2", "--exhaustive")
    assert code == EXIT_OK and rec["passed"]
    assert "uniqueness_exhaustive" in [s["suite"] for s in rec["suites"]]


def test_byte_identical_json(capsys):
    for argv in (("verify", "--n", "4"), ("selftest", "--n", "3", "--seed", "5")):
        first = run(capsys, *argv, "--format", "json")[1]
        second = run(capsys, *argv, "--format", "json")[1]
        assert first == second


def test_table_and_csv_render():
    obj = {"a": 1, "b": [1, 2]}
    assert render(obj, "csv").splitlines() == ["a,b", '1,"[1,2]"']
    lines = render(obj, "table").splitlines()
    assert lines[0].split() == ["a", "b"] and lines[2].split() == ["1", "[1,2]"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cube_om", "enumerate", "--n", "2", "--format", "json", "--cache", str(tmp_path / "c.jsonl")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["hyperplanes"] == 6
