import csv
import io
import json

import pytest

from subrank.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def trap4_file(tmp_path, capsys):
    path = tmp_path / "trap4.json"
    assert run(capsys, "generate", "greedy-trap", "--n", "4", "-o", str(path))[0] == 0
    return path


def test_generate_greedy_trap(trap4_file):
    doc = json.loads(trap4_file.read_text())
    assert doc["m"] == 4 and doc["n"] == 4 and len(doc["functions"]) == 4


def test_generate_rejects_non_square(capsys):
    code, _, err = run(capsys, "generate", "greedy-trap", "--n", "5")
    assert code == 2
    assert "n must be a perfect square" in err


def test_generate_random_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        args = ["generate", "random", "--m", "6", "--n", "3", "--family", "modular", "--seed", "42", "-o", str(p)]
        assert run(capsys, *args)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_generate_other_families(tmp_path, capsys):
    code, out, _ = run(capsys, "generate", "set-cover", "--universe-size", "3", "--sets", "1,2;2,3;3")
    assert code == 0 and json.loads(out)["functions"][0]["kind"] == "coverage"
    code, out, _ = run(capsys, "generate", "msc", "--universe-size", "2", "--sets", "1;1,2")
    assert code == 0 and json.loads(out)["n"] == 2
    code, out, _ = run(capsys, "generate", "multi-intent", "--values", "0.5,0.5,0", "--nu", "0.5")
    assert code == 0 and json.loads(out)["m"] == 3
    code, _, _ = run(capsys, "generate", "set-cover", "--universe-size", "2", "--sets", "1")
    assert code == 2
    src = tmp_path / "sc.json"
    src.write_text(json.dumps({"universe_size": 3, "sets": [[1, 2], [2, 3], [3]]}))
    assert run(capsys, "generate", "set-cover", "--input", str(src))[0] == 0


def test_solve_algorithms(trap4_file, capsys, tmp_path):
    code, out, _ = run(capsys, "solve", str(trap4_file), "--algorithm", "aru", "--audit")
    res = json.loads(out)
    assert code == 0 and res["total_cost"] == 11 and res["audit"]["ok"]
    code, out, _ = run(capsys, "solve", str(trap4_file), "--algorithm", "greedy")
    assert code == 0 and json.loads(out)["total_cost"] == 13
    code, out, _ = run(capsys, "solve", str(trap4_file), "--algorithm", "brute", "--audit")
    assert code == 0 and json.loads(out)["total_cost"] == 11
    trace = tmp_path / "trace.json"
    assert run(capsys, "solve", str(trap4_file), "--trace", str(trace))[0] == 0
    assert json.loads(trace.read_text())["q"] == [1.5, 2, 1, 1]


def test_solve_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema_version": "1", "m": 2, "n": 1, "weights": [1], '
                   '"functions": [{"kind": "modular", "values": [0.3, 0.3]}]}')
    assert run(capsys, "solve", str(bad))[0] == 2
    assert run(capsys, "solve", str(tmp_path / "missing.json"))[0] == 2
    big = tmp_path / "big.json"
    run(capsys, "generate", "greedy-trap", "--n", "100", "-o", str(big))
    assert run(capsys, "solve", str(big), "--algorithm", "brute")[0] == 4


def test_analyze_exports(trap4_file, tmp_path, capsys):
    diag_csv, hist_csv = tmp_path / "diag.csv", tmp_path / "hist.csv"
    code, out, _ = run(capsys, "analyze", str(trap4_file), "--reference", "brute",
                       "--diagnostics-csv", str(diag_csv), "--histogram-csv", str(hist_csv))
    assert code == 0
    res = json.loads(out)
    assert res["certificate"]["ratio_vs_reference"] == 1
    rows = list(csv.DictReader(io.StringIO(diag_csv.read_text())))
    assert [float(r["R"]) for r in rows] == [4, 4, 2, 1]
    assert list(rows[0]) == ["t", "R", "Q", "Lambda", "Delta"]
    assert hist_csv.read_text().startswith("width,height,label\n")


def test_compare_greedy_trap_suite(capsys, tmp_path):
    out_csv = tmp_path / "cmp.csv"
    code, out, _ = run(capsys, "compare", "--suite", "greedy-trap:4,100,400", "--csv", str(out_csv))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    ratios = [float(r["greedy_over_aru"]) for r in rows]
    assert ratios == pytest.approx([13 / 11, 1145 / 255, 8590 / 1010])
    assert out_csv.read_text() == out


def test_compare_random_suite_with_brute(capsys):
    code, out, _ = run(capsys, "compare", "--suite", "random:count=12,max_m=6,max_n=3,seed=4", "--reference", "brute")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 12
    assert all(float(r["aru_cost"]) <= float(r["four_gamma"]) * float(r["reference_cost"]) for r in rows)
    assert [r["name"] for r in rows] == sorted(r["name"] for r in rows)


def test_compare_files_and_empty_suite(trap4_file, capsys):
    code, out, _ = run(capsys, "compare", str(trap4_file), "--reference", "brute")
    assert code == 0 and "trap4" in out
    assert run(capsys, "compare")[0] == 2


def test_tolerance_flag(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("SUBRANK_TOLERANCE", raising=False)
    p = tmp_path / "near.json"
    p.write_text('{"schema_version": "1", "m": 2, "n": 1, "weights": [1], '
                 '"functions": [{"kind": "modular", "values": [0.495, 0.5]}]}')
    assert run(capsys, "solve", str(p))[0] == 2
    assert run(capsys, "--tolerance", "0.01", "solve", str(p))[0] == 0
