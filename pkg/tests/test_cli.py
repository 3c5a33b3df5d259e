import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from ringlab.cli import main

GOLDEN = Path(__file__).parent / "golden"


def mask(text):
    text = re.sub(r'"elapsed_ms": \d+', '"elapsed_ms": 0', text)
    text = re.sub(r"elapsed_ms: \d+", "elapsed_ms: 0", text)
    return re.sub(r",\d+$", ",0", text, flags=re.M)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "Z6")
    assert code == 0
    assert re.search(r"^weakly_j_quasipolar\s+true$", out, re.M)
    assert re.search(r"^j_quasipolar\s+false$", out, re.M)


def test_analyze_json_m2z2(capsys):
    code, out, _ = run(capsys, "analyze", "M(2,Z2)", "--json", "--witnesses")
    assert code == 0
    data = json.loads(out)
    props = {p["name"]: p for p in data["properties"]}
    assert props["weakly_j_quasipolar"]["verdict"] is False
    assert props["j_equals_j_sharp"]["verdict"] is False
    sets = {s["name"]: s for s in data["sets"]}
    assert sets["radical"]["members"] == ["[[0,0],[0,0]]"]
    assert sets["j_sharp"]["size"] == 4


def test_analyze_z15_gate(capsys):
    code, out, _ = run(capsys, "analyze", "Z15", "--properties", "weakly_j_quasipolar,six_in_j")
    assert code == 0
    assert re.search(r"^weakly_j_quasipolar\s+false$", out, re.M)
    assert "gate six_in_j: false" in out
    assert not re.search(r"^j_quasipolar", out, re.M)


def test_analyze_witness_flag(capsys):
    _, plain, _ = run(capsys, "analyze", "Z9", "--json")
    _, full, _ = run(capsys, "analyze", "Z9", "--json", "--witnesses")
    plain, full = json.loads(plain), json.loads(full)
    assert all(p["witness"] is None for p in plain["properties"])
    jqp = next(p for p in full["properties"] if p["name"] == "j_quasipolar")
    assert jqp["witness"] == "4"
    assert "members" not in plain["sets"][0] and "members" in full["sets"][0]


def test_element_text(capsys):
    code, out, _ = run(capsys, "element", "Z6", "2")
    assert code == 0
    assert "weakly_j_quasipolar: p=4 sign=+ j=0" in out


def test_element_fast_path(capsys):
    code, out, _ = run(capsys, "element", "T(2,Z4)", "[[1,1],[0,2]]", "--fast-path", "--json")
    assert code == 0
    fp = json.loads(out)["fast_path"]
    assert fp["brute_force"] is True and fp["agreement"] is True
    assert [p["case"] for p in fp["paths"]] == ["T2-case-3"]


def test_element_nilpotent_in_m2z2(capsys):
    code, out, _ = run(capsys, "element", "M(2,Z2)", "[[0,1],[0,0]]", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["membership"]["radical"] is False and data["membership"]["j_sharp"] is True
    weak = data["certificates"][0]
    assert weak["class"] == "weakly_j_quasipolar" and weak["holds"] is False


def test_element_fast_path_not_applicable(capsys):
    code, out, _ = run(capsys, "element", "Z6", "2", "--fast-path")
    assert code == 0 and "fast path: not applicable" in out


@pytest.mark.parametrize("argv", [
    ["analyze", "M(2,Z"],
    ["analyze", "Z0"],
    ["analyze", "Z6", "--properties", "shiny"],
    ["element", "T(2,Z4)", "[[1,0],[1,0]]"],
    ["element", "Z6", "[[1]]"],
    ["corpus", "/nonexistent/corpus.txt"],
    ["corpus"],
    ["frobnicate"],
])
def test_exit_code_input_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert err


def test_exit_code_cap(capsys):
    code, _, err = run(capsys, "analyze", "M(3,Z5)")
    assert code == 3 and "cap" in err
    code, _, _ = run(capsys, "analyze", "M(2,Z9)")
    assert code == 3
    code, _, _ = run(capsys, "analyze", "M(2,Z3)", "--max-order", "80")
    assert code == 3


def test_corpus_file_skipped_row(tmp_path, capsys):
    corpus = tmp_path / "c.txt"
    corpus.write_text("# a comment\n\nM(3,Z5)\nZ4\n", encoding="utf-8")
    out_file = tmp_path / "report.csv"
    code, out, _ = run(capsys, "corpus", str(corpus), "--out", str(out_file))
    assert code == 0 and out == ""
    lines = out_file.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "ring,order,check,result,witness,elapsed_ms"
    assert lines[1].startswith('"M(3,Z5)",1953125,all,SKIPPED,')
    assert all(",PASS," in ln for ln in lines[2:])


def test_corpus_json_sorted(tmp_path, capsys):
    corpus = tmp_path / "c.txt"
    corpus.write_text("Z4\nZ2 x Z2\nT(2,Z2)\n", encoding="utf-8")
    code, out, _ = run(capsys, "corpus", str(corpus), "--json")
    rows = json.loads(out)
    assert code == 0
    keys = [(r["ring"], r["check"]) for r in rows]
    assert keys == sorted(keys)
    assert list(rows[0]) == ["ring", "order", "check", "result", "witness", "elapsed_ms"]


def test_corpus_fail_exit(tmp_path, capsys):
    corpus = tmp_path / "c.txt"
    corpus.write_text("Z3\n", encoding="utf-8")
    code, out, _ = run(capsys, "corpus", str(corpus), "--quiet")
    assert code == 1 and out == ""


def test_csv_quotes_commas(tmp_path, capsys):
    corpus = tmp_path / "c.txt"
    corpus.write_text("T(2,Z3)\n", encoding="utf-8")
    _, out, _ = run(capsys, "corpus", str(corpus))
    assert '"T(2,Z3)",27,' in out


@pytest.mark.parametrize("name, argv", [
    ("analyze_z6.json", ["analyze", "Z6", "--json"]),
    ("element_z6_2.json", ["element", "Z6", "2", "--json"]),
    ("corpus_builtin.csv", ["corpus", "--builtin"]),
])
def test_golden_outputs(capsys, name, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert mask(first) == mask(second)
    assert mask(first) == (GOLDEN / name).read_text(encoding="utf-8")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ringlab", "analyze", "Z4", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["order"] == 4
