import json
import subprocess
import sys

import pytest

from stallings import cli, verify
from stallings.cores import BasedCore, core_from_words
from stallings.graph import Graph
from stallings.words import parse_words


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def doc(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_core_command(capsys):
    d = doc(capsys, "core", "ab")
    assert len(d["vertices"]) == 2 and len(d["darts"]) == 4
    assert BasedCore.from_dict(d) == core_from_words(parse_words("ab"))
    assert doc(capsys, "core", "")["darts"] == []
    d = doc(capsys, "core", "a,baB")
    assert len(d["vertices"]) == 2 and len(d["darts"]) == 6


def test_core_parse_error_exits_2(capsys):
    code, out, err = run(capsys, "core", "a,x")
    assert code == 2 and out == "" and "out of range" in err


def test_invariants_and_substitution(capsys):
    assert doc(capsys, "invariants", "ab") == {"H": 2, "n1": 1, "n2": 1, "rank": 1, "index": "infinite", "galois": None}
    d = doc(capsys, "invariants", "ab", "--subst", "a,Ab")
    assert (d["H"], d["n1"], d["n2"]) == (1, 1, 0)


def test_index_member_galois(capsys):
    assert doc(capsys, "index", "aa,b,abA") == {"index": 2}
    assert doc(capsys, "member", "ab", "ab")["member"] is True
    assert doc(capsys, "member", "ab", "ba")["member"] is False
    assert doc(capsys, "galois", "aa,b,abA") == {"galois": True}
    code, _, err = run(capsys, "galois", "ab")
    assert code == 2 and "finite-index" in err


def test_bound_intersect_join(capsys):
    d = doc(capsys, "bound", "a,baB", "a,baB")
    assert d["exact_sum"] == 1 and d["paper_bound_best"] == 1
    d = doc(capsys, "intersect", "a,baB", "a,baB")
    assert sorted(r["rep"] for r in d["double_coset_reps"]) == ["", "B", "b"]
    assert d["sum_rk_minus_1"] == 1
    assert doc(capsys, "join", "aa", "aaa")["generators"] == ["a"]


def test_complete_witness_family(capsys):
    d = doc(capsys, "complete", "a", "--avoid", "b")
    assert d["index"] == 2
    code, _, _ = run(capsys, "complete", "a", "--avoid", "aa")
    assert code == 2
    assert doc(capsys, "witness", "a", "a") == {"word": "a", "witness": "b"}
    d = doc(capsys, "family", "5")
    assert d["inv1"] == {"H": 5, "n1": 0, "n2": 1, "rank": 5}
    assert run(capsys, "family", "1")[0] == 2


def test_excise_command(capsys, tmp_path):
    base = Graph.from_arcs([0, 1], [(0, 1), (0, 1), (0, 1)])
    f = tmp_path / "ex.json"
    f.write_text(json.dumps({"base": base.to_dict(), "tree": [0, 1], "loops": [{"start": 0, "darts": [0, 3]}]}))
    d = doc(capsys, "excise", str(f))
    assert d["words"] == ["A"] and d["rank"] == 1
    f.write_text(json.dumps({"base": base.to_dict(), "loops": [{"start": 0, "darts": [0]}]}))
    assert run(capsys, "excise", str(f))[0] == 2
    f.write_text("{}")
    assert run(capsys, "excise", str(f))[0] == 2


def test_file_inputs_and_out(capsys, tmp_path):
    dump = tmp_path / "core.json"
    assert run(capsys, "core", "a,baB", "--out", str(dump))[0] == 0
    first = dump.read_text(encoding="utf-8")
    assert doc(capsys, "invariants", f"@{dump}")["n2"] == 1
    again = tmp_path / "again.json"
    run(capsys, "core", f"@{dump}", "--out", str(again))
    assert again.read_text(encoding="utf-8") == first
    gens_doc = tmp_path / "gens.json"
    gens_doc.write_text(json.dumps({"rank": 2, "generators": ["ab"]}))
    assert doc(capsys, "index", f"@{gens_doc}") == {"index": "infinite"}
    assert run(capsys, "core", "@/nonexistent.json")[0] == 2


def test_sample_is_reproducible(capsys, monkeypatch):
    a = run(capsys, "sample", "words", "--seed", "4", "--count", "5")[1]
    b = run(capsys, "sample", "words", "--seed", "4", "--count", "5")[1]
    assert a == b and len(json.loads(a)) == 5
    monkeypatch.setenv("STALLINGS_SEED", "4")
    c = run(capsys, "sample", "words", "--seed", "123", "--count", "5")[1]
    assert c == a
    d = doc(capsys, "sample", "complete", "--count", "3", "--index", "3")
    assert [x["index"] for x in d] == [3, 3, 3]


def test_batch_bound_keeps_order(capsys, tmp_path):
    f = tmp_path / "pairs.txt"
    f.write_text("a,baB;a,baB\na;b\nab;ab\n")
    serial = doc(capsys, "batch-bound", str(f))
    parallel = doc(capsys, "batch-bound", str(f), "--jobs", "2")
    assert serial == parallel
    assert [r["exact_sum"] for r in serial] == [1, 0, 0]


@pytest.fixture
def quick_suite(monkeypatch):
    monkeypatch.setattr(verify, "CRITERIA", (verify.check_realization_example, verify.check_rank_identity, verify.check_bound))


def test_verify_reports(capsys, tmp_path, quick_suite):
    csv_path, svg_path = tmp_path / "b.csv", tmp_path / "b.svg"
    code, out, err = run(capsys, "verify", "--count", "40", "--csv", str(csv_path), "--svg", str(svg_path))
    assert code == 0
    d = json.loads(out)
    assert d["passed"] and [p["cases"] for p in d["properties"]] == [2, 40, 40]
    lines = csv_path.read_text().splitlines()
    assert lines[0] == ",".join(verify.CSV_FIELDS) and len(lines) == 41
    first_svg = svg_path.read_text()
    assert first_svg.lstrip().startswith("<?xml")
    run(capsys, "verify", "--count", "40", "--svg", str(svg_path))
    assert svg_path.read_text() == first_svg
    assert err.count("PASS") == 3


def test_verify_mutant_is_caught(capsys, quick_suite):
    code, out, err = run(capsys, "verify", "--count", "40", "--mutant", "skip-n2")
    assert code == 1
    props = json.loads(out)["properties"]
    assert props[1]["failures"] > 0 and not props[1]["passed"]
    assert "FAIL rank identity" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "stallings", "core", "b"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["vertices"] == [0]
