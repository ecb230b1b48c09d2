import json
import subprocess
import sys

import pytest

from conftest import GOLD
from oracles import cooccurrence
from reviewmine.cli import RunConfig, cmd_graph, main
from reviewmine.corpus import load_tagged
from reviewmine.errors import ReviewMineError
from reviewmine.extract import summarize_corpus
from reviewmine.lexicons import seed_lexicons

TAGGED = str(GOLD / "sample.tagged")
GOLD_ANN = str(GOLD / "sample_gold.ann")
PERTURBED = str(GOLD / "sample_perturbed.ann")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_summarize_outputs(tmp_path, capsys):
    code, _, _ = run(capsys, "summarize", "--tagged", TAGGED, "--out", str(tmp_path))
    assert code == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert names == {"summaries.jsonl", "stats.json", "stats.txt", "annotations.ann",
                     "manifest.json"}
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["config"]["window"] == 3 and manifest["config"]["min_freq"] == 3
    assert manifest["config"]["tagged"] is True
    assert "emotion.txt" in manifest["lexicon_sha256"]
    assert set(manifest["outputs"]) == names - {"manifest.json"}
    assert len((tmp_path / "summaries.jsonl").read_text().splitlines()) == 5
    bundled = [l for l in open(GOLD_ANN).read().splitlines() if not l.startswith("# ")]
    assert (tmp_path / "annotations.ann").read_text().splitlines() == bundled


def test_summarize_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run(capsys, "summarize", "--tagged", TAGGED, "--out", str(out))[0] == 0
    for p in a.iterdir():
        data = p.read_bytes()
        if p.name == "manifest.json":
            data = data.replace(str(a).encode(), b"OUT")
            assert data == (b / p.name).read_bytes().replace(str(b).encode(), b"OUT")
        else:
            assert data == (b / p.name).read_bytes()


def test_manifest_reruns(tmp_path, capsys):
    first = tmp_path / "first"
    run(capsys, "summarize", "--tagged", TAGGED, "--out", str(first), "--window", "4")
    manifest = json.loads((first / "manifest.json").read_text())
    argv = manifest["command"]
    argv[argv.index("--out") + 1] = str(tmp_path / "again")
    assert run(capsys, *argv)[0] == 0
    again = json.loads((tmp_path / "again" / "manifest.json").read_text())
    assert again["outputs"] == manifest["outputs"]


def test_empty_corpus(tmp_path, capsys):
    src = tmp_path / "empty.jsonl"
    src.write_text("")
    out = tmp_path / "out"
    assert run(capsys, "summarize", str(src), "--out", str(out))[0] == 0
    assert (out / "summaries.jsonl").read_text() == ""
    assert json.loads((out / "stats.json").read_text())["sentences"] == 0


def test_raw_input(tmp_path, capsys):
    src = tmp_path / "r.jsonl"
    src.write_text(json.dumps({"id": "1", "stars": 4, "date": "2016-01-01", "votes": 2,
                               "text": "The setup is extremely easy. Is it bright?"}) + "\n")
    code, out, _ = run(capsys, "stats", str(src), "--json")
    assert code == 0 and json.loads(out)["counts"]["affordances"] == 1
    code, out, _ = run(capsys, "stats", str(src), "--json", "--filter-interrogative")
    assert json.loads(out)["sentences"] == 1


def test_missing_lexicon_dir(tmp_path, capsys):
    missing = tmp_path / "nolex"
    code, _, err = run(capsys, "summarize", "--tagged", TAGGED, "--out", str(tmp_path),
                       "--lexicons", str(missing))
    assert code != 0
    assert str(missing) in err


def test_missing_input(tmp_path, capsys):
    code, _, err = run(capsys, "stats", str(tmp_path / "none.jsonl"))
    assert code == 1 and "none.jsonl" in err


def test_bad_window(capsys):
    with pytest.raises(SystemExit) as info:
        main(["stats", TAGGED, "--window", "0"])
    assert info.value.code == 2


def test_graph_csv_matches_brute_force(tmp_path, capsys):
    code, out, _ = run(capsys, "graph", "--tagged", TAGGED, "--format", "csv")
    assert code == 0
    rows = [l.split(",") for l in out.splitlines()[1:]]
    summaries = summarize_corpus(load_tagged(TAGGED), seed_lexicons())
    _, edges = cooccurrence([[(a.kind.value, a.normalized) for a in s.annotations]
                             for s in summaries])
    got = {frozenset((tuple(a.split(":", 1)), tuple(b.split(":", 1)))): int(w) for a, b, w in rows}
    assert got == edges


def test_graph_writes_both(tmp_path, capsys):
    assert run(capsys, "graph", "--tagged", TAGGED, "--out", str(tmp_path))[0] == 0
    assert (tmp_path / "graph.dot").read_bytes().startswith(b"graph cooccurrence {")
    assert (tmp_path / "graph.csv").read_bytes().startswith(b"source,target,weight\n")


def test_graph_single_sentence(tmp_path, capsys):
    src = tmp_path / "one.tagged"
    src.write_text("#review 1 3 2016-01-01 0\nThe\tthe\tDET\nsetup\tsetup\tNOUN\n"
                   "is\tbe\tLINKV\neasy\teasy\tADJ\n.\t.\tOTHER\n")
    code, out, _ = run(capsys, "graph", "--tagged", str(src), "--format", "csv")
    assert out.splitlines() == ["source,target,weight",
                                "AFFORDANCE:ability to setup,PERCEPTION:easy,1"]


def test_graph_unknown_format(capsys):
    code, _, err = run(capsys, "graph", "--tagged", TAGGED, "--format", "png")
    assert code == 1 and "unknown graph format" in err
    with pytest.raises(ReviewMineError):
        cmd_graph(RunConfig(input=TAGGED, tagged=True), "svg")


def test_kappa_identical(capsys):
    code, out, _ = run(capsys, "kappa", "--tagged", TAGGED, GOLD_ANN, GOLD_ANN)
    assert code == 0
    overall = out.splitlines()[1].split()
    assert overall == ["overall", "1.0000", "Perfect"]


def test_kappa_perturbed(tmp_path, capsys):
    code, out, _ = run(capsys, "kappa", "--tagged", TAGGED, GOLD_ANN, PERTURBED,
                       "--disagreements", "--out", str(tmp_path))
    assert code == 0
    assert float(out.splitlines()[1].split()[1]) < 1.0
    assert "s3:22\tFEATURE AFFORDANCE" in out
    assert "FEATURE/AFFORDANCE\t2" in out
    record = json.loads((tmp_path / "agreement.json").read_text())
    assert record["kappa"] < 1.0
    assert [e["token"] for e in record["disagreements"]["entries"]] == ["s3:22", "s3:23"]


def test_kappa_modes(capsys):
    _, six, _ = run(capsys, "kappa", "--tagged", TAGGED, GOLD_ANN, PERTURBED, "--mode", "six-way")
    _, per, _ = run(capsys, "kappa", "--tagged", TAGGED, GOLD_ANN, PERTURBED,
                    "--mode", "per-concept")
    assert "overall" in six and "FEATURE" not in six
    assert "overall" not in per and "USAGE_CONDITION" in per


def test_kappa_one_file_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["kappa", "--tagged", TAGGED, GOLD_ANN])
    assert info.value.code == 2


def test_kappa_mismatched_corpus(tmp_path, capsys):
    other = tmp_path / "other.ann"
    other.write_text("#corpus " + "0" * 64 + "\n")
    code, _, err = run(capsys, "kappa", "--tagged", TAGGED, GOLD_ANN, str(other))
    assert code == 1 and "different corpus" in err


def test_validate_lexicons(tmp_path, capsys):
    code, out, _ = run(capsys, "validate-lexicons")
    assert code == 0 and out.startswith("lexicons OK")
    (tmp_path / "emotion.txt").write_text("x\tjoy\t+\n")
    (tmp_path / "antonyms.txt").write_text("a\tb\n")
    (tmp_path / "place_prepositions.txt").write_text("in\n")
    (tmp_path / "stative_verbs.txt").write_text("seem\n")
    (tmp_path / "linking_verbs.txt").write_text("seem\n")
    code, _, err = run(capsys, "validate-lexicons", "--lexicons", str(tmp_path))
    assert code == 1 and "'seem'" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "reviewmine", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "0.1.0"
