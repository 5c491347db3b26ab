import json

import pytest

from dialogsim.cli import main
from dialogsim.corpus import serialize_corpus
from dialogsim.fusion import DistanceMatrix, RankingMatrix
from dialogsim.synth import synthetic_corpus

from .conftest import PAPER_EXTRACT, THREE_DIALOGS, make_corpus
from .oracles import brute_force_borda


@pytest.fixture
def three_file(tmp_path):
    p = tmp_path / "three.txt"
    p.write_text(THREE_DIALOGS, encoding="utf-8")
    return p


@pytest.fixture
def dup_file(tmp_path):
    c = make_corpus(["recycling paper cans", "bins plastic"], ["computer research"], ["recycling paper cans", "bins plastic"], ["school trash"])
    p = tmp_path / "dup.jsonl"
    p.write_text(serialize_corpus(c, "jsonl"), encoding="utf-8")
    return p


def test_distmat_text(three_file, tmp_path):
    out = tmp_path / "out"
    assert main(["distmat", "--mode", "text", str(three_file), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["D_T.csv", "R_T.csv"]
    D = DistanceMatrix.from_csv((out / "D_T.csv").read_text())
    assert D.labels == ("d0", "d1", "d2")
    assert D.values[0, 2] == 1.0 and D.values[1, 2] == 1.0
    assert RankingMatrix.from_csv((out / "R_T.csv").read_text()).ranks.tolist() == [[1, 2, 3], [2, 1, 3], [2, 3, 1]]


def test_distmat_structure(three_file, tmp_path):
    out = tmp_path / "out"
    assert main(["distmat", "--mode", "structure", str(three_file), "--out", str(out)]) == 0
    R = RankingMatrix.from_csv((out / "R_S.csv").read_text())
    assert R.ranks.tolist() == [[1, 3, 2], [2, 1, 3], [2, 3, 1]]


def test_distmat_combined(three_file, tmp_path):
    out = tmp_path / "out"
    assert main(["distmat", "--mode", "combined", str(three_file), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["D_B.csv", "R_B.csv", "R_S.csv", "R_T.csv"]
    R_T = RankingMatrix.from_csv((out / "R_T.csv").read_text())
    R_S = RankingMatrix.from_csv((out / "R_S.csv").read_text())
    R_B = RankingMatrix.from_csv((out / "R_B.csv").read_text())
    D_B = DistanceMatrix.from_csv((out / "D_B.csv").read_text())
    # hand-ranked: D_B = [[2,5,5],[4,2,6],[4,6,2]]
    assert D_B.values.tolist() == [[2, 5, 5], [4, 2, 6], [4, 6, 2]]
    assert R_B.ranks.tolist() == [[1, 2, 3], [2, 1, 3], [2, 3, 1]]
    assert R_B.ranks.tolist() == brute_force_borda(R_T.ranks.tolist(), R_S.ranks.tolist())


def test_query_duplicate_is_nearest(dup_file, capsys):
    assert main(["query", str(dup_file), "--id", "d0", "--mode", "text", "--k", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "d2\t2"
    assert len(lines) == 2


def test_query_two_dialogs(tmp_path, capsys):
    p = tmp_path / "two.txt"
    p.write_text("=== a\nA: kiwi\n=== b\nB: pear\n", encoding="utf-8")
    assert main(["query", str(p), "--id", "a", "--k", "1"]) == 0
    assert capsys.readouterr().out == "b\t2\n"


def test_query_unknown_id(three_file, capsys):
    assert main(["query", str(three_file), "--id", "zzz"]) == 1
    assert "unknown dialog id" in capsys.readouterr().err


def test_parse_failure_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.jsonl"
    p.write_text("{oops\n", encoding="utf-8")
    assert main(["distmat", str(p), "--out", str(tmp_path / "o")]) == 1
    assert "line 1" in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_eval_identical_dialogs(tmp_path):
    c = make_corpus(["kiwi pear", "plum"], ["kiwi pear", "plum"], ["kiwi pear", "plum"])
    p = tmp_path / "same.jsonl"
    p.write_text(serialize_corpus(c), encoding="utf-8")
    assert main(["eval", str(p), "--out", str(tmp_path / "o")]) == 0
    report = json.loads((tmp_path / "o" / "eval.json").read_text())
    assert report["pairwise_mse"] == {"T-S": 0.0, "T-B": 0.0, "S-B": 0.0}
    assert [k for k, _ in report["curve"]] == [100, 200, 400, 800, 1600]
    assert (tmp_path / "o" / "curve.csv").read_text().startswith("swaps,mse\n100,")


def test_eval_deterministic(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text(serialize_corpus(synthetic_corpus(15, seed=1)), encoding="utf-8")
    args = ["eval", str(p), "--seed", "7", "--case", "d0003"]
    assert main(args + ["--out", str(tmp_path / "a"), "--threads", "1"]) == 0
    assert main(args + ["--out", str(tmp_path / "b"), "--threads", "4"]) == 0
    a = (tmp_path / "a" / "eval.json").read_bytes()
    assert a == (tmp_path / "b" / "eval.json").read_bytes()
    report = json.loads(a)
    case = report["intersections"]["d0003"]
    assert set(case["nearest"]) == {"text", "structure", "combined"}
    assert set(case["intersections"]) == {"text", "structure", "combined", "all"}


def test_eval_row_scope(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text(serialize_corpus(synthetic_corpus(12, seed=1)), encoding="utf-8")
    assert main(["eval", str(p), "--swap-scope", "row", "--baseline", "ordered", "--out", str(tmp_path / "o")]) == 0
    report = json.loads((tmp_path / "o" / "eval.json").read_text())
    assert report["curve_settings"] == {"baseline": "ordered", "swap_scope": "row"}


def test_report_single(three_file, capsys):
    assert main(["report", str(three_file), "--ids", "d1"]) == 0
    out = capsys.readouterr().out
    assert len(out.strip().splitlines()) == 2
    assert "intersections" not in out


def test_report_paper_extract(tmp_path, capsys):
    p = tmp_path / "paper.txt"
    p.write_text(PAPER_EXTRACT, encoding="utf-8")
    assert main(["report", str(p), "--ids", "d1", "--csv", str(tmp_path / "f.csv")]) == 0
    row = capsys.readouterr().out.splitlines()[1].split()
    assert row == ["d1", "8", "5.9", "3", "2.0"]
    assert (tmp_path / "f.csv").read_text().splitlines()[1] == "d1,8,5.875,3,2.0"


def test_report_identical_pair(dup_file, capsys):
    assert main(["report", str(dup_file), "--ids", "d0", "d2"]) == 0
    out = capsys.readouterr().out
    assert "d0 & d2: bins, cans, paper, plastic, recycling" in out


def test_report_unknown(three_file, capsys):
    assert main(["report", str(three_file), "--ids", "d1", "x"]) == 1


def test_custom_stopwords_and_tau(tmp_path, capsys):
    p = tmp_path / "paper.txt"
    p.write_text(PAPER_EXTRACT, encoding="utf-8")
    sw = tmp_path / "stop.txt"
    sw.write_text("find\n", encoding="utf-8")
    assert main(["report", str(p), "--ids", "d1", "--stopwords", str(sw), "--tau", "1.0"]) == 0
    # only T5/T6 are identical once pronouns count as content
    assert capsys.readouterr().out.splitlines()[1].split()[3] == "1"


def test_bad_tau():
    with pytest.raises(SystemExit):
        main(["validate", "x", "--tau", "0"])


def test_validate(three_file, capsys):
    assert main(["validate", str(three_file)]) == 0
    assert capsys.readouterr().out == "3 dialogs, 10 turns (min 2, max 6)\n"
