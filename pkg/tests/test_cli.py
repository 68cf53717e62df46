import json
import random

import pytest
from gen import GOLDEN_MATRIX, rand_rle, rand_tree

from dtwgrep.approx import exact_min_dtw
from dtwgrep.block import GT_K, CompressedMatchRow, retrieve
from dtwgrep.cli import main
from dtwgrep.metric import read_metric_table
from dtwgrep.oracle import brute_dtw_pm
from dtwgrep.sim import CSV_HEADER
from dtwgrep.tree import format_tree


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def golden_files(data_dir):
    return str(data_dir / "golden_pattern.txt"), str(data_dir / "golden_text.txt")


def _tsv_values(text: str) -> list:
    lines = text.splitlines()
    assert lines[0] == "position\tvalue"
    return [line.split("\t")[1] for line in lines[1:]]


def test_match_k1(capsys, golden_files):
    p, t = golden_files
    code, out, _ = run(capsys, "match", "--pattern", p, "--text", t, "--k", "1", "--algo", "k1")
    assert code == 0
    row = CompressedMatchRow.from_json(out)
    assert [r for r in range(1, 22) if retrieve(row, r) is not GT_K] == [11, 12, 13, 14, 20, 21]


def test_match_k0_prints_full_row(capsys, golden_files):
    p, t = golden_files
    code, out, _ = run(capsys, "match", "--pattern", p, "--text", t, "--k", "0")
    obj = json.loads(out)
    assert code == 0 and obj["k"] == 0
    assert obj["row"] == ["inf"] + GOLDEN_MATRIX[-1]
    code, out, _ = run(capsys, "match", "--pattern", p, "--text", t, "--k", "0", "--format", "tsv")
    assert _tsv_values(out)[0] == "inf"


def test_match_block_k3(capsys, golden_files):
    p, t = golden_files
    code, out, _ = run(capsys, "match", "--pattern", p, "--text", t, "--k", "3", "--algo", "block", "--expand")
    want = [v if v <= 3 else "gt_k" for v in GOLDEN_MATRIX[-1]]
    assert code == 0 and json.loads(out)["values"] == want


def test_json_and_tsv_agree(capsys, golden_files, tmp_path):
    p, t = golden_files
    _, js, _ = run(capsys, "match", "--pattern", p, "--text", t, "--k", "2")
    _, tsv, _ = run(capsys, "match", "--pattern", p, "--text", t, "--k", "2", "--format", "tsv")
    row = CompressedMatchRow.from_json(js)
    via_json = [">k" if v is GT_K else str(v) for v in (retrieve(row, r) for r in range(1, row.length + 1))]
    assert via_json == _tsv_values(tsv)
    f = tmp_path / "row.json"
    f.write_text(js)
    _, converted, _ = run(capsys, "convert", "--input", str(f), "--to", "tsv")
    assert converted == tsv


def test_match_with_metric_table(capsys, data_dir, tmp_path):
    (tmp_path / "p.txt").write_text("ACG\n")
    (tmp_path / "t.txt").write_text("TTAGGT\n")
    code, out, _ = run(capsys, "match", "--pattern", str(tmp_path / "p.txt"), "--text", str(tmp_path / "t.txt"),
                       "--k", "0", "--metric", f"table:{data_dir / 'dna_metric.txt'}")
    want = brute_dtw_pm("ACG", "TTAGGT", read_metric_table(data_dir / "dna_metric.txt"))
    assert code == 0 and json.loads(out)["row"][1:] == want[1:]


@pytest.mark.parametrize("argv", [
    ["--k", "2", "--algo", "k1"],
    ["--k", "1", "--algo", "baseline"],
    ["--k", "0", "--algo", "block"],
    ["--k", "-1"],
    ["--k", "1", "--metric", "euclid"],
])
def test_match_rejects_bad_flags(capsys, golden_files, argv):
    p, t = golden_files
    code, _, err = run(capsys, "match", "--pattern", p, "--text", t, *argv)
    assert code != 0 and err.startswith("dtw-grep: error:")


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "match", "--pattern", str(tmp_path / "nope"), "--text", str(tmp_path / "nope"),
                       "--k", "1")
    assert code != 0 and "error" in err


def test_approx_exact_occurrence(capsys, data_dir, tmp_path):
    (tmp_path / "p.txt").write_text("GAT\n")
    (tmp_path / "t.txt").write_text("CCGATTA\n")
    code, out, _ = run(capsys, "approx", "--pattern", str(tmp_path / "p.txt"), "--text", str(tmp_path / "t.txt"),
                       "--epsilon", "0.5", "--tree", str(data_dir / "acgt_tree.txt"))
    fields = dict(line.split("\t") for line in out.splitlines())
    assert code == 0 and float(fields["value"]) == 0 and fields["branch"] == "two-approx"


def test_approx_seeded_repeat(capsys, golden_files):
    p, t = golden_files
    argv = ["approx", "--pattern", p, "--text", t, "--epsilon", "0.3", "--seed", "7", "--oracle"]
    first = run(capsys, *argv)
    assert first[0] == 0 and first == run(capsys, *argv)


def test_approx_bad_epsilon(capsys, golden_files):
    p, t = golden_files
    code, _, err = run(capsys, "approx", "--pattern", p, "--text", t, "--epsilon", "1.5")
    assert code == 2 and "epsilon" in err


def test_approx_random_fixtures_window(capsys, tmp_path):
    """The documented window [delta/2, 8 L^eps delta] for the printed value."""
    rng = random.Random(61)
    for i in range(40):
        tree = rand_tree(rng, "ABCD")
        P, T = rand_rle(rng, rng.randint(1, 5), 4, 4), rand_rle(rng, rng.randint(2, 10), 4, 4)
        files = [tmp_path / f"{name}{i}.txt" for name in ("tree", "p", "t")]
        files[0].write_text(format_tree(tree))
        files[1].write_text("".join(r.letter * r.length for r in P.runs) + "\n")
        files[2].write_text("".join(r.letter * r.length for r in T.runs) + "\n")
        eps = 0.5
        code, out, err = run(capsys, "approx", "--pattern", str(files[1]), "--text", str(files[2]),
                           "--epsilon", str(eps), "--tree", str(files[0]), "--oracle")
        assert code == 0, err
        fields = dict(line.split("\t") for line in out.splitlines())
        v, delta = float(fields["value"]), float(fields["exact"])
        assert delta == exact_min_dtw(P, T, tree.metric())
        L = max(P.total_length, T.total_length)
        assert delta / 2 - 1e-9 <= v <= 8 * L ** eps * delta + 1e-9, (v, delta, fields["branch"])


def test_simulate_header_only(capsys):
    code, out, _ = run(capsys, "simulate", "--reads", "0")
    assert code == 0 and out == ",".join(CSV_HEADER) + "\n"


def test_simulate_default_grid_rows(capsys, tmp_path):
    out_file = tmp_path / "offsets.csv"
    code, _, _ = run(capsys, "simulate", "--genome", "synthetic:3000:1", "--reads", "2", "--out", str(out_file))
    lines = out_file.read_text().splitlines()
    assert code == 0 and len(lines) == 11
    assert [line.split(",")[0] for line in lines[1:]] == ["0", "0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7",
                                                         "0.8", "0.9"]


def test_simulate_errors(capsys, tmp_path):
    assert run(capsys, "simulate", "--reads", "-1")[0] == 2
    assert run(capsys, "simulate", "--genome", str(tmp_path / "none.fa"), "--reads", "1")[0] == 2
    assert run(capsys, "simulate", "--phom-grid", "bad", "--reads", "1")[0] == 2


def test_bench_table(capsys):
    code, out, _ = run(capsys, "bench", "--runs", "40,40", "--runlen-max", "8", "--k", "2", "--trials", "2")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    head = lines[0].split("\t")
    row = dict(zip(head, lines[1].split("\t")))
    assert int(row["block_ops"]) <= 20 * 2 * 40 * 40
    assert int(row["baseline_cells"]) == (int(row["M"]) + 1) * (int(row["N"]) + 1)
    assert run(capsys, "bench", "--runs", "40")[0] == 2


def test_convert_formats(capsys, tmp_path):
    src = tmp_path / "x.txt"
    src.write_text("AAACCG\n")
    code, rle, _ = run(capsys, "convert", "--input", str(src), "--to", "rle")
    assert code == 0 and rle == "A 3\nC 2\nG 1\n"
    (tmp_path / "x.rle").write_text(rle)
    _, fasta, _ = run(capsys, "convert", "--input", str(tmp_path / "x.rle"), "--to", "fasta", "--name", "x",
                      "--input-format", "rle")
    assert fasta == ">x\nAAACCG\n"
    (tmp_path / "x.fa").write_text(fasta)
    _, plain, _ = run(capsys, "convert", "--input", str(tmp_path / "x.fa"), "--to", "plain")
    assert plain == "AAACCG\n"
    assert run(capsys, "convert", "--input", str(src), "--to", "tsv")[0] == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0 and "dtw-grep" in capsys.readouterr().out


def test_console_script_runs():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "dtwgrep", "simulate", "--reads", "0"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("p_hom,")
