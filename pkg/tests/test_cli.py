import subprocess
import sys

import pytest

from obcm.cli import main
from obcm.instance import read_instance, read_ordering


def test_gen_single_and_directory(tmp_path, capsys):
    assert main(["gen", "--n1", "6", "--n2", "5", "--p", "0.5", "--seed", "3",
                 "--out", str(tmp_path / "g.obcm")]) == 0
    assert read_instance(tmp_path / "g.obcm").n2 == 5
    assert main(["gen", "--n1", "6", "--n2", "5", "--p", "0.5", "--count", "3",
                 "--out", str(tmp_path / "suite")]) == 0
    assert len(list((tmp_path / "suite").iterdir())) == 3


def test_gen_bad_probability(tmp_path):
    assert main(["gen", "--n1", "3", "--n2", "3", "--p", "2", "--out", str(tmp_path / "x.obcm")]) == 2


@pytest.mark.parametrize("algo", ["barycenter", "median", "sifting", "exact", "rls-jump", "ea-swap", "jsrls"])
def test_solve_prints_ordering(tmp_path, capsys, algo):
    (tmp_path / "e2.obcm").write_text("obcm 1\n4 3 4\n0 2\n0 3\n1 1\n2 0\n")
    assert main(["solve", str(tmp_path / "e2.obcm"), "--algo", algo, "--seed", "1",
                 "--stagnation-exponent", "2"]) == 0
    out, err = capsys.readouterr()
    assert out.split() == ["2", "1", "0"]
    assert "crossings 0" in err


def test_solve_writes_ordering_file(tmp_path, capsys):
    (tmp_path / "e2.obcm").write_text("obcm 1\n4 3 4\n0 2\n0 3\n1 1\n2 0\n")
    (tmp_path / "start.txt").write_text("0\n1\n2\n")
    assert main(["solve", str(tmp_path / "e2.obcm"), "--algo", "sifting",
                 "--start", str(tmp_path / "start.txt"), "--out", str(tmp_path / "o.txt")]) == 0
    assert read_ordering(tmp_path / "o.txt").perm == (2, 1, 0)
    assert "crossings 0" in capsys.readouterr().out


def test_solve_errors(tmp_path):
    (tmp_path / "bad.obcm").write_text("obcm 1\n2 2 1\n0 5\n")
    assert main(["solve", str(tmp_path / "bad.obcm"), "--algo", "median"]) == 3
    assert main(["solve", str(tmp_path / "missing.obcm"), "--algo", "median"]) == 3
    assert main(["gen", "--n1", "30", "--n2", "30", "--p", "0.1", "--out", str(tmp_path / "big.obcm")]) == 0
    assert main(["solve", str(tmp_path / "big.obcm"), "--algo", "exact"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["solve", str(tmp_path / "big.obcm"), "--algo", "nagamochi"])
    assert exc.value.code == 2


def test_bench_and_stats(tmp_path, capsys):
    config = tmp_path / "suite.yaml"
    config.write_text(
        "instances: {n1: 8, n2: 8, p: 0.3, count: 4}\n"
        "master_seed: 2\n"
        "algorithms: [median, rls-jump]\n"
        "output: out\n"
    )
    assert main(["bench", str(config)]) == 0
    results = tmp_path / "out" / "results.csv"
    assert results.exists()
    capsys.readouterr()
    assert main(["stats", "--a", str(results), "--b", str(results), "--column", "gap"]) == 0
    out = capsys.readouterr().out
    assert "p_two_sided=1" in out
    assert main(["stats", "--a", str(results), "--b", str(results), "--column", "nope"]) == 3


def test_bench_missing_config(tmp_path):
    assert main(["bench", str(tmp_path / "none.yaml")]) == 3


def test_stats_plain_csv(tmp_path, capsys):
    (tmp_path / "a.csv").write_text("crossings\n1\n2\n")
    (tmp_path / "b.csv").write_text("crossings\n3\n4\n")
    assert main(["stats", "--a", str(tmp_path / "a.csv"), "--b", str(tmp_path / "b.csv")]) == 0
    assert "p_two_sided=0.333333" in capsys.readouterr().out


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "obcm.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "bench" in out.stdout
