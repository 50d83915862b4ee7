import csv
import io
import json

import pytest

from freeframe import cli

GEN = {"level": 1, "terms": [{"word": w, "coeff": [1.0, 0.0]} for w in "abAB"]}


@pytest.fixture
def gen_file(tmp_path):
    p = tmp_path / "gen-sum.json"
    p.write_text(json.dumps(GEN))
    return str(p)


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_frame_table(capsys):
    code, out, _ = run(capsys, "frame-table", "--max-n", "5")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out, newline="")))
    assert rows[0] == ["n", "k", "p", "j", "word", "a_n"]
    assert len(rows) == 6
    assert rows[1][4] == "" and rows[1][5] == "0.04"
    assert out.endswith("\r\n")


def test_pretty_identity(capsys):
    _, out, _ = run(capsys, "frame-table", "--max-n", "1", "--pretty-identity", "--format", "json")
    assert json.loads(out)["rows"][0]["word"] == "e"


def test_norm_json(capsys, gen_file):
    code, out, _ = run(capsys, "norm", "--element", gen_file, "--radius", "8")
    doc = json.loads(out)
    assert code == 0
    assert doc["lower"] <= 3.4641 <= doc["upper"] == 4.0


def test_norm_sweep_csv(capsys, gen_file):
    code, out, _ = run(capsys, "norm", "--element", gen_file, "--radii", "0,2,4")
    rows = list(csv.DictReader(io.StringIO(out, newline="")))
    assert [r["radius"] for r in rows] == ["0", "2", "4"]
    assert float(rows[2]["lower"]) == pytest.approx(3.183341422450595, abs=1e-6)


def test_output_file_and_determinism(capsys, gen_file, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert cli.run(["reconstruct", "--element", gen_file, "--m-list", "1,125,5038", "--radius", "4",
                        "--seed", "5", "--output", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr().out == ""


def test_every_subcommand_honors_format(capsys, gen_file, tmp_path):
    coeffs = tmp_path / "u.json"
    coeffs.write_text(json.dumps({"level": 1, "entries": [{"index": 1, "coeff": [2, 0]}, {"index": 2, "coeff": [1, 0]}]}))
    cases = [
        ["frame-table", "--max-n", "3"],
        ["reconstruct", "--element", gen_file, "--m-list", "125", "--radius", "2"],
        ["norm", "--element", gen_file, "--radius", "2"],
        ["params", "--k-max", "3"],
        ["lebesgue", "--max-K", "2"],
        ["basis-norm", "--coeffs", str(coeffs), "--radius", "2"],
        ["qt-check", "--element", gen_file, "--n-list", "125"],
        ["verify", "--criteria", "1,2"],
    ]
    for argv in cases:
        code, out, _ = run(capsys, *argv, "--format", "json")
        assert code == 0
        json.loads(out)
        code, out, _ = run(capsys, *argv, "--format", "csv")
        assert code == 0
        assert list(csv.reader(io.StringIO(out, newline="")))


def test_config_file_and_override(capsys, gen_file, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nradius = 2\nseed = 4\n")
    _, out, _ = run(capsys, "norm", "--element", gen_file, "--config", str(cfg))
    assert json.loads(out)["radius"] == 2 and json.loads(out)["seed"] == 4
    _, out, _ = run(capsys, "norm", "--element", gen_file, "--config", str(cfg), "--radius", "1")
    assert json.loads(out)["radius"] == 1
    cfg.write_text("colour=blue\n")
    assert run(capsys, "norm", "--element", gen_file, "--config", str(cfg))[0] == 1


def test_threads_resolution(monkeypatch):
    args = cli.build_parser().parse_args(["params"])
    monkeypatch.setenv("FREEFRAME_THREADS", "3")
    assert cli.resolve_config(args).threads == 3
    args = cli.build_parser().parse_args(["params", "--threads", "2"])
    assert cli.resolve_config(args).threads == 2
    monkeypatch.delenv("FREEFRAME_THREADS")
    args = cli.build_parser().parse_args(["params"])
    assert cli.resolve_config(args).threads >= 1


def test_exit_codes(capsys, gen_file, tmp_path):
    code, _, err = run(capsys, "norm", "--element", gen_file, "--no-such-flag")
    assert code == 1 and "usage" in err
    assert run(capsys, "no-such-command")[0] == 1
    assert run(capsys, "norm", "--element", str(tmp_path / "missing.json"))[0] == 1
    assert run(capsys, "norm", "--element", gen_file, "--tol", "0")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "norm", "--element", str(bad))[0] == 1
    assert run(capsys, "norm", "--element", gen_file, "--radius", "40")[0] == 2
    assert run(capsys, "frame-table", "--max-n", "-1")[0] == 1


def test_verify_failure_exit_code(capsys, monkeypatch):
    from freeframe import acceptance

    monkeypatch.setitem(acceptance.CRITERIA, 1, lambda seed, threads: acceptance.CriterionResult(1, "x", False, "forced"))
    code, out, _ = run(capsys, "verify", "--criteria", "1")
    assert code == 3 and out.startswith("FAIL [1]")


def test_csv_quoting(capsys):
    # the detail of criterion 8 contains commas, so it must be quoted
    _, out, _ = run(capsys, "verify", "--criteria", "8", "--format", "csv")
    assert '"' in out
    rows = list(csv.reader(io.StringIO(out, newline="")))
    assert len(rows) == 2 and len(rows[1]) == 4
    assert rows[1][0] == "8" and "offsets=[" in rows[1][3]
