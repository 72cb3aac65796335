import json

import pytest

from forestsplit.cli import main


@pytest.fixture
def k4_file(tmp_path):
    p = tmp_path / "k4.txt"
    p.write_text("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    return p


def test_analyze(k4_file, capsys):
    assert main(["analyze", str(k4_file), "--k", "1", "--d", "3"]) == 0
    out = capsys.readouterr().out
    assert "min beta: 1" in out and "(1,3)-sparse: yes" in out and "fractional arboricity: 2" in out


def test_analyze_json(capsys):
    assert main(["analyze", "named:petersen", "--k", "1", "--d", "4", "--json", "-"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert (data["fractional_arboricity"]["value_num"], data["fractional_arboricity"]["value_den"]) == (5, 3) and data["sparse"]


def test_decompose_then_verify(k4_file, tmp_path, capsys):
    out = tmp_path / "dec.json"
    assert main(["decompose", str(k4_file), "--k", "1", "--d", "3", "--json", str(out)]) == 0
    assert json.loads(out.read_text())["status"] == "decomposition"
    assert main(["verify", str(k4_file), str(out), "--k", "1", "--d", "3"]) == 0
    assert "pass" in capsys.readouterr().out
    assert main(["verify", str(k4_file), str(out), "--k", "1", "--d", "2"]) == 1


def test_decompose_witness_exit(capsys):
    assert main(["decompose", "named:k4", "--k", "1", "--d", "1", "--oracle-threshold", "0"]) == 3
    assert "status: dense" in capsys.readouterr().out


def test_oracle(capsys):
    assert main(["oracle", "named:cycle_5", "--k", "1", "--d", "1"]) == 0
    assert main(["oracle", "named:complete_4", "--k", "1", "--d", "2"]) == 1
    assert main(["oracle", "named:path_12", "--k", "1", "--d", "2"]) == 2


def test_generate(tmp_path, capsys):
    dest = tmp_path / "g.txt"
    assert main(["generate", "--n", "6", "--m", "8", "--k", "1", "--d", "3", "--seed", "2",
                 "--out", str(dest)]) == 0
    assert dest.read_text().startswith("# n=6")
    assert main(["analyze", str(dest), "--k", "1", "--d", "3"]) == 0


def test_stdin(monkeypatch, capsys):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO("0 1\n1 2\n"))
    assert main(["analyze", "-", "--k", "1", "--d", "1"]) == 0


@pytest.mark.parametrize("argv", [
    ["analyze", "named:nope", "--k", "1", "--d", "1"],
    ["analyze", "named:k4", "--k", "1", "--d", "9"],
    ["analyze", "/nonexistent/file", "--k", "1", "--d", "1"],
    ["decompose", "named:k4"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n2 2\n")
    assert main(["analyze", str(bad), "--k", "1", "--d", "1"]) == 2
    assert "line 2" in capsys.readouterr().err
