import csv
import io
import json

import pytest

from starsim.cli import EXIT_OK, EXIT_ORACLE, EXIT_PARSE, EXIT_USAGE, main


def run(tmp_path, *argv, fmt="csv"):
    code = main([*argv, "--out", str(tmp_path), "--format", fmt])
    return code


def rows(path):
    return list(csv.DictReader(io.StringIO(path.read_text())))


def test_rabi_csv_has_27_rows(tmp_path):
    assert run(tmp_path, "rabi", "--shots", "256", "--seed", "1") == EXIT_OK
    table = rows(tmp_path / "rabi.csv")
    assert len(table) == 27
    assert {r["mode"] for r in table} == {"bare", "encoded_raw", "encoded_postselected"}


def test_zero_noise_equals_ideal(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["rabi", "--shots", "300", "--seed", "9", "--ideal", "--out", str(a)]) == EXIT_OK
    assert main(["rabi", "--shots", "300", "--seed", "9", "--noise", "p1=0,p2=0,ro=0", "--out", str(b)]) == EXIT_OK
    assert (a / "rabi.csv").read_bytes() == (b / "rabi.csv").read_bytes()


def test_missing_seed_is_usage_error(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["rabi", "--out", str(tmp_path)])
    assert exc.value.code == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["adder", "--seed", "1"],
    ["adder", "--seed", "1", "--a", "1", "--b", "1", "--preset", "basis"],
    ["graph", "--seed", "1"],
    ["dett", "--seed", "1", "--g", "S"],
    ["rabi", "--seed", "1", "--shots", "0"],
    ["rabi", "--seed", "1", "--noise", "p9=0.1"],
])
def test_usage_errors(tmp_path, argv):
    assert main([*argv, "--out", str(tmp_path)]) == EXIT_USAGE


def test_adder_single_case(tmp_path):
    assert run(tmp_path, "adder", "--a", "1", "--b", "2", "--seed", "3", "--ideal", fmt="json") == EXIT_OK
    data = json.loads((tmp_path / "adder.json").read_text())
    (case,) = data["cases"]
    assert case["histogram"] == {"0111": 8192}
    assert data["seed"] == 3


def test_graph_preset_rows(tmp_path):
    assert run(tmp_path, "graph", "--preset", "star-orbit", "--seed", "2", "--ideal", "--shots", "512") == EXIT_OK
    table = rows(tmp_path / "graph.csv")
    assert len(table) == 15
    assert all(float(r["parity"]) == int(r["oracle"]) for r in table)


def test_graph_file_input(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("4\n1 2\n2 3\n3 4\n")
    assert run(tmp_path, "graph", "--graph", str(g), "--steps", "2", "--seed", "1", "--ideal", "--shots", "256") == EXIT_OK
    assert len(rows(tmp_path / "graph.csv")) == 8
    g.write_text("4\n1 9\n")
    assert run(tmp_path, "graph", "--graph", str(g), "--seed", "1") == EXIT_PARSE


def test_dett_outputs(tmp_path):
    assert run(tmp_path, "dett", "--g", "Tdg", "--invert", "frame_aware", "--seed", "4", "--ideal",
               "--shots", "1000", fmt="json") == EXIT_OK
    data = json.loads((tmp_path / "dett.json").read_text())
    assert data["config"]["bases"] == "ZXXZ"
    assert float(data["success"]) == 1.0
    assert run(tmp_path, "dett", "--seed", "4", "--shots", "100") == EXIT_OK
    table = rows(tmp_path / "dett.csv")
    assert sum(int(r["count"]) for r in table) == 100


def test_route_ok_and_parse_error(tmp_path, capsys):
    src = tmp_path / "c.txt"
    src.write_text("QUBITS 5\nH 1\nCNOT 1 2\nCNOT 2 4\nT 5\nCNOT 5 1\n")
    assert main(["route", str(src), "--out", str(tmp_path)]) == EXIT_OK
    verdict = json.loads((tmp_path / "c.verdict.json").read_text())
    assert verdict["equivalent"] and verdict["device_legal"]
    assert (tmp_path / "c.routed.txt").exists() and (tmp_path / "c.permutation.json").exists()
    src.write_text("QUBITS 5\nH 1\nFOO 2\n")
    assert main(["route", str(src), "--out", str(tmp_path)]) == EXIT_PARSE
    assert "c.txt:3" in capsys.readouterr().err
    assert main(["route", str(tmp_path / "missing.txt")]) == EXIT_PARSE
    assert EXIT_ORACLE == 3


@pytest.mark.parametrize("cmd", [["rabi"], ["adder", "--preset", "all"], ["graph", "--preset", "loop-orbit"],
                                 ["dett", "--invert", "static_t"]])
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_same_seed_same_bytes(tmp_path, cmd, fmt):
    a, b = tmp_path / "a", tmp_path / "b"
    argv = [*cmd, "--seed", "11", "--shots", "200", "--format", fmt]
    assert main([*argv, "--out", str(a)]) == EXIT_OK
    assert main([*argv, "--out", str(b)]) == EXIT_OK
    (fa,) = a.iterdir()
    assert fa.read_bytes() == (b / fa.name).read_bytes()


def test_out_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("STARSIM_OUT", str(tmp_path / "env"))
    assert main(["dett", "--seed", "1", "--shots", "50"]) == EXIT_OK
    assert (tmp_path / "env" / "dett.csv").exists()
