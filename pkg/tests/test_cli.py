import json

import numpy as np
import pytest

from mockq.cli import COMMANDS, main, parse_config
from mockq.errors import DomainError, IONotFoundError, UsageError
from mockq.io import read_csv, sha256_file, write_csv, write_json_atomic


def test_csv_roundtrip(tmp_path):
    rows = np.array([[1.0, 1 / 3], [2.5e-300, -7.0]])
    path = write_csv(tmp_path / "a.csv", ["x", "y"], rows)
    header, data = read_csv(path)
    assert header == ["x", "y"] and np.array_equal(data, rows)
    assert b"\r" not in path.read_bytes()
    with pytest.raises(DomainError):
        write_csv(tmp_path / "b.csv", ["x"], rows)
    with pytest.raises(DomainError):
        write_csv(tmp_path / "c.csv", ["z"], np.array([1j]))
    with pytest.raises(IONotFoundError):
        read_csv(tmp_path / "missing.csv", display="missing.csv")


def test_json_atomic(tmp_path):
    p = write_json_atomic(tmp_path / "m.json", {"b": 1, "a": [1, 2]})
    assert json.loads(p.read_text()) == {"a": [1, 2], "b": 1}
    assert list(tmp_path.iterdir()) == [p]


def test_defaults_and_precedence(tmp_path, monkeypatch):
    monkeypatch.delenv("MOCKQ_SEED", raising=False)
    cfg = parse_config(["spectrum"])
    assert cfg.seed == 0 and cfg.params["n"] == 512
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"a": 2.0, "levels": 3, "seed": 9}))
    cfg = parse_config(["spectrum", "--config", str(conf), "--a", "3"])
    assert cfg.params["a"] == 3.0 and cfg.params["levels"] == 3 and cfg.seed == 9
    monkeypatch.setenv("MOCKQ_SEED", "17")
    assert parse_config(["langevin"]).seed == 17
    assert parse_config(["langevin", "--seed", "4"]).seed == 4


@pytest.mark.parametrize("argv", [
    ["spectrum", "--a", "-1"],
    ["spectrum", "--n", "100"],
    ["lv"],
    ["bogus"],
    ["hydro", "residual", "--method", "euler"],
    ["langevin", "--seed", "-3"],
])
def test_usage_errors(argv):
    with pytest.raises(UsageError):
        parse_config(argv)


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"nope": 1}))
    with pytest.raises(UsageError, match="nope: unknown key"):
        parse_config(["spectrum", "--config", str(bad)])
    bad.write_text(json.dumps({"levels": "many"}))
    with pytest.raises(UsageError):
        parse_config(["spectrum", "--config", str(bad)])
    with pytest.raises(IONotFoundError):
        parse_config(["spectrum", "--config", str(tmp_path / "none.json")])


def test_every_command_has_a_parser():
    for name in COMMANDS:
        cfg = parse_config(name.split() + ["--out", "x"])
        assert cfg.command == name


def test_main_exit_codes(tmp_path, capsys):
    assert main(["spectrum", "--a", "-1", "--out", str(tmp_path)]) == 2
    assert capsys.readouterr().err.startswith("usage: ")
    assert main(["variety", "--input", str(tmp_path / "f.csv"), "--out", str(tmp_path)]) == 1
    assert capsys.readouterr().err.strip() == f"io_not_found: {tmp_path / 'f.csv'}"


def test_spectrum_run_writes_manifest(tmp_path):
    out = tmp_path / "s"
    assert main(["spectrum", "--levels", "4", "--n", "256", "--out", str(out)]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert set(man) >= {"config", "seed", "version", "git_describe", "wall_time_s", "outputs", "results"}
    assert man["outputs"]["spectrum.csv"] == sha256_file(out / "spectrum.csv")
    _, data = read_csv(out / "spectrum.csv")
    assert np.allclose(data[:, 1], 2 + np.arange(4) + 0.5, atol=1e-8)


def test_variety_commands(tmp_path):
    views = tmp_path / "views.csv"
    write_csv(views, ["id", "v1", "v2"], np.array([[0, 0.0, 0.0], [1, 3.0, 4.0]]))
    assert main(["variety", "--input", str(views), "--out", str(tmp_path / "v")]) == 0
    _, d = read_csv(tmp_path / "v" / "variety.csv")
    assert d[0, 0] == 25.0
    x = np.linspace(-20, 20, 1024, endpoint=False)
    dens = tmp_path / "rho.csv"
    write_csv(dens, ["x", "rho"], np.column_stack([x, np.exp(-x ** 2 / 2) / np.sqrt(2 * np.pi)]))
    assert main(["variety", "--input", str(dens), "--kind", "density", "--out", str(tmp_path / "d")]) == 0
    man = json.loads((tmp_path / "d" / "manifest.json").read_text())
    assert abs(man["results"]["continuum_variety"] - 1.0) < 1e-8
    assert str(dens) in man["inputs"]
