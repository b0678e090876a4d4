import json
import math

import numpy as np
import pytest

from zetamoments.cli import (
    ConfigError,
    CsvTable,
    RunConfig,
    emit_csv,
    main,
    read_config_file,
    resolve_config,
    run_experiment,
)
from zetamoments.series import LineSeries, TGrid, read_line_csv


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_constants_k2(tmp_path, capsys):
    code, out, _ = run_cli(["constants", "--k", "2", "--out", str(tmp_path)], capsys)
    assert code == 0
    summary = json.loads(out)
    assert summary["results"]["a_k_g_k"] == pytest.approx(1 / (2 * math.pi**2), rel=1e-6)
    on_disk = json.loads((tmp_path / "summary.json").read_text())
    assert on_disk["config"]["k"] == 2
    assert len(on_disk["input_hash"]) == 64


def test_fourier(tmp_path, capsys):
    args = ["fourier", "--k", "1", "--sigma", "0.75", "--T", "2000", "--n", "1,2,3",
            "--h", "0.02", "--out", str(tmp_path)]
    code, out, _ = run_cli(args, capsys)
    assert code == 0
    recs = json.loads(out)["results"]["coefficients"]
    assert [r["n"] for r in recs] == [1, 2, 3]
    for r in recs:
        assert abs(r["value_re"] - r["predicted"]) < 0.05
    rows = (tmp_path / "fourier.csv").read_text().splitlines()
    assert rows[0] == "n,lambda,re,im,predicted,error_proxy" and len(rows) == 4


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\nexperiment = besicovitch\nsigma = 0.8\nN = 5,10\nT = 500\n")
    c = resolve_config(["--config", str(cfg), "--sigma", "0.7"])
    assert c.experiment == "besicovitch" and c.sigma == 0.7 and c.N == [5, 10]
    assert c.resolved_h() == pytest.approx(0.05 / math.log(10))


@pytest.mark.parametrize(
    "args",
    [
        ["nope"],
        ["moments", "--k", "0"],
        ["moments", "--sigma", "1.5"],
        ["moments", "--T", "0.5"],
        ["moments", "--k", "two"],
        ["phase", "--T", "100"],  # no zero table
        ["identity", "--N", "1"],
        ["moments", "--unknown", "3"],
    ],
)
def test_bad_config_exits_nonzero(args, capsys):
    code, _, err = run_cli(args, capsys)
    assert code != 0
    assert "error" in json.loads(err.strip().splitlines()[-1])


def test_help_exits_zero(capsys):
    code, out, err = run_cli(["--help"], capsys)
    assert code == 0
    assert "experiment" in out
    assert "error" not in err


def test_bad_config_file(tmp_path):
    p = tmp_path / "x.cfg"
    p.write_text("k 3\n")
    with pytest.raises(ConfigError):
        read_config_file(p)
    p.write_text("colour = red\n")
    with pytest.raises(ConfigError):
        read_config_file(p)


def test_missing_zero_file(tmp_path, capsys):
    code, _, err = run_cli(["mass", "--T", "100", "--zeros", str(tmp_path / "none.txt"),
                            "--out", str(tmp_path / "o")], capsys)
    assert code == 2


def test_rerun_bit_identical(tmp_path):
    base = dict(experiment="phase", sigma=0.75, T=300.0, h=0.02, N=[10, 30], zeros="bundled")
    s1 = run_experiment(RunConfig(out=str(tmp_path / "a"), **base))
    s2 = run_experiment(RunConfig(out=str(tmp_path / "b"), threads=2, **base))
    assert s1["results"] == s2["results"]
    assert s1["input_hash"] == s2["input_hash"]
    assert (tmp_path / "a" / "phase.csv").read_bytes() == (tmp_path / "b" / "phase.csv").read_bytes()


@pytest.mark.parametrize("exp", ["moments", "besicovitch", "zero-one", "identity", "mass"])
def test_each_experiment_runs(exp, tmp_path):
    cfg = RunConfig(experiment=exp, sigma=0.8, T=200.0, h=0.02, N=[5], zeros="bundled",
                    out=str(tmp_path), bins=8, save_series=True)
    s = run_experiment(cfg)
    assert s["experiment"] == exp and (tmp_path / "summary.json").exists()
    for name in s["files"]:
        assert (tmp_path / name).exists()


def test_emit_csv_shapes(tmp_path):
    emit_csv(CsvTable(("a", "b"), []), tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_text() == "a,b\n"
    g = TGrid(0.75, 1.0, 1.5, 1.0)
    one = LineSeries(g, np.array([0.1 + 1 / 3j]))
    emit_csv(one, tmp_path / "one.csv")
    assert len((tmp_path / "one.csv").read_text().splitlines()) == 2
    t, back = read_line_csv(tmp_path / "one.csv")
    assert np.array_equal(back, one.samples)
    with pytest.raises(TypeError):
        emit_csv(object(), tmp_path / "x.csv")
