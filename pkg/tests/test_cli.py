import json

import pytest

from hbfkit import cli

SMOKE = """
mode = single_shot   # one channel draw
n_tx = 8
n_rx = 8
n_rf = 2
n_streams = 2
n_subcarriers = 4
snr_db = 0
seed = 1
"""

SWEEP = """
mode = sweep_snr
n_tx = 8
n_rx = 8
n_rf = 2
n_streams = 2
n_subcarriers = 4
grid = -10,0,10
realizations = 3
seed = 5
"""


def write(tmp_path, text, name="exp.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestParseConfig:
    def test_smoke(self):
        cfg = cli.parse_config(SMOKE)
        assert cfg.mode == "single_shot"
        assert cfg.system.n_tx == 8 and cfg.system.snr == pytest.approx(1.0)
        assert cfg.seed == 1

    def test_streams_exceed_rf(self):
        with pytest.raises(cli.ConfigError, match="N_s ≤ N_RF"):
            cli.parse_config(SMOKE.replace("n_streams = 2", "n_streams = 3"))

    def test_fig2_config(self):
        text = ("mode = sweep_snr\nn_tx = 64\nn_rx = 64\nn_rf = 4\nn_streams = 4\n"
                "n_subcarriers = 512\ngrid = -10,-5,0,5,10\nrealizations = 100\n")
        cfg = cli.parse_config(text)
        assert cfg.system.n_subcarriers == 512 and cfg.realizations == 100

    def test_unknown_key(self):
        with pytest.raises(cli.ConfigError, match="unknown key 'n_antennas'"):
            cli.parse_config(SMOKE + "n_antennas = 3\n")

    def test_missing_key(self):
        with pytest.raises(cli.ConfigError, match="missing required key 'snr_db'"):
            cli.parse_config(SMOKE.replace("snr_db = 0", ""))

    def test_type_mismatch(self):
        with pytest.raises(cli.ConfigError, match="n_tx"):
            cli.parse_config(SMOKE.replace("n_tx = 8", "n_tx = eight"))

    def test_bad_mode(self):
        with pytest.raises(cli.ConfigError, match="mode must be one of"):
            cli.parse_config(SMOKE.replace("single_shot", "fig9"))

    def test_overrides(self):
        cfg = cli.parse_config(SWEEP, {"seed": 9, "realizations": None})
        assert cfg.seed == 9 and cfg.realizations == 3

    def test_bad_stream_grid(self):
        text = SWEEP.replace("sweep_snr", "sweep_streams").replace("grid = -10,0,10", "grid = 1,2,9") + "snr_db = 5\n"
        with pytest.raises(cli.ConfigError):
            cli.parse_config(text)


def test_single_prints_both(tmp_path, capsys):
    assert cli.main(["single", "--config", str(write(tmp_path, SMOKE))]) == 0
    out = capsys.readouterr().out.split()
    assert out[0] == "hybrid_se" and out[2] == "dbf_se"
    assert float(out[1]) <= float(out[3])


def test_complexity_rows(tmp_path):
    assert cli.main(["complexity", "--Lmax", "31", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "complexity.csv").read_text().splitlines()
    assert lines[0] == "L,algorithm,flops,reduction_vs_lsaa"
    assert len(lines) == 1 + 31 * 3
    assert json.loads((tmp_path / "metadata.json").read_text())["config"]["l_max"] == 31


def test_complexity_stdout(capsys):
    assert cli.main(["complexity", "--Lmax", "2"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 7


def test_sweep_outputs(tmp_path, capsys):
    out = tmp_path / "run"
    assert cli.main(["sweep", "--config", str(write(tmp_path, SWEEP)), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["metadata.json", "records.csv", "summary.csv"]
    summary = (out / "summary.csv").read_text().splitlines()
    assert len(summary) == 1 + 3 * 2
    records = (out / "records.csv").read_text().splitlines()
    assert len(records) == 1 + 3 * 2 * 3
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["config"]["seed"] == 5
    assert meta["config"]["system_config"]["n_tx"] == 8
    assert "version" in meta


def test_sweep_byte_identical(tmp_path):
    cfg = write(tmp_path, SWEEP)
    for name, threads in (("a", "1"), ("b", "4")):
        assert cli.main(["sweep", "--config", str(cfg), "--out", str(tmp_path / name), "--threads", threads]) == 0
    for f in ("records.csv", "summary.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_seed_flag_changes_output(tmp_path):
    cfg = write(tmp_path, SWEEP)
    cli.main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "a")])
    cli.main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "b"), "--seed", "6"])
    assert (tmp_path / "a" / "records.csv").read_bytes() != (tmp_path / "b" / "records.csv").read_bytes()


def test_invalid_config_no_output(tmp_path, capsys):
    bad = write(tmp_path, SWEEP.replace("n_rf = 2", "n_rf = 1"))
    out = tmp_path / "run"
    assert cli.main(["sweep", "--config", str(bad), "--out", str(out)]) == 2
    assert "N_s ≤ N_RF" in capsys.readouterr().err
    assert not out.exists()


def test_mode_subcommand_mismatch(tmp_path, capsys):
    assert cli.main(["sweep", "--config", str(write(tmp_path, SMOKE))]) == 2
    assert "needs mode" in capsys.readouterr().err


def test_runtime_failure_leaves_nothing(tmp_path, monkeypatch, capsys):
    def boom(*a, **k):
        raise RuntimeError("realization 0 failed")

    monkeypatch.setattr(cli, "run_sweep", boom)
    out = tmp_path / "run"
    assert cli.main(["sweep", "--config", str(write(tmp_path, SWEEP)), "--out", str(out)]) == 1
    assert "realization 0 failed" in capsys.readouterr().err
    assert not out.exists()


def test_threads_env(monkeypatch):
    monkeypatch.setenv("HBFKIT_THREADS", "3")
    assert cli._threads(None) == 3
    assert cli._threads(2) == 2
    monkeypatch.setenv("HBFKIT_THREADS", "x")
    with pytest.raises(cli.ConfigError):
        cli._threads(None)


def test_dump_channel(tmp_path):
    out = tmp_path / "dumps"
    assert cli.main(["dump-channel", "--config", str(write(tmp_path, SMOKE)), "--out", str(out),
                     "--realizations", "2"]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["channel_0000.txt", "channel_0001.txt"]
    from hbfkit.artifacts import load_channel
    ch = load_channel((out / names[0]).read_text())
    assert ch.per_subcarrier.shape == (4, 8, 8)
