import runpy
from pathlib import Path

import pytest

from hbfkit import cli

ROOT = Path(__file__).resolve().parents[1]


@pytest.mark.parametrize("script", sorted((ROOT / "demos").glob("*.py")), ids=lambda p: p.name)
def test_demo_runs(script, capsys):
    runpy.run_path(str(script), run_name="__main__")
    assert capsys.readouterr().out


@pytest.mark.parametrize("cfg", sorted((ROOT / "configs").glob("*.cfg")), ids=lambda p: p.name)
def test_shipped_configs_parse(cfg):
    parsed = cli.parse_config(cfg.read_text())
    assert parsed.mode in cli.MODES
