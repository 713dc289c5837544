"""Command-line entry point.

Configs are flat ``key = value`` text files; ``#`` starts a comment.

    hbfkit single        --config smoke.cfg
    hbfkit sweep         --config fig2.cfg --out results/fig2 --threads 0
    hbfkit complexity    --Lmax 31 --out results/complexity
    hbfkit dump-channel  --config smoke.cfg --out dumps --realizations 3
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, artifacts
from .beamform import SystemConfig, design_hybrid, design_digital_baseline
from .channel import ChannelParams, generate_channel, realization_rng
from .complexity import DEFAULT_N_ITER, complexity_table
from .evaluate import SweepResult, SweepSpec, resolve_threads, run_sweep, spectral_efficiency

MODES = ("sweep_snr", "sweep_streams", "complexity_scan", "single_shot")
SUBCOMMAND_MODES = {
    "sweep": ("sweep_snr", "sweep_streams"),
    "single": ("single_shot",),
    "complexity": ("complexity_scan",),
}

_INT, _FLOAT, _STR, _GRID = "int", "float", "str", "grid"
KEYS = {
    "mode": _STR,
    "n_tx": _INT, "n_rx": _INT, "n_rf": _INT, "n_streams": _INT, "n_subcarriers": _INT,
    "snr_db": _FLOAT,
    "grid": _GRID,
    "realizations": _INT,
    "seed": _INT,
    "n_clusters": _INT, "n_rays": _INT,
    "angular_spread_rx_deg": _FLOAT, "angular_spread_tx_deg": _FLOAT,
    "antenna_spacing": _FLOAT,
    "l_max": _INT, "n_iter": _INT,
    "out": _STR,
}
LINK_KEYS = ("n_tx", "n_rx", "n_rf", "n_streams", "n_subcarriers")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    mode: str
    system: SystemConfig | None = None
    channel: ChannelParams | None = None
    snr_db: float | None = None
    grid: tuple = ()
    realizations: int = 100
    seed: int = 0
    l_max: int = 31
    n_iter: int = DEFAULT_N_ITER
    out: str | None = None
    raw: dict = field(default_factory=dict)

    def resolved(self) -> dict:
        d = {"mode": self.mode, "snr_db": self.snr_db, "grid": list(self.grid),
             "realizations": self.realizations, "seed": self.seed,
             "l_max": self.l_max, "n_iter": self.n_iter, "out": self.out}
        if self.system is not None:
            d["system_config"] = asdict(self.system)
        if self.channel is not None:
            d["channel_params"] = asdict(self.channel)
        return d


def _convert(key, kind, text):
    try:
        if kind == _INT:
            return int(text)
        if kind == _FLOAT:
            return float(text)
        if kind == _GRID:
            vals = [float(t) for t in text.split(",") if t.strip()]
            if not vals:
                raise ValueError
            return tuple(vals)
        return text
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {text!r} as {kind}") from None


def parse_config(source: str, overrides: dict | None = None) -> ExperimentConfig:
    """Parse and validate a flat ``key = value`` config.

    ``overrides`` (already typed) replace parsed values before validation.
    """
    values = {}
    for lineno, line in enumerate(source.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, text = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _convert(key, KEYS[key], text)
    for key, val in (overrides or {}).items():
        if val is not None:
            values[key] = val
    return _validate(values)


def _require(values, keys, mode):
    for key in keys:
        if key not in values:
            raise ConfigError(f"missing required key {key!r} for mode {mode}")


def _validate(values: dict) -> ExperimentConfig:
    _require(values, ("mode",), "any")
    mode = values["mode"]
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}; got {mode!r}")
    cfg = ExperimentConfig(mode=mode, raw=dict(values))
    cfg.seed = values.get("seed", 0)
    if cfg.seed < 0:
        raise ConfigError("seed must be non-negative")
    cfg.realizations = values.get("realizations", 100)
    if cfg.realizations < 1:
        raise ConfigError("realizations must be >= 1")
    cfg.l_max = values.get("l_max", 31)
    cfg.n_iter = values.get("n_iter", DEFAULT_N_ITER)
    if cfg.l_max < 1 or cfg.n_iter < 1:
        raise ConfigError("l_max and n_iter must be >= 1")
    cfg.out = values.get("out")
    if mode == "complexity_scan":
        return cfg

    _require(values, LINK_KEYS, mode)
    if mode in ("single_shot", "sweep_streams"):
        _require(values, ("snr_db",), mode)
    if mode.startswith("sweep"):
        _require(values, ("grid",), mode)
        cfg.grid = values["grid"]
    snr_db = values.get("snr_db", 0.0)
    cfg.snr_db = values.get("snr_db")

    link = {k: values[k] for k in LINK_KEYS}
    if link["n_streams"] > link["n_rf"]:
        raise ConfigError(
            f"constraint N_s ≤ N_RF violated: n_streams={link['n_streams']} > n_rf={link['n_rf']}"
        )
    try:
        cfg.system = SystemConfig.from_snr_db(snr_db=snr_db, **link)
        cfg.channel = ChannelParams(
            n_clusters=values.get("n_clusters", 5),
            n_rays=values.get("n_rays", 10),
            angular_spread_rx=float(np.deg2rad(values.get("angular_spread_rx_deg", 10.0))),
            angular_spread_tx=float(np.deg2rad(values.get("angular_spread_tx_deg", 10.0))),
            antenna_spacing_over_wavelength=values.get("antenna_spacing", 0.5),
            n_subcarriers=link["n_subcarriers"],
        )
        if mode.startswith("sweep"):
            cfg_sweep = sweep_spec(cfg)
            cfg.grid = cfg_sweep.grid
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def sweep_spec(cfg: ExperimentConfig) -> SweepSpec:
    axis = "snr_db" if cfg.mode == "sweep_snr" else "n_streams"
    return SweepSpec(cfg=cfg.system, axis=axis, grid=cfg.grid,
                     n_realizations=cfg.realizations, channel_params=cfg.channel,
                     master_seed=cfg.seed)


def version_string() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent, capture_output=True, text=True, timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def _metadata(cfg: ExperimentConfig, extra: dict) -> dict:
    meta = {"version": version_string(), "config": cfg.resolved()}
    meta.update(extra)
    return meta


def _write_outputs(out_dir: Path, files: dict) -> None:
    # every file is fully rendered before the first write
    for name, text in files.items():
        artifacts.atomic_write(out_dir / name, text)


def _sweep_files(result: SweepResult, cfg: ExperimentConfig) -> dict:
    return {
        "records.csv": artifacts.records_csv(result),
        "summary.csv": artifacts.summary_csv(result),
        "metadata.json": artifacts.metadata_json(_metadata(cfg, {"sweep": result.metadata})),
    }


def cmd_sweep(cfg, out_dir, threads):
    result = run_sweep(sweep_spec(cfg), threads=threads)
    if out_dir is not None:
        _write_outputs(out_dir, _sweep_files(result, cfg))
    means = result.mean_se
    for i, v in enumerate(result.values):
        print(f"{result.axis}={artifacts.fmt(v)} hybrid={artifacts.fmt(means['hybrid'][i])} "
              f"dbf={artifacts.fmt(means['dbf'][i])}")


def cmd_single(cfg, out_dir, threads):
    sys_cfg = cfg.system
    channels = generate_channel(cfg.channel, sys_cfg.n_rx, sys_cfg.n_tx, realization_rng(cfg.seed, 0))
    se_h = spectral_efficiency(channels, design_hybrid(channels, sys_cfg), sys_cfg)
    se_d = design_digital_baseline(channels, sys_cfg).spectral_efficiency
    if out_dir is not None:
        result = SweepResult(
            axis="snr_db", values=(cfg.snr_db,),
            records={"hybrid": np.array([[se_h]]), "dbf": np.array([[se_d]])},
            metadata={"master_seed": cfg.seed, "n_realizations": 1},
        )
        _write_outputs(out_dir, _sweep_files(result, cfg))
    print(f"hybrid_se {artifacts.fmt(se_h)}")
    print(f"dbf_se {artifacts.fmt(se_d)}")


def cmd_complexity(cfg, out_dir, threads):
    rows = complexity_table(cfg.l_max, cfg.n_iter)
    text = artifacts.complexity_csv(rows)
    if out_dir is not None:
        meta = _metadata(cfg, {
            "note": "unit leading constants on every FLOP term; only orders of growth "
                    "are available, so reductions are approximate",
            "scaling": "N = 8L antennas (N_r = N_t), N_RF = N_s = L",
        })
        _write_outputs(out_dir, {"complexity.csv": text,
                                 "metadata.json": artifacts.metadata_json(meta)})
    else:
        sys.stdout.write(text)


def cmd_dump_channel(cfg, out_dir, threads):
    if out_dir is None:
        raise ConfigError("dump-channel needs an output directory (--out or 'out' key)")
    sys_cfg = cfg.system
    n = cfg.raw.get("realizations", 1)
    files = {}
    for r in range(n):
        channels = generate_channel(cfg.channel, sys_cfg.n_rx, sys_cfg.n_tx, realization_rng(cfg.seed, r))
        files[f"channel_{r:04d}.txt"] = artifacts.dump_channel(channels)
    _write_outputs(out_dir, files)
    print(f"wrote {n} channel dump(s) to {out_dir}")


COMMANDS = {
    "sweep": cmd_sweep,
    "single": cmd_single,
    "complexity": cmd_complexity,
    "dump-channel": cmd_dump_channel,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hbfkit", description="Hybrid beamforming simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, required=name != "complexity")
        p.add_argument("--out", type=Path)
        p.add_argument("--seed", type=int)
        p.add_argument("--realizations", type=int)
        p.add_argument("--threads", type=int)
        if name == "complexity":
            p.add_argument("--Lmax", dest="l_max", type=int)
            p.add_argument("--n-iter", dest="n_iter", type=int)
    return parser


def _threads(arg):
    if arg is not None:
        return resolve_threads(arg)
    env = os.environ.get("HBFKIT_THREADS")
    if env:
        try:
            return resolve_threads(int(env))
        except ValueError:
            raise ConfigError(f"HBFKIT_THREADS must be a non-negative integer, got {env!r}") from None
    return 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = {"seed": args.seed, "realizations": args.realizations}
        if args.command == "complexity":
            overrides.update(l_max=args.l_max, n_iter=args.n_iter)
        if args.config is not None:
            source = args.config.read_text()
        else:
            source = "mode = complexity_scan\n"
        cfg = parse_config(source, overrides)
        allowed = SUBCOMMAND_MODES.get(args.command)
        if allowed and cfg.mode not in allowed:
            raise ConfigError(f"subcommand {args.command!r} needs mode in {allowed}, config has {cfg.mode!r}")
        if args.command == "dump-channel" and cfg.system is None:
            raise ConfigError("dump-channel needs a link configuration")
        threads = _threads(args.threads)
        out = args.out if args.out is not None else (Path(cfg.out) if cfg.out else None)
    except (ConfigError, OSError) as exc:
        print(f"hbfkit: error: {exc}", file=sys.stderr)
        return 2
    try:
        COMMANDS[args.command](cfg, out, threads)
    except Exception as exc:  # noqa: BLE001 - surface any failure as an exit status
        print(f"hbfkit: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
