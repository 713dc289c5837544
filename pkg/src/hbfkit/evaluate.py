"""Spectral-efficiency metric, Monte-Carlo sweeps and optimality oracles."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace, asdict

import numpy as np

from . import matkit
from .beamform import (
    HybridBeamformer,
    SystemConfig,
    design_digital_baseline,
    design_hybrid,
)
from .channel import ChannelParams, ChannelRealization, generate_channel, realization_rng
from .matkit import herm

__all__ = [
    "ALGORITHMS",
    "SweepSpec",
    "SweepResult",
    "spectral_efficiency",
    "subcarrier_rates",
    "analog_objective",
    "theorem1_value",
    "random_orthonormal",
    "theorem1_random_search_oracle",
    "run_realization",
    "run_sweep",
    "resolve_threads",
]

ALGORITHMS = ("hybrid", "dbf")
AXES = ("snr_db", "n_streams")


def subcarrier_rates(channels: ChannelRealization, bf: HybridBeamformer, cfg: SystemConfig) -> np.ndarray:
    """Rate of every subcarrier, ``log2|I + W^+ H F F^H H^H W / noise|``."""
    h = channels.per_subcarrier
    f = bf.precoders()
    w = bf.combiners()
    ns = f.shape[2]
    rates = np.empty(h.shape[0])
    for k in range(h.shape[0]):
        if not (np.all(np.isfinite(f[k])) and np.all(np.isfinite(w[k]))):
            raise FloatingPointError(f"non-finite beamformer at subcarrier {k}")
        hf = h[k] @ f[k]
        a = np.eye(ns) + matkit.pinv(w[k]) @ hf @ herm(hf) @ w[k] / cfg.noise_var
        if not np.all(np.isfinite(a)):
            raise FloatingPointError(f"non-finite SE matrix at subcarrier {k}")
        # similar to a Hermitian PD matrix, so the determinant is real positive
        sign, logabs = np.linalg.slogdet(a)
        if not np.isfinite(logabs) or sign.real <= 0:
            raise FloatingPointError(f"degenerate SE determinant at subcarrier {k}")
        rates[k] = logabs / np.log(2.0)
    return rates


def spectral_efficiency(channels: ChannelRealization, bf: HybridBeamformer, cfg: SystemConfig) -> float:
    """Average spectral efficiency over subcarriers, bits/s/Hz."""
    return float(np.mean(subcarrier_rates(channels, bf, cfg)))


def analog_objective(h_e: np.ndarray, v: np.ndarray, gamma_over_sigma2: float) -> float:
    """``log2|I + (gamma/noise) V^H H_e V|`` for orthonormal ``V``."""
    a = np.eye(v.shape[1]) + gamma_over_sigma2 * (herm(v) @ h_e @ v)
    return matkit.logdet_hermitian(0.5 * (a + herm(a)))


def theorem1_value(h_e: np.ndarray, n_rf: int, gamma_over_sigma2: float) -> float:
    """Closed-form optimum ``sum_{i<=N_RF} log2(1 + (gamma/noise) lambda_i(H_e))``."""
    lam = matkit.hermitian_eig(h_e, psd=True).values[:n_rf]
    return float(np.sum(np.log2(1.0 + gamma_over_sigma2 * lam)))


def random_orthonormal(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x m matrix with orthonormal columns."""
    g = (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)
    q, _ = matkit.qr_thin(g)
    return q


def theorem1_random_search_oracle(h_e, n_rf: int, gamma_over_sigma2: float, trials: int,
                                  rng: np.random.Generator, planted=()) -> float:
    """Best analog objective found over random orthonormal candidates.

    ``planted`` holds extra candidate matrices evaluated alongside the
    ``trials`` random draws.
    """
    h_e = matkit.check_hermitian(np.asarray(h_e))
    best = -np.inf
    for v in planted:
        best = max(best, analog_objective(h_e, np.asarray(v), gamma_over_sigma2))
    for _ in range(trials):
        v = random_orthonormal(h_e.shape[0], n_rf, rng)
        best = max(best, analog_objective(h_e, v, gamma_over_sigma2))
    return float(best)


@dataclass(frozen=True)
class SweepSpec:
    """Monte-Carlo sweep over SNR (dB) or stream count.

    For the ``n_streams`` axis every grid value ``v`` sets N_s = N_RF = v and
    the SNR of ``cfg`` is kept. For either axis the power budget is
    normalized to N_s and the noise variance to N_s / SNR.
    """

    cfg: SystemConfig
    axis: str
    grid: tuple
    n_realizations: int = 100
    channel_params: ChannelParams = field(default_factory=ChannelParams)
    master_seed: int = 0

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if len(self.grid) == 0:
            raise ValueError("sweep grid is empty")
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")
        if self.channel_params.n_subcarriers != self.cfg.n_subcarriers:
            object.__setattr__(
                self, "channel_params",
                replace(self.channel_params, n_subcarriers=self.cfg.n_subcarriers),
            )
        object.__setattr__(self, "grid", tuple(self.grid))
        # fail early on grid values the config cannot accept
        for v in self.grid:
            self.point_config(v)

    def point_config(self, value) -> SystemConfig:
        if self.axis == "snr_db":
            return self.cfg.with_snr_db(float(value))
        v = int(value)
        if v != value:
            raise ValueError(f"n_streams grid values must be integers, got {value!r}")
        return replace(self.cfg, n_rf=v, n_streams=v).with_snr_db(self.cfg.snr_db)


@dataclass
class SweepResult:
    axis: str
    values: tuple
    records: dict   # algorithm -> (n_points, n_realizations) array
    metadata: dict

    @property
    def mean_se(self) -> dict:
        return {alg: rec.mean(axis=1) for alg, rec in self.records.items()}


def run_realization(channel_params: ChannelParams, cfg: SystemConfig, master_seed: int, index: int):
    """SE of the hybrid design and the digital baseline on one channel draw."""
    rng = realization_rng(master_seed, index)
    channels = generate_channel(channel_params, cfg.n_rx, cfg.n_tx, rng)
    bf = design_hybrid(channels, cfg)
    dbf = design_digital_baseline(channels, cfg)
    return spectral_efficiency(channels, bf, cfg), dbf.spectral_efficiency


def resolve_threads(threads: int | None) -> int:
    """0 or None means one worker per CPU."""
    if not threads:
        return os.cpu_count() or 1
    if threads < 0:
        raise ValueError("threads must be >= 0")
    return threads


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Run every grid point over ``spec.n_realizations`` channel draws.

    Realization ``r`` always uses the substream ``(master_seed, r)``, so the
    same channels are reused at every grid point. Output is independent of
    ``threads``.
    """
    start = time.perf_counter()
    n_pts, n_real = len(spec.grid), spec.n_realizations
    records = {alg: np.zeros((n_pts, n_real)) for alg in ALGORITHMS}

    def task(i, value, r):
        cfg = spec.point_config(value)
        try:
            return run_realization(spec.channel_params, cfg, spec.master_seed, r)
        except Exception as exc:
            raise RuntimeError(
                f"realization {r} (seed ({spec.master_seed}, {r})) failed at "
                f"{spec.axis}={value}: {exc}"
            ) from exc

    jobs = [(i, v, r) for i, v in enumerate(spec.grid) for r in range(n_real)]
    workers = resolve_threads(threads)
    if workers == 1:
        outcomes = [task(*job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda job: task(*job), jobs))
    for (i, _, r), (se_h, se_d) in zip(jobs, outcomes):
        records["hybrid"][i, r] = se_h
        records["dbf"][i, r] = se_d

    metadata = {
        "axis": spec.axis,
        "grid": list(spec.grid),
        "n_realizations": n_real,
        "master_seed": spec.master_seed,
        "system_config": asdict(spec.cfg),
        "channel_params": asdict(spec.channel_params),
        "power_normalization": "P_b = N_s, noise_var = N_s / SNR",
        "wall_clock_s": time.perf_counter() - start,
    }
    return SweepResult(axis=spec.axis, values=spec.grid, records=records, metadata=metadata)
