"""Closed-form hybrid precoder/combiner design and the fully-digital baseline.

The analog precoder is the unit-modulus projection of the leading
eigenvectors of the subcarrier-averaged Gram matrix
``H_e = mean_k H_k^H H_k``; the analog combiner is built the same way from
``T_e = mean_k H_k F_k F_k^H H_k^H``. Digital stages are per subcarrier:
an SVD-based precoder with equal per-stream power and an MMSE combiner.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from . import matkit
from .channel import ChannelRealization
from .matkit import herm

__all__ = [
    "SystemConfig",
    "HybridBeamformer",
    "DigitalBeamformer",
    "project_unit_modulus",
    "design_analog_precoder",
    "design_digital_precoder",
    "design_analog_combiner",
    "design_digital_combiner",
    "design_hybrid",
    "design_digital_baseline",
]


@dataclass(frozen=True)
class SystemConfig:
    """Link dimensions and power parameters.

    ``power_budget`` is the per-subcarrier transmit power P_b and
    ``noise_var`` the noise variance; their ratio is the SNR.
    """

    n_tx: int
    n_rx: int
    n_rf: int
    n_streams: int
    n_subcarriers: int
    power_budget: float = 1.0
    noise_var: float = 1.0

    def __post_init__(self):
        for name in ("n_tx", "n_rx", "n_rf", "n_streams", "n_subcarriers"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.n_streams > self.n_rf:
            raise ValueError(f"N_s <= N_RF violated: N_s={self.n_streams}, N_RF={self.n_rf}")
        if self.n_rf > min(self.n_tx, self.n_rx):
            raise ValueError(
                f"N_RF <= min(N_t, N_r) violated: N_RF={self.n_rf}, "
                f"N_t={self.n_tx}, N_r={self.n_rx}"
            )
        if not self.power_budget > 0:
            raise ValueError("power_budget must be > 0")
        if not self.noise_var > 0:
            raise ValueError("noise_var must be > 0")

    @property
    def snr(self) -> float:
        return self.power_budget / self.noise_var

    @property
    def snr_db(self) -> float:
        return 10.0 * np.log10(self.snr)

    @property
    def gamma(self) -> float:
        """Equal per-stream power P_b / N_s."""
        return self.power_budget / self.n_streams

    @classmethod
    def from_snr_db(cls, n_tx, n_rx, n_rf, n_streams, n_subcarriers, snr_db):
        """Build a config with P_b = N_s and noise variance N_s / SNR."""
        snr = 10.0 ** (snr_db / 10.0)
        return cls(n_tx, n_rx, n_rf, n_streams, n_subcarriers,
                   power_budget=float(n_streams), noise_var=n_streams / snr)

    def with_snr_db(self, snr_db: float) -> "SystemConfig":
        snr = 10.0 ** (snr_db / 10.0)
        return replace(self, power_budget=float(self.n_streams), noise_var=self.n_streams / snr)


@dataclass(frozen=True)
class HybridBeamformer:
    f_rf: np.ndarray  # (Nt, N_RF)
    f_bb: np.ndarray  # (K, N_RF, Ns)
    w_rf: np.ndarray  # (Nr, N_RF)
    w_bb: np.ndarray  # (K, N_RF, Ns)

    def precoders(self) -> np.ndarray:
        """Effective per-subcarrier precoders F_RF F_BB[k], shape (K, Nt, Ns)."""
        return self.f_rf @ self.f_bb

    def combiners(self) -> np.ndarray:
        """Effective per-subcarrier combiners W_RF W_BB[k], shape (K, Nr, Ns)."""
        return self.w_rf @ self.w_bb

    def check(self, cfg: SystemConfig, tol: float = 1e-9) -> None:
        """Raise ``AssertionError`` if a hardware or power constraint is violated."""
        if not np.allclose(np.abs(self.f_rf), 1 / np.sqrt(cfg.n_tx), rtol=0, atol=1e-15):
            raise AssertionError("F_RF violates the unit-modulus constraint")
        if not np.allclose(np.abs(self.w_rf), 1 / np.sqrt(cfg.n_rx), rtol=0, atol=1e-15):
            raise AssertionError("W_RF violates the unit-modulus constraint")
        power = np.sum(np.abs(self.precoders()) ** 2, axis=(1, 2))
        if np.max(np.abs(power - cfg.power_budget)) > tol * max(1.0, cfg.power_budget):
            raise AssertionError(f"precoder power {power} differs from P_b={cfg.power_budget}")


@dataclass(frozen=True)
class DigitalBeamformer:
    f: np.ndarray       # (K, Nt, Ns)
    w: np.ndarray       # (K, Nr, Ns)
    powers: np.ndarray  # (K, Ns)
    se_per_subcarrier: np.ndarray  # (K,)

    @property
    def spectral_efficiency(self) -> float:
        return float(np.mean(self.se_per_subcarrier))


def project_unit_modulus(a: np.ndarray, n: int | None = None) -> np.ndarray:
    """Keep only the phase of each entry and scale to modulus ``1/sqrt(n)``.

    ``n`` defaults to the row count. Zero entries get phase 0.
    """
    a = np.asarray(a)
    if n is None:
        n = a.shape[0]
    return np.exp(1j * np.angle(a)) / np.sqrt(n)


def _check_dims(channels: ChannelRealization, cfg: SystemConfig) -> np.ndarray:
    h = channels.per_subcarrier
    expected = (cfg.n_subcarriers, cfg.n_rx, cfg.n_tx)
    if h.shape != expected:
        raise ValueError(f"channel shape {h.shape} does not match config {expected}")
    return h


def _average_gram(mats: np.ndarray) -> np.ndarray:
    # fixed-order reduction over subcarriers; result symmetrized
    acc = np.zeros((mats.shape[2], mats.shape[2]), dtype=np.complex128)
    for m in mats:
        acc += herm(m) @ m
    acc /= mats.shape[0]
    return 0.5 * (acc + herm(acc))


def design_analog_precoder(channels: ChannelRealization, cfg: SystemConfig):
    """Return ``(F_RF, H_e)``."""
    h = _check_dims(channels, cfg)
    h_e = _average_gram(h)
    v_rf = matkit.partial_top_eigvectors(h_e, cfg.n_rf)
    return project_unit_modulus(v_rf, cfg.n_tx), h_e


def design_digital_precoder(channels: ChannelRealization, f_rf: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    """Per-subcarrier baseband precoders, stacked as (K, N_RF, Ns).

    ``F_BB[k] = (F_RF^H F_RF)^(-1/2) V_k sqrt(gamma)`` where ``V_k`` holds the
    leading right singular vectors of ``H_k F_RF (F_RF^H F_RF)^(-1/2)``.
    """
    h = _check_dims(channels, cfg)
    m = matkit.inverse_sqrt_hermitian(herm(f_rf) @ f_rf)
    fm = f_rf @ m
    q = h @ fm
    _, _, vh = np.linalg.svd(q, full_matrices=False)
    v = herm(vh[:, : cfg.n_streams, :])
    f_bb = np.sqrt(cfg.gamma) * (m @ v)

    # exact when F_RF has full column rank; repairs the floored case
    power = np.sum(np.abs(f_rf @ f_bb) ** 2, axis=(1, 2))
    scale = np.where(power > 0, np.sqrt(cfg.power_budget / np.where(power > 0, power, 1.0)), 1.0)
    return f_bb * scale[:, None, None]


def design_analog_combiner(channels: ChannelRealization, f_rf, f_bb, cfg: SystemConfig):
    """Return ``(W_RF, T_e)``."""
    h = _check_dims(channels, cfg)
    g = h @ (f_rf @ f_bb)  # H_k F_k, (K, Nr, Ns)
    t_e = _average_gram(herm(g))
    u_rf = matkit.partial_top_eigvectors(t_e, cfg.n_rf)
    return project_unit_modulus(u_rf, cfg.n_rx), t_e


def design_digital_combiner(channels: ChannelRealization, f_rf, f_bb, w_rf, cfg: SystemConfig) -> np.ndarray:
    """MMSE baseband combiners ``(J J^H + noise W_RF^H W_RF)^(-1) J``, (K, N_RF, Ns)."""
    h = _check_dims(channels, cfg)
    j = herm(w_rf) @ h @ (f_rf @ f_bb)
    gram = cfg.noise_var * (herm(w_rf) @ w_rf)
    out = np.empty_like(j)
    for k in range(j.shape[0]):
        a = j[k] @ herm(j[k]) + gram
        try:
            out[k] = scipy.linalg.solve(a, j[k], assume_a="pos")
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
            raise np.linalg.LinAlgError(f"MMSE system singular at subcarrier {k}") from exc
    return out


def design_hybrid(channels: ChannelRealization, cfg: SystemConfig) -> HybridBeamformer:
    """Run the full closed-form design: analog then digital precoder, then the
    analog and MMSE digital combiners."""
    f_rf, _ = design_analog_precoder(channels, cfg)
    f_bb = design_digital_precoder(channels, f_rf, cfg)
    w_rf, _ = design_analog_combiner(channels, f_rf, f_bb, cfg)
    w_bb = design_digital_combiner(channels, f_rf, f_bb, w_rf, cfg)
    return HybridBeamformer(f_rf=f_rf, f_bb=f_bb, w_rf=w_rf, w_bb=w_bb)


def design_digital_baseline(channels: ChannelRealization, cfg: SystemConfig) -> DigitalBeamformer:
    """Fully-digital SVD beamforming with per-subcarrier water-filling."""
    h = _check_dims(channels, cfg)
    ns = cfg.n_streams
    u, s, vh = np.linalg.svd(h, full_matrices=False)
    K = h.shape[0]
    powers = np.zeros((K, ns))
    for k in range(K):
        gains = s[k, :ns] ** 2
        if np.any(gains > 0):
            powers[k] = matkit.waterfill(gains, cfg.power_budget, cfg.noise_var)
    f = herm(vh[:, :ns, :]) * np.sqrt(powers)[:, None, :]
    w = u[:, :, :ns]
    se = np.sum(np.log2(1.0 + powers * s[:, :ns] ** 2 / cfg.noise_var), axis=1)
    return DigitalBeamformer(f=f, w=w, powers=powers, se_per_subcarrier=se)
