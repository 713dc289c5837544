"""Clustered Saleh-Valenzuela channel for mmWave MIMO-OFDM with ULAs.

Each realization consists of ``n_clusters`` clusters of ``n_rays`` rays. A
cluster ``c`` acts as a single tap with delay ``c`` samples, which gives the
frequency-domain channel

    H_k = sqrt(Nr*Nt / (Ncl*Nray)) * sum_c sum_l alpha_cl a_r(aoa_cl) a_t(aod_cl)^H
          * exp(-2j*pi*c*k / K),     k = 0..K-1
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ChannelParams",
    "PathSet",
    "ChannelRealization",
    "steering_vector",
    "steering_matrix",
    "realization_rng",
    "sample_paths",
    "realize_channel",
    "generate_channel",
]


@dataclass(frozen=True)
class ChannelParams:
    """Cluster/ray statistics of the channel.

    Angular spreads are in radians and denote the standard deviation of the
    per-ray Laplacian deviation around the cluster mean.
    """

    n_clusters: int = 5
    n_rays: int = 10
    angular_spread_rx: float = np.deg2rad(10.0)
    angular_spread_tx: float = np.deg2rad(10.0)
    antenna_spacing_over_wavelength: float = 0.5
    n_subcarriers: int = 1

    def __post_init__(self):
        if self.n_clusters < 1 or self.n_rays < 1:
            raise ValueError("n_clusters and n_rays must be >= 1")
        if self.n_subcarriers < 1:
            raise ValueError("n_subcarriers must be >= 1")
        if self.angular_spread_rx < 0 or self.angular_spread_tx < 0:
            raise ValueError("angular spreads must be >= 0")
        if not self.antenna_spacing_over_wavelength > 0:
            raise ValueError("antenna_spacing_over_wavelength must be > 0")

    @property
    def n_paths(self) -> int:
        return self.n_clusters * self.n_rays


@dataclass(frozen=True)
class PathSet:
    """Path gains and angles, flattened cluster-major (cluster c, ray l)."""

    gains: np.ndarray
    aoa: np.ndarray
    aod: np.ndarray
    cluster_aoa: np.ndarray
    cluster_aod: np.ndarray

    def __post_init__(self):
        n = len(self.gains)
        if len(self.aoa) != n or len(self.aod) != n:
            raise ValueError("gains, aoa and aod must have equal length")
        if len(self.cluster_aoa) != len(self.cluster_aod):
            raise ValueError("cluster mean angle arrays must have equal length")
        if len(self.cluster_aoa) == 0 or n % len(self.cluster_aoa):
            raise ValueError("path count must be a multiple of the cluster count")


@dataclass(frozen=True)
class ChannelRealization:
    """Per-subcarrier channel matrices, stacked as an array of shape (K, Nr, Nt)."""

    per_subcarrier: np.ndarray

    def __post_init__(self):
        h = self.per_subcarrier
        if h.ndim != 3:
            raise ValueError(f"expected a (K, Nr, Nt) array, got shape {h.shape}")
        if not np.all(np.isfinite(h)):
            raise ValueError("channel contains non-finite entries")

    @property
    def n_subcarriers(self) -> int:
        return self.per_subcarrier.shape[0]

    @property
    def n_rx(self) -> int:
        return self.per_subcarrier.shape[1]

    @property
    def n_tx(self) -> int:
        return self.per_subcarrier.shape[2]

    def __len__(self):
        return self.n_subcarriers

    def __getitem__(self, k):
        return self.per_subcarrier[k]

    def __iter__(self):
        return iter(self.per_subcarrier)


def steering_vector(theta: float, n: int, spacing_over_wavelength: float = 0.5) -> np.ndarray:
    """ULA response ``(1/sqrt(n)) * exp(-2j*pi*d/lambda*m*sin(theta))``, m = 0..n-1."""
    if n < 1:
        raise ValueError("array size must be >= 1")
    m = np.arange(n)
    return np.exp(-2j * np.pi * spacing_over_wavelength * m * np.sin(theta)) / np.sqrt(n)


def steering_matrix(thetas, n: int, spacing_over_wavelength: float = 0.5) -> np.ndarray:
    """Stack steering vectors column-wise, shape (n, len(thetas))."""
    if n < 1:
        raise ValueError("array size must be >= 1")
    thetas = np.asarray(thetas, dtype=float)
    m = np.arange(n)[:, np.newaxis]
    return np.exp(-2j * np.pi * spacing_over_wavelength * m * np.sin(thetas)) / np.sqrt(n)


def realization_rng(master_seed: int, index: int) -> np.random.Generator:
    """Independent Philox stream for realization ``index`` of a run."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([master_seed, index])))


def _laplacian(rng: np.random.Generator, scale: float, size) -> np.ndarray:
    # inverse CDF of Laplace(0, scale)
    u = rng.random(size) - 0.5
    u = np.clip(u, -0.5 + np.finfo(float).eps, 0.5 - np.finfo(float).eps)
    return -scale * np.sign(u) * np.log1p(-2.0 * np.abs(u))


def sample_paths(params: ChannelParams, rng: np.random.Generator) -> PathSet:
    """Draw cluster means, ray angles and complex gains for one realization."""
    ncl, nray = params.n_clusters, params.n_rays
    two_pi = 2.0 * np.pi
    cluster_aoa = rng.uniform(0.0, two_pi, ncl)
    cluster_aod = rng.uniform(0.0, two_pi, ncl)
    gains = (rng.standard_normal(ncl * nray) + 1j * rng.standard_normal(ncl * nray)) / np.sqrt(2)

    dev_rx = _laplacian(rng, params.angular_spread_rx / np.sqrt(2), (ncl, nray))
    dev_tx = _laplacian(rng, params.angular_spread_tx / np.sqrt(2), (ncl, nray))
    aoa = np.mod(cluster_aoa[:, None] + dev_rx, two_pi).ravel()
    aod = np.mod(cluster_aod[:, None] + dev_tx, two_pi).ravel()
    return PathSet(gains=gains, aoa=aoa, aod=aod, cluster_aoa=cluster_aoa, cluster_aod=cluster_aod)


def realize_channel(params: ChannelParams, paths: PathSet, n_rx: int, n_tx: int) -> ChannelRealization:
    """Assemble {H_k} from a path set."""
    if n_rx < 1 or n_tx < 1:
        raise ValueError("antenna counts must be >= 1")
    ncl, nray = params.n_clusters, params.n_rays
    if len(paths.gains) != ncl * nray or len(paths.cluster_aoa) != ncl:
        raise ValueError(
            f"path set has {len(paths.gains)} paths in {len(paths.cluster_aoa)} clusters, "
            f"params expect {ncl} x {nray}"
        )
    d = params.antenna_spacing_over_wavelength
    a_r = steering_matrix(paths.aoa, n_rx, d).reshape(n_rx, ncl, nray)
    a_t = steering_matrix(paths.aod, n_tx, d).reshape(n_tx, ncl, nray)
    alpha = paths.gains.reshape(ncl, nray)

    # per-cluster spatial matrix, shape (Ncl, Nr, Nt)
    clusters = np.einsum("rcl,cl,tcl->crt", a_r, alpha, np.conj(a_t))
    K = params.n_subcarriers
    delay_phase = np.exp(-2j * np.pi * np.outer(np.arange(K), np.arange(ncl)) / K)
    scale = np.sqrt(n_rx * n_tx / (ncl * nray))
    h = scale * np.tensordot(delay_phase, clusters, axes=(1, 0))
    return ChannelRealization(per_subcarrier=h)


def generate_channel(params: ChannelParams, n_rx: int, n_tx: int, rng: np.random.Generator) -> ChannelRealization:
    return realize_channel(params, sample_paths(params, rng), n_rx, n_tx)
