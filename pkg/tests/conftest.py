import numpy as np
import pytest

from hbfkit.beamform import SystemConfig
from hbfkit.channel import ChannelParams, generate_channel, realization_rng


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_psd(rng, n, rank=None):
    g = crandn(rng, rank or n, n)
    return g.conj().T @ g


def make_instance(n_tx, n_rx, n_rf, n_s, K, snr_db=5.0, seed=0, **channel_kw):
    cfg = SystemConfig.from_snr_db(n_tx, n_rx, n_rf, n_s, K, snr_db)
    params = ChannelParams(n_subcarriers=K, **channel_kw)
    channels = generate_channel(params, n_rx, n_tx, realization_rng(seed, 0))
    return cfg, channels


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
