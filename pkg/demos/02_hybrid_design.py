# %% [markdown]
# # Closed-form hybrid beamformer on one channel
#
# Design the analog precoder from the leading eigenvectors of the averaged
# Gram matrix, then the per-subcarrier digital stages, and compare against
# fully digital water-filling.

# %%
import numpy as np

from hbfkit import matkit
from hbfkit.beamform import SystemConfig, design_analog_precoder, design_digital_baseline, design_hybrid
from hbfkit.channel import ChannelParams, generate_channel, realization_rng
from hbfkit.evaluate import spectral_efficiency, theorem1_random_search_oracle, theorem1_value

cfg = SystemConfig.from_snr_db(n_tx=32, n_rx=32, n_rf=4, n_streams=4, n_subcarriers=32, snr_db=5.0)
channels = generate_channel(ChannelParams(n_subcarriers=cfg.n_subcarriers), cfg.n_rx, cfg.n_tx, realization_rng(1, 0))

# %%
bf = design_hybrid(channels, cfg)
bf.check(cfg)
print("F_RF entry moduli:", np.unique(np.round(np.abs(bf.f_rf), 12)), " 1/sqrt(N_t) =", 1 / np.sqrt(cfg.n_tx))
print("per-subcarrier power:", np.round(np.sum(np.abs(bf.precoders()) ** 2, axis=(1, 2))[:4], 12), "...")

# %%
se_h = spectral_efficiency(channels, bf, cfg)
se_d = design_digital_baseline(channels, cfg).spectral_efficiency
print(f"hybrid SE {se_h:.3f} bits/s/Hz, fully digital SE {se_d:.3f} bits/s/Hz")

# %% [markdown]
# Before the unit-modulus projection the eigenvector solution is optimal for
# the analog sub-problem. Random orthonormal candidates never beat it.

# %%
_, h_e = design_analog_precoder(channels, cfg)
g = cfg.gamma / cfg.noise_var
best_random = theorem1_random_search_oracle(h_e, cfg.n_rf, g, 2000, np.random.default_rng(0))
print(f"closed form {theorem1_value(h_e, cfg.n_rf, g):.4f} vs best of 2000 random {best_random:.4f}")

# %%
lam = matkit.hermitian_eig(h_e, psd=True).values
print("leading eigenvalues of H_e:", np.round(lam[:6], 1))
