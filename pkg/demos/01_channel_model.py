# %% [markdown]
# # Clustered mmWave channel
#
# Draw a few realizations of the frequency-selective channel and look at
# what the cluster structure does: the per-subcarrier power is
# N_r * N_t on average, the rank is bounded by the number of paths, and a
# single cluster gives a frequency-flat channel.

# %%
import numpy as np

from hbfkit.channel import ChannelParams, generate_channel, realization_rng

params = ChannelParams(n_clusters=5, n_rays=10, n_subcarriers=8)
n_rx = n_tx = 16

# %%
power = []
for r in range(200):
    h = generate_channel(params, n_rx, n_tx, realization_rng(0, r)).per_subcarrier
    power.append(np.sum(np.abs(h) ** 2, axis=(1, 2)))
power = np.mean(power, axis=0)
print("mean ||H_k||_F^2 per subcarrier:", np.round(power, 1), " target:", n_rx * n_tx)

# %% [markdown]
# Rays of one cluster arrive within a few degrees of each other, so the
# singular values of H_k fall off quickly after the first few.

# %%
h = generate_channel(params, n_rx, n_tx, realization_rng(0, 0)).per_subcarrier
s = np.linalg.svd(h[0], compute_uv=False)
print("normalized singular values of H_1:", np.round(s / s[0], 3)[:8])

# %%
flat = generate_channel(ChannelParams(n_clusters=1, n_subcarriers=8), n_rx, n_tx, realization_rng(0, 0))
spread = max(np.linalg.norm(flat[k] - flat[0]) for k in range(8))
print("single cluster, max_k ||H_k - H_1||_F =", spread)
