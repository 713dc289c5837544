# %% [markdown]
# # Spectral efficiency sweeps
#
# Desk-scale versions of the SNR and stream-count experiments: N_t = N_r = 16,
# K = 16, averaged over channel realizations. Increase the sizes to 64
# antennas and 512 subcarriers for the full-scale setting (slow).

# %%
from hbfkit.beamform import SystemConfig
from hbfkit.channel import ChannelParams
from hbfkit.evaluate import SweepSpec, run_sweep

N_REAL = 30
cfg = SystemConfig.from_snr_db(16, 16, 2, 2, 16, 5.0)
params = ChannelParams(n_subcarriers=16)

# %%
res = run_sweep(SweepSpec(cfg, "snr_db", (-10, -5, 0, 5, 10), N_REAL, params, master_seed=1), threads=0)
print(" SNR dB   hybrid     DBF")
for v, h, d in zip(res.values, res.mean_se["hybrid"], res.mean_se["dbf"]):
    print(f"{v:6.1f} {h:8.3f} {d:8.3f}")

# %%
res = run_sweep(SweepSpec(cfg, "n_streams", (1, 2, 3, 4), N_REAL, params, master_seed=1), threads=0)
print("   N_s   hybrid     DBF")
for v, h, d in zip(res.values, res.mean_se["hybrid"], res.mean_se["dbf"]):
    print(f"{v:6d} {h:8.3f} {d:8.3f}")
