# %% [markdown]
# # FLOP model of analog beamformer design
#
# The network is scaled by L: N = 8L antennas at each end and N_RF = N_s = L.
# Every term of the three growth polynomials is charged with a unit
# constant, so the reductions are indicative only.

# %%
from hbfkit.complexity import complexity_table, reduction_vs_lsaa

for L in (1, 5, 9, 17, 31):
    print(f"L={L:2d}  proposed saves {100 * reduction_vs_lsaa('proposed', L):6.2f}%"
          f"  lsaa_fast saves {100 * reduction_vs_lsaa('lsaa_fast', L):6.2f}%  (vs lsaa)")

# %%
rows = complexity_table(4)
for L, alg, fl, red in rows:
    print(f"{L},{alg},{fl},{red:.4f}")
