"""FLOP-count model for analog beamformer design.

Only the orders of growth are known for the three algorithms, so every
term is charged with a unit constant:

    proposed   N_RF N^2                       (partial eigendecomposition)
    lsaa       N_RF N^3 + N_RF^2 N^2 + N_RF^4
    lsaa_fast  N_iter N_RF N^2                (power iterations)

Reductions computed from these polynomials are therefore approximate.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["FlopModel", "ALGORITHMS", "DEFAULT_N_ITER", "flops", "scaled_model",
           "reduction_vs_lsaa", "complexity_table"]

ALGORITHMS = ("proposed", "lsaa", "lsaa_fast")
DEFAULT_N_ITER = 10
BASE_ANTENNAS = 8
BASE_RF = 1


@dataclass(frozen=True)
class FlopModel:
    algorithm: str
    n: int
    n_rf: int
    n_iter: int = DEFAULT_N_ITER

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if min(self.n, self.n_rf, self.n_iter) < 1:
            raise ValueError("n, n_rf and n_iter must be >= 1")


def flops(model: FlopModel) -> int:
    n, r = model.n, model.n_rf
    if model.algorithm == "proposed":
        return r * n**2
    if model.algorithm == "lsaa":
        return r * n**3 + r**2 * n**2 + r**4
    return model.n_iter * r * n**2


def scaled_model(algorithm: str, L: int, n_iter: int = DEFAULT_N_ITER) -> FlopModel:
    """Network scaled by L: N = 8L antennas, N_RF = N_s = L."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return FlopModel(algorithm, BASE_ANTENNAS * L, BASE_RF * L, n_iter)


def reduction_vs_lsaa(algorithm: str, L: int, n_iter: int = DEFAULT_N_ITER) -> float:
    """Fraction of the LSAA FLOP count saved at scale ``L``."""
    ref = flops(scaled_model("lsaa", L, n_iter))
    return 1.0 - flops(scaled_model(algorithm, L, n_iter)) / ref


def complexity_table(l_max: int, n_iter: int = DEFAULT_N_ITER):
    """Rows ``(L, algorithm, flops, reduction_vs_lsaa)`` for L = 1..l_max."""
    rows = []
    for L in range(1, l_max + 1):
        for alg in ALGORITHMS:
            rows.append((L, alg, flops(scaled_model(alg, L, n_iter)),
                         reduction_vs_lsaa(alg, L, n_iter)))
    return rows
