"""Dense complex-matrix kernels.

Everything here is a pure function of numpy arrays. Matrices are plain
``np.ndarray`` objects of complex (or real) dtype; no wrapper class is used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "EigResult",
    "HERMITIAN_TOL",
    "PSD_TOL",
    "FLOOR_REL",
    "herm",
    "check_finite",
    "check_hermitian",
    "hermitian_eig",
    "partial_top_eigvectors",
    "pinv",
    "logdet_hermitian",
    "inverse_sqrt_hermitian",
    "qr_thin",
    "waterfill",
    "canonical_phase",
]

#: max |A - A^H| allowed, relative to max(1, max|A|)
HERMITIAN_TOL = 1e-9
#: eigenvalues in [-PSD_TOL*scale, 0) are clamped to zero for PSD inputs
PSD_TOL = 1e-9
#: eigenvalue floor for the inverse square root, relative to lambda_max
FLOOR_REL = 1e-10


@dataclass(frozen=True)
class EigResult:
    """Eigenpairs of a Hermitian matrix, eigenvalues in descending order."""

    values: np.ndarray
    vectors: np.ndarray


def herm(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose of the last two axes."""
    return np.swapaxes(np.conj(a), -1, -2)


def check_finite(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def check_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = check_finite(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    asym = float(np.max(np.abs(a - herm(a)), initial=0.0))
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    if asym > tol * scale:
        raise ValueError(
            f"matrix is not Hermitian: max |A - A^H| = {asym:.3e} "
            f"exceeds {tol:.1e} x {scale:.3e}"
        )
    return a


def canonical_phase(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    v = np.array(vectors, dtype=np.result_type(vectors, np.complex128))
    if v.size == 0:
        return v
    idx = np.argmax(np.abs(v), axis=0)
    pivots = v[idx, np.arange(v.shape[1])]
    mags = np.abs(pivots)
    phase = np.where(mags > 0, pivots / np.where(mags > 0, mags, 1.0), 1.0)
    return v * np.conj(phase)[np.newaxis, :]


def _clamp_psd(values: np.ndarray) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    if values.size and values[-1] < -PSD_TOL * scale:
        raise ValueError(
            f"matrix is not positive semidefinite: smallest eigenvalue {values[-1]:.3e}"
        )
    return np.where(values < 0, 0.0, values)


def hermitian_eig(a: np.ndarray, psd: bool = False) -> EigResult:
    """Full eigendecomposition of a Hermitian matrix.

    Eigenvalues come back sorted in decreasing order and every eigenvector
    is phase-canonicalized (see :func:`canonical_phase`). With ``psd=True``
    slightly negative eigenvalues produced by round-off are clamped to 0.
    """
    a = check_hermitian(a)
    w, v = np.linalg.eigh(0.5 * (a + herm(a)))
    w = w[::-1].copy()
    v = v[:, ::-1]
    if psd:
        w = _clamp_psd(w)
    return EigResult(values=w, vectors=canonical_phase(v))


def partial_top_eigvectors(a: np.ndarray, m: int) -> np.ndarray:
    """Return the ``m`` leading eigenvectors of a Hermitian PSD matrix.

    Only the requested eigenpairs are computed (LAPACK ``*heevr`` with an
    index subset), so the cost scales with ``m`` rather than ``n``.
    """
    a = check_hermitian(a)
    n = a.shape[0]
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, {n}], got {m}")
    _, v = scipy.linalg.eigh(
        0.5 * (a + herm(a)), subset_by_index=[n - m, n - 1], driver="evr"
    )
    return canonical_phase(v[:, ::-1])


def pinv(a: np.ndarray, rel_tol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudo-inverse.

    Singular values below ``rel_tol * sigma_max`` are treated as zero. The
    default ``rel_tol`` is ``1e-12 * max(rows, cols)``.
    """
    a = check_finite(a)
    if rel_tol is None:
        rel_tol = 1e-12 * max(a.shape)
    return np.linalg.pinv(a, rcond=rel_tol)


def logdet_hermitian(a: np.ndarray) -> float:
    """Base-2 log-determinant of a Hermitian positive-definite matrix."""
    a = check_hermitian(a)
    w = np.linalg.eigvalsh(0.5 * (a + herm(a)))
    if w.size and w[0] <= 0:
        raise ValueError(
            f"matrix is not positive definite: smallest eigenvalue {w[0]:.3e}"
        )
    return float(np.sum(np.log2(w)))


def inverse_sqrt_hermitian(a: np.ndarray, floor_rel: float = FLOOR_REL) -> np.ndarray:
    """A^(-1/2) of a Hermitian PSD matrix.

    Eigenvalues below ``floor_rel * lambda_max`` are raised to that floor
    before inversion so near-singular inputs stay bounded.
    """
    a = check_hermitian(a)
    w, v = np.linalg.eigh(0.5 * (a + herm(a)))
    lam_max = float(np.max(w, initial=0.0))
    if lam_max <= 0:
        raise ValueError("inverse square root of a matrix with no positive eigenvalue")
    w = np.maximum(w, floor_rel * lam_max)
    return (v * (1.0 / np.sqrt(w))) @ herm(v)


def qr_thin(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Thin QR; R has a real non-negative diagonal."""
    q, r = np.linalg.qr(check_finite(a), mode="reduced")
    d = np.diagonal(r)
    mags = np.abs(d)
    phase = np.where(mags > 0, d / np.where(mags > 0, mags, 1.0), 1.0)
    return q * phase[np.newaxis, :], np.conj(phase)[:, np.newaxis] * r


def waterfill(gains, budget: float, noise: float) -> np.ndarray:
    """Water-filling power allocation over parallel Gaussian channels.

    Parameters
    ----------
    gains : array_like
        Channel power gains (e.g. squared singular values), non-negative.
    budget : float
        Total power to distribute.
    noise : float
        Noise variance.

    Returns
    -------
    np.ndarray
        Powers ``p_i = max(0, mu - noise / gains_i)`` summing to ``budget``,
        in the same order as ``gains``.
    """
    g = np.asarray(gains, dtype=float)
    if budget <= 0 or noise <= 0:
        raise ValueError("budget and noise must be positive")
    if g.ndim != 1 or np.any(g < 0) or not np.all(np.isfinite(g)):
        raise ValueError("gains must be a 1-D array of finite non-negative values")
    if not np.any(g > 0):
        raise ValueError("waterfill needs at least one positive gain")

    order = np.argsort(-g, kind="stable")
    gs = g[order]
    n_pos = int(np.count_nonzero(gs > 0))
    floors = noise / gs[:n_pos]

    # Largest active set whose water level stays above every active floor.
    mu = floors[0] + budget
    n_active = 1
    for n in range(n_pos, 0, -1):
        level = (budget + np.sum(floors[:n])) / n
        if level > floors[n - 1]:
            mu, n_active = level, n
            break

    p_sorted = np.zeros_like(gs)
    p_sorted[:n_active] = mu - floors[:n_active]
    # Remove the float drift so the sum matches the budget.
    p_sorted[:n_active] += (budget - np.sum(p_sorted)) / n_active
    p = np.empty_like(p_sorted)
    p[order] = p_sorted
    return p
