"""Haar unitaries and a cyclic Jacobi eigen solver for Hermitian matrices."""

import logging
from typing import Tuple

import numpy as np
import scipy.linalg

from src.config import JACOBI_TOL

logger = logging.getLogger(__name__)

MAX_SWEEPS = 100


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x n unitary: QR of a complex Gaussian with phase correction."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = scipy.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigh(matrix: np.ndarray, tol: float = JACOBI_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Args:
        matrix: Hermitian matrix
        tol: Stop once the off-diagonal Frobenius norm is below tol * max(|A|_F, 1)

    Returns:
        (eigenvalues, eigenvectors) with A = V diag(w) V^H, unsorted
    """
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    vecs = np.eye(n, dtype=complex)
    if n < 2:
        return np.real(np.diag(a)).copy(), vecs
    if not np.all(np.isfinite(a)):
        logger.warning("Jacobi input has non-finite entries")
        return np.full(n, np.nan), vecs
    threshold = tol * max(float(np.linalg.norm(a)), 1.0)
    # below this no rotation is needed for the off-norm to meet the threshold
    pivot_floor = threshold / n

    for sweep in range(MAX_SWEEPS):
        if _off_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                magnitude = abs(apq)
                if magnitude <= pivot_floor:
                    continue
                phase = apq / magnitude
                theta = 0.5 * np.arctan2(2.0 * magnitude, np.real(a[p, p] - a[q, q]))
                c, s = np.cos(theta), np.sin(theta)
                u2 = np.array([[c, -s], [np.conj(phase) * s, np.conj(phase) * c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u2
                a[idx, :] = u2.conj().T @ a[idx, :]
                vecs[:, idx] = vecs[:, idx] @ u2
                a[p, q] = 0.0
                a[q, p] = 0.0
    else:
        logger.warning(f"Jacobi iteration stopped after {MAX_SWEEPS} sweeps (off-norm {_off_norm(a):.3e})")

    return np.real(np.diag(a)).copy(), vecs


def hermitian_spectrum(matrix: np.ndarray, tol: float = JACOBI_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, weakly decreasing."""
    values, _ = jacobi_eigh(matrix, tol=tol)
    return np.sort(values)[::-1]
