"""Small dense Hermitian linear algebra.

Matrices are plain complex ``numpy`` arrays. :func:`eigh` delegates to LAPACK
through :func:`numpy.linalg.eigh`; :func:`jacobi_eigh` is a self-contained
cyclic Jacobi solver kept as an independent cross-check.
"""
from typing import NamedTuple

import numpy as np

from .errors import PositivityError, ValidationError

HERMITIAN_ATOL = 1e-9
PSD_FLOOR = -1e-10
INV_SQRT_FLOOR = 1e-12


class Spectrum(NamedTuple):
    """Eigenvalues (ascending) and matching orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def as_hermitian(H, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Return ``H`` as a complex square array, rejecting non-Hermitian input."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] < 1:
        raise ValidationError(f"expected a non-empty square matrix, got shape {H.shape}")
    asym = np.max(np.abs(H - H.conj().T))
    if asym > atol:
        raise ValidationError(f"matrix is not Hermitian (max asymmetry {asym:.3g})")
    return H


def hermitize(H: np.ndarray) -> np.ndarray:
    return 0.5 * (H + np.swapaxes(H, -1, -2).conj())


def eigh(H) -> Spectrum:
    H = as_hermitian(H)
    w, V = np.linalg.eigh(hermitize(H))
    return Spectrum(w, V)


def jacobi_eigh(H, tol: float = 1e-13, max_sweeps: int = 100) -> Spectrum:
    """Cyclic Jacobi eigensolver for complex Hermitian matrices.

    Each rotation removes the phase of the pivot ``H[p, q]`` and then applies a
    real Givens rotation. Iteration stops when the off-diagonal Frobenius norm
    drops below ``tol`` (relative to the full norm for non-trivial input) or
    after ``max_sweeps`` sweeps.
    """
    A = hermitize(as_hermitian(H)).copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(A), 1.0)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = A[p, q]
                g = abs(h)
                if g == 0.0:
                    continue
                phase = h / g
                a, b = A[p, p].real, A[q, q].real
                theta = 0.5 * np.arctan2(2.0 * g, a - b)
                c, s = np.cos(theta), np.sin(theta)
                # columns of the 2x2 unitary acting on (p, q)
                G = np.array([[c, -s], [s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.conj().T @ A[idx, :]
                V[:, idx] = V[:, idx] @ G
                A[p, q] = A[q, p] = 0.0
    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    return Spectrum(w[order], V[:, order])


def min_eigenvalue(H) -> float:
    return float(np.linalg.eigvalsh(hermitize(np.asarray(H, dtype=complex)))[0])


def is_psd(H, floor: float = PSD_FLOOR) -> bool:
    return min_eigenvalue(H) >= floor


def matrix_power(H, exponent: float, floor: float = INV_SQRT_FLOOR) -> np.ndarray:
    """Square root (``exponent=0.5``) or inverse square root (``-0.5``) of a PSD matrix.

    Accepts a single matrix or a stack of shape ``(..., d, d)``. Eigenvalues in
    ``[-1e-10, 0)`` are clamped to zero; for the inverse square root,
    eigenvalues below ``floor`` are lifted to ``floor``.
    """
    if exponent not in (0.5, -0.5):
        raise ValidationError(f"exponent must be 1/2 or -1/2, got {exponent}")
    H = np.asarray(H, dtype=complex)
    if H.ndim < 2 or H.shape[-1] != H.shape[-2]:
        raise ValidationError(f"expected square matrices, got shape {H.shape}")
    if np.max(np.abs(H - np.swapaxes(H, -1, -2).conj()), initial=0.0) > HERMITIAN_ATOL:
        raise ValidationError("matrix is not Hermitian")
    w, V = np.linalg.eigh(hermitize(H))
    lowest = w[..., 0].min()
    if lowest < PSD_FLOOR:
        raise PositivityError(f"matrix has eigenvalue {lowest:.3g} < {PSD_FLOOR}")
    w = np.clip(w, 0.0, None)
    if exponent < 0:
        w = np.maximum(w, floor)
    return hermitize((V * (w**exponent)[..., None, :]) @ np.swapaxes(V, -1, -2).conj())


def sqrtm_psd(H) -> np.ndarray:
    return matrix_power(H, 0.5)


def inv_sqrtm_psd(H, floor: float = INV_SQRT_FLOOR) -> np.ndarray:
    return matrix_power(H, -0.5, floor=floor)
