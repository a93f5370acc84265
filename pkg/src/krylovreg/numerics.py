"""Dense linear-algebra kernel used by every other module.

Everything here is a pure function of its inputs; matrices are plain
float64 ndarrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


class NumericalError(RuntimeError):
    """An iterative kernel (SVD, QR) failed to converge."""


@dataclass(frozen=True)
class SvdTriplet:
    """Thin SVD ``A = U @ diag(sigma) @ V.T`` with sigma in descending order."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray

    @property
    def rank_hint(self) -> int:
        return self.sigma.size


def as_matrix(A, name: str = "A") -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array, got ndim={A.ndim}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains non-finite entries")
    return A


def as_vector(b, name: str = "b") -> np.ndarray:
    b = np.asarray(b, dtype=float).ravel()
    if not np.all(np.isfinite(b)):
        raise ValueError(f"{name} contains non-finite entries")
    return b


def svd(A) -> SvdTriplet:
    """Thin SVD of A with all min(m, n) singular values."""
    A = as_matrix(A)
    try:
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError:
        # gesdd can fail on pathological input; gesvd is slower but sturdier
        try:
            U, s, Vt = scipy.linalg.svd(A, full_matrices=False, lapack_driver="gesvd")
        except scipy.linalg.LinAlgError as exc:
            raise NumericalError(f"SVD did not converge for {A.shape} matrix: {exc}") from exc
    return SvdTriplet(U=U, sigma=s, V=Vt.T)


def spectral_norm(A) -> float:
    """Largest singular value of A."""
    A = as_matrix(A)
    if min(A.shape) == 0:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[0])


def min_norm_lstsq(A, b, rank_tol: float | None = None) -> np.ndarray:
    """Minimum-norm least-squares solution via the pseudo-inverse.

    Singular values below ``rank_tol * sigma[0]`` are treated as zero;
    the default rank_tol is 1e-14, the double-precision noise floor.
    """
    A = as_matrix(A)
    b = as_vector(b)
    if A.shape[0] != b.size:
        raise ValueError(f"shape mismatch: A is {A.shape}, b has length {b.size}")
    if rank_tol is None:
        rank_tol = 1e-14
    if rank_tol < 0:
        raise ValueError("rank_tol must be nonnegative")
    t = svd(A)
    if t.sigma.size == 0 or t.sigma[0] == 0.0:
        return np.zeros(A.shape[1])
    keep = t.sigma > rank_tol * t.sigma[0]
    coeff = np.where(keep, (t.U.T @ b), 0.0)
    coeff = np.divide(coeff, t.sigma, out=np.zeros_like(coeff), where=keep)
    return t.V @ coeff


def principal_angle_sines(X, Y) -> np.ndarray:
    """Sines of the canonical angles between span(X) and span(Y), nondecreasing.

    X and Y must have orthonormal columns and equal column counts. The largest
    returned sine equals the spectral norm of (X_perp)^T Y.
    """
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    if X.shape != Y.shape:
        raise ValueError(f"X and Y must have identical shapes, got {X.shape} vs {Y.shape}")
    for M, nm in ((X, "X"), (Y, "Y")):
        dev = np.linalg.norm(M.T @ M - np.eye(M.shape[1]), 2)
        if dev > 1e-8:
            raise ValueError(f"{nm} is not orthonormal (deviation {dev:.2e})")
    # singular values of (I - X X^T) Y are exactly the sines; this form is
    # accurate for small angles, unlike sqrt(1 - cos^2)
    R = Y - X @ (X.T @ Y)
    s = np.linalg.svd(R, compute_uv=False)
    return np.clip(np.sort(s), 0.0, 1.0)


def thin_qr(V) -> np.ndarray:
    """Orthonormal basis of span(V) with the same column count.

    Raises if V is numerically rank deficient, reporting the first dependent
    column.
    """
    V = as_matrix(V, "V")
    Q, R = np.linalg.qr(V)
    d = np.abs(np.diag(R))
    if d.size:
        tol = max(V.shape) * np.finfo(float).eps * d.max()
        bad = np.nonzero(d <= tol)[0]
        if bad.size:
            raise NumericalError(
                f"rank-deficient input: column {int(bad[0])} is dependent on earlier columns"
            )
    return Q
