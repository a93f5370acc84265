"""Lanczos bidiagonalization and the Arnoldi process.

The bidiagonalization starts from p1 = b/||b|| and produces orthonormal
P_(k+1), Q_k with A Q_k = P_(k+1) B_k, where B_k is lower bidiagonal with
diagonal alpha_1..alpha_k and subdiagonal beta_2..beta_(k+1). Full
reorthogonalization (two-pass modified Gram-Schmidt) is the default, matching
exact arithmetic closely; 'none' gives the classical cheap recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import as_matrix, as_vector


@dataclass
class Bidiagonalization:
    P: np.ndarray            # m x (steps+1)
    Q: np.ndarray            # n x steps
    alpha: np.ndarray        # alpha_1..alpha_steps
    beta: np.ndarray         # beta_2..beta_(steps+1)
    steps: int
    terminated_early: bool = False
    termination_step: int | None = None


@dataclass
class ArnoldiFactorization:
    W: np.ndarray            # n x (steps+1)
    H: np.ndarray            # (steps+1) x steps upper Hessenberg
    steps: int
    terminated_early: bool = False
    termination_step: int | None = None


def _mgs_orthogonalize(v: np.ndarray, basis: np.ndarray, ncols: int) -> np.ndarray:
    # two passes of modified Gram-Schmidt against the stored columns
    for _ in range(2):
        for j in range(ncols):
            q = basis[:, j]
            v -= (q @ v) * q
    return v


def lanczos_bidiag(A, b, k: int, reorth: str = "full") -> Bidiagonalization:
    """k-step Lanczos bidiagonalization of A started from b.

    Stops early (with the flag set) when an alpha or beta falls below
    1e-14 times the running estimate of ||A||.
    """
    A = as_matrix(A)
    b = as_vector(b)
    m, n = A.shape
    if b.size != m:
        raise ValueError(f"b has length {b.size}, expected {m}")
    nb = np.linalg.norm(b)
    if nb == 0:
        raise ValueError("b must be nonzero")
    if not 1 <= k <= min(m, n):
        raise ValueError(f"k must be in [1, {min(m, n)}], got {k}")
    if reorth not in ("full", "none"):
        raise ValueError("reorth must be 'full' or 'none'")

    P = np.zeros((m, k + 1))
    Q = np.zeros((n, k))
    alpha = np.zeros(k)
    beta = np.zeros(k)
    P[:, 0] = b / nb

    norm_est = 0.0
    steps = 0
    terminated = False
    for j in range(k):
        r = A.T @ P[:, j]
        if j > 0:
            r -= beta[j - 1] * Q[:, j - 1]
        if reorth == "full":
            r = _mgs_orthogonalize(r, Q, j)
        a = np.linalg.norm(r)
        norm_est = max(norm_est, a)
        if a <= 1e-14 * norm_est:
            terminated = True
            break
        alpha[j] = a
        Q[:, j] = r / a

        z = A @ Q[:, j] - a * P[:, j]
        if reorth == "full":
            z = _mgs_orthogonalize(z, P, j + 1)
        bb = np.linalg.norm(z)
        norm_est = max(norm_est, bb)
        steps = j + 1
        if bb <= 1e-14 * norm_est:
            terminated = True
            beta[j] = 0.0
            break
        beta[j] = bb
        P[:, j + 1] = z / bb

    if terminated:
        kk = steps
        return Bidiagonalization(
            P=P[:, : kk + 1], Q=Q[:, :kk], alpha=alpha[:kk], beta=beta[:kk],
            steps=kk, terminated_early=True, termination_step=kk,
        )
    return Bidiagonalization(P=P, Q=Q, alpha=alpha, beta=beta, steps=k)


def bidiag_matrix(f: Bidiagonalization, k: int) -> np.ndarray:
    """The (k+1) x k lower-bidiagonal B_k."""
    if not 1 <= k <= f.steps:
        raise ValueError(f"k must be in [1, {f.steps}], got {k}")
    B = np.zeros((k + 1, k))
    B[np.arange(k), np.arange(k)] = f.alpha[:k]
    B[np.arange(1, k + 1), np.arange(k)] = f.beta[:k]
    return B


def lower_bidiag_square(f: Bidiagonalization, k: int) -> np.ndarray:
    """The k x k matrix of the first k rows of B_k (diag alpha, subdiag beta)."""
    if not 1 <= k <= f.steps:
        raise ValueError(f"k must be in [1, {f.steps}], got {k}")
    B = np.zeros((k, k))
    B[np.arange(k), np.arange(k)] = f.alpha[:k]
    if k > 1:
        B[np.arange(1, k), np.arange(k - 1)] = f.beta[: k - 1]
    return B


def arnoldi(A, b, k: int, reorth: str = "full") -> ArnoldiFactorization:
    """k-step Arnoldi factorization A W_k = W_(k+1) Hbar_k starting at b/||b||."""
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError("arnoldi requires a square matrix")
    b = as_vector(b)
    n = A.shape[0]
    if b.size != n:
        raise ValueError(f"b has length {b.size}, expected {n}")
    nb = np.linalg.norm(b)
    if nb == 0:
        raise ValueError("b must be nonzero")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")

    W = np.zeros((n, k + 1))
    H = np.zeros((k + 1, k))
    W[:, 0] = b / nb
    norm_est = 0.0
    steps = 0
    terminated = False
    for j in range(k):
        w = A @ W[:, j]
        for i in range(j + 1):
            H[i, j] = W[:, i] @ w
            w -= H[i, j] * W[:, i]
        if reorth == "full":
            for i in range(j + 1):
                c = W[:, i] @ w
                H[i, j] += c
                w -= c * W[:, i]
        h = np.linalg.norm(w)
        norm_est = max(norm_est, np.abs(H[: j + 1, j]).max(initial=0.0), h)
        steps = j + 1
        if h <= 1e-14 * norm_est:
            terminated = True
            break
        H[j + 1, j] = h
        W[:, j + 1] = w / h

    if terminated:
        kk = steps
        return ArnoldiFactorization(
            W=W[:, : kk + 1], H=H[: kk + 1, :kk], steps=kk,
            terminated_early=True, termination_step=kk,
        )
    return ArnoldiFactorization(W=W, H=H, steps=k)
