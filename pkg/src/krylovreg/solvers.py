"""Regularization solvers.

Iterative: LSQR, CGLS, LSMR, CGME on top of Lanczos bidiagonalization, and
GMRES/RRGMRES on top of the Arnoldi process. Direct: truncated SVD and
standard-form Tikhonov families. The hybrid LSQR applies inner TSVD
truncation to each projected problem.

LSQR is computed from the explicit projected least-squares problem on B_k
rather than the classical short recurrence; full reorthogonalization is
already paid for, and the projected form is the analytical object the
diagnostics study. CGLS provides the recurrence form for cross-validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bidiag import ArnoldiFactorization, Bidiagonalization, arnoldi, bidiag_matrix, lanczos_bidiag
from .numerics import SvdTriplet, as_matrix, as_vector
from .problems import IllPosedProblem, NoisyInstance

SOLVER_NAMES = (
    "lsqr", "cgls", "lsmr", "cgme", "tsvd", "tikhonov", "hybrid_lsqr", "gmres", "rrgmres",
)


@dataclass
class SolverTrace:
    solver: str
    k: np.ndarray
    residual_norm: np.ndarray
    normal_residual_norm: np.ndarray
    solution_norm: np.ndarray
    rel_error: np.ndarray | None = None
    inner_truncation: np.ndarray | None = None
    iterates: np.ndarray | None = None          # (steps, n) when stored
    params: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.k.size)


def _unpack(instance) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    """Accepts a NoisyInstance or a bare (noise-free) IllPosedProblem."""
    if isinstance(instance, NoisyInstance):
        return instance.problem.A, instance.b, instance.problem.x_true
    if isinstance(instance, IllPosedProblem):
        return instance.A, instance.b_exact, instance.x_true
    raise TypeError(f"expected NoisyInstance or IllPosedProblem, got {type(instance)!r}")


def _make_trace(solver, A, b, x_true, xs, inner=None, params=None) -> SolverTrace:
    xs = np.asarray(xs)
    res = np.array([np.linalg.norm(b - A @ x) for x in xs])
    atr = np.array([np.linalg.norm(A.T @ (b - A @ x)) for x in xs])
    sol = np.array([np.linalg.norm(x) for x in xs])
    rel = None
    if x_true is not None:
        nt = np.linalg.norm(x_true)
        rel = np.array([np.linalg.norm(x - x_true) / nt for x in xs])
    return SolverTrace(
        solver=solver,
        k=np.arange(1, xs.shape[0] + 1),
        residual_norm=res,
        normal_residual_norm=atr,
        solution_norm=sol,
        rel_error=rel,
        inner_truncation=None if inner is None else np.asarray(inner),
        iterates=xs,
        params=params or {},
    )


def _strip_iterates(trace: SolverTrace, store: bool) -> SolverTrace:
    if not store:
        trace.iterates = None
    return trace


def projected_tsvd_solve(B: np.ndarray, rhs: np.ndarray, j: int) -> np.ndarray:
    """TSVD solution of min ||B y - rhs|| keeping the j largest singular triplets.

    With j equal to the full column count this is the pseudo-inverse solve,
    i.e. the plain LSQR step; the hybrid inner truncation uses j < k.
    """
    Ub, th, Vbt = np.linalg.svd(B, full_matrices=False)
    c = Ub.T @ rhs
    j = int(j)
    return Vbt[:j].T @ (c[:j] / th[:j])


def lsqr(instance, maxit: int, store_iterates: bool = False) -> SolverTrace:
    """LSQR iterates x_k = Q_k B_k^+ P_(k+1)^T b for k = 1..maxit.

    The residual norm decreases and the solution norm grows monotonically;
    the run stops early on bidiagonal termination.
    """
    A, b, x_true = _unpack(instance)
    if maxit > min(A.shape):
        raise ValueError(f"maxit must be at most {min(A.shape)}")
    f = lanczos_bidiag(A, b, maxit, reorth="full")
    nb = np.linalg.norm(b)
    xs = []
    for k in range(1, f.steps + 1):
        B = bidiag_matrix(f, k)
        rhs = np.zeros(k + 1)
        rhs[0] = nb
        y = projected_tsvd_solve(B, rhs, k)
        xs.append(f.Q[:, :k] @ y)
    return _strip_iterates(_make_trace("lsqr", A, b, x_true, xs), store_iterates)


def cgls(instance, maxit: int, store_iterates: bool = False) -> SolverTrace:
    """Conjugate gradients on the normal equations A^T A x = A^T b from x0 = 0."""
    A, b, x_true = _unpack(instance)
    x = np.zeros(A.shape[1])
    r = b.copy()
    s = A.T @ r
    p = s.copy()
    gamma = float(s @ s)
    xs = []
    for _ in range(maxit):
        if gamma == 0.0:
            break
        q = A @ p
        qq = float(q @ q)
        if qq == 0.0:
            break
        step = gamma / qq
        x = x + step * p
        r = r - step * q
        s = A.T @ r
        gamma_new = float(s @ s)
        p = s + (gamma_new / gamma) * p
        gamma = gamma_new
        xs.append(x.copy())
    return _strip_iterates(_make_trace("cgls", A, b, x_true, xs), store_iterates)


def lsmr(instance, maxit: int, store_iterates: bool = False) -> SolverTrace:
    """LSMR iterates, the minimum-norm solutions of the rank-k normal-equation
    model: x_k = Q_k (Q_(k+1)^T A^T A Q_k)^+ Q_(k+1)^T A^T b.

    ||A^T (b - A x_k)|| decreases monotonically.
    """
    A, b, x_true = _unpack(instance)
    lim = min(A.shape)
    if maxit > lim:
        raise ValueError(f"maxit must be at most {lim}")
    # one extra step supplies alpha_(k+1), beta_(k+1) for the projected matrix
    f = lanczos_bidiag(A, b, min(maxit + 1, lim), reorth="full")
    nb = np.linalg.norm(b)
    kmax = f.steps if f.terminated_early else f.steps - 1
    kmax = min(kmax, maxit)
    xs = []
    for k in range(1, kmax + 1):
        B = bidiag_matrix(f, k)
        M = np.vstack([B.T @ B, np.zeros((1, k))])
        if k < f.steps:
            # coupling row alpha_(k+1) * beta_(k+1) e_k^T
            M[k, k - 1] = f.alpha[k] * f.beta[k - 1]
        rhs = np.zeros(k + 1)
        rhs[0] = f.alpha[0] * nb
        y, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        xs.append(f.Q[:, :k] @ y)
    return _strip_iterates(_make_trace("lsmr", A, b, x_true, xs), store_iterates)


def cgme(instance, maxit: int, store_iterates: bool = False) -> SolverTrace:
    """CGME iterates x_k = Q_k Bbar_(k-1)^{-1} P_k^T b via the square lower
    bidiagonal solve; the error to the naive solution decreases monotonically."""
    A, b, x_true = _unpack(instance)
    if maxit > min(A.shape):
        raise ValueError(f"maxit must be at most {min(A.shape)}")
    f = lanczos_bidiag(A, b, maxit, reorth="full")
    nb = np.linalg.norm(b)
    xs = []
    truncated = False
    for k in range(1, f.steps + 1):
        # forward substitution on the k x k bidiagonal (diag alpha, subdiag beta)
        y = np.zeros(k)
        y[0] = nb / f.alpha[0]
        for j in range(1, k):
            y[j] = -f.beta[j - 1] * y[j - 1] / f.alpha[j]
        if not np.all(np.isfinite(y)):
            truncated = True
            break
        xs.append(f.Q[:, :k] @ y)
    trace = _make_trace("cgme", A, b, x_true, xs, params={"truncated": truncated})
    return _strip_iterates(trace, store_iterates)


def tsvd_family(instance, triplet: SvdTriplet, kmax: int, store_iterates: bool = False) -> SolverTrace:
    """TSVD solutions x_k = sum_(i<=k) (u_i^T b / sigma_i) v_i for k = 1..kmax."""
    A, b, x_true = _unpack(instance)
    kmax = min(kmax, triplet.sigma.size)
    coeff = (triplet.U.T @ b)[:kmax] / triplet.sigma[:kmax]
    xs = np.cumsum(triplet.V[:, :kmax] * coeff, axis=1).T
    return _strip_iterates(_make_trace("tsvd", A, b, x_true, xs), store_iterates)


def tikhonov_family(instance, triplet: SvdTriplet, lambdas, store_iterates: bool = False) -> SolverTrace:
    """Tikhonov solutions with filters sigma_i^2 / (sigma_i^2 + lambda^2)."""
    A, b, x_true = _unpack(instance)
    lambdas = np.asarray(lambdas, dtype=float).ravel()
    if np.any(lambdas <= 0):
        raise ValueError("all lambdas must be positive")
    base = (triplet.U.T @ b) / triplet.sigma
    xs = []
    for lam in lambdas:
        fi = triplet.sigma**2 / (triplet.sigma**2 + lam**2)
        xs.append(triplet.V @ (fi * base))
    trace = _make_trace("tikhonov", A, b, x_true, xs, params={"lambdas": lambdas.tolist()})
    return _strip_iterates(trace, store_iterates)


def _inner_lcurve_index(res_norms: np.ndarray, sol_norms: np.ndarray) -> int | None:
    from .paramchoice import lcurve_corner

    try:
        return lcurve_corner(res_norms, sol_norms).corner_index
    except ValueError:
        return None


def hybrid_lsqr(instance, maxit: int, inner_rule="lcurve", store_iterates: bool = False) -> SolverTrace:
    """LSQR with inner TSVD regularization of every projected problem.

    inner_rule is 'lcurve', 'oracle' (smallest true error, for calibration)
    or an integer fixed truncation. Inner truncation j = k reproduces the
    plain LSQR iterate exactly.
    """
    A, b, x_true = _unpack(instance)
    if maxit > min(A.shape):
        raise ValueError(f"maxit must be at most {min(A.shape)}")
    if inner_rule == "oracle" and x_true is None:
        raise ValueError("oracle inner rule needs a known true solution")
    f = lanczos_bidiag(A, b, maxit, reorth="full")
    nb = np.linalg.norm(b)
    xs, inner = [], []
    for k in range(1, f.steps + 1):
        B = bidiag_matrix(f, k)
        rhs = np.zeros(k + 1)
        rhs[0] = nb
        ys = [projected_tsvd_solve(B, rhs, j) for j in range(1, k + 1)]
        if isinstance(inner_rule, int):
            j = min(inner_rule, k)
        elif inner_rule == "oracle":
            errs = [np.linalg.norm(f.Q[:, :k] @ y - x_true) for y in ys]
            j = int(np.argmin(errs)) + 1
        elif inner_rule == "lcurve":
            j = None
            if k >= 4:
                rn = np.array([np.linalg.norm(B @ y - rhs) for y in ys])
                sn = np.array([np.linalg.norm(y) for y in ys])
                j = _inner_lcurve_index(rn, sn)
            if j is None:
                j = k
        else:
            raise ValueError(f"unknown inner rule {inner_rule!r}")
        xs.append(f.Q[:, :k] @ ys[j - 1])
        inner.append(j)
    trace = _make_trace("hybrid_lsqr", A, b, x_true, xs, inner=inner,
                        params={"inner_rule": str(inner_rule)})
    return _strip_iterates(trace, store_iterates)


def gmres(instance, maxit: int, variant: str = "gmres", store_iterates: bool = False) -> SolverTrace:
    """GMRES on K_k(A, b), or RRGMRES on the shifted space K_k(A, Ab)."""
    A, b, x_true = _unpack(instance)
    if A.shape[0] != A.shape[1]:
        raise ValueError("gmres requires a square matrix")
    if variant not in ("gmres", "rrgmres"):
        raise ValueError("variant must be 'gmres' or 'rrgmres'")
    start = b if variant == "gmres" else A @ b
    a = arnoldi(A, start, min(maxit, A.shape[0]), reorth="full")
    xs = []
    for k in range(1, a.steps + 1):
        H = a.H[: k + 1, :k]
        rhs = a.W[:, : k + 1].T @ b
        y, *_ = np.linalg.lstsq(H, rhs, rcond=None)
        xs.append(a.W[:, :k] @ y)
    trace = _make_trace(variant, A, b, x_true, xs, params={"variant": variant})
    return _strip_iterates(trace, store_iterates)
