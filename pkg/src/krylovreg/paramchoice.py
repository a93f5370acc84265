"""Regularization-parameter selection rules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .solvers import SolverTrace


@dataclass
class LCurveResult:
    corner_index: int               # 1-based position in the input sequences
    curvatures: np.ndarray          # per point; endpoints and pruned points are NaN
    log_points: list[tuple[float, float]]


def lcurve_corner(residual_norms, solution_norms) -> LCurveResult:
    """Corner of the log-log L-curve by maximum discrete curvature.

    Curvature is the Menger (circumscribed-circle) curvature of consecutive
    point triples, signed so that an L-shaped bend is positive. Leading and
    trailing segments where both norms change by less than 1e-3 relative are
    pruned first. Degenerate curves with no bend raise ValueError.
    """
    r = np.asarray(residual_norms, dtype=float).ravel()
    s = np.asarray(solution_norms, dtype=float).ravel()
    if r.size != s.size:
        raise ValueError("norm sequences must have equal length")
    if r.size < 4:
        raise ValueError("need at least 4 points")
    if np.any(r <= 0) or np.any(s <= 0):
        raise ValueError("norms must be positive")

    x = np.log(r)
    y = np.log(s)
    flat = np.zeros(r.size - 1, dtype=bool)
    for i in range(r.size - 1):
        dr = abs(r[i + 1] - r[i]) / r[i]
        ds = abs(s[i + 1] - s[i]) / s[i]
        flat[i] = dr < 1e-3 and ds < 1e-3
    lo = 0
    while lo < flat.size and flat[lo]:
        lo += 1
    hi = r.size - 1
    while hi > 0 and flat[hi - 1]:
        hi -= 1
    if hi - lo + 1 < 3:
        raise ValueError("degenerate L-curve: no corner")

    curv = np.full(r.size, np.nan)
    for i in range(lo + 1, hi):
        p1 = np.array([x[i - 1], y[i - 1]])
        p2 = np.array([x[i], y[i]])
        p3 = np.array([x[i + 1], y[i + 1]])
        a = np.linalg.norm(p2 - p1)
        b = np.linalg.norm(p3 - p2)
        c = np.linalg.norm(p3 - p1)
        if a == 0 or b == 0 or c == 0:
            curv[i] = 0.0
            continue
        cross = (p2[0] - p1[0]) * (p3[1] - p2[1]) - (p2[1] - p1[1]) * (p3[0] - p2[0])
        # traversal runs right-to-left then upward, so the bend has cross < 0
        curv[i] = -2.0 * cross / (a * b * c)
    if not np.any(np.nan_to_num(curv, nan=-np.inf) > 0):
        raise ValueError("degenerate L-curve: no corner")
    corner = int(np.nanargmax(curv))
    return LCurveResult(
        corner_index=corner + 1,
        curvatures=curv,
        log_points=[(float(a), float(b)) for a, b in zip(x, y)],
    )


def discrepancy(residual_norms, noise_norm: float, tau: float = 1.01) -> int:
    """Smallest index (1-based) whose residual is at most tau * noise_norm."""
    if tau < 1:
        raise ValueError("tau must be at least 1")
    if noise_norm <= 0:
        raise ValueError("noise_norm must be positive")
    r = np.asarray(residual_norms, dtype=float).ravel()
    hits = np.nonzero(r <= tau * noise_norm)[0]
    if hits.size == 0:
        raise ValueError("discrepancy level never reached")
    return int(hits[0]) + 1


def oracle_best(trace: SolverTrace) -> int:
    """Smallest k attaining the minimum relative error of a trace."""
    if trace.rel_error is None:
        raise ValueError("trace has no rel_error record")
    i = int(np.argmin(trace.rel_error))  # argmin takes the first minimiser
    return int(trace.k[i])
