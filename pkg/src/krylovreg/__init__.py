"""Krylov iterative regularization of discrete ill-posed problems.

Library layout:

- numerics:    dense SVD, pseudo-inverse solves, principal angles, thin QR
- problems:    six Fredholm test problems, synthetic Picard-model problems,
               seeded white noise, Picard-condition data
- bidiag:      Lanczos bidiagonalization and Arnoldi factorizations
- solvers:     LSQR, CGLS, LSMR, CGME, TSVD, Tikhonov, hybrid LSQR, GMRES
- diagnostics: rank-approximation errors, subspace angles, Ritz values,
               filter factors, decay classification, bound-check suites
- paramchoice: L-curve corner, discrepancy principle, oracle rule
- cli:         `krylovreg gen|solve|diagnose|compare`
"""

from .bidiag import ArnoldiFactorization, Bidiagonalization, arnoldi, bidiag_matrix, lanczos_bidiag
from .diagnostics import (
    BoundCheck,
    DecayFit,
    DiagnosticsReport,
    TsvdComparisonReport,
    build_report,
    cgme_rank_error,
    decay_classify,
    delta_matrix,
    filter_factors,
    gamma_trailing_block,
    gmres_rank_error,
    lagrange_factors,
    lsmr_rank_error,
    model_bound_suite,
    projected_picard,
    rank_approx_error,
    ritz_values,
    sin_theta_series,
    tsvd_comparison,
    worst_vector_check,
)
from .numerics import (
    NumericalError,
    SvdTriplet,
    min_norm_lstsq,
    principal_angle_sines,
    spectral_norm,
    svd,
    thin_qr,
)
from .paramchoice import LCurveResult, discrepancy, lcurve_corner, oracle_best
from .problems import (
    IllPosedProblem,
    NoisyInstance,
    PicardReport,
    SyntheticModel,
    add_noise,
    generate,
    generate_synthetic,
    picard_data,
    seeded_normals,
)
from .solvers import (
    SolverTrace,
    cgls,
    cgme,
    gmres,
    hybrid_lsqr,
    lsmr,
    lsqr,
    tikhonov_family,
    tsvd_family,
)

__version__ = "0.1.0"
