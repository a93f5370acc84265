"""Test-problem generators for discrete ill-posed problems.

Six Fredholm problems (shaw, wing, heat, phillips, deriv2, i_laplace) follow
the classical Regularization Tools discretization conventions: midpoint
quadrature or collocation for shaw/wing/heat/i_laplace and Galerkin with
normalized box functions for phillips/deriv2. A synthetic generator builds
SVD-model problems that satisfy the discrete Picard model exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import SvdTriplet, as_matrix, as_vector, svd, thin_qr

PROBLEM_KINDS = ("shaw", "wing", "heat", "phillips", "deriv2", "i_laplace", "synthetic")

# b_exact is the discrete image A @ x_true for these kinds; the Galerkin /
# collocation kinds carry analytically integrated right-hand sides instead.
_CONSISTENT_KINDS = ("shaw", "heat", "i_laplace", "synthetic")


@dataclass
class IllPosedProblem:
    name: str
    A: np.ndarray
    b_exact: np.ndarray
    x_true: np.ndarray
    kind: str
    svd_cache: SvdTriplet | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape

    def svd(self) -> SvdTriplet:
        if self.svd_cache is None:
            self.svd_cache = svd(self.A)
        return self.svd_cache


@dataclass
class SyntheticModel:
    """Singular-value/Picard model: sigma_i = zeta*rho^-i or zeta*i^-alpha.

    decay is one of 'severe' (needs rho > 1), 'moderate' (alpha > 1) or
    'mild' (1/2 < alpha <= 1). beta is the Picard exponent, eta the noise
    floor of the Fourier coefficients. Optional multiplicities give the
    repeat count of each leading distinct singular value.
    """

    decay: str
    zeta: float = 1.0
    beta: float = 0.5
    eta: float = 1e-4
    rho: float | None = None
    alpha: float | None = None
    multiplicities: list[int] | None = None

    def __post_init__(self):
        if self.decay == "severe":
            if self.rho is None or self.rho <= 1:
                raise ValueError("severe decay requires rho > 1")
        elif self.decay == "moderate":
            if self.alpha is None or self.alpha <= 1:
                raise ValueError("moderate decay requires alpha > 1")
        elif self.decay == "mild":
            if self.alpha is None or not (0.5 < self.alpha <= 1):
                raise ValueError("mild decay requires alpha in (1/2, 1]")
        else:
            raise ValueError(f"unknown decay kind {self.decay!r}")
        if self.zeta <= 0 or self.beta <= 0 or self.eta <= 0:
            raise ValueError("zeta, beta, eta must be positive")

    def sigma_at(self, i: np.ndarray) -> np.ndarray:
        """Model singular value at (1-based, possibly fractional) index i."""
        if self.decay == "severe":
            return self.zeta * np.exp(-np.log(self.rho) * i)
        return self.zeta * np.asarray(i, dtype=float) ** (-self.alpha)

    def transition_index(self) -> int:
        """Model k0: the last index whose Fourier coefficient exceeds eta.

        Solves sigma_x^(1+beta) = eta for the real-valued index x and takes
        floor(x) - 1, so that index k0+1 already sits at the noise floor.
        """
        p = 1.0 + self.beta
        if self.decay == "severe":
            x = np.log(self.zeta**p / self.eta) / (p * np.log(self.rho))
        else:
            x = (self.zeta**p / self.eta) ** (1.0 / (self.alpha * p))
        return max(int(np.floor(x)) - 1, 1)


@dataclass
class NoisyInstance:
    problem: IllPosedProblem
    epsilon: float
    seed: int
    e: np.ndarray
    b: np.ndarray
    k0_estimate: int | None = None

    @property
    def A(self) -> np.ndarray:
        return self.problem.A

    @property
    def x_true(self) -> np.ndarray:
        return self.problem.x_true


@dataclass
class PicardReport:
    sigma: np.ndarray
    fourier: np.ndarray
    fourier_exact: np.ndarray
    ratios: np.ndarray
    transition_index: int


def seeded_normals(seed: int, size: int) -> np.ndarray:
    """Standard normals from a counter-based Philox stream via Box-Muller.

    Same seed gives bit-identical output on every platform.
    """
    n_pairs = (size + 1) // 2
    bg = np.random.Philox(key=np.uint64(seed))
    raw = bg.random_raw(2 * n_pairs).astype(np.uint64)
    # 53-bit uniforms in (0, 1]; u1 must stay away from 0 for the log
    u = ((raw >> np.uint64(11)).astype(np.float64) + 1.0) / 9007199254740992.0
    u1, u2 = u[:n_pairs], u[n_pairs:]
    r = np.sqrt(-2.0 * np.log(u1))
    g = np.concatenate([r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)])
    return g[:size]


# ---------------------------------------------------------------------------
# Fredholm test problems
# ---------------------------------------------------------------------------


def _shaw(n: int):
    if n % 2:
        raise ValueError("shaw requires even n")
    h = np.pi / n
    th = -np.pi / 2 + (np.arange(n) + 0.5) * h
    co = np.cos(th)
    psi = np.pi * np.sin(th)
    ss = psi[:, None] + psi[None, :]
    # sin(u)/u with the u -> 0 limit handled by sinc
    kern = (co[:, None] + co[None, :]) ** 2 * np.sinc(ss / np.pi) ** 2
    A = h * kern
    x = 2.0 * np.exp(-6.0 * (th - 0.8) ** 2) + np.exp(-2.0 * (th + 0.5) ** 2)
    return A, A @ x, x


def _wing(n: int):
    h = 1.0 / n
    t = (np.arange(n) + 0.5) * h
    s = t
    A = h * t[None, :] * np.exp(-np.outer(s, t**2))
    b = (np.exp(-s / 9.0) - np.exp(-4.0 * s / 9.0)) / (2.0 * s)
    x = ((t > 1.0 / 3.0) & (t < 2.0 / 3.0)).astype(float)
    return A, b, x


def _heat(n: int):
    if n % 2:
        raise ValueError("heat requires even n")
    h = 1.0 / n
    t = (np.arange(n) + 0.5) * h
    c = h / (2.0 * np.sqrt(np.pi))
    col = c * t ** (-1.5) * np.exp(-1.0 / (4.0 * t))
    A = np.zeros((n, n))
    for i in range(n):
        A[i:, i] = col[: n - i]
    x = np.zeros(n)
    ti = np.arange(1, n // 2 + 1) * 20.0 / n
    half = np.where(
        ti < 2.0,
        0.75 * ti**2 / 4.0,
        np.where(ti < 3.0, 0.75 + (ti - 2.0) * (3.0 - ti), 0.75 * np.exp(-(ti - 3.0) * 2.0)),
    )
    x[: n // 2] = half
    return A, A @ x, x


_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(20)


def _cell_integral(f, lo: float, hi: float) -> float:
    """20-point Gauss-Legendre integral of a smooth f over [lo, hi]."""
    mid, rad = 0.5 * (hi + lo), 0.5 * (hi - lo)
    return float(rad * np.dot(_GAUSS_W, f(mid + rad * _GAUSS_X)))


def _phillips(n: int):
    if n % 4:
        raise ValueError("phillips requires n divisible by 4")
    h = 12.0 / n

    def phi(u):
        u = np.abs(u)
        return np.where(u < 3.0, 1.0 + np.cos(np.pi * u / 3.0), 0.0)

    # Galerkin matrix is a Toeplitz convolution: the (i, j) entry depends only
    # on m = i - j and equals (1/h) * int_{-h}^{h} phi(m h + u) (h - |u|) du.
    # Kinks of phi land exactly on u in {-h, 0, h}, so two Gauss panels per
    # entry integrate it to machine accuracy.
    first = np.zeros(n)
    for m in range(n):
        if abs(m) * h > 3.0 + h:
            continue
        val = _cell_integral(lambda u: phi(m * h + u) * (h - np.abs(u)), -h, 0.0)
        val += _cell_integral(lambda u: phi(m * h + u) * (h - np.abs(u)), 0.0, h)
        first[m] = val / h
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    A = first[idx]

    def g(s):
        a = np.abs(s)
        return (6.0 - a) * (1.0 + 0.5 * np.cos(np.pi * s / 3.0)) + 9.0 / (2.0 * np.pi) * np.sin(
            np.pi * a / 3.0
        )

    def xfun(t):
        return np.where(np.abs(t) < 3.0, 1.0 + np.cos(np.pi * t / 3.0), 0.0)

    edges = -6.0 + h * np.arange(n + 1)
    b = np.array([_cell_integral(g, edges[i], edges[i + 1]) for i in range(n)]) / np.sqrt(h)
    x = np.array([_cell_integral(xfun, edges[i], edges[i + 1]) for i in range(n)]) / np.sqrt(h)
    return A, b, x


def _deriv2(n: int):
    if n % 2:
        raise ValueError("deriv2 requires even n")
    h = 1.0 / n
    mid = (np.arange(1, n + 1) - 0.5) * h
    A = np.empty((n, n))
    # Green's function k(s,t) = s(t-1) for s<t, t(s-1) otherwise; off-diagonal
    # cell integrals factor into 1-D means, the diagonal has a closed form.
    for i in range(n):
        A[i, i + 1 :] = h * mid[i] * (mid[i + 1 :] - 1.0)
        A[i, : i + 1] = h * mid[: i + 1] * (mid[i] - 1.0)
    for i in range(n):
        a = i * h

        def F(t, a=a):
            return t**4 / 4.0 - t**3 / 3.0 - a**2 * t**2 / 2.0 + a**2 * t

        A[i, i] = (F(a + h) - F(a)) / h

    def g(s):
        return np.where(
            s < 0.5, (4.0 * s**3 - 3.0 * s) / 24.0, (-4.0 * s**3 + 12.0 * s**2 - 9.0 * s + 1.0) / 24.0
        )

    def xfun(t):
        return np.where(t < 0.5, t, 1.0 - t)

    edges = h * np.arange(n + 1)
    b = np.array([_cell_integral(g, edges[i], edges[i + 1]) for i in range(n)]) / np.sqrt(h)
    x = np.array([_cell_integral(xfun, edges[i], edges[i + 1]) for i in range(n)]) / np.sqrt(h)
    return A, b, x


def _i_laplace(n: int):
    # Quadrature on a log grid for t in [1e-4, 100]; collocation in s on (0, 50].
    # Row and column quadrature weights are split symmetrically (A -> D_u K D_v)
    # so plain coefficient 2-norms approximate the underlying L2 norms; the very
    # uneven row/column parametrizations make A strongly nonnormal, as in the
    # classical Gauss-Laguerre construction.
    u_lo, u_hi = np.log(1e-4), np.log(100.0)
    hu = (u_hi - u_lo) / n
    t = np.exp(u_lo + (np.arange(n) + 0.5) * hu)
    wt = hu * t
    s = 50.0 * (np.arange(n) + 0.5) / n
    ws = np.full(n, 50.0 / n)
    A = np.sqrt(ws)[:, None] * np.exp(-np.outer(s, t)) * np.sqrt(wt)[None, :]
    x = np.sqrt(wt) * np.exp(-t / 2.0)
    return A, A @ x, x


_GENERATORS = {
    "shaw": _shaw,
    "wing": _wing,
    "heat": _heat,
    "phillips": _phillips,
    "deriv2": _deriv2,
    "i_laplace": _i_laplace,
}


def generate(kind: str, n: int) -> IllPosedProblem:
    """Build one of the six Fredholm test problems at size n x n."""
    if kind not in _GENERATORS:
        raise ValueError(f"unknown problem kind {kind!r}; choose from {sorted(_GENERATORS)}")
    if n < 8:
        raise ValueError("n must be at least 8")
    A, b, x = _GENERATORS[kind](n)
    return IllPosedProblem(name=f"{kind}({n})", A=A, b_exact=b, x_true=x, kind=kind)


# ---------------------------------------------------------------------------
# Synthetic SVD-model problems
# ---------------------------------------------------------------------------


def _random_orthonormal(rows: int, cols: int, seed: int) -> np.ndarray:
    G = seeded_normals(seed, rows * cols).reshape(rows, cols)
    return thin_qr(G)


def generate_synthetic(model: SyntheticModel, m: int, n: int, seed: int) -> IllPosedProblem:
    """Random-orthonormal A = U S V^T whose Fourier coefficients follow the
    Picard model exactly: |u_i^T b| = sigma_i^(1+beta) up to the model k0 and
    eta beyond it.

    With multiplicities, each leading distinct singular value is repeated and
    b projects onto exactly one unit vector per singular subspace.
    """
    if m < n:
        raise ValueError("generate_synthetic requires m >= n")
    if model.multiplicities is not None:
        counts = [int(c) for c in model.multiplicities]
        if any(c < 1 for c in counts) or sum(counts) > n:
            raise ValueError("multiplicities must be positive with sum <= n")
        counts = counts + [1] * (n - sum(counts))
        s_distinct = model.sigma_at(np.arange(1, len(counts) + 1, dtype=float))
        sigma = np.repeat(s_distinct, counts)
        # position of the single b-carrying vector in each singular subspace
        carriers = np.cumsum([0] + counts[:-1])
        n_distinct = len(counts)
    else:
        sigma = model.sigma_at(np.arange(1, n + 1, dtype=float))
        carriers = np.arange(n)
        n_distinct = n

    k0 = model.transition_index()
    dvals = model.sigma_at(np.arange(1, n_distinct + 1, dtype=float))
    coeff = dvals ** (1.0 + model.beta)
    if model.eta >= coeff[0]:
        raise ValueError("infeasible model: eta is not below the largest Fourier coefficient")
    coeff[min(k0, n_distinct) :] = model.eta

    U = _random_orthonormal(m, n, seed)
    V = _random_orthonormal(n, n, seed + 1)
    A = (U * sigma) @ V.T
    b = U[:, carriers] @ coeff
    keep = sigma[carriers] > 0
    x = V[:, carriers[keep]] @ (coeff[keep] / sigma[carriers[keep]])
    cache = SvdTriplet(U=U, sigma=sigma, V=V)
    return IllPosedProblem(
        name=f"synthetic-{model.decay}({n})", A=A, b_exact=b, x_true=x, kind="synthetic",
        svd_cache=cache,
    )


# ---------------------------------------------------------------------------
# Noise and Picard data
# ---------------------------------------------------------------------------


def add_noise(problem: IllPosedProblem, epsilon: float, seed: int) -> NoisyInstance:
    """White-noise instance with exact relative level ||e|| / ||b_exact||."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    b_hat = problem.b_exact
    nb = np.linalg.norm(b_hat)
    if nb == 0:
        raise ValueError("problem has a zero right-hand side")
    g = seeded_normals(seed, b_hat.size)
    e = (epsilon * nb / np.linalg.norm(g)) * g
    return NoisyInstance(problem=problem, epsilon=float(epsilon), seed=int(seed), e=e, b=b_hat + e)


def picard_data(instance: NoisyInstance, triplet: SvdTriplet) -> PicardReport:
    """Fourier coefficients, Picard ratios and the noise transition index.

    The transition index is the last k whose coefficient |u_k^T b| exceeds
    twice the tail median, a robust estimate of the noise level.
    """
    A = instance.problem.A
    if triplet.U.shape[0] != A.shape[0]:
        raise ValueError("svd does not match the instance's matrix")
    fourier = np.abs(triplet.U.T @ instance.b)
    fourier_exact = np.abs(triplet.U.T @ instance.problem.b_exact)
    ratios = fourier / triplet.sigma
    n = fourier.size
    tail = fourier[-max(n // 4, 1) :]
    level = 2.0 * float(np.median(tail))
    # last k before the coefficients first sink into the noise band; individual
    # later fluctuations above the band do not move the transition
    below = np.nonzero(fourier <= level)[0]
    k0 = int(below[0]) if below.size else n
    k0 = min(max(k0, 1), n)
    instance.k0_estimate = k0
    return PicardReport(
        sigma=triplet.sigma.copy(),
        fourier=fourier,
        fourier_exact=fourier_exact,
        ratios=ratios,
        transition_index=k0,
    )


# ---------------------------------------------------------------------------
# JSON schema (consumed by the CLI)
# ---------------------------------------------------------------------------

SCHEMA_VERSION = 1


def to_json_dict(obj: IllPosedProblem | NoisyInstance) -> dict:
    if isinstance(obj, NoisyInstance):
        problem, noise = obj.problem, obj
    else:
        problem, noise = obj, None
    m, n = problem.A.shape
    d = {
        "schema_version": SCHEMA_VERSION,
        "name": problem.name,
        "kind": problem.kind,
        "m": m,
        "n": n,
        "matrix": problem.A.ravel().tolist(),
        "b_exact": problem.b_exact.tolist(),
        "x_true": problem.x_true.tolist(),
    }
    if noise is not None:
        d["noise"] = {
            "epsilon": noise.epsilon,
            "seed": noise.seed,
            "e": noise.e.tolist(),
            "b": noise.b.tolist(),
        }
    return d


def from_json_dict(d: dict) -> IllPosedProblem | NoisyInstance:
    if d.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {d.get('schema_version')!r}")
    m, n = int(d["m"]), int(d["n"])
    A = np.asarray(d["matrix"], dtype=float).reshape(m, n)
    problem = IllPosedProblem(
        name=str(d["name"]),
        A=as_matrix(A),
        b_exact=as_vector(d["b_exact"]),
        x_true=as_vector(d["x_true"]),
        kind=str(d["kind"]),
    )
    if "noise" in d:
        nz = d["noise"]
        return NoisyInstance(
            problem=problem,
            epsilon=float(nz["epsilon"]),
            seed=int(nz["seed"]),
            e=as_vector(nz["e"]),
            b=as_vector(nz["b"]),
        )
    return problem
