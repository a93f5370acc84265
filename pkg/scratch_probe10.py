import time

import numpy as np

import krylovreg as kr
from krylovreg import diagnostics as dg

np.set_printoptions(precision=3, linewidth=220)
t0 = time.time()

# --- rerun model suite after tolerance fixes ------------------------------------
models = [
    kr.SyntheticModel(decay="severe", rho=float(np.e), zeta=1.0, beta=0.5, eta=1e-4),
    kr.SyntheticModel(decay="moderate", alpha=2.0, zeta=1.0, beta=0.5, eta=1e-4),
    kr.SyntheticModel(decay="mild", alpha=0.75, zeta=1.0, beta=0.5, eta=1e-4),
]
for model in models:
    p = kr.generate_synthetic(model, 200, 200, seed=11)
    checks = kr.model_bound_suite(p.svd_cache, p.b_exact, model, kmax=25)
    fails = [c for c in checks if c.status == "fail"]
    print(f"{model.decay:9s} checks={len(checks):4d} fails={[(c.name, c.k) for c in fails]}")
print("model suite elapsed", time.time() - t0)

# --- multiplicity termination detail ---------------------------------------------
model_m = kr.SyntheticModel(decay="severe", rho=2.0, zeta=1.0, beta=0.5, eta=1e-6,
                            multiplicities=[2] * 10)
p = kr.generate_synthetic(model_m, 60, 40, seed=3)
f = kr.lanczos_bidiag(p.A, p.b_exact, 40, reorth="full")
print("alpha[25:40]:", f.alpha[25:])
print("beta [25:40]:", f.beta[25:])

# --- deriv2 projected picard at higher noise --------------------------------------
p2 = kr.generate("deriv2", 256)
for eps in [1e-2, 1.6e-2]:
    inst2 = kr.add_noise(p2, eps, seed=0)
    f2 = kr.lanczos_bidiag(p2.A, inst2.b, 30, reorth="full")
    pp2 = np.array([kr.projected_picard(f2, p2.b_exact, k) for k in range(1, 21)])
    print(f"deriv2 eps={eps:.0e} projected picard ratios:", pp2 / np.linalg.norm(p2.x_true))

# --- heat projected picard (should stay bounded? severe shaw vs deriv2 contrast) --
p3 = kr.generate("shaw", 256)
inst3 = kr.add_noise(p3, 1e-2, seed=0)
f3 = kr.lanczos_bidiag(p3.A, inst3.b, 20, reorth="full")
pp3 = np.array([kr.projected_picard(f3, p3.b_exact, k) for k in range(1, 13)])
print("shaw eps=1e-2 projected picard ratios:", pp3 / np.linalg.norm(p3.x_true))

# --- lsmr/cgme solver examples -----------------------------------------------------
p = kr.generate("shaw", 256)
t = p.svd()
inst = kr.add_noise(p, 1e-3, seed=0)
tl = kr.lsqr(inst, 20)
tm = kr.lsmr(inst, 20)
tc = kr.cgme(inst, 20)
print(f"shaw lsmr min={tm.rel_error.min():.4f} vs lsqr {tl.rel_error.min():.4f} ratio={tm.rel_error.min()/tl.rel_error.min():.3f}")
print("lsmr normal-resid monotone:", np.all(np.diff(tm.normal_residual_norm) <= 1e-10 * tm.normal_residual_norm[0]))
print(f"cgme k*={kr.oracle_best(tc)} lsqr k*={kr.oracle_best(tl)}")
ph = kr.generate("heat", 256)
insth = kr.add_noise(ph, 1e-3, seed=0)
print(f"heat cgme k*={kr.oracle_best(kr.cgme(insth, 30))} lsqr k*={kr.oracle_best(kr.lsqr(insth, 30))}")
# cgme error-to-naive monotone on synthetic severe
ms = kr.SyntheticModel(decay="severe", rho=float(np.e), zeta=1.0, beta=0.5, eta=1e-4)
ps = kr.generate_synthetic(ms, 120, 100, seed=5)
tc2 = kr.cgme(ps, 30, store_iterates=True)
xn = kr.min_norm_lstsq(ps.A, ps.b_exact)
errs = np.array([np.linalg.norm(xn - x) for x in tc2.iterates])
print("cgme error-to-naive monotone:", np.all(np.diff(errs) <= 1e-8 * errs[0]), errs[:6])

# --- cgls vs lsqr ---------------------------------------------------------------
tg = kr.cgls(inst, 10, store_iterates=True)
tl = kr.lsqr(inst, 10, store_iterates=True)
gap = max(np.linalg.norm(a - b) / np.linalg.norm(b) for a, b in zip(tg.iterates, tl.iterates))
print("cgls vs lsqr max rel gap (shaw k<=10):", gap)

# --- filter recon conditioning-based cutoff prototype ------------------------------
def recon_range(kind):
    p = kr.generate(kind, 256)
    t = p.svd()
    inst = kr.add_noise(p, 1e-3, seed=0)
    f = kr.lanczos_bidiag(p.A, inst.b, min(25, 256), reorth="full")
    idx = t.sigma > np.sqrt(np.finfo(float).eps) * t.sigma[0]
    out = []
    for k in range(1, min(12, f.steps) + 1):
        theta, _ = dg.ritz_values(f, k)
        # amplification of the cancelling factor for each i <= k
        s2 = t.sigma[:k] ** 2
        th2 = theta**2
        amps = []
        for i in range(k):
            fac = np.abs(1.0 - s2[i] / th2)
            fac[i] = 1.0
            amps.append(np.prod(fac))
        amp = max(amps)
        ok = amp <= 1 / np.sqrt(np.finfo(float).eps)
        from krylovreg.solvers import projected_tsvd_solve
        filt = dg.filter_factors(f, t, k)
        B = kr.bidiag_matrix(f, k)
        rhs = np.zeros(k + 1); rhs[0] = np.linalg.norm(inst.b)
        x = f.Q[:, :k] @ projected_tsvd_solve(B, rhs, k)
        xf = t.V[:, idx] @ (filt[idx] * (t.U[:, idx].T @ inst.b) / t.sigma[idx])
        err = np.linalg.norm(x - xf) / np.linalg.norm(x)
        out.append((k, f"{amp:.1e}", ok, f"{err:.1e}"))
    return out

for kind in ["shaw", "wing", "heat", "phillips", "deriv2", "i_laplace"]:
    print(kind, recon_range(kind))
print("elapsed", time.time() - t0)
