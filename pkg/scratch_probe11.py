import time

import numpy as np

import krylovreg as kr
from krylovreg import diagnostics as dg

np.set_printoptions(precision=3, linewidth=220)
t0 = time.time()

# --- moderate interlacing violation magnitudes ----------------------------------
model = kr.SyntheticModel(decay="moderate", alpha=2.0, zeta=1.0, beta=0.5, eta=1e-4)
p = kr.generate_synthetic(model, 200, 200, seed=11)
t = p.svd_cache
f = kr.lanczos_bidiag(p.A, p.b_exact, 30, reorth="full")
for k in [8, 12, 16, 20]:
    theta, _ = dg.ritz_values(f, k)
    low_viol = (t.sigma[1 : k + 1] - theta) / t.sigma[1 : k + 1]
    print(f"k={k:2d} worst lower-interlacing violation (rel): {low_viol.max():.3e} at i={int(low_viol.argmax())+1}")
    # condm check: 1+sqrt(1+eta_k^2) < ((k0+1)/k0)^alpha
print("((k0+1)/k0)^alpha =", (21 / 20) ** 2)

# --- multiplicity with resolvable parameters -------------------------------------
model_m = kr.SyntheticModel(decay="severe", rho=1.5, zeta=1.0, beta=0.5, eta=1e-3,
                            multiplicities=[2] * 10)
p = kr.generate_synthetic(model_m, 30, 20, seed=3)
f = kr.lanczos_bidiag(p.A, p.b_exact, 20, reorth="full")
print("multiplicity rho=1.5 s=10: terminated:", f.terminated_early, "steps:", f.steps)

# --- cgls vs lsqr per-k gaps on shaw and heat -------------------------------------
for kind in ["shaw", "heat"]:
    p = kr.generate(kind, 256)
    inst = kr.add_noise(p, 1e-3, seed=0)
    tg = kr.cgls(inst, 10, store_iterates=True)
    tl = kr.lsqr(inst, 10, store_iterates=True)
    gaps = [np.linalg.norm(a - b) / np.linalg.norm(b) for a, b in zip(tg.iterates, tl.iterates)]
    print(kind, "cgls-lsqr gaps:", np.array(gaps))

# --- cgme error-to-naive on resolvable severe synthetic ---------------------------
ms = kr.SyntheticModel(decay="severe", rho=1.3, zeta=1.0, beta=0.5, eta=1e-3)
ps = kr.generate_synthetic(ms, 40, 30, seed=5)
tc = kr.cgme(ps, 25, store_iterates=True)
xn = kr.min_norm_lstsq(ps.A, ps.b_exact)
errs = np.array([np.linalg.norm(xn - x) for x in tc.iterates])
print("cgme err-to-naive monotone (rho=1.3):", np.all(np.diff(errs) <= 1e-8 * errs[0]))

# --- projected picard at n=1024 ----------------------------------------------------
for kind in ["deriv2", "phillips"]:
    p = kr.generate(kind, 1024)
    inst = kr.add_noise(p, 1e-3, seed=0)
    f = kr.lanczos_bidiag(p.A, inst.b, 30, reorth="full")
    pp = np.array([kr.projected_picard(f, p.b_exact, k) for k in range(1, 26)])
    print(kind, "n=1024 projected picard ratios:", np.round(pp / np.linalg.norm(p.x_true), 2))

# shaw n=256 stays bounded
p = kr.generate("shaw", 256)
inst = kr.add_noise(p, 1e-3, seed=0)
f = kr.lanczos_bidiag(p.A, inst.b, 20, reorth="full")
pp = np.array([kr.projected_picard(f, p.b_exact, k) for k in range(1, 16)])
print("shaw ratios max:", (pp / np.linalg.norm(p.x_true)).max())
print("elapsed", time.time() - t0)
