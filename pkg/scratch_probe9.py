import time

import numpy as np

import krylovreg as kr
from krylovreg import diagnostics as dg

np.set_printoptions(precision=3, linewidth=220)
t0 = time.time()

# --- criterion 8: model bound suite --------------------------------------------
models = [
    kr.SyntheticModel(decay="severe", rho=float(np.e), zeta=1.0, beta=0.5, eta=1e-4),
    kr.SyntheticModel(decay="moderate", alpha=2.0, zeta=1.0, beta=0.5, eta=1e-4),
    kr.SyntheticModel(decay="mild", alpha=0.75, zeta=1.0, beta=0.5, eta=1e-4),
]
for model in models:
    p = kr.generate_synthetic(model, 200, 200, seed=11)
    t = p.svd_cache
    k0 = model.transition_index()
    checks = kr.model_bound_suite(t, p.b_exact, model, kmax=min(25, 2 * k0))
    fails = [c for c in checks if c.status == "fail"]
    print(f"{model.decay:9s} k0={k0:3d} checks={len(checks):4d} fails={len(fails)}")
    for c in fails[:6]:
        print("   FAIL", c.name, "k=", c.k, c.detail, "margin", c.margin)

# --- synthetic classifier recovery ----------------------------------------------
for model, want in [(models[0], (2.4, 3.1)), (models[1], (1.5, 2.5))]:
    p = kr.generate_synthetic(model, 200, 200, seed=11)
    f = kr.lanczos_bidiag(p.A, p.b_exact, 200, reorth="full")
    fit = kr.decay_classify(f.alpha, f.beta)
    print(model.decay, "->", fit.classification, round(fit.rate, 3), "window", fit.fit_window, "want rate in", want)
p = kr.generate_synthetic(models[2], 200, 200, seed=11)
f = kr.lanczos_bidiag(p.A, p.b_exact, 200, reorth="full")
fit = kr.decay_classify(f.alpha, f.beta)
print("mild ->", fit.classification, round(fit.rate, 3))

# --- multiplicities: termination + Krylov equivalence ---------------------------
model_m = kr.SyntheticModel(decay="severe", rho=2.0, zeta=1.0, beta=0.5, eta=1e-6,
                            multiplicities=[2] * 10)
p = kr.generate_synthetic(model_m, 60, 40, seed=3)
f = kr.lanczos_bidiag(p.A, p.b_exact, 40, reorth="full")
s_distinct = len(np.unique(np.round(p.svd_cache.sigma, 12)))
print(f"multiplicity: distinct={s_distinct} terminated={f.terminated_early} at step {f.steps}")

# A' with one sigma per group
t = p.svd_cache
sig = t.sigma.copy()
_, first_idx = np.unique(np.round(sig, 12)[::-1], return_index=True)
keep = np.zeros(sig.size, bool)
seen = set()
for i, v in enumerate(np.round(sig, 12)):
    if v not in seen:
        seen.add(v)
        keep[i] = True
sig_prime = np.where(keep, sig, 0.0)
Ap = (t.U * sig_prime) @ t.V.T
ks = 5
K1 = np.column_stack([np.linalg.matrix_power(p.A.T @ p.A, j) @ (p.A.T @ p.b_exact) for j in range(ks)])
K2 = np.column_stack([np.linalg.matrix_power(Ap.T @ Ap, j) @ (Ap.T @ p.b_exact) for j in range(ks)])
Q1, Q2 = kr.thin_qr(K1), kr.thin_qr(K2)
print("multiplicity Krylov principal angle sines:", kr.principal_angle_sines(Q1, Q2).max())

# --- sin-theta identity vs delta matrix (synthetic severe) ----------------------
model = models[0]
p = kr.generate_synthetic(model, 200, 200, seed=11)
t = p.svd_cache
f = kr.lanczos_bidiag(p.A, p.b_exact, 30, reorth="full")
sines, deltas = kr.sin_theta_series(t, f, 12)
for k in [1, 4, 8, 12]:
    D = kr.delta_matrix(t, p.b_exact, k)
    dn = kr.spectral_norm(D)
    ident = dn / np.sqrt(1 + dn**2)
    print(f"k={k:2d} sin={sines[k-1]:.6e} from-delta={ident:.6e} rel gap={abs(ident-sines[k-1])/sines[k-1]:.2e}")

# --- worst vector + projected picard + tsvd comparison ---------------------------
p = kr.generate("shaw", 256)
t = p.svd()
inst = kr.add_noise(p, 1e-3, seed=0)
f = kr.lanczos_bidiag(p.A, inst.b, 30, reorth="full")
for k in [1, 4, 7, 10]:
    for c in kr.worst_vector_check(t, f, k):
        if c.status != "pass":
            print("worst_vector issue", k, c.name, c.status, c.margin)
print("worst vector checks done")
pp = [kr.projected_picard(f, p.b_exact, k) for k in range(1, 11)]
print("shaw projected picard / ||x_true||:", np.array(pp) / np.linalg.norm(p.x_true))
p2 = kr.generate("deriv2", 256)
inst2 = kr.add_noise(p2, 1e-3, seed=0)
f2 = kr.lanczos_bidiag(p2.A, inst2.b, 30, reorth="full")
pp2 = [kr.projected_picard(f2, p2.b_exact, k) for k in range(1, 21)]
print("deriv2 projected picard / ||x_true||:", np.array(pp2) / np.linalg.norm(p2.x_true))

tl = kr.lsqr(inst, 12, store_iterates=True)
tt = kr.tsvd_family(inst, t, 12, store_iterates=True)
for k in [2, 5, 7]:
    rep = kr.tsvd_comparison(t, f, inst.b, tl, tt, k)
    print(f"tsvd_cmp k={k} applicable={rep.applicable} checks={[ (c.name, c.status) for c in rep.checks ]}")

print("elapsed", time.time() - t0)
