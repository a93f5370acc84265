import numpy as np

import krylovreg as kr
from krylovreg import diagnostics as dg

np.set_printoptions(precision=2, linewidth=220)

# --- gamma/sigma ratios (criterion 6) ----------------------------------------
for kind in ["shaw", "wing", "deriv2", "heat", "phillips"]:
    p = kr.generate(kind, 256)
    t = p.svd()
    inst = kr.add_noise(p, 1e-3, seed=0)
    f = kr.lanczos_bidiag(p.A, inst.b, 256, reorth="full")
    kmax = min(40, f.steps - 1)
    gam = np.array([dg.gamma_trailing_block(f, k) for k in range(1, kmax + 1)])
    ratio = gam / t.sigma[1 : kmax + 1]
    print(f"{kind:9s} steps={f.steps:3d} ratios:", ratio[: min(30, kmax)])

# --- alpha+beta decay windows -------------------------------------------------
for kind in ["heat", "deriv2", "phillips"]:
    p = kr.generate(kind, 256)
    inst = kr.add_noise(p, 1e-3, seed=0)
    f = kr.lanczos_bidiag(p.A, inst.b, 256, reorth="full")
    d = f.alpha + f.beta
    for kfit in [20, 30, 40, 60, f.steps]:
        kfit = min(kfit, f.steps)
        fit = kr.decay_classify(f.alpha[:kfit], f.beta[:kfit])
        print(f"{kind:9s} kfit={kfit:3d} -> {fit.classification:8s} rate={fit.rate:5.2f} res={fit.residuals[0]:.2f}/{fit.residuals[1]:.2f}")

# --- GMRES contrast (criterion 11) --------------------------------------------
for kind in ["heat", "i_laplace"]:
    p = kr.generate(kind, 256)
    inst = kr.add_noise(p, 1e-3, seed=0)
    tg = kr.gmres(inst, 30)
    tl = kr.lsqr(inst, 30)
    rel = tg.rel_error
    interior_min = rel.min()
    print(f"{kind:9s} gmres rel[0]={rel[0]:.3f} min={interior_min:.3f} no-semi-conv: {interior_min > 0.9*rel[0]}"
          f"  lsqr_min={tl.rel_error.min():.3f} ratio={interior_min/tl.rel_error.min():.1f}")

# --- filter reconstruction (criterion 9) --------------------------------------
for kind in ["shaw", "wing", "heat", "phillips", "deriv2", "i_laplace"]:
    p = kr.generate(kind, 256)
    t = p.svd()
    inst = kr.add_noise(p, 1e-3, seed=0)
    f = kr.lanczos_bidiag(p.A, inst.b, min(25, 256), reorth="full")
    cutoff = np.sqrt(np.finfo(float).eps) * t.sigma[0]
    errs = []
    for k in range(1, min(12, f.steps) + 1):
        theta, _ = dg.ritz_values(f, k)
        if theta[-1] <= cutoff:
            break
        filt = dg.filter_factors(f, t, k)
        B = kr.bidiag_matrix(f, k)
        rhs = np.zeros(k + 1); rhs[0] = np.linalg.norm(inst.b)
        from krylovreg.solvers import projected_tsvd_solve
        x = f.Q[:, :k] @ projected_tsvd_solve(B, rhs, k)
        xf = t.V @ (filt * (t.U.T @ inst.b) / t.sigma)
        errs.append(np.linalg.norm(x - xf) / np.linalg.norm(x))
    print(f"{kind:9s} filter recon rel errs: {np.array(errs)}")

# --- phillips/deriv2 seed hunts ------------------------------------------------
p = kr.generate("phillips", 256)
t = p.svd()
good = []
for seed in range(60):
    inst = kr.add_noise(p, 1e-3, seed=seed)
    kt = kr.oracle_best(kr.tsvd_family(inst, t, 30))
    kl = kr.oracle_best(kr.lsqr(inst, 30))
    if kt <= 9 and kl <= 9:
        good.append((seed, kl, kt))
print("phillips seeds with both k* in [5,9]:", good[:10])

p = kr.generate("deriv2", 256)
good = []
for seed in range(120):
    inst = kr.add_noise(p, 1e-3, seed=seed)
    tl = kr.lsqr(inst, 20)
    kl = kr.oracle_best(tl)
    if kl <= 5:
        th = kr.hybrid_lsqr(inst, 20, inner_rule="oracle")
        r = th.rel_error.min() / tl.rel_error.min()
        good.append((seed, kl, round(r, 3)))
print("deriv2 seeds with lsqr k*<=5 (seed, k*, hybrid ratio):", good[:15])
