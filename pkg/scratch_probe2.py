import numpy as np

import krylovreg as kr
from krylovreg import diagnostics as dg

np.set_printoptions(precision=3, suppress=False, linewidth=200)

# --- seed sweep for oracle-best indices -------------------------------------
for kind in ["heat", "phillips", "deriv2"]:
    p = kr.generate(kind, 256)
    t = p.svd()
    kls, kts, imps = [], [], []
    for seed in range(12):
        inst = kr.add_noise(p, 1e-3, seed=seed)
        tl = kr.lsqr(inst, 40)
        tt = kr.tsvd_family(inst, t, 40)
        kls.append(kr.oracle_best(tl))
        kts.append(kr.oracle_best(tt))
        if kind == "deriv2":
            th = kr.hybrid_lsqr(inst, 20, inner_rule="oracle")
            imps.append(th.rel_error.min() / tl.rel_error.min())
    print(kind, "lsqr k*:", kls)
    print(kind, "tsvd k*:", kts)
    if imps:
        print("deriv2 hybrid/lsqr min ratio:", np.round(imps, 3))

# --- heat rel_error curve ----------------------------------------------------
p = kr.generate("heat", 256)
t = p.svd()
inst = kr.add_noise(p, 1e-3, seed=0)
tl = kr.lsqr(inst, 40)
tt = kr.tsvd_family(inst, t, 40)
print("heat lsqr rel:", np.array2string(tl.rel_error[:30], precision=4))
print("heat tsvd rel:", np.array2string(tt.rel_error[:40], precision=4))
print("heat sigma[:30]:", t.sigma[:30])
print("heat picard |u'b^|[:30]:", np.abs(t.U.T @ p.b_exact)[:30])
eta = 1e-3 * np.linalg.norm(p.b_exact) / np.sqrt(256)
print("heat eta ~", eta)

# --- gamma ratios ------------------------------------------------------------
for kind in ["shaw", "wing", "deriv2"]:
    p = kr.generate(kind, 256)
    t = p.svd()
    inst = kr.add_noise(p, 1e-3, seed=0)
    f = kr.lanczos_bidiag(p.A, inst.b, 256, reorth="full")
    gam = np.array([dg.gamma_trailing_block(f, k) for k in range(1, 41)])
    ratio = gam / t.sigma[1:41]
    print(kind, "gamma/sigma ratios k=1..25:", np.array2string(ratio[:25], precision=2))

# --- deriv2 alpha+beta decay -------------------------------------------------
p = kr.generate("deriv2", 256)
inst = kr.add_noise(p, 1e-3, seed=0)
f = kr.lanczos_bidiag(p.A, inst.b, 256, reorth="full")
d = f.alpha + f.beta
print("deriv2 alpha+beta[:40]:", np.array2string(d[:40], precision=3))
t = p.svd()
print("deriv2 sigma[:40]:", np.array2string(t.sigma[:40], precision=3))
