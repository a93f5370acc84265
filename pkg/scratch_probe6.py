import numpy as np

import krylovreg as kr
from krylovreg import diagnostics as dg
from krylovreg.solvers import projected_tsvd_solve

np.set_printoptions(precision=2, linewidth=220)

# --- new i_laplace ------------------------------------------------------------
p = kr.generate("i_laplace", 256)
t = p.svd()
inst = kr.add_noise(p, 1e-3, seed=0)
tl = kr.lsqr(inst, 30)
tg = kr.gmres(inst, 30)
print("i_laplace sigma[:12]:", t.sigma[:12])
print("i_laplace lsqr rel:", tl.rel_error[:20])
print("i_laplace gmres rel[0]=%.3f min=%.3f lsqr min=%.4f ratio=%.1f"
      % (tg.rel_error[0], tg.rel_error.min(), tl.rel_error.min(), tg.rel_error.min() / tl.rel_error.min()))
f = kr.lanczos_bidiag(p.A, inst.b, 256, reorth="full")
fit = kr.decay_classify(f.alpha, f.beta)
print("i_laplace classify:", fit.classification, fit.rate, fit.fit_window)
a = kr.arnoldi(p.A, inst.b, 25)
h_sub = np.array([a.H[k + 1, k] for k in range(20)])
print("h_{k+1,k} faster than sigma_k?", np.all(h_sub[:20] / h_sub[0] <= t.sigma[:20] / t.sigma[0] * 10))

# --- classification fixture sweep ----------------------------------------------
for eps in [1e-3, 1e-2, 1.6e-2]:
    row = f"eps={eps:.0e}: "
    for kind in ["shaw", "wing", "i_laplace", "heat", "phillips", "deriv2"]:
        p = kr.generate(kind, 256)
        inst = kr.add_noise(p, eps, seed=0)
        f = kr.lanczos_bidiag(p.A, inst.b, 256, reorth="full")
        fit = kr.decay_classify(f.alpha, f.beta)
        row += f"{kind}={fit.classification[:3]}({fit.rate:.2f},w{fit.fit_window[1]}) "
    print(row)

# --- heat filter reconstruction failure analysis -------------------------------
p = kr.generate("heat", 256)
t = p.svd()
inst = kr.add_noise(p, 1e-3, seed=0)
f = kr.lanczos_bidiag(p.A, inst.b, 25, reorth="full")
for k in [8, 9, 10]:
    filt = dg.filter_factors(f, t, k)
    B = kr.bidiag_matrix(f, k)
    rhs = np.zeros(k + 1); rhs[0] = np.linalg.norm(inst.b)
    x = f.Q[:, :k] @ projected_tsvd_solve(B, rhs, k)
    coeff = (t.U.T @ inst.b) / t.sigma
    xf = t.V @ (filt * coeff)
    diff = t.V.T @ (x - xf)
    worst = np.argsort(-np.abs(diff))[:6]
    print(f"heat k={k} recon err={np.linalg.norm(x-xf)/np.linalg.norm(x):.2e} "
          f"worst comps {worst} diffs {diff[worst]} filt[worst] {filt[worst]} coeff[worst] {coeff[worst]}")
