import time

import numpy as np

import krylovreg as kr
from krylovreg import diagnostics as dg

t0 = time.time()
np.set_printoptions(precision=3)

for kind in ["shaw", "wing", "heat", "phillips", "deriv2", "i_laplace"]:
    p = kr.generate(kind, 256)
    t = p.svd()
    cons = np.linalg.norm(p.A @ p.x_true - p.b_exact) / np.linalg.norm(p.b_exact)
    inst = kr.add_noise(p, 1e-3, seed=7)
    rep = kr.picard_data(inst, t)
    tr_lsqr = kr.lsqr(inst, 40)
    tr_tsvd = kr.tsvd_family(inst, t, 40)
    kl, kt = kr.oracle_best(tr_lsqr), kr.oracle_best(tr_tsvd)
    ml, mt = tr_lsqr.rel_error.min(), tr_tsvd.rel_error.min()
    # decay classification on a long factorization
    f = kr.lanczos_bidiag(p.A, inst.b, 256, reorth="full")
    fit = kr.decay_classify(f.alpha, f.beta)
    print(
        f"{kind:10s} cons={cons:.1e} sig1={t.sigma[0]:.2e} k0={rep.transition_index:3d} "
        f"lsqr(k*={kl:2d}, min={ml:.3f}) tsvd(k*={kt:2d}, min={mt:.3f}) "
        f"classify={fit.classification:8s} rate={fit.rate:.2f} win={fit.fit_window} res={fit.residuals[0]:.2f}/{fit.residuals[1]:.2f}"
    )

print("elapsed", time.time() - t0)
