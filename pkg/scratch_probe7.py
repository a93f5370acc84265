import numpy as np

import krylovreg as kr
from krylovreg import problems as pr

np.set_printoptions(precision=3, linewidth=220)


def ilaplace_variant(n, s_hi, t_lo, t_hi, s_mode="lin"):
    u_lo, u_hi = np.log(t_lo), np.log(t_hi)
    hu = (u_hi - u_lo) / n
    t = np.exp(u_lo + (np.arange(n) + 0.5) * hu)
    wt = hu * t
    if s_mode == "lin":
        s = s_hi * (np.arange(n) + 0.5) / n
        ws = np.full(n, s_hi / n)
    else:
        v_lo, v_hi = np.log(1e-2), np.log(s_hi)
        hv = (v_hi - v_lo) / n
        s = np.exp(v_lo + (np.arange(n) + 0.5) * hv)
        ws = hv * s
    A = np.sqrt(ws)[:, None] * np.exp(-np.outer(s, t)) * np.sqrt(wt)[None, :]
    x = np.sqrt(wt) * np.exp(-t / 2.0)
    p = kr.IllPosedProblem(name="v", A=A, b_exact=A @ x, x_true=x, kind="i_laplace")
    return p


for label, kwargs in [
    ("s10 t[1e-4,1e2]", dict(s_hi=10, t_lo=1e-4, t_hi=100)),
    ("s20 t[1e-4,1e2]", dict(s_hi=20, t_lo=1e-4, t_hi=100)),
    ("s50 t[1e-4,1e2]", dict(s_hi=50, t_lo=1e-4, t_hi=100)),
    ("s10 t[1e-6,1e2]", dict(s_hi=10, t_lo=1e-6, t_hi=100)),
    ("slog100 t[1e-4,50]", dict(s_hi=100, t_lo=1e-4, t_hi=50, s_mode="log")),
]:
    p = ilaplace_variant(256, **kwargs)
    inst = kr.add_noise(p, 1e-3, seed=0)
    tl = kr.lsqr(inst, 30)
    tg = kr.gmres(inst, 30)
    f = kr.lanczos_bidiag(p.A, inst.b, 256, reorth="full")
    fit = kr.decay_classify(f.alpha, f.beta)
    dip = tg.rel_error.min() / tg.rel_error[0]
    print(f"{label:20s} lsqr_min={tl.rel_error.min():.4f} gmres dip={dip:.2f} "
          f"gmres_min/lsqr_min={tg.rel_error.min()/tl.rel_error.min():7.1f} classify={fit.classification}({fit.rate:.2f})")

# picard transition after fix
for kind, eps in [("shaw", 1e-3), ("wing", 1e-3)]:
    p = kr.generate(kind, 256)
    inst = kr.add_noise(p, eps, seed=0)
    rep = kr.picard_data(inst, p.svd())
    print(kind, "transition_index:", rep.transition_index)

# deriv2 hybrid argmin at candidate seeds
p = kr.generate("deriv2", 256)
for seed in [15, 31, 96, 117]:
    inst = kr.add_noise(p, 1e-3, seed=seed)
    tl = kr.lsqr(inst, 20)
    th = kr.hybrid_lsqr(inst, 20, inner_rule="oracle")
    kh = kr.oracle_best(th)
    print(f"deriv2 seed={seed} lsqr k*={kr.oracle_best(tl)} min={tl.rel_error.min():.4f} "
          f"hybrid k*={kh} inner_j={int(th.inner_truncation[kh-1])} min={th.rel_error.min():.4f} ratio={th.rel_error.min()/tl.rel_error.min():.3f}")

# phillips even-index stagnation + curve
p = kr.generate("phillips", 256)
t = p.svd()
inst = kr.add_noise(p, 1e-3, seed=0)
tt = kr.tsvd_family(inst, t, 16)
print("phillips tsvd rel:", tt.rel_error)
print("phillips |u^T b^|[:14]:", np.abs(t.U.T @ p.b_exact)[:14])

# shaw criterion-1 margins
p = kr.generate("shaw", 256)
t = p.svd()
inst = kr.add_noise(p, 1e-3, seed=0)
tl, tt = kr.lsqr(inst, 30), kr.tsvd_family(inst, t, 30)
print(f"shaw lsqr k*={kr.oracle_best(tl)} min={tl.rel_error.min():.4f}; tsvd k*={kr.oracle_best(tt)} min={tt.rel_error.min():.4f}; "
      f"ratio={tl.rel_error.min()/tt.rel_error.min():.3f}")
lc = kr.lcurve_corner(tt.residual_norm, tt.solution_norm)
print("shaw tsvd lcurve corner:", lc.corner_index)
p = kr.generate("heat", 256)
inst = kr.add_noise(p, 1e-3, seed=0)
tl = kr.lsqr(inst, 40)
print("heat lsqr lcurve corner:", kr.lcurve_corner(tl.residual_norm, tl.solution_norm).corner_index)
