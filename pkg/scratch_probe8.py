import time

import numpy as np

import krylovreg as kr
from krylovreg import diagnostics as dg

np.set_printoptions(precision=3, linewidth=220)
t0 = time.time()

# --- criterion 7 inequality suite prototype -----------------------------------
def inequality_suite(kind, eps=1e-3, seed=0):
    p = kr.generate(kind, 256)
    t = p.svd()
    inst = kr.add_noise(p, eps, seed=seed)
    f = kr.lanczos_bidiag(p.A, inst.b, 256, reorth="full")
    s = f.steps
    T = dg._normal_tridiag(f)
    gam = np.array([dg.gamma_trailing_block(f, k) for k in range(1, s)])
    floor = 1e-13 * t.sigma[0]
    kmaxi = int(np.searchsorted(-gam, -floor))  # gamma decreasing; first below floor
    fails = []
    for k in range(1, kmaxi):
        g = gam[k - 1]
        if k < kmaxi - 1 and not gam[k] < g * (1 + 1e-12):
            fails.append(("gamma_mono", k))
        if not t.sigma[k] <= g * (1 + 1e-10):
            fails.append(("gamma_lower", k))
        if k < s and not f.alpha[k] < g:
            fails.append(("alpha", k))
        if k + 1 < s and not f.beta[k] < g:
            fails.append(("beta", k))
        if k < s and k + 1 < s and not 2 * f.alpha[k] * f.beta[k] <= g**2 * (1 + 1e-10):
            fails.append(("prod", k))
        theta, tbar = dg.ritz_values(f, k)
        if not np.all(np.abs(t.sigma[:k] - theta) <= g * (1 + 1e-8)):
            fails.append(("mirsky", k))
        if k >= 2:
            tprev, _ = dg.ritz_values(f, k - 1)
            if not (np.all(tprev < theta[:-1] + 1e-14) and np.all(theta[1:] < tprev + 1e-14)):
                fails.append(("cauchy", k))
        # bkbarbk chain: tbar_1 > th_1 > tbar_2 > ... (tbar here is Bbar_{k-1}, k values)
        chain = np.empty(2 * k)
        chain[0::2] = theta
        chain[1::2] = tbar
        if not np.all(np.diff(chain) < 0):
            fails.append(("bkbar", k))
        lsmr_t = dg.lsmr_rank_error_tail(T, k)
        if not (g**2 <= lsmr_t * (1 + 1e-8)):
            fails.append(("lsmr_low", k))
        if k >= 2:
            up = np.sqrt(1 + (gam[k - 2] / g) ** 2) * g**2
            if not lsmr_t <= up * (1 + 1e-8):
                fails.append(("lsmr_up", k))
        if not lsmr_t <= dg.lsqr_normal_rank_error_tail(T, k) * (1 + 1e-8):
            fails.append(("lsmr_vs_lsqr", k))
        if k >= 2:
            cg = dg.cgme_rank_error_tail(f, k)
            if not (g < cg and cg <= gam[k - 2] * (1 + 1e-8)):
                fails.append(("cgme", k))
    return kmaxi, fails

for kind in ["shaw", "wing", "heat", "phillips", "deriv2", "i_laplace"]:
    kmaxi, fails = inequality_suite(kind)
    print(f"{kind:10s} k-range 1..{kmaxi-1} fails: {fails[:8]}{'...' if len(fails) > 8 else ''}")
print("suite elapsed", time.time() - t0)

# --- bkbarbk chain orientation check ------------------------------------------
p = kr.generate("shaw", 64)
inst = kr.add_noise(p, 1e-3, seed=0)
f = kr.lanczos_bidiag(p.A, inst.b, 10, reorth="full")
th, tb = dg.ritz_values(f, 4)
print("theta:", th, "theta_bar(Bbar_{k-1}, k vals):", tb)

# --- dense vs tail cross-check (dual route) ------------------------------------
p = kr.generate("heat", 128)
t = p.svd()
inst = kr.add_noise(p, 1e-3, seed=0)
f = kr.lanczos_bidiag(p.A, inst.b, 128, reorth="full")
T = dg._normal_tridiag(f)
for k in [1, 3, 7, 12, 20]:
    gd = dg.rank_approx_error(p.A, f, k)
    gt = dg.gamma_trailing_block(f, k)
    ld = dg.lsmr_rank_error(p.A, f, k)
    lt = dg.lsmr_rank_error_tail(T, k)
    cd, left = dg.cgme_rank_error(p.A, f, k)
    ct = dg.cgme_rank_error_tail(f, k)
    print(f"k={k:2d} gamma dense/tail {gd:.6e}/{gt:.6e}  lsmr {ld:.3e}/{lt:.3e}  cgme {cd:.3e}/{ct:.3e} left={left:.3e}")
print("elapsed", time.time() - t0)
