import numpy as np
import sympy as sp

import krylovreg as kr

# --- check deriv2 diagonal against the classical closed form ------------------
i_, h_, t_ = sp.symbols("i h t", positive=True)
a_ = (i_ - 1) * h_
F = t_**4 / 4 - t_**3 / 3 - a_**2 * t_**2 / 2 + a_**2 * t_
mine = sp.simplify((F.subs(t_, a_ + h_) - F.subs(t_, a_)) / h_)
classical = h_**2 * ((i_**2 - i_ + sp.Rational(1, 4)) * h_ - (i_ - sp.Rational(2, 3)))
print("deriv2 diagonal matches classical formula:", sp.simplify(mine - classical) == 0)

# --- check phillips toeplitz against the classical cosine-difference form -----
n = 32
p = kr.generate("phillips", n)
h = 12.0 / n
theta = np.pi * h / 3.0
m = np.arange(0, n // 4)
r_classical = np.zeros(n)
r_classical[: n // 4] = h + 9.0 / (h * np.pi**2) * (
    2 * np.cos(m * theta) - np.cos((m - 1) * theta) - np.cos((m + 1) * theta)
)
r_classical[n // 4] = h / 2.0 + 9.0 / (h * np.pi**2) * (np.cos(theta) - 1.0)
print("phillips row0 max |mine - classical|:", np.abs(p.A[0] - r_classical).max())

# --- noise-level sweep on the three shifted problems --------------------------
for kind in ["heat", "phillips", "deriv2"]:
    p = kr.generate(kind, 256)
    t = p.svd()
    print(f"--- {kind}: sigma1={t.sigma[0]:.3f} cond={t.sigma[0]/t.sigma[-1]:.2e}")
    for eps in [1e-2, 3e-3, 1e-3]:
        kls, kts, imps = [], [], []
        for seed in range(8):
            inst = kr.add_noise(p, eps, seed=seed)
            tl = kr.lsqr(inst, 40)
            tt = kr.tsvd_family(inst, t, 40)
            kls.append(kr.oracle_best(tl))
            kts.append(kr.oracle_best(tt))
            if kind == "deriv2":
                th = kr.hybrid_lsqr(inst, 20, inner_rule="oracle")
                imps.append(round(th.rel_error.min() / tl.rel_error.min(), 3))
        print(f"  eps={eps:7.0e} lsqr k*: {kls}  tsvd k*: {kts}  {imps}")
