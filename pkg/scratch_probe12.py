import numpy as np

import krylovreg as kr

np.set_printoptions(precision=3, linewidth=220)

# --- multiplicity termination detail ---------------------------------------------
model_m = kr.SyntheticModel(decay="severe", rho=1.5, zeta=1.0, beta=0.5, eta=1e-3,
                            multiplicities=[2] * 10)
p = kr.generate_synthetic(model_m, 30, 20, seed=3)
f = kr.lanczos_bidiag(p.A, p.b_exact, 20, reorth="full")
print("alpha:", f.alpha)
print("beta:", f.beta)

# --- projected picard blowup hunt ---------------------------------------------------
for kind in ["deriv2", "phillips"]:
    p = kr.generate(kind, 256)
    nx = np.linalg.norm(p.x_true)
    for eps in [1e-2, 5e-2]:
        inst = kr.add_noise(p, eps, seed=0)
        f = kr.lanczos_bidiag(p.A, inst.b, 60, reorth="full")
        pp = np.array([kr.projected_picard(f, p.b_exact, k) for k in range(1, 61)])
        print(f"{kind} n=256 eps={eps:.0e} max ratio k<=60: {(pp/nx).max():.2f} at k={int((pp/nx).argmax())+1}")
