import numpy as np

import krylovreg as kr

# If the paper's noise was e = eps*||b||*randn (unnormalized), its realized
# relative level is eps*sqrt(m) ~ 16*eps. Check all six problems at both
# interpretations of eps=1e-3.
for kind in ["shaw", "wing", "heat", "phillips", "deriv2", "i_laplace"]:
    p = kr.generate(kind, 256)
    t = p.svd()
    row = f"{kind:10s}"
    for eps in [1e-3, 1.6e-2]:
        kls, kts = [], []
        for seed in range(8):
            inst = kr.add_noise(p, eps, seed=seed)
            kls.append(kr.oracle_best(kr.lsqr(inst, 40)))
            kts.append(kr.oracle_best(kr.tsvd_family(inst, t, 40)))
        row += f" | eps={eps:=7.1e}: lsqr~{int(np.median(kls)):2d} {kls} tsvd~{int(np.median(kts)):2d}"
    print(row)
