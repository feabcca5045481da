# ## Bootstrap percolation on G(N, p)

import numpy as np

from bootperc import SeedSpec, er_thresholds, phi, run_bootstrap, sample_gnp, select_seeds
from bootperc.rng import RngStream

N, p, r = 100_000, 2e-4, 2
er = er_thresholds(N, p, r)
er

# ### Final size below the threshold follows phi(alpha) T_c

for a in (30, 60, 94, 115):
    finals = []
    for k in range(10):
        g = sample_gnp(N, p, RngStream(3, k))
        seed = select_seeds(SeedSpec.uniform(a), N, rng=RngStream(4, k))
        finals.append(run_bootstrap(g, seed, r).final_size)
    print(f"a={a:4d}  mean |A_f|={np.mean(finals):7.1f}  phi T_c={phi(a / er.a_c, r) * er.t_c:7.1f}")

# ### Above A_c the whole graph is infected

g = sample_gnp(N, p, RngStream(3, 0))
tr = run_bootstrap(g, select_seeds(SeedSpec.uniform(250), N, rng=RngStream(5)), r)
tr.final_size, tr.n_rounds
