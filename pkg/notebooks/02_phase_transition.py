# ## The seed-size transition on a Chung-Lu graph

import numpy as np

from bootperc import SeedSpec, critical_a, first_moment_bound, supercritical_witness
from bootperc.experiments import ModelSpec, SweepConfig, format_table, run_sweep, summarize

# ### Where should the transition be?

n, beta, zeta, r = 20_000, 2.5, 2 / 3, 2
a_c = critical_a(n, beta, zeta, r)
a_c

# ### A small sweep across multiples of a_c

cfg = SweepConfig(
    model=ModelSpec("chung_lu", beta=beta, zeta=zeta),
    r=r,
    seed_strategy=SeedSpec.uniform(0),
    a_values=("0.1*a_c", "0.3*a_c", "a_c", "3*a_c", "10*a_c", "30*a_c"),
    n_values=(n,),
    replicas=20,
    master_seed=1,
)
records = run_sweep(cfg)
rows = summarize(records, cfg)
print(format_table(rows))

# ### The analytic side

ws = cfg.model.weights(n)
for a in cfg.resolve_a(n):
    w = supercritical_witness(ws, a, r)
    print(f"a={a:6g}  first-moment bound={first_moment_bound(ws, a, r):9.3g}  witness={w.satisfied}")

# below a_c the expected number of vertices with r seeded neighbours is small,
# so the seed set rarely grows; above it the hubs catch and the cascade spreads
np.array([row["final_fraction_mean"] for row in rows])
