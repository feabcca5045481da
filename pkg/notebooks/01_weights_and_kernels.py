# ## Power-law weights, kernels and bands

import numpy as np

from bootperc import band_decomposition, build_weights, kernel, tail, total_weight

# ### The canonical sequence

n, beta, zeta = 100_000, 2.5, 2 / 3
ws = build_weights(n, beta, zeta)
print(ws.weights[:5], ws.weights[-3:])

# measured tail constants, and the plateau of vertices sitting at n^zeta
ws.gamma1, ws.gamma2, ws.plateau

# ### The tail follows x^(1-beta)

xs = np.geomspace(1, ws.cap, 8)
for x in xs:
    print(f"x={x:8.2f}  tail={tail(ws, x):.5f}  x^(1-beta)={x ** (1 - beta):.5f}")

# ### Kernels hold a vanishing share of vertices but a large share of weight

W = total_weight(ws)
for f in (2, 10, 50, 250):
    ker = kernel(ws, f)
    print(f"f={f:4d}  |Ker_f|/n={ker.size / n:.4f}  weight share={total_weight(ws, ker) / W:.3f}")

# ### Bands between a kernel and a constant cutoff

bd = band_decomposition(ws, f0=100, C=2)
bd.cutoffs, [b.size for b in bd.bands]
