"""Samplers for CL(w) and G(N,p), and the coupling of G(N_f, p_f) inside CL[Ker_f]."""
from __future__ import annotations

import math

import numba
import numpy as np

from ._errors import ValidationError
from .graph import Graph
from .rng import as_generator
from .weights import WeightSequence, kernel, total_weight


def edge_probability(ws: WeightSequence, i: int, j: int) -> float:
    """min(w_i w_j / W, 1)."""
    if i == j:
        raise ValidationError("no self-loops: i == j")
    for v in (i, j):
        if not 0 <= v < ws.n:
            raise IndexError(f"vertex {v} outside [0, {ws.n})")
    W = total_weight(ws)
    return min(ws.weights[i] * ws.weights[j] / W, 1.0)


def clamped_pair_count(ws: WeightSequence) -> int:
    """Number of pairs i < j whose probability is clamped at 1 (w_i w_j >= W)."""
    w = ws.weights
    W = w.sum()
    asc = w[::-1]
    # for each i, count j with w_j >= W / w_i, then drop i itself and halve
    cnt = ws.n - np.searchsorted(asc, W / w, side="left")
    self_hit = (w * w >= W).astype(np.int64)
    return int((cnt - self_hit).sum() // 2)


@numba.njit(cache=True, nogil=True)
def _chung_lu_skip(w, W, gen):
    # Geometric skipping with an adaptive upper bound; requires w nonincreasing.
    n = w.shape[0]
    cap = max(16, int(W))
    us = np.empty(cap, dtype=np.int64)
    vs = np.empty(cap, dtype=np.int64)
    m = 0
    for u in range(n - 1):
        v = u + 1
        p = min(w[u] * w[v] / W, 1.0)
        while v < n and p > 0.0:
            if p < 1.0:
                x = 1.0 - gen.random()
                v += int(math.floor(math.log(x) / math.log1p(-p)))
            if v < n:
                q = min(w[u] * w[v] / W, 1.0)
                if gen.random() < q / p:
                    if m == cap:
                        cap *= 2
                        nu = np.empty(cap, dtype=np.int64)
                        nv = np.empty(cap, dtype=np.int64)
                        nu[:m] = us[:m]
                        nv[:m] = vs[:m]
                        us = nu
                        vs = nv
                    us[m] = u
                    vs[m] = v
                    m += 1
                p = q
                v += 1
    return us[:m], vs[:m]


def sample_chung_lu(ws: WeightSequence, rng) -> Graph:
    """Draw CL(w): each pair {i, j} present independently with min(w_i w_j / W, 1).

    Expected cost O(n + m). Deterministic given the stream.
    """
    gen = as_generator(rng)
    w = np.ascontiguousarray(ws.weights)
    u, v = _chung_lu_skip(w, float(w.sum()), gen)
    return Graph.from_edges(ws.n, u, v)


def sample_chung_lu_dense(ws: WeightSequence, rng) -> Graph:
    """O(n^2) Bernoulli-per-pair reference sampler, meant for n <= 2000."""
    gen = as_generator(rng)
    w = ws.weights
    iu, ju = np.triu_indices(ws.n, k=1)
    p = np.minimum(w[iu] * w[ju] / w.sum(), 1.0)
    hit = gen.random(iu.size) < p
    return Graph.from_edges(ws.n, iu[hit], ju[hit])


def _decode_pairs(N: int, k: np.ndarray):
    """Map linear indices over {(i, j): i < j} in row-major order to (i, j)."""
    row_start = np.concatenate([[0], np.cumsum(np.arange(N - 1, 0, -1, dtype=np.int64))])
    i = np.searchsorted(row_start, k, side="right") - 1
    j = k - row_start[i] + i + 1
    return i, j


def sample_gnp(N: int, p: float, rng) -> Graph:
    """G(N, p) via geometric gaps between successive present pairs."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must lie in [0,1], got {p}")
    if int(N) != N or N < 0:
        raise ValidationError(f"N must be a non-negative integer, got {N}")
    N = int(N)
    total = N * (N - 1) // 2
    if p == 0.0 or total == 0:
        return Graph.empty(N)
    if p == 1.0:
        iu, ju = np.triu_indices(N, k=1)
        return Graph.from_edges(N, iu, ju)
    gen = as_generator(rng)
    chunk = int(total * p + 10 * math.sqrt(total * p) + 64)
    found = []
    last = -1
    while True:
        pos = last + np.cumsum(gen.geometric(p, size=chunk))
        if pos[-1] >= total:
            found.append(pos[pos < total])
            break
        found.append(pos)
        last = int(pos[-1])
    k = np.concatenate(found)
    i, j = _decode_pairs(N, k)
    return Graph.from_edges(N, i, j)


def sample_coupled_kernel(ws: WeightSequence, f: float, rng, block: int = 1 << 20):
    """Jointly draw (G(N_f, p_f), CL[Ker_f]) with the first contained in the second.

    One uniform U per kernel pair, consumed in row-major pair order: the pair
    enters the binomial graph iff U < p_f = f^2/W and the Chung-Lu graph iff
    U < p_ij. Since p_f <= p_ij on the kernel, containment holds surely.
    Both graphs are labelled 0..N_f-1 like the kernel prefix.
    """
    if f > ws.cap * (1 + 1e-12):
        raise ValidationError(f"f={f:.6g} exceeds n^zeta={ws.cap:.6g}")
    ker = kernel(ws, f)
    Nf = ker.size
    if Nf == 0:
        raise ValidationError(f"kernel of f={f:.6g} is empty")
    gen = as_generator(rng)
    w = ws.weights[:Nf]
    W = total_weight(ws)
    pf = min(f * f / W, 1.0)
    gu, gv, cu, cv = [], [], [], []
    rows = np.arange(Nf, dtype=np.int64)
    row_len = Nf - 1 - rows
    start = 0
    while start < Nf - 1:
        # take whole rows until the block budget is spent
        stop = start + 1
        budget = row_len[start]
        while stop < Nf - 1 and budget + row_len[stop] <= block:
            budget += row_len[stop]
            stop += 1
        lens = row_len[start:stop]
        i = np.repeat(rows[start:stop], lens)
        j = np.arange(lens.sum()) - np.repeat(np.cumsum(lens) - lens, lens) + i + 1
        U = gen.random(i.size)
        pij = np.minimum(w[i] * w[j] / W, 1.0)
        g_hit = U < pf
        c_hit = U < pij
        gu.append(i[g_hit]); gv.append(j[g_hit])
        cu.append(i[c_hit]); cv.append(j[c_hit])
        start = stop
    cat = lambda parts: np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    gnp = Graph.from_edges(Nf, cat(gu), cat(gv))
    cl = Graph.from_edges(Nf, cat(cu), cat(cv))
    return gnp, cl
