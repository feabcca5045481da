"""Bootstrap percolation: seed selection, the O(n + m) engine and a brute-force oracle."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ._errors import ValidationError
from .graph import Graph
from .rng import as_generator
from .weights import WeightSequence, kernel

STRATEGIES = ("explicit", "uniform", "bernoulli", "smallest", "kernel")


@dataclass(frozen=True)
class SeedSpec:
    """How the initially infected set A_0 is drawn.

    ``uniform``: a uniformly random a-subset of all vertices.
    ``bernoulli``: each vertex independently with probability a/n.
    ``smallest``: the a vertices of smallest weight.
    ``kernel``: a uniformly random a-subset of Ker_f.
    ``explicit``: the given vertex set.
    """

    strategy: str
    a: float = 0
    f: float | None = None
    vertices: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValidationError(f"unknown seed strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if self.a < 0:
            raise ValidationError(f"a must be non-negative, got {self.a}")
        if self.strategy == "kernel" and (self.f is None or self.f <= 0):
            raise ValidationError("kernel strategy needs a positive f")

    @classmethod
    def explicit(cls, vertices) -> "SeedSpec":
        return cls("explicit", vertices=tuple(sorted(int(v) for v in vertices)))

    @classmethod
    def uniform(cls, a) -> "SeedSpec":
        return cls("uniform", a)

    @classmethod
    def bernoulli(cls, a) -> "SeedSpec":
        return cls("bernoulli", a)

    @classmethod
    def smallest(cls, a) -> "SeedSpec":
        return cls("smallest", a)

    @classmethod
    def in_kernel(cls, f, a) -> "SeedSpec":
        return cls("kernel", a, f=f)


def _whole(a, what):
    if int(a) != a:
        raise ValidationError(f"{what} strategy needs an integer a, got {a}")
    return int(a)


def select_seeds(spec: SeedSpec, n: int, ws: WeightSequence | None = None, rng=None) -> np.ndarray:
    """Sorted array of initially infected vertices."""
    if ws is not None and ws.n != n:
        raise ValidationError(f"weight sequence has {ws.n} vertices, graph has {n}")
    s = spec.strategy
    if s == "explicit":
        seed = np.array(spec.vertices, dtype=np.int64)
        if seed.size and (seed.min() < 0 or seed.max() >= n):
            raise IndexError(f"seed vertices must lie in [0, {n})")
        return np.unique(seed)
    if s == "bernoulli":
        if spec.a > n:
            raise ValidationError(f"a={spec.a} exceeds n={n}")
        gen = as_generator(rng)
        return np.flatnonzero(gen.random(n) < spec.a / n).astype(np.int64)
    a = _whole(spec.a, s)
    if s == "uniform":
        if a > n:
            raise ValidationError(f"a={a} exceeds n={n}")
        gen = as_generator(rng)
        return np.sort(gen.choice(n, size=a, replace=False)).astype(np.int64)
    if ws is None:
        raise ValidationError(f"{s} strategy needs a weight sequence")
    if s == "smallest":
        if a > n:
            raise ValidationError(f"a={a} exceeds n={n}")
        # weights are nonincreasing, so the smallest sit at the end
        return np.arange(n - a, n, dtype=np.int64)
    ker = kernel(ws, spec.f)
    if a > ker.size:
        raise ValidationError(f"a={a} exceeds the kernel size {ker.size} at f={spec.f:.6g}")
    gen = as_generator(rng)
    return np.sort(gen.choice(ker, size=a, replace=False)).astype(np.int64)


@dataclass(frozen=True, eq=False)
class PercolationTrace:
    r: int
    seed: np.ndarray
    rounds: list[np.ndarray]
    final: np.ndarray
    infection_round: np.ndarray = field(repr=False)

    @property
    def final_size(self) -> int:
        return int(self.final.size)

    @property
    def n_rounds(self) -> int:
        return len(self.rounds)

    @property
    def no_evolution(self) -> bool:
        return self.final.size == self.seed.size

    def to_json(self) -> dict:
        rounds_hist = np.bincount(self.infection_round[self.infection_round >= 0])
        return {
            "r": self.r,
            "seed": self.seed.tolist(),
            "rounds": [x.tolist() for x in self.rounds],
            "final_size": self.final_size,
            "infection_round_histogram": {str(k): int(c) for k, c in enumerate(rounds_hist) if c},
        }


def _check_run_args(g: Graph, seed, r):
    if r < 1:
        raise ValidationError(f"r must be >= 1, got {r}")
    if r == 1:
        warnings.warn("r=1 reduces bootstrap percolation to connectivity", stacklevel=3)
    seed = np.unique(np.asarray(list(seed) if isinstance(seed, (set, frozenset)) else seed, dtype=np.int64))
    if seed.size and (seed[0] < 0 or seed[-1] >= g.n):
        raise IndexError(f"seed vertices must lie in [0, {g.n})")
    return seed


def run_bootstrap(g: Graph, seed, r: int, *, shuffle=None) -> PercolationTrace:
    """Run the process to its fixed point.

    Rounds are synchronous: every vertex that has reached ``r`` infected
    neighbours by the end of a round flips at the start of the next. Passing
    a generator as ``shuffle`` switches to an in-place worklist processed in
    random order, where infections take effect immediately; the final set is
    the same either way.
    """
    seed = _check_run_args(g, seed, r)
    if shuffle is not None:
        return _run_shuffled(g, seed, r, as_generator(shuffle))
    n = g.n
    infected = np.zeros(n, dtype=bool)
    infected[seed] = True
    when = np.full(n, -1, dtype=np.int64)
    when[seed] = 0
    hits = np.zeros(n, dtype=np.int64)
    rounds = []
    frontier = seed
    while frontier.size:
        nb = g.gather(frontier)
        np.add.at(hits, nb, 1)
        cand = np.unique(nb)
        new = cand[(hits[cand] >= r) & ~infected[cand]]
        if new.size == 0:
            break
        infected[new] = True
        when[new] = len(rounds) + 1
        rounds.append(new)
        frontier = new
    return PercolationTrace(int(r), seed, rounds, np.flatnonzero(infected), when)


def _run_shuffled(g: Graph, seed, r, gen) -> PercolationTrace:
    # Random-order worklist; a vertex's round is one past the round of the
    # vertex whose processing pushed it over the threshold.
    n = g.n
    infected = np.zeros(n, dtype=bool)
    infected[seed] = True
    when = np.full(n, -1, dtype=np.int64)
    when[seed] = 0
    hits = np.zeros(n, dtype=np.int64)
    pool = [int(v) for v in seed]
    while pool:
        k = int(gen.integers(len(pool)))
        pool[k], pool[-1] = pool[-1], pool[k]
        v = pool.pop()
        for u in g.neighbors(v):
            hits[u] += 1
            if not infected[u] and hits[u] >= r:
                infected[u] = True
                when[u] = when[v] + 1
                pool.append(int(u))
    depth = int(when.max()) if n else 0
    rounds = [np.flatnonzero(when == k) for k in range(1, depth + 1)]
    return PercolationTrace(int(r), seed, rounds, np.flatnonzero(infected), when)


def brute_force_bootstrap(g: Graph, seed, r: int) -> set[int]:
    """Rescan every vertex until nothing changes. Test oracle for small graphs."""
    infected = {int(v) for v in seed}
    changed = True
    while changed:
        changed = False
        for v in range(g.n):
            if v in infected:
                continue
            if sum(1 for u in g.neighbors(v) if int(u) in infected) >= r:
                infected.add(v)
                changed = True
    return infected


def count_neighbors_in_set(g: Graph, v: int, s) -> int:
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} outside [0, {g.n})")
    s = np.asarray(list(s) if isinstance(s, (set, frozenset)) else s, dtype=np.int64)
    return int(np.isin(g.neighbors(v), s).sum())


def certify_fixed_point(g: Graph, trace: PercolationTrace) -> None:
    """Re-check the fixed-point conditions of a trace; raise AssertionError on failure."""
    final = trace.final
    in_final = np.zeros(g.n, dtype=bool)
    in_final[final] = True
    assert np.all(in_final[trace.seed])
    pieces = [trace.seed, *trace.rounds]
    joined = np.concatenate(pieces) if pieces else np.empty(0, dtype=np.int64)
    assert joined.size == np.unique(joined).size, "rounds overlap"
    assert np.array_equal(np.sort(joined), final)
    assert trace.n_rounds <= g.n
    seeded = np.zeros(g.n, dtype=bool)
    seeded[trace.seed] = True
    for v in range(g.n):
        k = count_neighbors_in_set(g, v, final)
        if in_final[v] and not seeded[v]:
            assert k >= trace.r, f"vertex {v} infected with {k} < r infected neighbours"
        elif not in_final[v]:
            assert k < trace.r, f"vertex {v} left uninfected with {k} >= r infected neighbours"
