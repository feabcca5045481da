"""Immutable undirected simple graphs in compressed sparse row form."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True, eq=False)
class Graph:
    """Vertices 0..n-1; ``indices[indptr[v]:indptr[v+1]]`` are v's sorted neighbours."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        for a in (self.indptr, self.indices):
            a.flags.writeable = False

    @classmethod
    def from_edges(cls, n: int, u, v) -> "Graph":
        """Build from endpoint arrays; drops self-loops and duplicate pairs."""
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise ValueError("endpoint arrays differ in length")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise IndexError(f"edge endpoint outside [0, {n})")
        keep = u != v
        u, v = u[keep], v[keep]
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        key = np.unique(src * n + dst)
        src, dst = key // n, key % n
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(int(n), indptr, dst.astype(np.int64))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls.from_edges(n, [], [])

    @property
    def m(self) -> int:
        return int(self.indices.size // 2)

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < nb.size and nb[k] == v)

    def edges(self) -> np.ndarray:
        """(m, 2) array of pairs u < v, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(a), int(b)) for a, b in self.edges()}

    def validate(self) -> None:
        """Raise AssertionError unless the CSR arrays describe a simple undirected graph."""
        assert self.indptr.shape == (self.n + 1,)
        assert self.indptr[0] == 0 and self.indptr[-1] == self.indices.size
        assert np.all(np.diff(self.indptr) >= 0)
        if self.indices.size:
            assert self.indices.min() >= 0 and self.indices.max() < self.n
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        assert not np.any(src == self.indices), "self-loop"
        # strictly increasing within each row <=> sorted and no duplicates
        same_row = src[1:] == src[:-1]
        assert np.all(self.indices[1:][same_row] > self.indices[:-1][same_row]), "unsorted or duplicate"
        fwd = np.sort(src * self.n + self.indices)
        rev = np.sort(self.indices * self.n + src)
        assert np.array_equal(fwd, rev), "asymmetric adjacency"

    def gather(self, vertices: np.ndarray) -> np.ndarray:
        """Concatenated neighbour lists of ``vertices`` (with multiplicity)."""
        vertices = np.asarray(vertices, dtype=np.int64)
        if vertices.size == 0:
            return np.empty(0, dtype=np.int64)
        starts = self.indptr[vertices]
        lens = self.indptr[vertices + 1] - starts
        total = int(lens.sum())
        if total == 0:
            return np.empty(0, dtype=np.int64)
        offs = np.repeat(starts - np.cumsum(lens) + lens, lens)
        return self.indices[offs + np.arange(total)]

    def write_edgelist(self, path) -> None:
        e = self.edges()
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# n={self.n} m={self.m}\n")
            np.savetxt(fh, e, fmt="%d")

    @classmethod
    def read_edgelist(cls, path) -> "Graph":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().split()
            meta = dict(tok.split("=", 1) for tok in header[1:] if "=" in tok)
            if not header or header[0] != "#" or "n" not in meta:
                raise ValueError(f"{path}: missing '# n=<n> m=<m>' header")
            data = np.loadtxt(fh, dtype=np.int64, ndmin=2)
        n = int(meta["n"])
        if data.size == 0:
            data = np.empty((0, 2), dtype=np.int64)
        g = cls.from_edges(n, data[:, 0], data[:, 1])
        if "m" in meta and int(meta["m"]) != g.m:
            raise ValueError(f"{path}: header says m={meta['m']} but file holds {g.m} edges")
        return g


def induced_subgraph(g: Graph, s) -> Graph:
    """Subgraph on ``s``, relabelled 0..|s|-1 in increasing vertex order."""
    s = np.unique(np.asarray(list(s) if isinstance(s, (set, frozenset)) else s, dtype=np.int64))
    if s.size and (s[0] < 0 or s[-1] >= g.n):
        raise IndexError(f"vertex ids must lie in [0, {g.n})")
    label = np.full(g.n, -1, dtype=np.int64)
    label[s] = np.arange(s.size)
    e = g.edges()
    if e.size:
        a, b = label[e[:, 0]], label[e[:, 1]]
        keep = (a >= 0) & (b >= 0)
        return Graph.from_edges(s.size, a[keep], b[keep])
    return Graph.empty(s.size)
