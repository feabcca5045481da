"""Deterministic power-law weight sequences, kernels and band decompositions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._errors import ValidationError


# zeta values this close above 1/(beta-1) are read as a rounded 1/(beta-1)
ZETA_SNAP = 5e-4


def _check_beta(beta: float) -> None:
    if not 2.0 < beta < 3.0:
        raise ValidationError(f"beta must lie in (2,3), got {beta}")


def check_zeta(zeta: float, beta: float) -> float:
    """Validate 0 < zeta <= 1/(beta-1) and return it, snapped onto the bound if rounded."""
    zmax = 1.0 / (beta - 1.0)
    if zmax < zeta <= zmax + ZETA_SNAP:
        return zmax
    if not 0.0 < zeta <= zmax:
        raise ValidationError(f"zeta must lie in (0, 1/(beta-1)] = (0, {zmax:.6g}], got {zeta}")
    return float(zeta)


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Nonincreasing vertex weights with their power-law metadata.

    ``gamma1`` and ``gamma2`` are measured from the weights themselves (see
    :func:`sandwich_constants`), so the tail sandwich holds exactly for the
    instance. ``beta`` may be ``None`` for sequences read from disk whose
    exponent is unknown; the sandwich constants are then ``None`` as well.
    """

    weights: np.ndarray
    beta: float | None
    zeta: float
    x0: float
    gamma1: float | None = None
    gamma2: float | None = None
    plateau: int = 0
    family: str = "custom"
    _desc: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise ValidationError("weights must be a nonempty 1-d sequence")
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise ValidationError("weights must be finite and positive")
        if np.any(np.diff(w) > 0):
            raise ValidationError("weights must be sorted nonincreasing")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        # ascending copy for searchsorted
        asc = w[::-1].copy()
        asc.flags.writeable = False
        object.__setattr__(self, "_desc", asc)

    @property
    def n(self) -> int:
        return int(self.weights.size)

    @property
    def max_weight(self) -> float:
        return float(self.weights[0])

    @property
    def cap(self) -> float:
        """The maximum admissible weight n**zeta."""
        return float(self.n) ** self.zeta

    def __len__(self):
        return self.n

    def count_at_least(self, x: float) -> int:
        """Number of vertices with weight >= x."""
        return self.n - int(np.searchsorted(self._desc, x, side="left"))

    @classmethod
    def from_weights(cls, weights, beta: float | None = None) -> "WeightSequence":
        """Wrap an explicit nonincreasing sequence, inferring x0 and zeta."""
        w = np.asarray(weights, dtype=np.float64)
        n = w.size
        zeta = math.log(w[0]) / math.log(n) if n > 1 else 0.0
        x0 = float(w[-1]) if n else 0.0
        g1 = g2 = None
        if beta is not None:
            _check_beta(beta)
            g1, g2 = sandwich_constants(w, beta, x0)
        plateau = int(np.count_nonzero(w == w[0])) if n else 0
        return cls(w, beta, zeta, x0, g1, g2, plateau)

    def save(self, path) -> None:
        """One weight per line; line i holds the weight of vertex i."""
        np.savetxt(path, self.weights, fmt="%.17g")

    @classmethod
    def load(cls, path, beta: float | None = None) -> "WeightSequence":
        w = np.loadtxt(Path(path), dtype=np.float64, ndmin=1)
        return cls.from_weights(w, beta=beta)


def sandwich_constants(weights, beta: float, x0: float) -> tuple[float, float]:
    """Tightest (gamma1, gamma2) with gamma1 x^(1-beta) <= tail(x) <= gamma2 x^(1-beta).

    The tail #{w_i >= x}/n is a step function equal to c_k/n on each interval
    (v_{k+1}, v_k] between consecutive distinct weights, so the supremum of
    tail(x) x^(beta-1) is attained at the right end and the infimum is
    approached at the left end of every interval. The range is [x0, max w].
    """
    w = np.asarray(weights, dtype=np.float64)
    n = w.size
    vals, counts = np.unique(w, return_counts=True)
    vals = vals[::-1]
    cum = np.cumsum(counts[::-1]) / n
    lefts = np.empty_like(vals)
    lefts[:-1] = vals[1:]
    lefts[-1] = x0
    lefts = np.maximum(lefts, x0)
    keep = vals >= x0
    e = beta - 1.0
    gamma2 = float(np.max(cum[keep] * vals[keep] ** e))
    gamma1 = float(np.min(cum[keep] * lefts[keep] ** e))
    return gamma1, gamma2


def build_weights(n: int, beta: float, zeta: float, x0: float = 1.0) -> WeightSequence:
    """Canonical family w_i = min(n^zeta, x0 (n/i)^(1/(beta-1))), i = 1..n."""
    if int(n) != n or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n}")
    n = int(n)
    _check_beta(beta)
    zeta = check_zeta(zeta, beta)
    if not x0 > 0:
        raise ValidationError(f"x0 must be positive, got {x0}")
    cap = float(n) ** zeta
    if x0 > cap:
        raise ValidationError(f"x0={x0} exceeds the maximum weight n^zeta={cap:.6g}")
    i = np.arange(1, n + 1, dtype=np.float64)
    raw = x0 * (n / i) ** (1.0 / (beta - 1.0))
    w = np.minimum(raw, cap)
    plateau = int(np.count_nonzero(raw >= cap))
    g1, g2 = sandwich_constants(w, beta, x0)
    return WeightSequence(w, beta, zeta, x0, g1, g2, plateau, "canonical")


def chung_lu_offset(n: int, beta: float, d: float, max_weight: float) -> float:
    """The offset i0 for which the first Chung-Lu weight equals ``max_weight``."""
    c = d * (beta - 2.0) / (beta - 1.0)
    return n * (c / max_weight) ** (beta - 1.0) - 1.0


def alt_weights_chung_lu(n: int, beta: float, d: float, i0: float) -> WeightSequence:
    """w_i = d (beta-2)/(beta-1) (n/(i+i0))^(1/(beta-1)), i = 1..n.

    Average weight close to ``d``; the offset ``i0`` controls the maximum.
    """
    if int(n) != n or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n}")
    n = int(n)
    _check_beta(beta)
    if not d > 0:
        raise ValidationError(f"d must be positive, got {d}")
    if i0 < 0:
        raise ValidationError(f"i0 must be non-negative, got {i0}")
    i = np.arange(1, n + 1, dtype=np.float64)
    w = d * (beta - 2.0) / (beta - 1.0) * (n / (i + i0)) ** (1.0 / (beta - 1.0))
    limit = float(n) ** (1.0 / (beta - 1.0))
    if w[0] > limit * (1 + 1e-12):
        raise ValidationError(
            f"implied max weight {w[0]:.6g} exceeds n^(1/(beta-1)) = {limit:.6g}; increase i0"
        )
    zeta = math.log(w[0]) / math.log(n) if n > 1 else 0.0
    x0 = float(w[-1])
    g1, g2 = sandwich_constants(w, beta, x0)
    plateau = int(np.count_nonzero(w == w[0]))
    return WeightSequence(w, beta, zeta, x0, g1, g2, plateau, "chung-lu")


def tail(ws: WeightSequence, x: float) -> float:
    """Fraction of vertices with weight >= x."""
    if not x > 0:
        raise ValidationError(f"x must be positive, got {x}")
    return ws.count_at_least(x) / ws.n


def total_weight(ws: WeightSequence, subset=None) -> float:
    if subset is None:
        return float(ws.weights.sum())
    idx = np.asarray(list(subset) if isinstance(subset, (set, frozenset)) else subset, dtype=np.int64)
    if idx.size == 0:
        return 0.0
    if idx.min() < 0 or idx.max() >= ws.n:
        raise IndexError(f"vertex ids must lie in [0, {ws.n})")
    return float(ws.weights[idx].sum())


def moment_sum(ws: WeightSequence, r: int) -> float:
    """Sum of w_i**r."""
    if r < 1:
        raise ValidationError(f"r must be >= 1, got {r}")
    return float(np.sum(ws.weights ** r))


def kernel(ws: WeightSequence, f: float) -> np.ndarray:
    """Vertices of weight >= f. Always a prefix 0..N_f-1 since weights are sorted."""
    if not f > 0:
        raise ValidationError(f"f must be positive, got {f}")
    return np.arange(ws.count_at_least(f), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class BandDecomposition:
    C: float
    f0: float
    psi: float
    beta: float
    cutoffs: tuple[float, ...]
    bands: tuple[np.ndarray, ...]

    @property
    def T(self) -> int:
        return len(self.cutoffs) - 1

    @property
    def floor(self) -> float:
        return self.C ** (2.0 / (3.0 - self.beta))

    def exponent(self, j: int) -> float:
        """g^{(j)}(1) for g(x) = (beta-2) x + psi."""
        x = 1.0
        for _ in range(j):
            x = (self.beta - 2.0) * x + self.psi
        return x

    def iterate_cutoff(self, j: int) -> float:
        """The j-th cutoff written as f0 ** g^{(j)}(1)."""
        return self.f0 ** self.exponent(j)


def band_decomposition(ws: WeightSequence, f0: float, C: float) -> BandDecomposition:
    """Split Ker_C into the bands Lambda_0..Lambda_{T+1}.

    Cutoffs follow f_{j+1} = f_j^(beta-2) C and stop before dropping under
    the floor C^(2/(3-beta)).
    """
    beta = ws.beta
    if beta is None:
        raise ValidationError("band decomposition needs the power-law exponent beta")
    if not C > 1:
        raise ValidationError(f"C must exceed 1, got {C}")
    floor = C ** (2.0 / (3.0 - beta))
    if f0 < floor:
        raise ValidationError(
            f"kernel cutoff below band floor: f0={f0:.6g} < C^(2/(3-beta))={floor:.6g}"
        )
    if f0 > ws.cap * (1 + 1e-12):
        raise ValidationError(f"f0={f0:.6g} exceeds n^zeta={ws.cap:.6g}")
    cutoffs = [float(f0)]
    while True:
        nxt = cutoffs[-1] ** (beta - 2.0) * C
        if nxt < floor:
            break
        cutoffs.append(nxt)
    counts = [ws.count_at_least(f) for f in cutoffs]
    bands = [np.arange(counts[0], dtype=np.int64)]
    for j in range(1, len(cutoffs)):
        bands.append(np.arange(counts[j - 1], counts[j], dtype=np.int64))
    bands.append(np.arange(counts[-1], max(counts[-1], ws.count_at_least(C)), dtype=np.int64))
    psi = math.log(C) / math.log(f0)
    return BandDecomposition(float(C), float(f0), psi, float(beta), tuple(cutoffs), tuple(bands))
