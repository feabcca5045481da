"""Closed-form thresholds for bootstrap percolation on CL(w) and G(N, p)."""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import bisect

from ._errors import ValidationError
from .weights import WeightSequence, build_weights, check_zeta, moment_sum, total_weight


class Regime(str, enum.Enum):
    SHARP_CASE_I = "SharpCaseI"
    SHARP_CASE_II = "SharpCaseII"
    GAP_CASE_III = "GapCaseIII"


class PowerOfN(NamedTuple):
    value: float
    exponent: float


def _check(n=None, beta=None, zeta=None, r=None):
    """Validate whichever parameters are given; returns the (possibly snapped) zeta."""
    if n is not None and not n >= 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if beta is not None and not 2.0 < beta < 3.0:
        raise ValidationError(f"beta must lie in (2,3), got {beta}")
    if zeta is not None and beta is not None:
        zeta = check_zeta(zeta, beta)
    if r is not None and (int(r) != r or r < 2):
        raise ValidationError(f"r must be an integer >= 2, got {r}")
    return zeta


def gap_boundary(beta: float, r: int) -> float:
    """(r-1)/(2r-beta+1): below it only the a_c / a_c^+ gap result is available."""
    return (r - 1.0) / (2.0 * r - beta + 1.0)


def critical_a(n: float, beta: float, zeta: float, r: int) -> PowerOfN:
    """a_c(n) = n^((r(1-zeta) + zeta(beta-1) - 1)/r)."""
    zeta = _check(n, beta, zeta, r)
    e = (r * (1.0 - zeta) + zeta * (beta - 1.0) - 1.0) / r
    return PowerOfN(float(n) ** e, e)


def critical_a_plus(n: float, beta: float, zeta: float, r: int) -> PowerOfN:
    """a_c^+(n) = n^(1 - zeta (r-beta+2)/(r-1)), defined for zeta at or under the gap boundary."""
    _check(n, beta, None, r)
    b = gap_boundary(beta, r)
    if not 0.0 < zeta <= b:
        raise ValidationError(
            f"a_c^+ is defined for 0 < zeta <= (r-1)/(2r-beta+1) = {b:.6g}, got {zeta}; "
            "use critical_a in the sharp regime"
        )
    e = 1.0 - zeta * (r - beta + 2.0) / (r - 1.0)
    return PowerOfN(float(n) ** e, e)


def classify_regime(beta: float, zeta: float, r: int) -> Regime:
    zeta = _check(None, beta, zeta, r)
    if zeta > 0.5:
        return Regime.SHARP_CASE_I
    if zeta > gap_boundary(beta, r):
        return Regime.SHARP_CASE_II
    return Regime.GAP_CASE_III


@dataclass(frozen=True)
class ErThresholds:
    N: int
    p: float
    r: int
    t_c: float
    a_c: float
    b_c: float


def er_thresholds(N: int, p: float, r: int) -> ErThresholds:
    """T_c, A_c = (1-1/r) T_c and B_c for bootstrap percolation on G(N, p)."""
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p must lie in (0,1), got {p}")
    if not N >= 1:
        raise ValidationError(f"N must be >= 1, got {N}")
    _check(r=r)
    log_fact = math.lgamma(r)
    t_c = math.exp((log_fact - math.log(N) - r * math.log(p)) / (r - 1))
    a_c = (1.0 - 1.0 / r) * t_c
    b_c = math.exp(math.log(N) + (r - 1) * math.log(p * N) - log_fact - p * N)
    return ErThresholds(int(N), float(p), int(r), t_c, a_c, b_c)


def phi(alpha: float, r: int) -> float:
    """The root in [0,1] of r x - x^r = (r-1) alpha."""
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must lie in [0,1], got {alpha}")
    _check(r=r)
    if alpha == 0.0:
        return 0.0
    if alpha == 1.0:
        return 1.0
    h = lambda x: r * x - x ** r - (r - 1) * alpha
    return bisect(h, 0.0, 1.0, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=2000)


def phi1(alpha: float, r: int) -> float:
    """r/(r-1) phi(alpha)/alpha, continued by 1 at alpha = 0."""
    if alpha == 0.0:
        _check(r=r)
        return 1.0
    return r / (r - 1.0) * phi(alpha, r) / alpha


class FChoice(NamedTuple):
    value: float
    below_cap: bool | None = None      # f < n^zeta
    a_below_kernel: bool | None = None  # a < N_f
    af_below_n: bool | None = None      # a f < n
    kernel_size: int | None = None


def f_choice(n: float, W_total: float, a: float, gamma1: float, beta: float, r: int,
             ws: WeightSequence | None = None) -> FChoice:
    """f(n) = [(r-1)! W^r / (gamma1 n a^(r-1))]^(1/(2r-beta+1)).

    With ``ws`` the validity flags are evaluated on that instance.
    """
    for name, v in (("n", n), ("W_total", W_total), ("a", a), ("gamma1", gamma1)):
        if not v > 0:
            raise ValidationError(f"{name} must be positive, got {v}")
    _check(None, beta, None, r)
    log_val = (math.lgamma(r) + r * math.log(W_total) - math.log(gamma1) - math.log(n)
               - (r - 1) * math.log(a)) / (2.0 * r - beta + 1.0)
    f = math.exp(log_val)
    if ws is None:
        return FChoice(f)
    nf = ws.count_at_least(f)
    return FChoice(f, f < ws.cap, a < nf, a * f < n, nf)


def p_inf_raw(a: float, f: float, x0: float, W_total: float, r: int) -> float:
    """(1/(2 r!)) (a f x0 / W)^r, unclamped."""
    return (a * f * x0 / W_total) ** r / (2.0 * math.factorial(r))


def p_inf(a: float, f: float, x0: float, W_total: float, r: int) -> float:
    """Lower bound on a kernel vertex's chance of r seeded neighbours, clamped to [0, 1]."""
    return min(p_inf_raw(a, f, x0, W_total, r), 1.0)


def first_moment_term(w: float, n: float, a: float, r: int) -> float:
    """(e w a / (r n))^r, the bound on P(vertex of weight w has r seeded neighbours)."""
    return (math.e * w * a / (r * n)) ** r


def first_moment_bound(ws: WeightSequence, a: float, r: int) -> float:
    """Upper bound on E[#vertices with >= r seeded neighbours] under Bernoulli(a/n) seeding."""
    if a > ws.n:
        raise ValidationError(f"a={a} exceeds n={ws.n}")
    if a == 0:
        return 0.0
    return (math.e * a / (r * ws.n)) ** r * moment_sum(ws, r)


@dataclass(frozen=True)
class Witness:
    """Numeric evaluation of the supercritical argument on one instance."""

    regime: Regime
    a: float
    omega: float
    f_omega: float
    f: float
    kernel_size: int
    p_f: float
    p_inf: float
    clamped: bool
    nf_p_inf: float
    nf_pf_r: float
    t_c: float | None
    condition: str
    satisfied: bool
    note: str = ""

    def to_json(self) -> dict:
        d = asdict(self)
        d["regime"] = self.regime.value
        return d


def _witness_at(ws, a, r, f, regime, W):
    nf = ws.count_at_least(f)
    pf = min(f * f / W, 1.0)
    raw = p_inf_raw(a, f, ws.x0, W, r)
    pin = min(raw, 1.0)
    nfpi = nf * pin
    nfpfr = nf * pf ** r
    tc = None
    if nf >= 1 and 0.0 < pf < 1.0:
        tc = er_thresholds(nf, pf, r).t_c
    if regime is Regime.SHARP_CASE_I:
        ok = nfpi >= r
    elif regime is Regime.SHARP_CASE_II:
        ok = nfpi >= r and nfpfr >= 1.0
    else:
        ok = tc is not None and nfpi >= tc
    return nf, pf, pin, raw > 1.0, nfpi, nfpfr, tc, ok


_CONDITIONS = {
    Regime.SHARP_CASE_I: "N_f p_Inf >= r (Ker_f is a clique)",
    Regime.SHARP_CASE_II: "N_f p_Inf >= r and N_f p_f^r >= 1 (dense G(N_f, p_f))",
    Regime.GAP_CASE_III: "N_f p_Inf >= T_c(N_f, p_f)",
}


def supercritical_witness(ws: WeightSequence, a: float, r: int, grid: int = 400) -> Witness:
    """Evaluate the supercritical chain of bounds for seed size ``a``.

    The margin omega is a/a_c (the square root of a/a_c^+ in the gap regime) and the
    reference cutoff is f = n^zeta / omega^(1+1/r). Because omega is only an
    asymptotic device, the cutoff used for the verdict is the one maximising
    the regime's margin over a log grid in [x0, min(n^zeta, W/(a x0))], the
    range where the first-round infection bound is meaningful.
    """
    if ws.beta is None:
        raise ValidationError("the witness needs the power-law exponent beta")
    _check(None, ws.beta, None, r)
    regime = classify_regime(ws.beta, ws.zeta, r)
    n, W = ws.n, total_weight(ws)
    if regime is Regime.GAP_CASE_III:
        omega = math.sqrt(a / critical_a_plus(n, ws.beta, ws.zeta, r).value)
    else:
        omega = a / critical_a(n, ws.beta, ws.zeta, r).value
    f_omega = ws.cap / max(omega, 1.0) ** (1.0 + 1.0 / r)
    if a <= 0:
        return Witness(regime, a, omega, f_omega, f_omega, ws.count_at_least(f_omega), 0.0, 0.0,
                       False, 0.0, 0.0, None, _CONDITIONS[regime], False, "no seeds")
    hi = min(ws.cap, W / (a * ws.x0))
    lo = ws.x0
    if hi < lo:
        hi = lo
    cands = np.unique(np.concatenate([np.geomspace(lo, hi, grid), [min(max(f_omega, lo), hi)]]))
    best = None
    for f in cands:
        res = _witness_at(ws, a, r, float(f), regime, W)
        margin = _margin(regime, res, r)
        if best is None or margin > best[0]:
            best = (margin, float(f), res)
    _, f, (nf, pf, pin, clamped, nfpi, nfpfr, tc, ok) = best
    note = "kernel empty" if nf == 0 else ""
    return Witness(regime, a, omega, f_omega, f, nf, pf, pin, clamped, nfpi, nfpfr, tc,
                   _CONDITIONS[regime], bool(ok and nf > 0), note)


def _margin(regime, res, r):
    nf, pf, pin, clamped, nfpi, nfpfr, tc, ok = res
    if nf == 0:
        return -math.inf
    if regime is Regime.SHARP_CASE_I:
        return nfpi / r
    if regime is Regime.SHARP_CASE_II:
        return min(nfpi / r, nfpfr)
    return nfpi / tc if tc else -math.inf


@dataclass(frozen=True)
class ThresholdReport:
    n: int
    beta: float
    zeta: float
    r: int
    a_c: float
    a_c_exponent: float
    regime: Regime
    a_c_plus: float | None = None
    a_c_plus_exponent: float | None = None
    a: float | None = None
    x0: float | None = None
    gamma1: float | None = None
    W_total: float | None = None
    f_n: float | None = None
    p_inf: float | None = None
    p_inf_clamped: bool = False
    first_moment_bound: float | None = None

    def to_json(self) -> dict:
        d = asdict(self)
        d["regime"] = self.regime.value
        return d


def threshold_report(n: int, beta: float, zeta: float, r: int, a: float | None = None,
                     x0: float = 1.0, gamma1: float | None = None) -> ThresholdReport:
    """Every closed-form quantity at one parameter point.

    Quantities that need a weight sequence (W, f(n), p_Inf, first-moment
    bound) are evaluated on the canonical family and only when ``a`` is given.
    """
    zeta = _check(n, beta, zeta, r)
    ac = critical_a(n, beta, zeta, r)
    regime = classify_regime(beta, zeta, r)
    plus = critical_a_plus(n, beta, zeta, r) if regime is Regime.GAP_CASE_III else None
    fields = dict(n=int(n), beta=beta, zeta=zeta, r=int(r), a_c=ac.value, a_c_exponent=ac.exponent,
                  regime=regime)
    if plus is not None:
        fields.update(a_c_plus=plus.value, a_c_plus_exponent=plus.exponent)
    if a is not None:
        if not 0 < a <= n:
            raise ValidationError(f"a must lie in (0, n], got {a}")
        ws = build_weights(int(n), beta, zeta, x0)
        W = total_weight(ws)
        g1 = ws.gamma1 if gamma1 is None else gamma1
        f = f_choice(n, W, a, g1, beta, r).value
        raw = p_inf_raw(a, f, x0, W, r)
        fm = first_moment_bound(ws, a, r)
        fields.update(a=a, x0=x0, gamma1=g1, W_total=W, f_n=f, p_inf=min(raw, 1.0),
                      p_inf_clamped=raw > 1.0, first_moment_bound=fm)
    return ThresholdReport(**fields)
