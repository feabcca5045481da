"""Monte Carlo sweeps over (n, a, replica) grids with reproducible streams."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np
from scipy.stats import binomtest

from ._errors import ValidationError
from .graph import Graph
from .graphgen import sample_chung_lu, sample_gnp
from .percolation import PercolationTrace, SeedSpec, run_bootstrap, select_seeds
from .rng import RngStream, derive_stream_id
from .thresholds import critical_a, er_thresholds
from .weights import WeightSequence, alt_weights_chung_lu, build_weights, kernel

log = logging.getLogger(__name__)

CSV_COLUMNS = ("n", "a", "replica", "graph_seed", "seed_seed", "r", "final_size", "rounds",
               "no_evolution", "kernel_fraction")

_GRAPH, _SEEDS = 1, 2
_MULT = re.compile(r"^\s*(?:([0-9.eE+-]+)\s*\*\s*)?a_c\s*$")


@dataclass(frozen=True)
class ModelSpec:
    """``chung_lu`` (beta, zeta, x0; or family 'chung-lu' with d, i0) or ``gnp`` (p)."""

    type: str
    beta: float | None = None
    zeta: float | None = None
    x0: float = 1.0
    family: str = "canonical"
    d: float | None = None
    i0: float | None = None
    p: float | None = None

    def __post_init__(self):
        if self.type == "chung_lu":
            if self.beta is None:
                raise ValidationError("model.beta: required for chung_lu")
            if self.family == "canonical" and self.zeta is None:
                raise ValidationError("model.zeta: required for the canonical family")
            if self.family == "chung-lu" and (self.d is None or self.i0 is None):
                raise ValidationError("model.d, model.i0: required for the chung-lu family")
            if self.family not in ("canonical", "chung-lu"):
                raise ValidationError(f"model.family: unknown family {self.family!r}")
        elif self.type == "gnp":
            if self.p is None:
                raise ValidationError("model.p: required for gnp")
        else:
            raise ValidationError(f"model.type: expected 'chung_lu' or 'gnp', got {self.type!r}")

    def weights(self, n: int) -> WeightSequence:
        if self.family == "chung-lu":
            return alt_weights_chung_lu(n, self.beta, self.d, self.i0)
        return build_weights(n, self.beta, self.zeta, self.x0)


@dataclass(frozen=True)
class SweepConfig:
    model: ModelSpec
    r: int
    seed_strategy: SeedSpec
    a_values: tuple
    n_values: tuple[int, ...]
    replicas: int = 1
    master_seed: int = 0
    output_path: str | None = None
    fixed_graph: bool = False
    kernel_C: float | None = None

    def __post_init__(self):
        if self.replicas < 1:
            raise ValidationError("replicas: must be >= 1")
        if int(self.r) != self.r or self.r < 1:
            raise ValidationError("r: must be a positive integer")
        if not self.n_values:
            raise ValidationError("n_values: must be nonempty")
        for k, a in enumerate(self.a_values):
            if isinstance(a, str):
                if not _MULT.match(a):
                    raise ValidationError(f"a_values[{k}]: expected a number or '<mult>*a_c', got {a!r}")
            elif a < 0:
                raise ValidationError(f"a_values[{k}]: must be non-negative")

    def to_json(self) -> dict:
        d = asdict(self)
        d["a_values"] = list(self.a_values)
        d["n_values"] = list(self.n_values)
        d["seed_strategy"]["vertices"] = list(self.seed_strategy.vertices)
        return d

    def resolve_a(self, n: int) -> list[float]:
        """Seed sizes at ``n``; '<mult>*a_c' entries become round(mult * a_c(n))."""
        out = []
        for a in self.a_values:
            if isinstance(a, str):
                mult = _MULT.match(a).group(1)
                out.append(float(round(float(mult or 1.0) * self.a_c(n))))
            else:
                out.append(float(a))
        return out

    def a_c(self, n: int) -> float:
        """a_c(n) for Chung-Lu models, A_c(N) for G(N, p)."""
        m = self.model
        if m.type == "gnp":
            return er_thresholds(n, m.p, self.r).a_c
        zeta = m.zeta if m.zeta is not None else m.weights(n).zeta
        return critical_a(n, m.beta, zeta, self.r).value


@dataclass(frozen=True)
class SweepRecord:
    n: int
    a: float
    replica: int
    graph_seed: int
    seed_seed: int
    r: int
    final_size: int
    rounds: int
    no_evolution: bool
    kernel_fraction: float | None = None

    @property
    def point(self) -> tuple[int, float]:
        return (self.n, self.a)


def _strict(cls, data: dict, path: str):
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: expected an object")
    known = {f.name for f in fields(cls)}
    extra = set(data) - known
    if extra:
        raise ValidationError(f"{path}: unknown keys {sorted(extra)}")
    return data


def config_from_dict(data: dict) -> SweepConfig:
    data = dict(_strict(SweepConfig, data, "config"))
    for key in ("model", "r", "seed_strategy", "a_values", "n_values"):
        if key not in data:
            raise ValidationError(f"config.{key}: missing")
    model = ModelSpec(**_strict(ModelSpec, data.pop("model"), "config.model"))
    ss = dict(_strict(SeedSpec, data.pop("seed_strategy"), "config.seed_strategy"))
    if "strategy" not in ss:
        raise ValidationError("config.seed_strategy.strategy: missing")
    ss["vertices"] = tuple(ss.get("vertices", ()))
    ss.setdefault("a", 0)
    try:
        seed = SeedSpec(**ss)
    except ValidationError as exc:
        raise ValidationError(f"config.seed_strategy: {exc}") from None
    if not isinstance(data["a_values"], list):
        raise ValidationError("config.a_values: expected a list")
    data["a_values"] = tuple(data["a_values"])
    data["n_values"] = tuple(int(v) for v in data["n_values"])
    return SweepConfig(model=model, seed_strategy=seed, **data)


def read_config(path) -> SweepConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: malformed JSON ({exc})") from None
    return config_from_dict(data)


def write_config(cfg: SweepConfig, path) -> None:
    Path(path).write_text(json.dumps(cfg.to_json(), indent=2) + "\n", encoding="utf-8")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(int(v)) if v.is_integer() else repr(v)
    return str(v)


def _row(rec: SweepRecord) -> list[str]:
    return [_fmt(getattr(rec, c)) for c in CSV_COLUMNS]


def write_csv(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in records:
            w.writerow(_row(rec))


def read_csv(path) -> list[SweepRecord]:
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        rd = csv.DictReader(fh)
        if tuple(rd.fieldnames or ()) != CSV_COLUMNS:
            raise ValidationError(f"{path}: expected columns {','.join(CSV_COLUMNS)}")
        for row in rd:
            out.append(SweepRecord(
                n=int(row["n"]), a=float(row["a"]), replica=int(row["replica"]),
                graph_seed=int(row["graph_seed"]), seed_seed=int(row["seed_seed"]), r=int(row["r"]),
                final_size=int(row["final_size"]), rounds=int(row["rounds"]),
                no_evolution=row["no_evolution"] == "1",
                kernel_fraction=float(row["kernel_fraction"]) if row["kernel_fraction"] else None,
            ))
    return out


def kernel_coverage(trace: PercolationTrace, ws: WeightSequence, C: float) -> float:
    """|A_f intersect Ker_C| / |Ker_C|."""
    if C > ws.cap * (1 + 1e-12):
        raise ValidationError(f"C={C:.6g} exceeds n^zeta={ws.cap:.6g}")
    k = kernel(ws, C).size
    if k == 0:
        raise ValidationError(f"kernel of C={C:.6g} is empty")
    # Ker_C is the prefix 0..k-1 and trace.final is sorted
    return int(np.searchsorted(trace.final, k)) / k


@dataclass
class _Task:
    n: int
    a: float
    replica: int
    graph_stream: RngStream
    seed_stream: RngStream


class _Model:
    """Per-n cache of weights so replicas share one immutable sequence."""

    def __init__(self, cfg: SweepConfig):
        self.cfg = cfg
        self._ws: dict[int, WeightSequence] = {}
        self._graphs: dict[tuple[int, int], Graph] = {}

    def weights(self, n):
        if self.cfg.model.type != "chung_lu":
            return None
        if n not in self._ws:
            self._ws[n] = self.cfg.model.weights(n)
        return self._ws[n]

    def graph(self, n, stream: RngStream) -> Graph:
        m = self.cfg.model
        if m.type == "gnp":
            return sample_gnp(n, m.p, stream)
        return sample_chung_lu(self.weights(n), stream)


def _tasks(cfg: SweepConfig, model: _Model):
    master = cfg.master_seed
    for n in cfg.n_values:
        model.weights(n)
        for a in cfg.resolve_a(n):
            if cfg.seed_strategy.strategy != "explicit" and a > n:
                log.warning("skipping grid point n=%d a=%g: a exceeds n", n, a)
                continue
            for rep in range(cfg.replicas):
                g_id = derive_stream_id(_GRAPH, n, 0 if cfg.fixed_graph else rep)
                s_id = derive_stream_id(_SEEDS, n, int(round(a * 1000)), rep)
                yield _Task(n, a, rep, RngStream(master, g_id), RngStream(master, s_id))


def _run_task(cfg: SweepConfig, model: _Model, task: _Task) -> SweepRecord:
    ws = model.weights(task.n)
    g = model.graph(task.n, task.graph_stream)
    spec = cfg.seed_strategy
    if spec.strategy != "explicit":
        a = int(task.a) if spec.strategy != "bernoulli" else task.a
        spec = SeedSpec(spec.strategy, a, spec.f)
    seed = select_seeds(spec, task.n, ws, task.seed_stream)
    tr = run_bootstrap(g, seed, cfg.r)
    kf = None
    if cfg.kernel_C is not None and ws is not None:
        kf = kernel_coverage(tr, ws, cfg.kernel_C)
    return SweepRecord(task.n, task.a, task.replica, task.graph_stream.stream_id,
                       task.seed_stream.stream_id, cfg.r, tr.final_size, tr.n_rounds,
                       tr.no_evolution, kf)


def run_sweep(cfg: SweepConfig, threads: int = 1, out=None) -> list[SweepRecord]:
    """One record per (grid point, replica), in grid order whatever ``threads`` is.

    Graph streams depend on (n, replica) only, so every seed size at a given
    replica sees the same graph; seed streams depend on (n, a, replica). With
    ``out`` (or ``cfg.output_path``) rows are written as they are produced.
    """
    model = _Model(cfg)
    tasks = list(_tasks(cfg, model))
    path = out if out is not None else cfg.output_path
    fh = writer = None
    if path is not None:
        fh = open(path, "w", encoding="utf-8", newline="")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
    records = []
    run = lambda t: _run_task(cfg, model, t)
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        results = pool.map(run, tasks) if pool else map(run, tasks)
        for task, rec in zip(tasks, results):
            records.append(rec)
            if writer is not None:
                try:
                    writer.writerow(_row(rec))
                except OSError as exc:
                    raise OSError(f"writing grid point n={task.n} a={task.a:g}: {exc}") from exc
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
        if fh is not None:
            fh.close()
    return records


def select(records, point) -> list[SweepRecord]:
    n, a = point
    return [r for r in records if r.n == n and math.isclose(r.a, a)]


def wilson_interval(k: int, total: int, level: float = 0.95) -> tuple[float, float]:
    ci = binomtest(k, total).proportion_ci(confidence_level=level, method="wilson")
    return float(ci.low), float(ci.high)


def estimate_no_evolution(records, point) -> tuple[float, tuple[float, float]]:
    """Fraction of replicas with A_f = A_0, with a Wilson 95% interval."""
    sel = select(records, point)
    if not sel:
        raise ValidationError(f"no records at grid point {point}")
    k = sum(r.no_evolution for r in sel)
    return k / len(sel), wilson_interval(k, len(sel))


def estimate_final_fraction(records, point) -> tuple[float, float, float]:
    """(mean, standard error, median) of |A_f|/n at a grid point."""
    sel = select(records, point)
    if not sel:
        raise ValidationError(f"no records at grid point {point}")
    x = np.array([r.final_size / r.n for r in sel])
    se = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0
    return float(x.mean()), se, float(np.median(x))


def grid_points(records) -> list[tuple[int, float]]:
    seen = {}
    for r in records:
        seen.setdefault(r.point, None)
    return list(seen)


def summarize(records, cfg: SweepConfig | None = None) -> list[dict]:
    """Per-point estimates; ``a_over_ac`` is filled when a config is supplied."""
    rows = []
    for pt in grid_points(records):
        p_hat, (lo, hi) = estimate_no_evolution(records, pt)
        mean, se, med = estimate_final_fraction(records, pt)
        rows.append({
            "n": pt[0], "a": pt[1],
            "a_over_ac": pt[1] / cfg.a_c(pt[0]) if cfg is not None else None,
            "replicas": len(select(records, pt)),
            "p_no_evolution": p_hat, "ci_low": lo, "ci_high": hi,
            "final_fraction_mean": mean, "final_fraction_stderr": se, "final_fraction_median": med,
        })
    return rows


def format_table(rows) -> str:
    cols = ["n", "a", "a_over_ac", "replicas", "p_no_evolution", "ci_low", "ci_high",
            "final_fraction_mean", "final_fraction_stderr", "final_fraction_median"]
    cell = lambda v: "-" if v is None else (f"{v:.4g}" if isinstance(v, float) else str(v))
    body = [[cell(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(b[i]) for b in body)) if body else len(c) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(b, widths)) for b in body]
    return "\n".join(lines)


def plot_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "a", "a_over_ac", "final_fraction_mean", "final_fraction_stderr"])
    for r in rows:
        w.writerow([r["n"], _fmt(r["a"]), "" if r["a_over_ac"] is None else repr(r["a_over_ac"]),
                    repr(r["final_fraction_mean"]), repr(r["final_fraction_stderr"])])
    return buf.getvalue()
