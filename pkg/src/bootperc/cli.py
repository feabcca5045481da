"""Command line entry point: ``bootperc <subcommand> ...``.

Exit codes: 0 on success, 2 on invalid input, 1 on runtime or I/O failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from ._errors import ValidationError
from .experiments import format_table, plot_csv, read_config, read_csv, run_sweep, summarize
from .graph import Graph, induced_subgraph
from .graphgen import clamped_pair_count, sample_chung_lu, sample_coupled_kernel, sample_gnp
from .percolation import SeedSpec, run_bootstrap, select_seeds
from .rng import RngStream
from .thresholds import er_thresholds, threshold_report
from .weights import WeightSequence, alt_weights_chung_lu, build_weights, kernel


def _count(text: str) -> int:
    """Integers, also written as 1e6."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v.is_integer():
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(v)


def _common(p: argparse.ArgumentParser, seed=True):
    g = p.add_argument_group("global options")
    if seed:
        g.add_argument("--seed", type=_count, default=0, help="master seed (default 0)")
    g.add_argument("--json", action="store_true", help="machine-readable JSON on stdout")
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--quiet", action="store_true", help="only warnings and errors on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bootperc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    w = sub.add_parser("weights", help="weight sequences").add_subparsers(dest="action", required=True)
    wg = w.add_parser("gen", help="write a weight sequence, one weight per line")
    wg.add_argument("--n", type=_count, required=True)
    wg.add_argument("--beta", type=float, required=True)
    wg.add_argument("--zeta", type=float)
    wg.add_argument("--x0", type=float, default=1.0)
    wg.add_argument("--family", choices=["canonical", "chung-lu"], default="canonical")
    wg.add_argument("--d", type=float)
    wg.add_argument("--i0", type=float)
    wg.add_argument("--out", required=True)
    _common(wg)

    g = sub.add_parser("graph", help="random graphs").add_subparsers(dest="action", required=True)
    gg = g.add_parser("gen", help="sample CL(w) from a weights file")
    gg.add_argument("--weights", required=True)
    gg.add_argument("--kernel", type=float, metavar="F", help="keep only CL[Ker_F]")
    gg.add_argument("--coupled", action="store_true",
                    help="with --kernel: also write the coupled G(N_f, p_f) to OUT.gnp")
    gg.add_argument("--out", required=True)
    _common(gg)
    gn = g.add_parser("gnp", help="sample G(N, p)")
    gn.add_argument("--n", type=_count, required=True)
    gn.add_argument("--p", type=float, required=True)
    gn.add_argument("--out", required=True)
    _common(gn)

    pc = sub.add_parser("percolate", help="run bootstrap percolation on an edge-list file")
    pc.add_argument("--graph", required=True)
    pc.add_argument("--r", type=int, required=True)
    pc.add_argument("--seed-strategy", required=True,
                    choices=["uniform", "bernoulli", "smallest", "kernel", "explicit"])
    pc.add_argument("--a", type=float, default=0)
    pc.add_argument("--f", type=float)
    pc.add_argument("--weights", help="weights file (smallest and kernel strategies)")
    pc.add_argument("--vertices", help="comma-separated ids (explicit strategy)")
    pc.add_argument("--out", required=True)
    _common(pc)

    th = sub.add_parser("thresholds", help="closed-form thresholds as JSON")
    th.add_argument("kind", nargs="?", choices=["global", "er"], default="global")
    th.add_argument("--n", type=_count)
    th.add_argument("--beta", type=float)
    th.add_argument("--zeta", type=float)
    th.add_argument("--r", type=int)
    th.add_argument("--a", type=float)
    th.add_argument("--x0", type=float, default=1.0)
    th.add_argument("--gamma1", type=float)
    th.add_argument("--N", type=_count)
    th.add_argument("--p", type=float)
    _common(th, seed=False)

    sw = sub.add_parser("sweep", help="Monte Carlo sweep from a JSON config")
    sw.add_argument("--config", required=True)
    sw.add_argument("--out", help="CSV path (defaults to the config's output_path)")
    _common(sw)

    rp = sub.add_parser("report", help="per-point estimates from a sweep CSV")
    rp.add_argument("--in", dest="infile", required=True)
    rp.add_argument("--config", help="sweep config, needed for the a/a_c column")
    rp.add_argument("--plot-csv", help="also write plot-ready CSV here")
    _common(rp, seed=False)
    return parser


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise ValidationError(f"missing required option(s): {' '.join(missing)}")


def _emit(args, payload: dict, human: str | None = None):
    if args.json or human is None:
        print(json.dumps(payload, indent=2, default=float))
    else:
        print(human)


def cmd_weights(args):
    if args.family == "canonical":
        _need(args, "zeta")
        ws = build_weights(args.n, args.beta, args.zeta, args.x0)
    else:
        _need(args, "d", "i0")
        ws = alt_weights_chung_lu(args.n, args.beta, args.d, args.i0)
    ws.save(args.out)
    info = dict(n=ws.n, beta=ws.beta, zeta=ws.zeta, x0=ws.x0, gamma1=ws.gamma1, gamma2=ws.gamma2,
                plateau=ws.plateau, family=ws.family, total_weight=float(ws.weights.sum()), out=args.out)
    _emit(args, info, f"wrote {ws.n} weights to {args.out} (gamma1={ws.gamma1:.4g}, gamma2={ws.gamma2:.4g})")


def cmd_graph(args):
    stream = RngStream(args.seed)
    if args.action == "gnp":
        g = sample_gnp(args.n, args.p, stream)
        g.write_edgelist(args.out)
        _emit(args, dict(n=g.n, m=g.m, out=args.out), f"wrote G({g.n}, {args.p}) with {g.m} edges to {args.out}")
        return
    ws = WeightSequence.load(args.weights)
    info = dict(n=ws.n, clamped_pairs=clamped_pair_count(ws))
    if args.coupled:
        if args.kernel is None:
            raise ValidationError("--coupled needs --kernel F")
        gnp, cl = sample_coupled_kernel(ws, args.kernel, stream)
        cl.write_edgelist(args.out)
        gnp.write_edgelist(args.out + ".gnp")
        info.update(kernel_size=cl.n, m=cl.m, gnp_m=gnp.m, out=args.out, gnp_out=args.out + ".gnp")
        _emit(args, info, f"kernel of {cl.n} vertices: CL has {cl.m} edges, coupled G(N_f,p_f) has {gnp.m}")
        return
    g = sample_chung_lu(ws, stream)
    if args.kernel is not None:
        g = induced_subgraph(g, kernel(ws, args.kernel))
    g.write_edgelist(args.out)
    info.update(m=g.m, out=args.out, vertices=g.n)
    _emit(args, info, f"wrote CL graph on {g.n} vertices with {g.m} edges to {args.out}")


def cmd_percolate(args):
    g = Graph.read_edgelist(args.graph)
    ws = WeightSequence.load(args.weights) if args.weights else None
    s = args.seed_strategy
    if s == "explicit":
        _need(args, "vertices")
        spec = SeedSpec.explicit(int(v) for v in args.vertices.split(",") if v.strip())
    elif s == "kernel":
        _need(args, "f")
        spec = SeedSpec.in_kernel(args.f, args.a)
    else:
        spec = SeedSpec(s, args.a)
    if s in ("smallest", "kernel") and ws is None:
        raise ValidationError(f"--seed-strategy {s} needs --weights")
    seed = select_seeds(spec, g.n, ws, RngStream(args.seed))
    tr = run_bootstrap(g, seed, args.r)
    doc = tr.to_json()
    Path(args.out).write_text(json.dumps(doc) + "\n", encoding="utf-8")
    summary = dict(seed_size=int(seed.size), final_size=tr.final_size, rounds=tr.n_rounds,
                   no_evolution=tr.no_evolution, out=args.out)
    _emit(args, summary, f"|A_0|={seed.size} |A_f|={tr.final_size} rounds={tr.n_rounds} -> {args.out}")


def cmd_thresholds(args):
    if args.kind == "er":
        _need(args, "N", "p", "r")
        rep = er_thresholds(args.N, args.p, args.r)
        print(json.dumps(rep.__dict__, indent=2))
        return
    _need(args, "n", "beta", "zeta", "r")
    rep = threshold_report(args.n, args.beta, args.zeta, args.r, a=args.a, x0=args.x0, gamma1=args.gamma1)
    print(json.dumps(rep.to_json(), indent=2))


def cmd_sweep(args):
    cfg = read_config(args.config)
    out = args.out or cfg.output_path
    if out is None:
        raise ValidationError("no output path: pass --out or set output_path in the config")
    recs = run_sweep(cfg, threads=args.threads, out=out)
    _emit(args, dict(records=len(recs), out=out), f"wrote {len(recs)} records to {out}")


def cmd_report(args):
    recs = read_csv(args.infile)
    cfg = read_config(args.config) if args.config else None
    rows = summarize(recs, cfg)
    if args.plot_csv:
        Path(args.plot_csv).write_text(plot_csv(rows), encoding="utf-8")
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(format_table(rows))
        print()
        print(plot_csv(rows), end="")


COMMANDS = {
    "weights": cmd_weights, "graph": cmd_graph, "percolate": cmd_percolate,
    "thresholds": cmd_thresholds, "sweep": cmd_sweep, "report": cmd_report,
}


def dispatch(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(name)s: %(message)s", stream=sys.stderr, force=True)
    print(f"bootperc {__version__} argv={argv} seed={getattr(args, 'seed', None)}", file=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except (ValidationError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
