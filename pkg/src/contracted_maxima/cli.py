"""Command-line front end.

    contracted-maxima constants --spec one --n 1000 --mode exact
    contracted-maxima weak-limit --model iid --spec one --n-grid 256,4096 --reps 2000 --mode exact --seed 7
    contracted-maxima --verify report.json

Exit codes: 0 success, 1 configuration or domain error, 2 numerical failure
(including a failed ``--verify``).
"""
from __future__ import annotations

import argparse
import json
import sys

from .contraction import NoEnvelope, parse_spec, rv_indices
from .corr_models import parse_model, validate_psd
from .diagnostics import (
    DegenerateTail, TailCheckSpec, berman_sequences, comparison_sum, sandwich_product_check,
    tail_ratio_check,
)
from .experiments import asclt_logavg, norming_for, weak_limit_experiment
from .gauss_path import NonEmbeddableCovariance
from .norming import CLOSED, EXACT, NormingError
from .quadrature import QuadratureError
from .report import ExperimentReport, emit_report

NUMERICAL_ERRORS = (NormingError, QuadratureError, NonEmbeddableCovariance, DegenerateTail, NoEnvelope,
                    ArithmeticError)

MODE_NAMES = {"exact": EXACT, "closed": CLOSED}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _typed(flag, fn):
    def conv(text):
        try:
            return fn(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    conv.__name__ = flag
    return conv


def _int_list(text):
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise ValueError("empty list")
    return [int(float(t)) for t in items]


def _float_list(text):
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise ValueError("empty list")
    return [float(t) for t in items]


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise ValueError("must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="contracted-maxima", description=__doc__.splitlines()[0])
    p.add_argument("--verify", metavar="REPORT", help="re-run a JSON report and diff it against the file")
    sub = p.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--output", default=None, help="output path (default: stdout)")

    model = dict(type=_typed("--model", parse_model), required=True)
    spec = dict(type=_typed("--spec", parse_spec), required=True)
    mode = dict(choices=sorted(MODE_NAMES), default="exact")

    c = sub.add_parser("constants", help="norming constants a_n, b_n")
    c.add_argument("--spec", **spec)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--mode", **mode)
    c.add_argument("--c", type=float, default=None, help="tail constant for --mode closed")
    c.add_argument("--gamma", type=float, default=None, help="tail index for --mode closed")
    common(c)

    w = sub.add_parser("weak-limit", help="KS distance of normalised maxima to the Gumbel law")
    w.add_argument("--model", **model)
    w.add_argument("--spec", **spec)
    w.add_argument("--n-grid", type=_typed("--n-grid", _int_list), required=True)
    w.add_argument("--reps", type=int, default=2000)
    w.add_argument("--mode", **mode)
    w.add_argument("--seed", type=_typed("--seed", _seed), required=True)
    w.add_argument("--threads", type=int, default=None)
    w.add_argument("--timing", action="store_true", help="record runtime_ms (breaks byte-reproducibility)")
    common(w)

    a = sub.add_parser("asclt", help="logarithmic average along a single path")
    a.add_argument("--model", **model)
    a.add_argument("--spec", **spec)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--x-grid", type=_typed("--x-grid", _float_list), default=[-1.0, 0.0, 1.0])
    a.add_argument("--mode", **mode)
    a.add_argument("--c", type=float, default=None)
    a.add_argument("--gamma", type=float, default=None)
    a.add_argument("--seed", type=_typed("--seed", _seed), required=True)
    common(a)

    b = sub.add_parser("berman-check", help="modified Berman condition along a grid")
    b.add_argument("--model", **model)
    b.add_argument("--delta", type=float, default=0.0)
    b.add_argument("--epsilon", type=float, default=1.0)
    b.add_argument("--n-grid", type=_typed("--n-grid", _int_list), required=True)
    common(b)

    s = sub.add_parser("comparison-sum", help="normal-comparison sum along a grid of n")
    s.add_argument("--model", **model)
    s.add_argument("--spec", **spec)
    s.add_argument("--n-grid", type=_typed("--n-grid", _int_list), required=True)
    s.add_argument("--x", type=float, default=0.0)
    s.add_argument("--mode", **mode)
    common(s)

    t = sub.add_parser("tail-check", help="ratio of the Weibull-type product tail to its asymptote")
    t.add_argument("--spec", **spec)
    t.add_argument("--q", type=float, default=2.0)
    t.add_argument("--theta", type=float, default=0.5)
    t.add_argument("--u-grid", type=_typed("--u-grid", _float_list), required=True)
    common(t)

    w2 = sub.add_parser("sandwich-check", help="product tails against power-tail envelopes")
    w2.add_argument("--spec", **spec)
    w2.add_argument("--u-grid", type=_typed("--u-grid", _float_list), required=True)
    common(w2)

    d = sub.add_parser("psd-check", help="circulant embedding spectrum")
    d.add_argument("--model", **model)
    d.add_argument("--n-grid", type=_typed("--n-grid", _int_list), required=True)
    common(d)
    return p


def _check_grid(flag, grid, minimum):
    if any(v < minimum for v in grid):
        raise ConfigError(f"{flag}: entries must be >= {minimum}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"{flag}: values must be strictly increasing")


def _base_config(args, argv):
    return {"command": args.command, "argv": list(argv)}


def run_command(args, argv) -> ExperimentReport:
    cmd = args.command
    cfg = _base_config(args, argv)
    if cmd == "constants":
        if args.n < 3:
            raise ConfigError("--n: must be >= 3")
        const = norming_for(args.spec, args.n, MODE_NAMES[args.mode], args.c, args.gamma)
        cfg.update(spec=args.spec.designation, n=args.n, mode=args.mode)
        return ExperimentReport("constants", cfg, [{"n": const.n, "mode": args.mode, "a": const.a, "b": const.b}])
    if cmd == "weak-limit":
        _check_grid("--n-grid", args.n_grid, 8)
        if args.reps < 10:
            raise ConfigError("--reps: must be >= 10")
        rep = weak_limit_experiment(args.model, args.spec, args.n_grid, args.reps, MODE_NAMES[args.mode],
                                    args.seed, threads=args.threads, timing=args.timing)
        rep.config.update(cfg)
        return rep
    if cmd == "asclt":
        if args.n < 100:
            raise ConfigError("--n: must be >= 100")
        est = asclt_logavg(args.model, args.spec, args.n, args.x_grid, MODE_NAMES[args.mode], args.seed,
                           c=args.c, gamma=args.gamma)
        rep = est.to_report(args.model, args.spec)
        rep.config.update(cfg)
        return rep
    if cmd == "berman-check":
        _check_grid("--n-grid", args.n_grid, 3)
        if args.delta < 0 or args.epsilon <= 0:
            raise ConfigError("--delta must be >= 0 and --epsilon > 0")
        chk = berman_sequences(args.model, args.delta, args.epsilon, args.n_grid)
        records = [{"n": int(n), "value": float(v), "asclt_value": float(w), "flag": chk.flag}
                   for n, v, w in zip(chk.n_grid, chk.seq_values, chk.asclt_seq_values)]
        cfg.update(model=args.model.designation, delta=args.delta, epsilon=args.epsilon, n_grid=args.n_grid)
        summary = {"flag": chk.flag, "asclt_flag": "satisfied" if chk.asclt_satisfied else "violated"}
        return ExperimentReport("berman-check", cfg, records, summary)
    if cmd == "comparison-sum":
        _check_grid("--n-grid", args.n_grid, 3)
        records = []
        for n in args.n_grid:
            const = norming_for(args.spec, n, MODE_NAMES[args.mode])
            records.append({"n": n, "value": comparison_sum(args.model, args.spec, n, args.x, const)})
        cfg.update(model=args.model.designation, spec=args.spec.designation, n_grid=args.n_grid,
                   x=args.x, mode=args.mode)
        return ExperimentReport("comparison-sum", cfg, records)
    if cmd == "tail-check":
        try:
            check = TailCheckSpec(args.spec, args.q, args.theta, tuple(args.u_grid))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        ratios = tail_ratio_check(check)
        records = [{"u": u, "ratio": float(r)} for u, r in zip(args.u_grid, ratios)]
        cfg.update(spec=args.spec.designation, q=args.q, theta=args.theta, u_grid=args.u_grid)
        return ExperimentReport("tail-check", cfg, records, {"gamma": rv_indices(args.spec).gamma})
    if cmd == "sandwich-check":
        rep = sandwich_product_check(args.spec, args.u_grid)
        records = [
            {"u": float(u), "log_lower": float(lo), "log_value": float(v), "log_upper": float(hi),
             "log_gaussian": float(g)}
            for u, lo, v, hi, g in zip(rep.u_grid, rep.log_lower, rep.log_value, rep.log_upper, rep.log_gaussian)
        ]
        cfg.update(spec=args.spec.designation, u_grid=args.u_grid)
        summary = {"threshold": rep.threshold, "gaussian_bound_holds": rep.gaussian_bound_holds, "nu": rep.nu}
        return ExperimentReport("sandwich-check", cfg, records, summary)
    if cmd == "psd-check":
        _check_grid("--n-grid", args.n_grid, 2)
        records = []
        for n in args.n_grid:
            r = validate_psd(args.model, n)
            records.append({"n": n, "embedding_size": r.embedding_size, "min_eigenvalue": r.min_eigenvalue,
                            "clipped_mass": r.clipped_mass})
        cfg.update(model=args.model.designation, n_grid=args.n_grid)
        return ExperimentReport("psd-check", cfg, records)
    raise ConfigError("a subcommand is required")


def _strip_timing(d):
    d = json.loads(json.dumps(d))
    for rec in d.get("records", []):
        rec.pop("runtime_ms", None)
    return d


def _verify(path) -> int:
    try:
        with open(path) as fh:
            stored = json.load(fh)
        argv = stored["config"]["argv"]
    except (OSError, ValueError, KeyError) as exc:
        print(f"--verify: cannot read report {path}: {exc}", file=sys.stderr)
        return 1
    parser = build_parser()
    args = parser.parse_args(argv)
    fresh = run_command(args, argv)
    if _strip_timing(fresh.to_dict()) != _strip_timing(stored):
        print(f"--verify: recomputed report differs from {path}", file=sys.stderr)
        return 2
    print(f"verified {path}")
    return 0


def _report_argv(argv):
    """argv minus output-only flags, so the stored config replays exactly."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("--output", "--format"):
            skip = True
            continue
        if tok.startswith(("--output=", "--format=")):
            continue
        out.append(tok)
    return out


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verify:
            return _verify(args.verify)
        if args.command is None:
            raise ConfigError("a subcommand is required (see --help)")
        report = run_command(args, _report_argv(argv))
        emit_report(report, args.format, args.output or sys.stdout)
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
