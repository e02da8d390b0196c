"""Command-line interface.

Exit codes: 0 success, 1 invalid arguments or input, 2 I/O failure.
Diagnostics go to stderr; results only to the files named on the command line.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

from . import report, simgen
from .dtw import BandSpec
from .dynet import write_tensor
from .errors import IoFailure, MflicaError, ValidationError
from .factions import get_factions
from .follow import following_network, following_relation
from .pipeline import run_mflica
from .timeseries import WindowSpec, load_timeseries, slice_window, write_timeseries

THREADS_ENV = "MFLICA_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _unit_interval(name):
    def parse(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}")
        if not (0.0 <= v <= 1.0):
            raise argparse.ArgumentTypeError(f"{name} must be in [0, 1], got {v}")
        return v

    return parse


def _int_at_least(name, lo):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}")
        if v < lo:
            raise argparse.ArgumentTypeError(f"{name} must be >= {lo}, got {v}")
        return v

    return parse


def _positive_float(name, allow_zero=False):
    def parse(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}")
        if not math.isfinite(v) or v < 0 or (v == 0 and not allow_zero):
            raise argparse.ArgumentTypeError(f"{name} out of range: {v}")
        return v

    return parse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mflica", description="Infer leadership of coordination from time series.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("simulate", help="generate the synthetic leader-switching dataset")
    s.add_argument("--seed", type=_int_at_least("--seed", 0), default=42)
    s.add_argument("--out", required=True, help="time-series CSV to write")
    s.add_argument("--truth", help="ground-truth JSON to write")
    s.add_argument("--n", type=_int_at_least("--n", 1), default=30)
    s.add_argument("--steps", type=_int_at_least("--steps", 1), default=800)
    s.add_argument("--leader-speed", type=_positive_float("--leader-speed"), default=1.0)
    s.add_argument("--follower-speed", type=_positive_float("--follower-speed"), default=1.0)
    s.add_argument("--noise-std", type=_positive_float("--noise-std", True), default=0.1)
    s.add_argument("--box-size", type=_positive_float("--box-size", True), default=30.0)

    r = sub.add_parser("run", help="dynamic network, factions and faction-ratio series")
    r.add_argument("--input", required=True)
    r.add_argument("--time-window", type=_int_at_least("--time-window", 2), required=True)
    r.add_argument("--time-shift", type=_int_at_least("--time-shift", 1),
                   help="default: time window / 10, rounded up")
    r.add_argument("--sigma", type=_unit_interval("--sigma"), default=0.5)
    r.add_argument("--lag-window", type=_unit_interval("--lag-window"), default=0.1)
    r.add_argument("--out-dir", required=True)
    r.add_argument("--dump-tensor", help="also write the N x N x T weights (MFLD1 format)")
    r.add_argument("--no-plots", action="store_true")
    _threads_flag(r)

    f = sub.add_parser("follow", help="following relation between two individuals")
    f.add_argument("--input", required=True)
    f.add_argument("--leader", required=True, help="id of the candidate leader (X)")
    f.add_argument("--follower", required=True, help="id of the candidate follower (Y)")
    f.add_argument("--from", dest="first", type=_int_at_least("--from", 1))
    f.add_argument("--to", dest="last", type=_int_at_least("--to", 1))
    f.add_argument("--lag-window", type=_unit_interval("--lag-window"), default=0.1)
    f.add_argument("--out", default="-", help="JSON output file, '-' for stdout")

    n = sub.add_parser("net", help="static following network over an interval")
    n.add_argument("--input", required=True)
    n.add_argument("--from", dest="first", type=_int_at_least("--from", 1))
    n.add_argument("--to", dest="last", type=_int_at_least("--to", 1))
    n.add_argument("--sigma", type=_unit_interval("--sigma"), default=0.5)
    n.add_argument("--lag-window", type=_unit_interval("--lag-window"), default=0.1)
    n.add_argument("--out-dir", required=True)
    _threads_flag(n)

    pl = sub.add_parser("plot", help="SVG line chart from a t,label1,...,labelM CSV")
    pl.add_argument("--input", required=True)
    pl.add_argument("--out", required=True, help="SVG file; a .csv sibling is written too")
    pl.add_argument("--title", default="")
    return p


def _threads_flag(p):
    p.add_argument("--threads", type=_int_at_least("--threads", 1),
                   help=f"worker threads (default: ${THREADS_ENV} or 1)")


def resolve_threads(value) -> int:
    if value is not None:
        return value
    env = os.environ.get(THREADS_ENV)
    if not env:
        return 1
    try:
        k = int(env)
    except ValueError:
        raise ValidationError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
    if k < 1:
        raise ValidationError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
    return k


def _window(first, last, n_steps) -> WindowSpec:
    w = WindowSpec.from_bounds(first or 1, last or n_steps)
    w.validate(n_steps)
    return w


def _write_json(doc, path) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _out_dir(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailure(f"cannot create {out}: {exc}") from exc
    return out


def _write_matrix(mat, ids, path, fmt=repr) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["leader", *ids])
        for ident, row in zip(ids, mat):
            w.writerow([ident, *(fmt(v) for v in row.tolist())])


def cmd_simulate(args) -> None:
    cfg = simgen.ScenarioConfig(
        n=args.n, steps=args.steps, seed=args.seed, leader_speed=args.leader_speed,
        follower_speed=args.follower_speed, noise_std=args.noise_std, box_size=args.box_size,
        events=tuple(e for e in simgen.DEFAULT_EVENTS if e[0] <= args.n and e[2] <= args.steps),
    )
    tss, truth = simgen.generate_dataset(cfg)
    write_timeseries(tss, args.out)
    if args.truth:
        simgen.write_truth(truth, args.truth)


def cmd_run(args) -> None:
    omega = args.time_window
    delta = args.time_shift if args.time_shift is not None else math.ceil(omega / 10)
    threads = resolve_threads(args.threads)
    tss = load_timeseries(args.input)
    out = _out_dir(args.out_dir)
    res = run_mflica(tss, omega, delta, args.sigma, BandSpec(args.lag_window), threads=threads)
    ids = tss.ids
    try:
        with open(out / "density.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "density"])
            for t, d in enumerate(res.density.tolist(), start=1):
                w.writerow([t, repr(d)])
        with open(out / "faction_ratios.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", *ids])
            for t in range(tss.n_steps):
                w.writerow([t + 1, *(repr(v) for v in res.faction_ratio_series[:, t].tolist())])
        with open(out / "leaders.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "leader_ids"])
            for fa in res.factions:
                w.writerow([fa.t, ";".join(ids[i] for i in fa.leaders)])
        _write_json([fa.to_json(ids) for fa in res.factions], out / "factions.json")
        _write_json(
            {
                "command": "run",
                "input": str(args.input),
                "time_window": omega,
                "time_shift": delta,
                "sigma": args.sigma,
                "lag_window": args.lag_window,
                "n": tss.n_individuals,
                "steps": tss.n_steps,
                "dims": tss.n_dims,
                "windows": [list(win) for win in res.dynet.windows],
            },
            out / "params.json",
        )
        if args.dump_tensor:
            write_tensor(res.dynet.weights, args.dump_tensor)
        if not args.no_plots:
            report.emit_plot(
                report.SeriesBundle(("density",), res.density[None, :], "Network density"),
                out / "density_plot.svg",
            )
            report.emit_plot(
                report.SeriesBundle(ids, res.faction_ratio_series, "Faction size ratios"),
                out / "faction_ratios_plot.svg",
            )
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def cmd_follow(args) -> None:
    tss = load_timeseries(args.input)
    w = _window(args.first, args.last, tss.n_steps)
    seg = slice_window(tss, w)
    li, fi = seg.index_of(args.leader), seg.index_of(args.follower)
    res = following_relation(seg.series(fi), seg.series(li), BandSpec(args.lag_window))
    _write_json(
        {
            "leader": seg.ids[li],
            "follower": seg.ids[fi],
            "from": w.start,
            "to": w.end,
            "lag_window": args.lag_window,
            "foll_val": res.foll_val,
            "mean_lag": res.mean_lag,
            "path_len": res.path_len,
        },
        args.out,
    )


def cmd_net(args) -> None:
    threads = resolve_threads(args.threads)
    tss = load_timeseries(args.input)
    w = _window(args.first, args.last, tss.n_steps)
    out = _out_dir(args.out_dir)
    net = following_network(tss, args.sigma, BandSpec(args.lag_window), threads=threads, window=w)
    fa = get_factions(net.binary, net.weighted)
    try:
        _write_matrix(net.weighted, tss.ids, out / "weighted.csv")
        _write_matrix(net.binary, tss.ids, out / "binary.csv", fmt=str)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    _write_json(fa.to_json(tss.ids), out / "factions.json")
    _write_json(
        {
            "command": "net",
            "input": str(args.input),
            "from": w.start,
            "to": w.end,
            "sigma": args.sigma,
            "lag_window": args.lag_window,
            "density": net.density(),
        },
        out / "network.json",
    )


def cmd_plot(args) -> None:
    try:
        bundle = report.read_series_csv(args.input, args.title)
    except OSError as exc:
        raise IoFailure(f"cannot read {args.input}: {exc}") from exc
    except (ValueError, IndexError) as exc:
        raise ValidationError(f"{args.input}: not a t,label1,...,labelM CSV ({exc})") from exc
    report.emit_plot(bundle, args.out)


COMMANDS = {
    "simulate": cmd_simulate,
    "run": cmd_run,
    "follow": cmd_follow,
    "net": cmd_net,
    "plot": cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if not exc.code else 1
    try:
        COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"mflica {args.command}: {exc}", file=sys.stderr)
        return 1
    except (IoFailure, OSError) as exc:
        print(f"mflica {args.command}: {exc}", file=sys.stderr)
        return 2
    except MflicaError as exc:
        print(f"mflica {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
