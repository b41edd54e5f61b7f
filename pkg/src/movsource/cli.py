"""Command-line front end.

Every subcommand writes CSV output plus ``manifest.json`` into ``--out``.
Values come from built-in defaults, then the ``[subcommand]`` section of an
optional ``--config`` INI file, then command-line flags.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .errors import ConfigError, DomainError, InstabilityError, ShapeConstructionError, WindowTooWideError
from .fd import FdOperator
from .grid import PeriodicGrid
from .shape import build_shape, eval_F, find_k_star
from .solvers import SourcePolicy, Wave1DConfig, high_wavenumber_fraction, solve_wave_1d, write_snapshot_csv
from .source import WindowSpec, apply_window, build_delta

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _pos_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {s}")
    return v


def _frac(s):
    if "/" in str(s):
        a, b = str(s).split("/")
        return float(a) / float(b)
    return float(s)


def _kappa(s):
    """Accepts numbers and multiples of pi such as ``pi``, ``0.75pi``, ``3pi/4``."""
    t = str(s).strip().lower().replace("*", "").replace("π", "pi")
    if "pi" in t:
        head, _, tail = t.partition("pi")
        val = math.pi * (float(head) if head else 1.0)
        if tail.startswith("/"):
            val /= float(tail[1:])
        return val
    return float(t)


# name: (type, nargs, default, help)
COMMON = {
    "order": (_pos_int, None, 4, "finite-difference order p"),
    "q": (_pos_int, None, None, "moment and sonic-boom condition count (default 2p+2)"),
    "w": (_frac, None, 0.5, "window width exponent"),
    "cl": (float, None, 4.0, "window width prefactor C_l"),
    "vmax_factor": (float, None, 1.0, "safety factor gamma on v_max"),
    "jobs": (_pos_int, None, 1, "worker processes"),
}

OPTIONS = {
    "shape": {
        "order": COMMON["order"],
        "q": (_pos_int, "+", None, "one or more q values (m = s = q)"),
        "kstar": (_kappa, None, None, "sonic-boom wavenumber k*h (overrides --v-ratio)"),
        "v_ratio": (float, None, 0.0, "v_max / c used to find k*h"),
        "samples": (_pos_int, None, 401, "samples on [0, k*h]"),
    },
    "delta": {
        "order": COMMON["order"],
        "q": COMMON["q"],
        "kstar": (_kappa, "+", None, "one or more k*h values"),
        "v_ratio": (float, None, 0.0, "v_max / c used when --kstar is absent"),
        "M": (_pos_int, None, 64, "grid points"),
        "L": (float, None, 1.0, "domain length"),
        "x0": (float, None, 0.5 + 1 / 29, "source position"),
        "window": (bool, None, False, "apply the rectangular window"),
        "w": COMMON["w"],
        "cl": COMMON["cl"],
    },
    "kstar": {
        "order": COMMON["order"],
        "v_ratio": (float, None, 0.0, "v_max / c"),
        "vmax_factor": COMMON["vmax_factor"],
    },
    "window-study": {
        "kstar": (_kappa, "+", [math.pi, 0.75 * math.pi], "k*h values"),
        "q": (_pos_int, "+", list(ex.WINDOW_QS), "q values"),
        "w": (_frac, "+", list(ex.WINDOW_WS), "window exponents"),
        "periodic": (bool, None, False, "use periodic distance in the window"),
        "jobs": COMMON["jobs"],
    },
    "converge-advect": {
        "order": (_pos_int, "+", [2, 4, 6], "orders p"),
        "M": (_pos_int, "+", list(ex.ADVECT_MS), "grid sizes"),
        "cfl": (float, None, 0.2, "time step / h"),
        "q": COMMON["q"],
        "w": COMMON["w"],
        "cl": COMMON["cl"],
        "vmax_factor": COMMON["vmax_factor"],
        "global_source": (bool, None, False, "skip windowing"),
        "jobs": COMMON["jobs"],
    },
    "converge-wave2d": {
        "order": (_pos_int, "+", [4, 6], "orders p"),
        "N": (_pos_int, "+", None, "points per direction (default 101..801, or ..1601 with --full)"),
        "N_ref": (_pos_int, None, None, "reference points per direction (1601, or 3201 with --full)"),
        "full": (bool, None, False, "full-scale ladder (N up to 1601, N_ref = 3201)"),
        "q": COMMON["q"],
        "w": COMMON["w"],
        "cl": COMMON["cl"],
        "vmax_factor": COMMON["vmax_factor"],
        "cache": (str, None, None, "directory for cached reference solutions"),
        "jobs": COMMON["jobs"],
    },
    "demo-wave1d": {
        "order": COMMON["order"],
        "M": (_pos_int, None, 400, "grid points"),
        "t_end": (float, None, 2.0, "final time"),
        "q": COMMON["q"],
        "w": COMMON["w"],
        "cl": COMMON["cl"],
        "global_source": (bool, None, False, "skip windowing"),
        "vmax_factor": COMMON["vmax_factor"],
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="movsource", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, opts in OPTIONS.items():
        p = sub.add_parser(name)
        p.add_argument("--out", default="runs/" + name, help="output directory")
        p.add_argument("--config", help="INI file with a [" + name + "] section")
        for key, (typ, nargs, _default, help_) in opts.items():
            flags = ["--" + key.replace("_", "-")]
            if key == "order":
                flags.append("-p")
            if key == "cl":
                flags = ["--cl"]
            if typ is bool:
                p.add_argument(*flags, dest=key, action="store_const", const=True, default=None, help=help_)
            else:
                p.add_argument(*flags, dest=key, type=typ, nargs=nargs, default=None, help=help_)
    return parser


def _parse_value(typ, nargs, raw, key):
    try:
        if typ is bool:
            return raw.strip().lower() in ("1", "true", "yes", "on")
        if nargs == "+":
            return [typ(v) for v in raw.replace(",", " ").split()]
        return typ(raw)
    except (ValueError, argparse.ArgumentTypeError) as err:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({err})") from None


def resolve(args) -> dict:
    """Defaults <- config file section <- command-line flags."""
    opts = OPTIONS[args.command]
    cfg = {k: v[2] for k, v in opts.items()}
    if args.config:
        cp = configparser.ConfigParser()
        cp.optionxform = str
        if not cp.read(args.config):
            raise ConfigError(f"cannot read config file {args.config}")
        unknown_sections = set(cp.sections()) - set(OPTIONS)
        if unknown_sections:
            raise ConfigError(f"unknown config sections: {sorted(unknown_sections)}")
        if cp.has_section(args.command):
            for key, raw in cp.items(args.command):
                k = key.replace("-", "_")
                if k not in opts:
                    raise ConfigError(f"unknown key {key!r} in [{args.command}]")
                typ, nargs = opts[k][0], opts[k][1]
                cfg[k] = _parse_value(typ, nargs, raw, key)
    for k in opts:
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = v
    return cfg


def _plot(path, xs, series, xlabel, ylabel, logy=False):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, ys in series:
        ax.plot(xs if not callable(xs) else xs(label), ys, label=label)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if len(series) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def cmd_shape(cfg, out: Path) -> dict:
    op = FdOperator.centered(cfg["order"])
    kstar = cfg["kstar"] if cfg["kstar"] is not None else find_k_star(op, cfg["v_ratio"])
    qs = cfg["q"] or [2 * cfg["order"] + 2]
    kappa = np.linspace(0.0, kstar, cfg["samples"])
    cols = {}
    for q in qs:
        cols[f"q={q}"] = eval_F(build_shape(q, q, kstar), kappa)
    header = ["kappa", "F"] if len(qs) == 1 else ["kappa"] + [f"F_q{q}" for q in qs]
    _write_columns(out / "F.csv", header, [kappa] + list(cols.values()))
    _plot(out / "F.svg", kappa, list(cols.items()), "kh", "F(kh)")
    return {"kappa_star": kstar, "q": qs}


def cmd_delta(cfg, out: Path) -> dict:
    op = FdOperator.centered(cfg["order"])
    q = cfg["q"] or 2 * cfg["order"] + 2
    kstars = cfg["kstar"] or [find_k_star(op, cfg["v_ratio"])]
    grid = PeriodicGrid(cfg["L"], cfg["M"])
    cols, sums, counts = [], [], []
    for ks in kstars:
        d = build_delta(grid, build_shape(q, q, ks), cfg["x0"])
        if cfg["window"]:
            d, n = apply_window(d, grid, cfg["x0"], WindowSpec(cfg["w"], cfg["cl"]))
            counts.append(n)
        cols.append(d.values)
        sums.append(d.mass())
    header = ["x", "delta"] if len(kstars) == 1 else ["x"] + [f"delta_k{ks:.6g}" for ks in kstars]
    _write_columns(out / "delta.csv", header, [grid.x] + cols)
    _plot(out / "delta.svg", grid.x, [(f"k*h={ks:.4g}", c) for ks, c in zip(kstars, cols)], "x", "delta")
    return {"q": q, "kappa_star": kstars, "h_sum": sums, "window_count": counts}


def cmd_kstar(cfg, out: Path) -> dict:
    op = FdOperator.centered(cfg["order"])
    ks = find_k_star(op, cfg["vmax_factor"] * cfg["v_ratio"])
    print(f"k*h = {ks:.15g}  ({ks / math.pi:.12g} pi)")
    _write_columns(out / "kstar.csv", ["order", "v_ratio", "kappa_star"], [[cfg["order"]], [cfg["v_ratio"]], [ks]])
    return {"kappa_star": ks}


def cmd_window_study(cfg, out: Path) -> dict:
    results = {}
    for ks in cfg["kstar"]:
        rep = ex.run_window_study(ks, cfg["q"], cfg["w"], periodic=cfg["periodic"], jobs=cfg["jobs"])
        tag = f"{ks / math.pi:.4g}pi"
        rep.to_csv(out / f"window_study_{tag}.csv")
        results[tag] = rep.to_dict()
        for (q, w), (o, c) in rep.table().items():
            print(f"k*h={tag:>8} q={q:2d} w={w:.3f}  observed p={o:5.2f}  conjectured={c:5.2f}")
        series = []
        for q in rep.qs:
            series.append((f"q={q}", [rep.observed(q, w) for w in rep.ws]))
        _plot(out / f"window_study_{tag}.svg", list(rep.ws), series, "w", "observed p")
    return results


def cmd_converge_advect(cfg, out: Path) -> dict:
    results = {}
    for p in cfg["order"]:
        rep = ex.run_advection_ladder(
            p, cfg["M"], cfg["cfl"], cfg["q"], cfg["w"], cfg["cl"], cfg["vmax_factor"],
            windowed=not cfg["global_source"], jobs=cfg["jobs"],
        )
        rep.to_csv(out / f"convergence_advect_p{p}.csv")
        results[f"p{p}"] = rep.to_dict()
        _print_report(rep)
    _plot_ladders(out / "convergence_advect.svg", results, "M")
    return results


def cmd_converge_wave2d(cfg, out: Path) -> dict:
    Ns = cfg["N"] or list(ex.WAVE2D_NS_FULL if cfg["full"] else ex.WAVE2D_NS)
    N_ref = cfg["N_ref"] or (ex.WAVE2D_NREF_FULL if cfg["full"] else ex.WAVE2D_NREF)
    results = {}
    for p in cfg["order"]:
        rep = ex.run_wave2d_ladder(
            p, Ns, N_ref, cfg["q"], cfg["w"], cfg["cl"], cfg["vmax_factor"],
            jobs=cfg["jobs"], cache_dir=cfg["cache"],
        )
        rep.to_csv(out / f"convergence_wave2d_p{p}.csv")
        results[f"p{p}"] = rep.to_dict()
        _print_report(rep)
    _plot_ladders(out / "convergence_wave2d.svg", results, "N")
    return results


def cmd_demo_wave1d(cfg, out: Path) -> dict:
    window = None if cfg["global_source"] else WindowSpec(cfg["w"], cfg["cl"])
    policy = SourcePolicy(q=cfg["q"], gamma=cfg["vmax_factor"], window=window)
    sol = solve_wave_1d(Wave1DConfig(M=cfg["M"], order=cfg["order"], t_end=cfg["t_end"], policy=policy))
    write_snapshot_csv(out / "theta.csv", sol, "theta")
    write_snapshot_csv(out / "v.csv", sol, "v")
    frac = high_wavenumber_fraction(sol["theta"], sol.grids[0], sol.info["kappa_star"])
    print(f"energy fraction above k*h: {frac:.3e}")
    _plot(out / "theta.svg", sol.grids[0].x, [("theta", sol["theta"])], "x", "pressure")
    return {"high_wavenumber_fraction": frac, **sol.info}


def _print_report(rep):
    print(f"{rep.meta.get('experiment')} p={rep.meta.get('p')}")
    for row in rep.rows():
        print(f"  {row['resolution']:>6}  log10 e = {row['log10_error']!s:>10}  rate = {row['rate']!s}")


def _plot_ladders(path, results, label):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for key, rep in results.items():
        rows = [r for r in rep["rows"] if r["error"] != ""]
        ax.loglog([r["resolution"] for r in rows], [r["error"] for r in rows], "o-", label=key)
    ax.set_xlabel(label)
    ax.set_ylabel("error")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _write_columns(path, header, cols):
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in zip(*cols):
            w.writerow([repr(float(v)) for v in row])


COMMANDS = {
    "shape": cmd_shape,
    "delta": cmd_delta,
    "kstar": cmd_kstar,
    "window-study": cmd_window_study,
    "converge-advect": cmd_converge_advect,
    "converge-wave2d": cmd_converge_wave2d,
    "demo-wave1d": cmd_demo_wave1d,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
    except ConfigError as err:
        print(f"movsource: {err}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        results = COMMANDS[args.command](cfg, out)
    except (ValueError, ConfigError, WindowTooWideError) as err:
        if isinstance(err, (DomainError, ShapeConstructionError)):
            print(f"movsource: numerical failure: {err}", file=sys.stderr)
            return EXIT_NUMERICAL
        print(f"movsource: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (InstabilityError, ShapeConstructionError, ArithmeticError, AssertionError) as err:
        print(f"movsource: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    ex.write_manifest(out, args.command, {"resolved": cfg, "config_file": args.config}, results)
    return 0


if __name__ == "__main__":
    sys.exit(main())
