"""Command line front end.

    projlyap estimate     --config run.toml [--out row.csv] [--json | --csv]
    projlyap kappa-scan   --config run.toml --out kappa.csv
    projlyap measure-dump --config run.toml --out nu.csv
    projlyap mc           --config run.toml

Failures print a JSON error object on stdout and exit with 2 (config),
3 (no contraction), 4 (not mixing) or 5 (word cap exceeded); other
pipeline errors exit with 1.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import config as config_mod
from .cocycle import iterate_cocycle
from .contraction import h_alpha_curve, kappa_alpha, select_alpha_n
from .discretizer import discretize, stationary, write_measure_csv
from .errors import CapExceeded, ConfigError, ProjLyapError
from .estimator import full_estimate

log = logging.getLogger("projlyap")


def _fmt(x):
    return f"{x:.9g}" if isinstance(x, (float, np.floating)) else str(x)


def _auto(value):
    return None if value == "auto" else value


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _emit_rows(args, header, rows):
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    else:
        recs = [{k: float(_fmt(v)) if isinstance(v, (float, np.floating)) else v
                 for k, v in zip(header, row)} for row in rows]
        print(json.dumps(recs, indent=2))


def cmd_estimate(cfg, args):
    mc = cfg.mc.kwargs() if cfg.mc is not None else None
    rep = full_estimate(cfg.cocycle(), alpha=_auto(cfg.alpha), n=_auto(cfg.iterate_n),
                        N=cfg.N, mesh=cfg.mesh(), seed_grid=cfg.seed_grid,
                        grid_size=cfg.kappa_grid, alpha_grid=cfg.alpha_grid, n_max=cfg.n_max,
                        word_cap=cfg.word_cap, mc=mc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(rep.csv_header() + "\n" + rep.csv_row() + "\n")
    if args.format == "csv":
        print(rep.csv_header())
        print(rep.csv_row())
    else:
        print(rep.to_json())
    return rep


def _scan_n(cfg):
    if cfg.iterate_n != "auto":
        return [cfg.iterate_n]
    return list(range(1, cfg.n_max + 1))


def cmd_kappa_scan(cfg, args):
    if not args.out:
        raise ConfigError("kappa-scan needs --out", field="--out")
    out = Path(args.out)
    alphas = sorted(set(cfg.alpha_grid) | ({cfg.alpha} if cfg.alpha != "auto" else set()))
    c = cfg.cocycle()
    rows = []
    for n in _scan_n(cfg):
        try:
            cn = iterate_cocycle(c, n, cap=cfg.word_cap)
        except CapExceeded:
            if cfg.iterate_n != "auto":
                raise
            break
        for a in alphas:
            cert = kappa_alpha(cn, a, cfg.kappa_grid, n=n)
            rows.append((a, n, cert.kappa_refined, cert.kappa_upper))
            theta, h = h_alpha_curve(cn, a, cfg.kappa_grid)
            _write_rows(out.with_name(f"{out.stem}_n{n}_alpha{a:g}.csv"), ("theta", "H_alpha"),
                        zip(theta, h))
    header = ("alpha", "n", "kappa_refined", "kappa_upper")
    _write_rows(out, header, rows)
    _emit_rows(args, header, rows)
    return rows


def cmd_measure_dump(cfg, args):
    if not args.out:
        raise ConfigError("measure-dump needs --out", field="--out")
    c = cfg.cocycle()
    alpha, n = _auto(cfg.alpha), _auto(cfg.iterate_n)
    if n is None:
        alpha, n, _ = select_alpha_n(c, [alpha] if alpha is not None else cfg.alpha_grid,
                                     cfg.n_max, cfg.word_cap, cfg.kappa_grid)
    cn = iterate_cocycle(c, n, cap=cfg.word_cap)
    mesh = cfg.mesh()
    d = discretize(cn, mesh)
    nu = stationary(d)
    meta = {"alpha": "auto" if alpha is None else float(alpha), "n": n, "N": mesh.N,
            "residual": nu.residual}
    write_measure_csv(args.out, mesh, nu, meta)
    summary = dict(meta, out=str(args.out), iterations=nu.iterations)
    if args.format == "csv":
        _emit_rows(args, tuple(summary), [tuple(summary.values())])
    else:
        print(json.dumps({k: float(_fmt(v)) if isinstance(v, float) else v
                          for k, v in summary.items()}, indent=2))
    return nu


def cmd_mc(cfg, args):
    if cfg.mc is None:
        raise ConfigError("mc command needs an [mc] section", field="mc")
    from .mc import mc_l1

    est = mc_l1(cfg.cocycle(), **cfg.mc.kwargs())
    if args.format == "csv":
        print("mean,stderr,steps,samples,seed")
        print(est.csv_row())
    else:
        print(est.to_json())
    return est


COMMANDS = {
    "estimate": cmd_estimate,
    "kappa-scan": cmd_kappa_scan,
    "measure-dump": cmd_measure_dump,
    "mc": cmd_mc,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH", help="TOML run configuration")
    common.add_argument("--out", metavar="PATH", help="output CSV file")
    common.add_argument("--threads", type=int, default=1, metavar="K",
                        help="worker threads (advisory; computations are single-threaded)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json",
                     help="print JSON on stdout (default)")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv",
                     help="print CSV on stdout")
    common.add_argument("-v", "--verbose", action="store_true")
    common.set_defaults(format="json")

    p = argparse.ArgumentParser(prog="projlyap", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("estimate", parents=[common], help="one full result row")
    sub.add_parser("kappa-scan", parents=[common], help="kappa_alpha over alpha and n")
    sub.add_parser("measure-dump", parents=[common], help="stationary vector as CSV")
    sub.add_parser("mc", parents=[common], help="Monte Carlo estimate of L1")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1", field="--threads")
        cfg = config_mod.load(args.config)
        COMMANDS[args.command](cfg, args)
    except ProjLyapError as exc:
        print(json.dumps(exc.to_dict(), indent=2))
        print(f"projlyap: {exc.code}: {exc}", file=sys.stderr)
        return exc.exit_status
    return 0


if __name__ == "__main__":
    sys.exit(main())
