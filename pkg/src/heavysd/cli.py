"""Command-line front end: ``heavysd check | dominance | suite``.

Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 usage error (including
malformed expressions).  Reports are JSON by default; ``--format csv``
writes the CSV projection instead.  Without ``--out`` the JSON report is
printed to stdout.  The default seed can be overridden with the
``HEAVYSD_SEED`` environment variable.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import dominance as dm
from . import membership as mb
from ._rng import SEED_ENV_VAR, default_seed
from .combinators import generalized_r_mean
from .dependence import independent
from .distributions import Deadly, DomainError
from .expressions import ExpressionError, parse_dep, parse_dist, parse_dists, parse_weights
from .grid import Grid
from .quadrature import QuadratureError
from .reports import csv_text, envelope, report_rows, write_csv, write_json
from .suite import run_suite

EXIT = {"pass": 0, "fail": 1, "inconclusive": 2}
USAGE_ERROR = 3
CRITERIA = ("class-h", "class-h-strict", "sufficient", "super-frechet", "super-pareto")
MODES = ("bound", "quadrature", "empirical", "rmean", "var", "ratio", "random-weights",
         "majorize", "deadly", "oracle")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _common(p: argparse.ArgumentParser, grid: bool = True) -> None:
    if grid:
        p.add_argument("--grid-min", type=float, default=Grid.min)
        p.add_argument("--grid-max", type=float, default=Grid.max)
        p.add_argument("--grid-points", type=int, default=Grid.points)
        p.add_argument("--grid-scale", choices=("log", "linear"), default="log")
    p.add_argument("--seed", type=int, default=None,
                   help=f"random seed (default: ${SEED_ENV_VAR} or a fixed constant)")
    p.add_argument("--out", type=Path, default=None, help="report path (directory for suite)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="heavysd",
                     description="Heavy-tail class checks and stochastic dominance engines.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="membership checks for one distribution")
    c.add_argument("--dist", required=True)
    c.add_argument("--criterion", action="append", choices=CRITERIA + ("all",))
    c.add_argument("--tol", type=float, default=1e-9)
    _common(c)

    d = sub.add_parser("dominance", help="dominance engines")
    d.add_argument("--mode", choices=MODES, required=True)
    d.add_argument("--dist")
    d.add_argument("--dists")
    d.add_argument("--weights", default="0.5,0.5")
    d.add_argument("--dep", default="indep")
    d.add_argument("--r", type=float, default=0.0)
    d.add_argument("--m", type=int, default=10**6)
    d.add_argument("--delta", type=float, default=1e-3)
    d.add_argument("--tol", type=float, default=dm.PRODUCT_BOUND_TOL)
    d.add_argument("--p-grid", type=_floats, default=None)
    d.add_argument("--n", type=int, default=None)
    d.add_argument("--method", choices=("quadrature", "monte-carlo"), default="quadrature")
    d.add_argument("--eta", default=None, help="majorizing weights for --mode majorize")
    d.add_argument("--event-prob", type=_floats, default=None,
                   help="trigger probabilities for --mode random-weights")
    _common(d)

    s = sub.add_parser("suite", help="run the acceptance battery")
    s.add_argument("--inject", action="append", default=[],
                   help="extra distribution claimed to be in class H")
    _common(s, grid=False)
    return parser


def _grid(args) -> Grid:
    try:
        return Grid(args.grid_min, args.grid_max, args.grid_points, args.grid_scale)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, body: dict, reports: list) -> None:
    if args.format == "csv":
        header, rows = None, []
        for rep in reports:
            h, r = report_rows(rep)
            header = header or h
            rows.extend(r)
        if args.out is None:
            sys.stdout.write(csv_text(header, rows))
        else:
            write_csv(args.out, header, rows)
    elif args.out is None:
        sys.stdout.write(envelope(body))
    else:
        write_json(args.out, body)


def _summary(line: str, args) -> None:
    # keep stdout clean for the report when no --out is given
    print(line, file=sys.stdout if args.out is not None else sys.stderr)


def _worst(verdicts) -> str:
    if "fail" in verdicts:
        return "fail"
    if "inconclusive" in verdicts:
        return "inconclusive"
    return "pass"


def cmd_check(args) -> int:
    dist = parse_dist(args.dist)
    grid = _grid(args)
    crit = args.criterion or ["class-h"]
    if "all" in crit:
        crit = list(CRITERIA)
    reports = []
    for c in dict.fromkeys(crit):
        if c in ("class-h", "class-h-strict"):
            rep = mb.check_subadditive(dist, grid, args.tol, strict=(c == "class-h-strict"))
        elif c == "sufficient":
            rep = mb.check_sufficient_conditions(dist, grid, args.tol)
        elif c == "super-frechet":
            rep = mb.check_super_frechet(dist, grid, args.tol)
        else:
            rep = mb.check_super_pareto(dist, grid, args.tol)
        reports.append(rep)
        wit = f" witness={rep.witness}" if rep.witness else ""
        _summary(f"{rep.criterion} {dist.expr}: {rep.verdict}{wit}", args)
    config = {"command": "check", "dist": dist.expr, "criteria": crit, "grid": grid.to_dict(),
              "tol": args.tol, "format": args.format}
    _emit(args, {"config": config, "reports": [r.to_dict() for r in reports]}, reports)
    return EXIT[_worst([r.verdict for r in reports])]


def _need(args, name: str):
    val = getattr(args, name)
    if val is None:
        raise UsageError(f"--mode {args.mode} requires --{name.replace('_', '-')}")
    return val


def _dominance_report(args, seed: int, grid: Grid):
    mode = args.mode
    dep = parse_dep(args.dep)
    if mode == "ratio":
        dist = parse_dist(_need(args, "dist"))
        p = args.p_grid or [0.5, 0.9, 0.99, 0.999, 0.9999]
        return dm.asymptotic_var_ratio(dist, args.n or 2, p, args.method, seed, args.m)
    if mode == "rmean":
        dists = parse_dists(_need(args, "dists"))
        w = parse_weights(args.weights, len(dists))
        target = generalized_r_mean(dists, w, args.r)
        return dm.check_dominance_empirical(target, dists, w, dep, seed, args.m, args.delta,
                                            grid, workers=args.workers)
    if mode == "oracle":
        dists = parse_dists(args.dists) if args.dists else [parse_dist(_need(args, "dist"))] * 2
        w = parse_weights(args.weights, len(dists))
        return dm.check_quadrature_oracle(dists, w, None, seed, args.m, args.delta,
                                          workers=args.workers)
    dist = parse_dist(_need(args, "dist"))
    if mode == "deadly":
        if not isinstance(dist, Deadly):
            raise UsageError("--mode deadly needs --dist deadly(p=...)")
        n = args.n or len(parse_weights(args.weights))
        w = parse_weights(args.weights, n) if args.n is None else None
        return dm.deadly_experiment(dist.p, n, dep, seed, args.m, w)
    if mode == "majorize":
        eta = parse_weights(_need(args, "eta"))
        gamma = parse_weights(args.weights, eta.size)
        return dm.majorization_experiment(dist, eta, gamma, dep, seed, args.m, grid, args.delta)
    marginals = parse_dists(args.dists) if args.dists else None
    n = len(marginals) if marginals else None
    w = parse_weights(args.weights, n)
    marginals = marginals or [dist] * w.size
    if mode == "bound":
        return dm.check_product_bound(dist, w, grid, args.tol)
    if mode == "quadrature":
        return dm.check_dominance_quadrature(dist, marginals, w, grid)
    if mode == "empirical":
        return dm.check_dominance_empirical(dist, marginals, w, dep, seed, args.m, args.delta,
                                            grid, workers=args.workers)
    if mode == "var":
        p = args.p_grid or [0.9, 0.99, 0.999]
        return dm.check_var_superadditivity(dist, w, p, dep, seed, args.m, args.delta,
                                            workers=args.workers)
    # random-weights
    if args.event_prob is None:
        sampler = dm.ConstantWeights(tuple(w.tolist()))
    else:
        probs = args.event_prob * w.size if len(args.event_prob) == 1 else args.event_prob
        if len(probs) != w.size or not all(0 <= q <= 1 for q in probs):
            raise UsageError("--event-prob needs one probability in [0, 1] per weight")
        sampler = dm.TriggeringWeights(tuple(w.tolist()), tuple(probs))
    return dm.check_random_weight_bound(dist, sampler, seed, args.m, grid, args.delta, dep)


def cmd_dominance(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    grid = _grid(args)
    config = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    config.update({"seed": seed, "grid": grid.to_dict()})
    for k in ("grid_min", "grid_max", "grid_points", "grid_scale"):
        config.pop(k)
    try:
        rep = _dominance_report(args, seed, grid)
    except dm.ScalingHypothesisError as exc:
        body = {"config": config, "report": None, "verdict": "inconclusive",
                "error": str(exc), "witness": list(exc.witness)}
        _summary(f"{args.mode}: inconclusive ({exc})", args)
        if args.format == "json":
            _emit(args, body, [])
        return EXIT["inconclusive"]
    config["dist"] = rep.dist
    _summary(f"{rep.mode} {rep.dist}: {rep.verdict} (min margin {rep.min_margin!r}, "
             f"epsilon {rep.epsilon!r})", args)
    _emit(args, {"config": config, "report": rep.to_dict()}, [rep])
    return EXIT[rep.verdict]


def cmd_suite(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    out = args.out or Path("heavysd-suite")
    code, index = run_suite(out, seed, args.format, args.inject, args.workers)
    bad = [e for e in index["checks"] if not e["ok"]]
    print(f"suite: {index['total'] - len(bad)}/{index['total']} checks as expected; "
          f"reports in {out}")
    for e in bad:
        print(f"  unexpected: [{e['id']}] item {e['item']} {e['name']}: observed "
              f"{e['observed']}, expected {e['expected']}"
              + (f" ({e['error']})" if e["error"] else ""))
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"check": cmd_check, "dominance": cmd_dominance, "suite": cmd_suite}[args.command]
    try:
        return handler(args)
    except (ExpressionError, UsageError) as exc:
        print(f"heavysd: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (DomainError, QuadratureError) as exc:
        print(f"heavysd: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT["inconclusive"]
    except ValueError as exc:
        print(f"heavysd: error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
