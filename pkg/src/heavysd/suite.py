"""The acceptance battery: every membership, certificate and dominance check
run with fixed settings, one report per check plus an index.

Each check carries the verdict it is expected to produce (counterexamples
are expected to ``fail``); a check is ``ok`` when observed and expected
agree.  The suite exits 0 only if every check is ok.
"""
from __future__ import annotations

import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import combinators as cb
from . import distributions as ds
from . import dominance as dm
from . import membership as mb
from .dependence import clayton, comonotone, countermonotone, gaussian, independent
from .expressions import parse_dist
from .reports import report_rows, to_jsonable, write_csv, write_json

__all__ = ["Check", "build_checks", "run_suite", "H_VALID", "H_INVALID"]

H_VALID = [
    ds.Frechet(0.5), ds.Frechet(1.0), ds.Pareto(0.5), ds.Pareto(1.0),
    ds.GeneralizedPareto(1.0), ds.GeneralizedPareto(2.0), ds.Burr(0.8, 0.9),
    ds.InverseBurr(2.0, 0.8), ds.LogPareto(0.9), ds.Stoppa(0.9, 2.0), ds.InverseGeometric(1.0),
]
H_INVALID = [ds.Frechet(1.5), ds.Pareto(2.0), ds.Burr(1.2, 1.0)]
WEIGHT_VECTORS = [(0.5, 0.5), (0.9, 0.1), (1 / 3, 1 / 3, 1 / 3), (0.7, 0.2, 0.1)]
BOUNDARY_TOL = 1e-12


@dataclass
class Check:
    item: int
    name: str
    expected: str
    run: Callable[[], object]


@dataclass
class _Simple:
    """Report wrapper for checks that are plain arithmetic."""

    body: dict

    def to_dict(self) -> dict:
        return self.body

    @property
    def verdict(self) -> str:
        return self.body["verdict"]


def _slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")[:80]


def _boundary_check() -> _Simple:
    rep = dm.check_product_bound(ds.Frechet(1.0), (0.5, 0.5))
    worst = max(abs(v) for v in rep.table["margin"])
    return _Simple({"check": "product bound equality for frechet(alpha=1.0)",
                    "max_abs_margin": worst, "tol": BOUNDARY_TOL,
                    "verdict": "pass" if worst <= BOUNDARY_TOL else "fail"})


def _var_exact() -> _Simple:
    v = float(dm.var(ds.Pareto(1.0), 0.99))
    rel = abs(v - 99.0) / 99.0
    return _Simple({"check": "VaR_0.99 of pareto(alpha=1.0) is 99", "value": v,
                    "relative_error": rel, "tol": 1e-12,
                    "verdict": "pass" if rel <= 1e-12 else "fail"})


def _class_h_with_witness(d) -> object:
    rep = mb.check_subadditive(d)
    if rep.verdict == "fail" and rep.witness is None:
        rep.verdict = "inconclusive"
    return rep


def build_checks(seed: int, inject=(), workers: int = 1) -> list[Check]:
    """All battery checks in a fixed order."""
    checks: list[Check] = []
    add = checks.append

    # 1. class H membership
    for d in H_VALID:
        add(Check(1, f"class-h {d.expr}", "pass", lambda d=d: mb.check_subadditive(d)))
    for d in H_INVALID:
        add(Check(1, f"class-h {d.expr}", "fail", lambda d=d: _class_h_with_witness(d)))

    # 2. closure properties
    closures = [
        cb.power(ds.Pareto(0.8), 0.5), cb.power(ds.Pareto(0.8), 2.0),
        cb.max_of(ds.Pareto(1.0), ds.Frechet(0.8)),
        cb.convex_transform(ds.Pareto(1.0), "pow", k=2.0),
        cb.mixture([ds.Pareto(1.0), ds.Pareto(0.5)], (0.3, 0.7)),
    ]
    for d in closures:
        add(Check(2, f"class-h {d.expr}", "pass", lambda d=d: mb.check_subadditive(d)))
    add(Check(2, "stochastic ordering pareto(alpha=1.0) pareto(alpha=0.5)", "pass",
              lambda: _ordering()))

    # 3. exact product-bound certificate
    for d in H_VALID:
        for w in WEIGHT_VECTORS:
            wl = ",".join(f"{v:.4g}" for v in w)
            add(Check(3, f"product-bound {d.expr} w={wl}", "pass",
                      lambda d=d, w=w: dm.check_product_bound(d, w)))
    add(Check(3, "product-bound boundary frechet(alpha=1.0)", "pass", _boundary_check))

    # 4. empirical dominance under NLOD models
    deps = [independent(), countermonotone(), gaussian(-0.4), clayton(-0.5)]
    for d in (ds.Pareto(1.0), ds.Burr(0.8, 0.9)):
        for dep in deps:
            add(Check(4, f"empirical {d.expr} dep={dep.expr}", "pass",
                      lambda d=d, dep=dep: dm.check_dominance_empirical(
                          d, [d, d], (0.5, 0.5), dep, seed, 10**6, 1e-3, workers=workers)))

    # 5. quadrature against Monte Carlo
    add(Check(5, "oracle pareto(alpha=1.0) x2", "pass",
              lambda: dm.check_quadrature_oracle([ds.Pareto(1.0)] * 2, (0.5, 0.5), seed=seed,
                                                 m=10**7, workers=workers)))

    # 6. deadly risks
    for n in (2, 3):
        for dep in (independent(), comonotone()):
            add(Check(6, f"deadly p=0.3 n={n} dep={dep.expr}", "pass",
                      lambda n=n, dep=dep: dm.deadly_experiment(0.3, n, dep, seed, 10**6)))

    # 7. heterogeneous marginals, generalized r-means
    f1, f2 = ds.Pareto(0.7), ds.Burr(0.8, 0.9)
    for r in (0.0, 1.0):
        target = cb.generalized_r_mean([f1, f2], (0.5, 0.5), r)
        add(Check(7, f"empirical {target.expr}", "pass",
                  lambda t=target: dm.check_dominance_empirical(
                      t, [f1, f2], (0.5, 0.5), independent(), seed, 10**6, 1e-3,
                      workers=workers)))
    add(Check(7, "r-monotonicity M0 <= M1 <= M2", "pass",
              lambda: dm.check_r_monotonicity([f1, f2], (0.5, 0.5), (0.0, 1.0, 2.0))))

    # 8. super-Frechet and super-Pareto
    for d in (ds.Pareto(1.0), ds.Frechet(0.9), ds.Burr(0.9, 0.9)):
        add(Check(8, f"super-frechet {d.expr}", "pass", lambda d=d: mb.check_super_frechet(d)))
    for d in (ds.Pareto(0.8), ds.Burr(0.8, 0.9), ds.LogPareto(0.9)):
        add(Check(8, f"super-pareto {d.expr}", "pass", lambda d=d: mb.check_super_pareto(d)))
    ig = ds.InverseGeometric(1.0)
    add(Check(8, f"super-frechet {ig.expr}", "fail", lambda: mb.check_super_frechet(ig)))
    add(Check(8, f"class-h {ig.expr}", "pass", lambda: mb.check_subadditive(ig)))

    # 9. VaR
    add(Check(9, "var exact pareto(alpha=1.0) p=0.99", "pass", _var_exact))
    add(Check(9, "var superadditivity pareto(alpha=1.0)", "pass",
              lambda: dm.check_var_superadditivity(ds.Pareto(1.0), (0.5, 0.5),
                                                   (0.9, 0.99, 0.999), independent(), seed,
                                                   10**6, workers=workers)))

    # 10. asymptotic VaR ratio
    add(Check(10, "var ratio pareto(alpha=0.5) n=2", "pass",
              lambda: dm.asymptotic_var_ratio(ds.Pareto(0.5), 2,
                                              (0.5, 0.9, 0.99, 0.999, 0.9999))))

    # 11. random weights
    add(Check(11, "scaling hypothesis pareto(alpha=1.0)", "pass",
              lambda: _Simple(dict(dm.check_scaling_hypothesis(ds.Pareto(1.0)),
                                   verdict="pass"))))
    add(Check(11, "random weights triggering pareto(alpha=1.0)", "pass",
              lambda: dm.check_random_weight_bound(
                  ds.Pareto(1.0), dm.TriggeringWeights((0.5, 0.5), (0.5, 0.5)), seed, 10**6)))

    for expr in inject:
        d = parse_dist(expr)
        add(Check(0, f"injected class-h {d.expr}", "pass", lambda d=d: mb.check_subadditive(d)))
    return checks


def _ordering() -> _Simple:
    v = cb.check_stochastic_ordering([ds.Pareto(1.0), ds.Pareto(0.5)])
    return _Simple(dict(v.to_dict(), verdict="pass" if v.ordered else "fail"))


def _run_one(check: Check):
    try:
        rep = check.run()
        return rep, rep.verdict, None
    except dm.ScalingHypothesisError as exc:
        return None, "inconclusive", f"{exc} witness={exc.witness}"
    except (ArithmeticError, ValueError) as exc:
        return None, "inconclusive", f"{type(exc).__name__}: {exc}"


def run_suite(out_dir, seed: int, fmt: str = "json", inject=(), workers: int = 1,
              log=sys.stderr) -> tuple[int, dict]:
    """Run the battery, write one report per check and ``index.json``; return (exit, index)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for k, check in enumerate(build_checks(seed, inject, workers), start=1):
        t0 = time.perf_counter()
        rep, verdict, error = _run_one(check)
        elapsed = time.perf_counter() - t0
        stem = f"{k:03d}-{_slug(check.name)}"
        body = {"check": check.name, "item": check.item, "expected": check.expected,
                "seed": seed, "report": to_jsonable(rep) if rep is not None else None,
                "error": error}
        if fmt == "csv" and rep is not None:
            header, rows = report_rows(rep)
            fname = write_csv(out / f"{stem}.csv", header, rows).name
        else:
            fname = write_json(out / f"{stem}.json", body).name
        ok = verdict == check.expected
        entries.append({"id": k, "item": check.item, "name": check.name,
                        "expected": check.expected, "observed": verdict, "ok": ok,
                        "file": fname, "error": error})
        if log is not None:
            flag = "ok " if ok else "BAD"
            print(f"[{flag}] item {check.item:2d} {check.name}: {verdict} ({elapsed:.2f}s)",
                  file=log)
    all_ok = all(e["ok"] for e in entries)
    index = {"seed": seed, "format": fmt, "checks": entries, "total": len(entries),
             "failed": [e["id"] for e in entries if not e["ok"]], "passed": all_ok,
             "inject": list(inject)}
    write_json(out / "index.json", index)
    if fmt == "csv":
        write_csv(out / "index.csv", ["id", "item", "name", "expected", "observed", "ok", "file"],
                  [[e[h] for h in ("id", "item", "name", "expected", "observed", "ok", "file")]
                   for e in entries])
    return (0 if all_ok else 1), index


def verdict_map(index: dict) -> dict:
    """``name -> observed verdict`` for comparing two runs."""
    return {e["name"]: e["observed"] for e in index["checks"]}

