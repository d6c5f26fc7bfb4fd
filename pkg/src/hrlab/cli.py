"""Command-line driver: one seed-controlled command per verification or experiment.

Exit status 0 means a report was produced, 2 means a checked theorem-level
assertion failed numerically, 1 means the input was rejected.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import serialize as ser
from .choquet import (
    IsnytosParams,
    boundary_membership,
    boundary_table_csv,
    isnytos_instance,
    separates_points,
    verify_representing,
)
from .convergence_lab import (
    FALSIFIER_FLOOR,
    ConvergenceReport,
    main2_experiment,
    povm_perturbation_search,
    scalar_counterexample_search,
    scalar_moment_residual,
)
from .errors import AllDiagonal, HrlabError
from .exponents import ExactPoint, generates, gcd_diffs, hyperrigid_sufficient, sigma_condition, unseparated_pairs
from .inequalities import selftest, selftest_violations
from .matrix_core import monomial, opnorm, random_normal, spectral_decompose
from .povm import (
    dilation_residuals,
    idempotence_defect,
    is_spectral,
    is_spectral_measure_of,
    moment_operator,
    naimark_dilate,
)
from .tolerance import ToleranceConfig

EXIT_OK, EXIT_INPUT, EXIT_ALARM = 0, 1, 2
COMMANDS = tuple(ser.SCHEMAS)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: Optional[str] = None
    seed: int = 0
    tol: Optional[float] = None
    fmt: str = "json"
    out: Optional[str] = None
    parallel: int = 1

    def tolerance(self) -> ToleranceConfig:
        if self.tol is not None:
            return ToleranceConfig(self.tol, self.tol)
        return ToleranceConfig.from_env()


@dataclass
class Outcome:
    report: dict
    alarm: bool = False
    table: Optional[str] = None  # CSV rendering when the command has one


def _pair_key(m: int, n: int) -> str:
    return f"{m},{n}"


def _theorem_applies(xi) -> bool:
    """Sigma condition plus gcd one: the hypotheses under which matching moments force spectrality."""
    try:
        return sigma_condition(xi) is not None and gcd_diffs(xi) == 1
    except AllDiagonal:
        return False


# --- commands ---------------------------------------------------------------

def cmd_generates(args: dict, cfg: RunConfig) -> Outcome:
    pts = sorted(set(args["points"]))
    missing = unseparated_pairs(args["xi"], pts)
    return Outcome({
        "generates": not missing,
        "unseparated": [[ser.point_to_json(a), ser.point_to_json(b)] for a, b in missing],
    })


def cmd_verdict(args: dict, cfg: RunConfig) -> Outcome:
    return Outcome(hyperrigid_sufficient(args["xi"], args["points"]).to_json())


def cmd_spectrality(args: dict, cfg: RunConfig) -> Outcome:
    tol = cfg.tolerance()
    f, xi = args["povm"], args["xi"]
    t = spectral_decompose(args["operator"], tol)
    if f.dim != t.dim:
        raise HrlabError("POVM and operator act on spaces of different dimension")
    residuals = {
        _pair_key(m, n): opnorm(moment_operator(f, m, n) - monomial(t.matrix, m, n)) for m, n in xi
    }
    scale = max(1.0, opnorm(t.matrix))
    matched = all(
        r <= tol.bound(scale ** (m + n)) for (m, n), r in zip(xi, residuals.values())
    )
    spectral = is_spectral(f, tol)
    alarm = _theorem_applies(xi) and matched and not is_spectral_measure_of(f, t, tol)
    return Outcome({
        "spectral": spectral,
        "spectral_measure_of": is_spectral_measure_of(f, t, tol),
        "moments_match": matched,
        "residuals": residuals,
        "idempotence_defect": idempotence_defect(f),
        "theorem_applies": _theorem_applies(xi),
    }, alarm)


def cmd_dilate(args: dict, cfg: RunConfig) -> Outcome:
    tol = cfg.tolerance()
    f = args["povm"]
    d = naimark_dilate(f, minimal=args["minimal"], tol=tol)
    res = dilation_residuals(f, d, args["max_degree"])
    alarm = res["isometry"] > 1e-10 or res["effects"] > 1e-10 or res["transport"] > 1e-9
    if args["minimal"] and is_spectral(f, tol) and d.big_dim != f.dim:
        alarm = True
    return Outcome({"dilation": ser.dilation_to_json(d), "residuals": res}, alarm)


def _choquet_rows(points, space, require_separation: bool, parallel: int):
    pts = sorted(set(points))

    def one(lam):
        return boundary_membership(pts, space, lam, require_separation=require_separation)

    return _fan_out(one, pts, parallel)


def cmd_choquet(args: dict, cfg: RunConfig) -> Outcome:
    results = _choquet_rows(args["points"], args["space"], args["require_separation"], cfg.parallel)
    rows = [{
        "point": ser.point_to_json(r.point),
        "in_boundary": r.in_boundary,
        "optimal_weight": r.weight,
        "duality_gap": r.duality_gap,
        "witness": ser.measure_to_json(r.witness.positive_part()),
    } for r in results]
    return Outcome({"separating": separates_points(args["space"], args["points"]), "rows": rows},
                   table=boundary_table_csv(results))


def cmd_isnytos(args: dict, cfg: RunConfig) -> Outcome:
    params = IsnytosParams(tuple(args["d"]), tuple(args["pairs"]), tuple(args["beta"]))
    inst = isnytos_instance(params)
    one = ExactPoint(1.0)
    representing = verify_representing(inst.measure, inst.space, one)
    br = boundary_membership(inst.points, inst.space, one)
    gen = generates(inst.space.exponent_set(), inst.points)
    report = {
        "radii": list(inst.radii),
        "alphas": list(inst.alphas),
        "points": [ser.point_to_json(p) for p in inst.points],
        "measure": ser.measure_to_json(inst.measure),
        "space": ser.pairs_to_json(inst.space.bidegrees),
        "verify_representing": representing,
        "generates": gen,
        "boundary_at_one": {"in_boundary": br.in_boundary, "optimal_weight": br.weight,
                            "duality_gap": br.duality_gap},
    }
    return Outcome(report, alarm=not representing or br.in_boundary or not gen)


def convergence_report_json(report: ConvergenceReport) -> dict:
    details = dict(report.details)
    for key in ("lambda0", "lam"):
        if isinstance(details.get(key), ExactPoint):
            details[key] = ser.point_to_json(details[key])
    if "witness" in details:
        details["witness"] = ser.measure_to_json(details["witness"])
    return {
        "rows": [
            {"f": r.label, "n": r.n, "weakGap": r.weak_gap, "strongGap": r.strong_gap,
             "stationarity": r.stationarity, "wphnwResidual": r.wphnw_residual}
            for r in report.rows
        ],
        "stable_from": report.stable_from,
        "boundary_norm": report.boundary_norm,
        "wphnw_max": report.wphnw_max,
        "sup_norm": report.sup_norm,
        "comparison_norm": report.comparison_norm,
        "wydnu_ok": report.wydnu_ok,
        "flags": report.flags,
        "details": details,
    }


def cmd_converge(args: dict, cfg: RunConfig) -> Outcome:
    tol = cfg.tolerance()
    report = main2_experiment(
        args["points"], args["space"], args["lambda0"], lam=args["lam"], h_dim=args["h_dim"],
        n_max=args["n_max"], padding=args["padding"], max_probe_degree=args["max_probe_degree"],
        require_separation=args["require_separation"], tol=tol,
    )
    alarm = not all(report.flags.values()) or report.wphnw_max > 1e-12 * max(1.0, report.sup_norm) ** 2
    alarm = alarm or not report.wydnu_ok
    return Outcome(convergence_report_json(report), alarm, table=report.to_csv())


def cmd_search_scalar(args: dict, cfg: RunConfig) -> Outcome:
    p, q, r, t = args["p"], args["q"], args["r"], args["t"]
    mu = scalar_counterexample_search(p, q, r, t, args["budget"])
    report = {"found": mu is not None, "measure": None, "residual": None}
    if mu is not None:
        report["measure"] = ser.measure_to_json(mu)
        report["residual"] = scalar_moment_residual(mu, p, q, r, t)
    return Outcome(report)


def cmd_search_povm(args: dict, cfg: RunConfig) -> Outcome:
    tol = cfg.tolerance()
    xi = args["xi"]
    trials = args["trials"]
    seeds = np.random.SeedSequence(cfg.seed).spawn(trials)
    given = spectral_decompose(args["operator"], tol) if args["operator"] is not None else None

    def one(index: int) -> dict:
        rng = np.random.default_rng(seeds[index])
        t = given if given is not None else spectral_decompose(random_normal(args["dim"], rng), tol)
        search_seed = int(rng.integers(2**31))
        res = povm_perturbation_search(t, xi, args["budget"], search_seed, args["seed_measure"])
        return {
            "trial": index,
            "operator": ser.matrix_to_json(t.matrix),
            "best_residual": res.best_residual if math.isfinite(res.best_residual) else None,
            "best_defect": res.best_defect,
            "steps": res.steps,
            "witness": ser.povm_to_json(res.witness) if res.witness is not None else None,
        }

    rows = _fan_out(one, list(range(trials)), cfg.parallel)
    alarm = _theorem_applies(xi) and any(r["witness"] is not None for r in rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trial", "best_residual", "best_defect", "witness_found"])
    for r in rows:
        writer.writerow([r["trial"], repr(r["best_residual"]), repr(r["best_defect"]), r["witness"] is not None])
    return Outcome({"theorem_applies": _theorem_applies(xi), "falsifier_floor": FALSIFIER_FLOOR, "trials": rows},
                   alarm, table=buf.getvalue())


def cmd_inequalities_selftest(args: dict, cfg: RunConfig) -> Outcome:
    rng = np.random.default_rng(cfg.seed)
    summary = selftest(rng, **args)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["suite", "metric", "value"])
    for suite, values in sorted(summary.items()):
        for metric, value in sorted(values.items()):
            writer.writerow([suite, metric, repr(value)])
    return Outcome(summary, selftest_violations(summary) > 0, table=buf.getvalue())


HANDLERS: dict[str, Callable[[dict, RunConfig], Outcome]] = {
    "generates": cmd_generates,
    "verdict": cmd_verdict,
    "spectrality": cmd_spectrality,
    "dilate": cmd_dilate,
    "choquet": cmd_choquet,
    "isnytos": cmd_isnytos,
    "converge": cmd_converge,
    "search-scalar": cmd_search_scalar,
    "search-povm": cmd_search_povm,
    "inequalities-selftest": cmd_inequalities_selftest,
}


def _fan_out(fn, items, parallel: int) -> list:
    if parallel <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=parallel) as pool:
        return list(pool.map(fn, items))  # map keeps input order


def _flat_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])

    def walk(prefix: str, value) -> None:
        if isinstance(value, dict):
            for k in sorted(value):
                walk(f"{prefix}.{k}" if prefix else str(k), value[k])
        elif isinstance(value, list):
            for i, v in enumerate(value):
                walk(f"{prefix}[{i}]", v)
        else:
            writer.writerow([prefix, repr(value) if isinstance(value, float) else value])

    walk("", report)
    return buf.getvalue()


def render(outcome: Outcome, fmt: str) -> str:
    if fmt == "csv":
        return outcome.table if outcome.table is not None else _flat_csv(outcome.report)
    return ser.dumps(outcome.report)


def run(cfg: RunConfig, stdin=None) -> tuple[int, str]:
    """Execute one command; returns the exit code and the rendered report (or error text)."""
    try:
        if cfg.input_path is None:
            data = None
        elif cfg.input_path == "-":
            data = ser.load_json((stdin or sys.stdin).read())
        else:
            with open(cfg.input_path, encoding="utf-8") as fh:
                data = ser.load_json(fh.read())
        args = ser.parse_input(cfg.command, data)
        outcome = HANDLERS[cfg.command](args, cfg)
    except (HrlabError, ValueError, OSError) as exc:
        return EXIT_INPUT, f"{cfg.command}: {type(exc).__name__}: {exc}\n"
    return (EXIT_ALARM if outcome.alarm else EXIT_OK), render(outcome, cfg.fmt)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hrlab", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", help="JSON input file, '-' for stdin")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float, help="absolute and relative tolerance (overrides HRLAB_TOL)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--parallel", type=int, default=1, help="worker threads for independent trials")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(ns.command, ns.input, ns.seed, ns.tol, ns.format, ns.out, max(1, ns.parallel))
    code, text = run(cfg)
    if code == EXIT_INPUT:
        sys.stderr.write(text)
    elif cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
