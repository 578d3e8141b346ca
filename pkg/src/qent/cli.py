"""Command-line front end.

Subcommands::

    qent analyze STATE.json [--format json|table]
    qent simulate STATE.json --strategy full9|schmidt3|schmidt2|pure3 --shots N --seed S
                  [--bootstrap B] [--z Z] [--format text|json] [--record-out PATH]
    qent study --ensemble pure|mixed|werner --count N --seed S --out TABLE.csv

``analyze`` and ``simulate`` exit with 0 when entanglement is detected, 1 when
it is not, and 2 on bad input. ``study`` exits with 3 if any state passes the
CHSH test but fails the trace-norm test. ``QENT_TOLERANCE`` sets the boundary
tolerance around every threshold.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import criteria, measure_sim, measures, states
from .numerics import TOL, svd3
from .pauli import correlation_matrix, t_matrix

EXIT_DETECTED = 0
EXIT_NOT_DETECTED = 1
EXIT_INPUT_ERROR = 2
EXIT_INCLUSION_VIOLATED = 3


class InputError(Exception):
    pass


def boundary_tolerance():
    raw = os.environ.get("QENT_TOLERANCE")
    if raw is None:
        return TOL.boundary
    try:
        value = float(raw)
    except ValueError:
        raise InputError(f"QENT_TOLERANCE={raw!r} is not a number") from None
    if not value >= 0 or math.isinf(value):
        raise InputError(f"QENT_TOLERANCE must be a finite nonnegative number, got {raw!r}")
    return value


@dataclass(frozen=True)
class AnalysisReport:
    state: dict
    density: np.ndarray
    correlation: np.ndarray
    criteria: list
    summary: measures.EntanglementSummary
    seconds: float

    @property
    def detected(self):
        return any(r.entangled for r in self.criteria)

    def as_dict(self):
        return {
            "state": self.state,
            "density": states.density_to_json(self.density),
            "correlation": self.correlation.tolist(),
            "criteria": [r.as_dict() for r in self.criteria],
            "summary": self.summary.as_dict(),
            "timing": {"seconds": self.seconds},
        }


def analyze_state(rho, description=None, boundary_tol=None):
    """Noiseless analysis of one state: every criterion plus the entanglement summary."""
    start = time.perf_counter()
    r = correlation_matrix(rho)
    reports = criteria.run_all(rho, boundary_tol=boundary_tol)
    summary = measures.summarize(rho)
    return AnalysisReport(
        state=description if description is not None else {"density": states.density_to_json(rho)},
        density=np.asarray(rho, dtype=complex),
        correlation=r,
        criteria=reports,
        summary=summary,
        seconds=time.perf_counter() - start,
    )


def _load_checked_state(path):
    try:
        rho, description = states.load_state(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except states.StateFormatError as exc:
        raise InputError(str(exc)) from None
    diag = states.validate(rho)
    if not diag.is_valid():
        details = ", ".join(f"{k}={v:.3e}" for k, v in diag.as_dict().items())
        raise InputError(f"{path}: not a valid density matrix ({details})")
    return rho, description


def render_table(report):
    """Plain-text rendering of an analysis report dictionary."""
    lines = ["criterion                 statistic   threshold      margin  verdict"]
    for c in report["criteria"]:
        flag = " (boundary)" if c["boundary"] else ""
        lines.append(
            f"{c['name']:<24}{c['statistic']:>11.6f}{c['threshold']:>12.6f}{c['margin']:>12.6f}  {c['verdict']}{flag}"
        )
    s = report["summary"]
    lines.append("")
    lines.append(f"concurrence      {s['concurrence']:.6f}")
    lines.append(f"formation        {s['eof']:.6f}")
    lines.append(f"lower bound      {s['lower_bound']:.6f}")
    lines.append("tau              " + "  ".join(f"{x:.6f}" for x in s["tau"]))
    lines.append("")
    lines.append("correlation matrix R")
    for row in report["correlation"]:
        # round first so rounding-level negatives do not print as -0.000000
        lines.append("  " + "  ".join(f"{round(x, 6) + 0.0:>9.6f}" for x in row))
    return "\n".join(lines)


def cmd_analyze(args):
    rho, description = _load_checked_state(args.file)
    report = analyze_state(rho, description, boundary_tol=boundary_tolerance())
    data = report.as_dict()
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        print(render_table(data))
    return EXIT_DETECTED if report.detected else EXIT_NOT_DETECTED


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from None


def _estimate(record, strategy, bootstrap, z, seed):
    if strategy == "full9":
        return measure_sim.estimate_trace_norm(record, bootstrap, z, seed)
    if strategy in ("schmidt3", "schmidt2"):
        return measure_sim.estimate_schmidt_family(record, strategy, bootstrap, z, seed)
    c, sigma = measure_sim.estimate_pure_concurrence(record, bootstrap, seed)
    return measure_sim.stat_verdict("pure_concurrence", c, sigma, 0.0, z)


def cmd_simulate(args, parser):
    obj = _read_json(args.file)
    plan = measure_sim.make_plan(args.strategy, args.shots or 1)
    if isinstance(obj, dict) and "settings" in obj:
        try:
            record = measure_sim.MeasurementRecord.from_json(obj)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        if args.shots is None:
            parser.error("simulate: --shots is required when the input is a state")
        if args.shots < 1:
            parser.error("simulate: --shots must be positive")
        try:
            rho = states.state_from_json(obj)
        except states.StateFormatError as exc:
            raise InputError(str(exc)) from None
        if not states.validate(rho).is_valid():
            raise InputError(f"{args.file}: not a valid density matrix")
        record = measure_sim.run_plan(rho, plan, args.seed)

    # bootstrap stream kept apart from the sampling streams
    try:
        verdict = _estimate(record, plan.strategy, args.bootstrap, args.z, [args.seed, 1])
    except measure_sim.IncompletePlan as exc:
        raise InputError(str(exc)) from None
    measured = measure_sim.MeasurementPlan(
        plan.strategy, tuple((s.i, s.j) for s in record.settings), max(1, record.settings[0].shots)
    )
    f_cost = measure_sim.cost_accounting(measured)

    if args.record_out:
        with open(args.record_out, "w", encoding="utf-8") as fh:
            json.dump(record.to_json(), fh, indent=2)

    if args.format == "json":
        print(
            json.dumps(
                {
                    "strategy": plan.strategy,
                    "verdict": verdict.as_dict(),
                    "total_shots": record.total_shots,
                    "f_cost": f_cost,
                    "tomography_f_cost": measure_sim.TOMOGRAPHY_COST,
                    "record": record.to_json(),
                },
                indent=2,
            )
        )
    else:
        print(f"strategy      {plan.strategy}")
        print(f"verdict       {verdict.verdict}")
        print(f"statistic     {verdict.statistic:.6f} +/- {verdict.sigma:.6f}  (threshold {verdict.threshold:g})")
        print(f"z margin      {verdict.z_margin:.3f}  (required {verdict.z_required:g})")
        print(f"total shots   {record.total_shots}")
        print(f"f cost        {f_cost}  (tomography {measure_sim.TOMOGRAPHY_COST})")
    return EXIT_DETECTED if verdict.verdict == "entangled" else EXIT_NOT_DETECTED


STUDY_COLUMNS = [
    "index",
    "param",
    "trace_norm",
    "chsh_statistic",
    "concurrence",
    "lower_bound",
    "ppt_min_eigenvalue",
    "witness_value",
    "trace_norm_verdict",
    "chsh_verdict",
    "ppt_verdict",
    "witness_verdict",
]
_VERDICT_COLUMNS = STUDY_COLUMNS[-4:]


def study_ensemble(ensemble, count, seed):
    """Stack of density matrices plus a per-state parameter (rank or ``p``)."""
    if count < 1:
        raise InputError("--count must be positive")
    if ensemble == "werner":
        params = np.linspace(0.0, 1.0, count) if count > 1 else np.array([1.0])
        return np.array([states.werner(float(p)) for p in params]), params
    children = np.random.SeedSequence(seed).spawn(count)
    if ensemble == "pure":
        rhos = [states.density_from_pure(states.random_pure(c)) for c in children]
        return np.array(rhos), np.ones(count)
    ranks = 1 + np.arange(count) % 4
    rhos = [states.random_mixed(c, rank=int(k)) for c, k in zip(children, ranks)]
    return np.array(rhos), ranks.astype(float)


def study_rows(rhos, params, boundary_tol=None):
    """One dictionary per state with every statistic and verdict."""
    t = t_matrix(correlation_matrix(rhos))
    s = svd3(t)
    trace_norm = s.sum(axis=-1)
    chsh = s[:, 0] ** 2 + s[:, 1] ** 2
    conc = measures.concurrence(rhos)
    ppt = criteria.ppt_min_eigenvalue(rhos)
    witness = np.einsum("ab,nba->n", criteria.witness_matrix(), rhos).real
    rows = []
    for k in range(len(rhos)):
        rows.append(
            {
                "index": k,
                "param": float(params[k]),
                "trace_norm": float(trace_norm[k]),
                "chsh_statistic": float(chsh[k]),
                "concurrence": float(conc[k]),
                "lower_bound": float(0.5 * (trace_norm[k] - 1.0)),
                "ppt_min_eigenvalue": float(ppt[k]),
                "witness_value": float(witness[k]),
                "trace_norm_verdict": criteria.criterion_report("trace_norm", trace_norm[k], 1.0, boundary_tol).verdict,
                "chsh_verdict": criteria.criterion_report("chsh", chsh[k], 1.0, boundary_tol).verdict,
                "ppt_verdict": criteria.criterion_report("ppt", -ppt[k], 0.0, boundary_tol).verdict,
                "witness_verdict": criteria.criterion_report("witness", -witness[k], 0.0, boundary_tol).verdict,
            }
        )
    return rows


def detection_rates(rows):
    n = len(rows)
    return {col: sum(r[col] == criteria.ENTANGLED for r in rows) / n for col in _VERDICT_COLUMNS}


def inclusion_violations(rows):
    """Indices detected by CHSH but not by the trace norm."""
    return [
        r["index"]
        for r in rows
        if r["chsh_verdict"] == criteria.ENTANGLED and r["trace_norm_verdict"] != criteria.ENTANGLED
    ]


def write_study_csv(path, rows):
    rates = detection_rates(rows)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(STUDY_COLUMNS)
        for r in rows:
            writer.writerow([repr(r[c]) if isinstance(r[c], float) else r[c] for c in STUDY_COLUMNS])
        summary = ["detection_rate"] + [""] * (len(STUDY_COLUMNS) - 1 - len(_VERDICT_COLUMNS))
        writer.writerow(summary + [repr(rates[c]) for c in _VERDICT_COLUMNS])
    return rates


def cmd_study(args):
    rhos, params = study_ensemble(args.ensemble, args.count, args.seed)
    rows = study_rows(rhos, params, boundary_tol=boundary_tolerance())
    rates = write_study_csv(args.out, rows)
    violations = inclusion_violations(rows)
    print(f"{len(rows)} states written to {args.out}")
    for col, rate in rates.items():
        print(f"  {col.removesuffix('_verdict'):<12}{rate:.4f}")
    if violations:
        print(f"CHSH detected but trace norm did not for states {violations[:10]}", file=sys.stderr)
        return EXIT_INCLUSION_VIOLATED
    print("  CHSH => trace-norm inclusion: no violations")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="qent", description="Two-qubit entanglement detection.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="exact analysis of a state file")
    p.add_argument("file")
    p.add_argument("--format", choices=["json", "table"], default="json")

    p = sub.add_parser("simulate", help="finite-shot measurement simulation")
    p.add_argument("file", help="state file, or a measurement record with a 'settings' list")
    p.add_argument("--strategy", required=True, choices=["full9", "schmidt3", "schmidt2", "pure3"])
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bootstrap", type=int, default=1000)
    p.add_argument("--z", type=float, default=3.0)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--record-out")

    p = sub.add_parser("study", help="criteria over a state ensemble, written as CSV")
    p.add_argument("--ensemble", required=True, choices=["pure", "mixed", "werner"])
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "simulate":
            return cmd_simulate(args, parser)
        return cmd_study(args)
    except InputError as exc:
        print(f"qent: error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
