"""Replication sweeps across sample sizes, plus the model condition audit.

The sweep draws seeded samples from the configured true density for every
(n, replication) pair, runs the two-step estimator, and writes a CSV table
plus two SVG convergence charts (one for the mean parameter, one for the
leading coefficient).  Per-row failures are recorded in an error column
and the sweep continues.

Determinism: row seeds derive from the base seed and the flat row index,
and rows are emitted in (ladder order, replication) order, so two runs
with the same configuration produce byte-identical estimate CSVs.  Wall
times are inherently non-deterministic and therefore go to a separate
timings file.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .divergence import DivergenceConfig
from .estimator import (OuterGridConfig, outer_minimize,
                        projection_lipschitz_probe)
from .model import (FeasibilityError, ModelDescription, MomentModel,
                    check_membership, density_from_constraints,
                    feasible_a_interval, unit_interval_model)
from .sampling import derive_seed, sample
from .svgchart import write_convergence_chart

DEFAULT_N_LADDER = (10, 50, 100, 500, 1000, 5000, 10000, 50000, 100000)

SWEEP_COLUMNS = ("n", "replication", "seed", "mu_hat", "a_hat",
                 "abs_err_mu", "abs_err_a", "error")


@dataclass(frozen=True)
class ExperimentConfig:
    n_ladder: Tuple[int, ...] = DEFAULT_N_LADDER
    replications: int = 1
    base_seed: int = 42
    alpha: float = 0.5
    true_a: float = 4.0
    true_mu: float = 0.4
    theta_min: float = 0.2
    theta_max: float = 0.6
    gamma: float = 1e-6
    quad_order: int = 32
    grid_points: int = 41
    output_dir: str = "sweep-output"
    time_budget_s: Optional[float] = None
    workers: int = 1

    def __post_init__(self):
        if not self.n_ladder or any(n < 1 for n in self.n_ladder):
            raise ValueError("every ladder entry must be a positive sample size")
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass(frozen=True)
class SweepRow:
    n: int
    replication: int
    seed: int
    mu_hat: Optional[float]
    a_hat: Optional[float]
    abs_err_mu: Optional[float]
    abs_err_a: Optional[float]
    wall_time_ms: int
    error: str = ""


def build_model(config: ExperimentConfig) -> MomentModel:
    return unit_interval_model(theta_min=config.theta_min,
                               theta_max=config.theta_max,
                               gamma=config.gamma, alpha=config.alpha)


def build_divergence_config(config: ExperimentConfig,
                            model: MomentModel) -> DivergenceConfig:
    return DivergenceConfig.for_domain(config.alpha, model.domain,
                                       order=config.quad_order)


def true_density(config: ExperimentConfig, model: MomentModel):
    return density_from_constraints(config.true_a, config.true_mu, model.domain)


def run_single(config: ExperimentConfig, n: int, replication: int,
               row_index: int) -> SweepRow:
    """One seeded estimation; failures land in the error column."""
    seed = derive_seed(config.base_seed, row_index)
    started = time.perf_counter()
    try:
        model = build_model(config)
        cfg = build_divergence_config(config, model)
        p0 = true_density(config, model)
        data = sample(p0, n, seed)
        grid = OuterGridConfig(points=config.grid_points)
        result = outer_minimize(data, model, cfg, grid)
        elapsed_ms = int(round(1000.0 * (time.perf_counter() - started)))
        error = ""
        if config.time_budget_s is not None and elapsed_ms > 1000.0 * config.time_budget_s:
            error = "timeout"
        return SweepRow(n=n, replication=replication, seed=seed,
                        mu_hat=result.theta_hat, a_hat=result.a_hat,
                        abs_err_mu=abs(result.theta_hat - config.true_mu),
                        abs_err_a=abs(result.a_hat - config.true_a),
                        wall_time_ms=elapsed_ms, error=error)
    except (FeasibilityError, ValueError) as exc:
        elapsed_ms = int(round(1000.0 * (time.perf_counter() - started)))
        return SweepRow(n=n, replication=replication, seed=seed,
                        mu_hat=None, a_hat=None, abs_err_mu=None,
                        abs_err_a=None, wall_time_ms=elapsed_ms,
                        error=str(exc) or exc.__class__.__name__)


def run_experiment(config: ExperimentConfig) -> List[SweepRow]:
    """All (n, replication) rows, in deterministic order."""
    tasks = []
    row_index = 0
    for n in config.n_ladder:
        for rep in range(config.replications):
            tasks.append((n, rep, row_index))
            row_index += 1
    if config.workers == 1:
        return [run_single(config, n, rep, idx) for n, rep, idx in tasks]
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        futures = [pool.submit(run_single, config, n, rep, idx)
                   for n, rep, idx in tasks]
        return [f.result() for f in futures]  # original submission order


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.12g}"


def write_sweep_csv(rows: Sequence[SweepRow], path) -> None:
    """Deterministic estimate table; wall times go to a separate file."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(SWEEP_COLUMNS) + "\n")
        for r in rows:
            fh.write(f"{r.n},{r.replication},{r.seed},{_fmt(r.mu_hat)},"
                     f"{_fmt(r.a_hat)},{_fmt(r.abs_err_mu)},{_fmt(r.abs_err_a)},"
                     f"{r.error}\n")


def write_timings_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("n,replication,wall_time_ms\n")
        for r in rows:
            fh.write(f"{r.n},{r.replication},{r.wall_time_ms}\n")


def read_sweep_csv(path) -> List[SweepRow]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            def fget(key):
                return float(rec[key]) if rec[key] else None
            rows.append(SweepRow(
                n=int(rec["n"]), replication=int(rec["replication"]),
                seed=int(rec["seed"]), mu_hat=fget("mu_hat"),
                a_hat=fget("a_hat"), abs_err_mu=fget("abs_err_mu"),
                abs_err_a=fget("abs_err_a"), wall_time_ms=0,
                error=rec.get("error", "") or ""))
    return rows


def _estimates_by_n(rows: Sequence[SweepRow], attr: str) -> Dict[int, List[float]]:
    grouped: Dict[int, List[float]] = {}
    for r in rows:
        value = getattr(r, attr)
        if r.error == "" and value is not None:
            grouped.setdefault(r.n, []).append(value)
    return grouped


def write_experiment_outputs(rows: Sequence[SweepRow], config: ExperimentConfig,
                             out_dir) -> Dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "sweep": out / "sweep.csv",
        "timings": out / "timings.csv",
        "mu_chart": out / "mu_estimates.svg",
        "a_chart": out / "a_estimates.svg",
    }
    write_sweep_csv(rows, paths["sweep"])
    write_timings_csv(rows, paths["timings"])
    write_convergence_chart(_estimates_by_n(rows, "mu_hat"), config.true_mu,
                            "Estimated mean vs sample size",
                            "estimate of mu", paths["mu_chart"])
    write_convergence_chart(_estimates_by_n(rows, "a_hat"), config.true_a,
                            "Estimated leading coefficient vs sample size",
                            "estimate of a", paths["a_chart"])
    return paths


# ---------------------------------------------------------------------------
# Model condition audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditCheck:
    name: str
    ok: bool
    witness: str


@dataclass(frozen=True)
class AuditReport:
    checks: Tuple[AuditCheck, ...]

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def text(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.ok else "FAIL"
            lines.append(f"[{status}] {c.name}: {c.witness}")
        lines.append("overall: " + ("PASS" if self.all_ok else "FAIL"))
        return "\n".join(lines) + "\n"


def _feasibility_scan(model: MomentModel, points: int = 41):
    lo, hi = model.theta_min, model.theta_max
    step = (hi - lo) / (points - 1)
    feasible = []
    empty = []
    intervals = {}
    for k in range(points):
        theta = lo + k * step
        try:
            intervals[theta] = feasible_a_interval(theta, model)
            feasible.append(theta)
        except FeasibilityError:
            empty.append(theta)
    return feasible, empty, intervals


def audit_model(desc: ModelDescription, theta_points: int = 41,
                a_points: int = 9, probe_half_width: float = 0.1) -> AuditReport:
    """Instance-level audit of the model conditions.

    Scans the feasible (theta, a) box, checks the uniform bound, the
    power-Lipschitz slope, the positivity floor and the construction
    residuals, then probes the stability of the population-projection
    Lipschitz ratio at two grid refinements around the reference mean.
    """
    model = desc.model
    cc = model.class_config
    cfg = DivergenceConfig.for_domain(desc.alpha, model.domain,
                                      order=desc.quad_order)
    checks = []

    feasible, empty, intervals = _feasibility_scan(model, theta_points)
    if feasible:
        witness = (f"{len(feasible)}/{theta_points} grid points feasible, "
                   f"range [{min(feasible):.4g}, {max(feasible):.4g}]")
        if empty:
            witness += (f"; empty feasible sets at "
                        f"{', '.join(f'{t:.4g}' for t in empty[:6])}"
                        + ("..." if len(empty) > 6 else ""))
    else:
        witness = "no grid point admits any density"
    checks.append(AuditCheck("feasibility", bool(feasible), witness))

    max_sup = 0.0
    max_slope = 0.0
    min_floor = float("inf")
    max_residual = 0.0
    for theta in feasible:
        a_lo, a_hi = intervals[theta]
        for k in range(a_points):
            a = a_lo + (a_hi - a_lo) * k / (a_points - 1)
            q = density_from_constraints(a, theta, model.domain)
            report = check_membership(q, theta, model, alpha=desc.alpha)
            max_sup = max(max_sup, report.sup_abs)
            max_slope = max(max_slope, report.max_power_slope)
            min_floor = min(min_floor, report.min_value)
            max_residual = max(max_residual, abs(report.moment_residual),
                               abs(report.normalization_residual))

    checks.append(AuditCheck(
        "uniform_bound", bool(feasible) and max_sup <= cc.bound,
        f"max sup|q| = {max_sup:.6g} vs bound {cc.bound:.6g}"))
    checks.append(AuditCheck(
        "power_lipschitz", bool(feasible) and max_slope <= cc.slope_bound(),
        f"max grid slope of q^alpha = {max_slope:.6g} vs bound {cc.slope_bound():.6g}"))
    checks.append(AuditCheck(
        "positivity_floor", bool(feasible) and min_floor >= cc.floor_gamma - 1e-12,
        f"min q over scan = {min_floor:.6g} vs floor {cc.floor_gamma:.6g}"))
    checks.append(AuditCheck(
        "construction_residuals", bool(feasible) and max_residual < 1e-8,
        f"max |moment/mass residual| = {max_residual:.3g}"))

    # projection-Lipschitz stability around the reference mean
    p0 = density_from_constraints(desc.true_a, desc.true_mu, model.domain)
    ratio_ok = False
    witness = "skipped: reference mean infeasible"
    try:
        lo = desc.true_mu - probe_half_width
        hi = desc.true_mu + probe_half_width
        grid_coarse = [lo + 0.01 * k for k in range(int(round((hi - lo) / 0.01)) + 1)]
        grid_fine = [lo + 0.005 * k for k in range(int(round((hi - lo) / 0.005)) + 1)]
        r_coarse = projection_lipschitz_probe(model, p0, cfg, grid_coarse)
        r_fine = projection_lipschitz_probe(model, p0, cfg, grid_fine)
        rel = abs(r_fine - r_coarse) / max(abs(r_coarse), 1e-12)
        ratio_ok = rel <= 0.2
        witness = (f"ratio {r_coarse:.6g} at step 0.01, {r_fine:.6g} at step 0.005 "
                   f"(relative change {rel:.3g})")
    except FeasibilityError as exc:
        witness = f"skipped: {exc}"
    checks.append(AuditCheck("projection_lipschitz_stability", ratio_ok, witness))

    return AuditReport(checks=tuple(checks))
