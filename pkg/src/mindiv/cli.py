"""Command line front end: estimate, experiment, check-model, project."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .estimator import OuterGridConfig, inner_minimize_population, outer_minimize
from .harness import (DEFAULT_N_LADDER, ExperimentConfig, audit_model,
                      build_divergence_config, build_model, run_experiment,
                      true_density, write_experiment_outputs)
from .model import (FeasibilityError, ModelFileError, default_model_description,
                    load_model_description)
from .sampling import load_sample_csv, sample


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, default=0.5,
                        help="divergence exponent in (0, 1] (default 0.5)")
    parser.add_argument("--theta-min", type=float, default=0.2,
                        help="lower end of the parameter interval")
    parser.add_argument("--theta-max", type=float, default=0.6,
                        help="upper end of the parameter interval")
    parser.add_argument("--gamma", type=float, default=1e-6,
                        help="positivity floor for densities in the class")
    parser.add_argument("--quad-order", type=int, default=32,
                        help="Gauss quadrature order shared by all integrals")
    parser.add_argument("--grid", type=int, default=41,
                        help="outer grid points over the parameter interval")
    parser.add_argument("--true-a", type=float, default=4.0,
                        help="leading coefficient of the reference density")
    parser.add_argument("--true-mu", type=float, default=0.4,
                        help="mean of the reference density")


def _experiment_config(args, **overrides) -> ExperimentConfig:
    base = dict(
        replications=getattr(args, "reps", 1),
        base_seed=getattr(args, "seed", 42),
        alpha=args.alpha, true_a=args.true_a, true_mu=args.true_mu,
        theta_min=args.theta_min, theta_max=args.theta_max,
        gamma=args.gamma, quad_order=args.quad_order,
        grid_points=args.grid,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def _cmd_estimate(args) -> int:
    config = _experiment_config(args)
    model = build_model(config)
    cfg = build_divergence_config(config, model)
    grid = OuterGridConfig(points=config.grid_points)

    if args.population:
        data = true_density(config, model)
    elif args.sample_file:
        data = load_sample_csv(args.sample_file)
    else:
        p0 = true_density(config, model)
        data = sample(p0, args.n, args.seed)

    result = outer_minimize(data, model, cfg, grid)
    sys.stdout.write(result.summary_text())
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        profile_path = out / "profile.csv"
        profile_path.write_text(result.profile_csv(), encoding="utf-8")
        sys.stdout.write(f"profile written to {profile_path}\n")
    return 0


def _cmd_experiment(args) -> int:
    ladder = tuple(int(tok) for tok in args.n_ladder.split(",")) \
        if args.n_ladder else DEFAULT_N_LADDER
    config = _experiment_config(
        args, n_ladder=ladder, output_dir=args.out,
        time_budget_s=args.time_budget, workers=args.workers)
    rows = run_experiment(config)
    paths = write_experiment_outputs(rows, config, args.out)
    failed = sum(1 for r in rows if r.error)
    sys.stdout.write(f"{len(rows)} rows written ({failed} with errors)\n")
    for name, path in paths.items():
        sys.stdout.write(f"{name}: {path}\n")
    return 0


def _cmd_check_model(args) -> int:
    if args.model_file:
        desc = load_model_description(args.model_file)
    else:
        desc = default_model_description(alpha=args.alpha,
                                         quad_order=args.quad_order)
    report = audit_model(desc)
    sys.stdout.write(report.text())
    return 0 if report.all_ok else 1


def _cmd_project(args) -> int:
    config = _experiment_config(args)
    model = build_model(config)
    cfg = build_divergence_config(config, model)
    p0 = true_density(config, model)
    sol = inner_minimize_population(args.theta, p0, model, cfg)
    a, b, c = sol.density.coefficients
    sys.stdout.write(
        f"theta = {sol.theta!r}\n"
        f"a_star = {sol.a_star!r}\n"
        f"coefficients: a = {a!r}, b = {b!r}, c = {c!r}\n"
        f"objective = {sol.objective!r}\n"
        f"feasible a-interval = [{sol.feasible_interval[0]!r}, "
        f"{sol.feasible_interval[1]!r}]\n"
        f"at_boundary = {sol.at_boundary}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mindiv",
        description="Minimum power-divergence estimation for mean-constrained "
                    "quadratic densities on a compact interval.")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="run a single estimation")
    _add_model_flags(est)
    est.add_argument("--n", type=int, default=1000, help="sample size to draw")
    est.add_argument("--seed", type=int, default=42, help="sampling seed")
    est.add_argument("--population", action="store_true",
                     help="use the reference density itself (no sampling)")
    est.add_argument("--sample-file", type=str, default=None,
                     help="read the sample from a single-column CSV")
    est.add_argument("--out", type=str, default=None,
                     help="directory for the profile CSV")
    est.set_defaults(func=_cmd_estimate)

    exp = sub.add_parser("experiment", help="replication sweep over sample sizes")
    _add_model_flags(exp)
    exp.add_argument("--n-ladder", type=str, default=None,
                     help="comma-separated sample sizes (default full ladder)")
    exp.add_argument("--reps", type=int, default=1,
                     help="replications per sample size")
    exp.add_argument("--seed", type=int, default=42, help="base seed")
    exp.add_argument("--out", type=str, default="sweep-output",
                     help="output directory for CSVs and charts")
    exp.add_argument("--time-budget", type=float, default=None,
                     help="per-estimation wall budget in seconds; slower rows "
                          "are recorded as timeouts")
    exp.add_argument("--workers", type=int, default=1,
                     help="process pool size for replications")
    exp.set_defaults(func=_cmd_experiment)

    chk = sub.add_parser("check-model", help="audit the model conditions")
    chk.add_argument("--model-file", type=str, default=None,
                     help="model description file (key = value text); "
                          "defaults to the built-in model")
    chk.add_argument("--alpha", type=float, default=0.5)
    chk.add_argument("--quad-order", type=int, default=32)
    chk.set_defaults(func=_cmd_check_model)

    prj = sub.add_parser("project",
                         help="population projection at a fixed theta")
    _add_model_flags(prj)
    prj.add_argument("--theta", type=float, required=True,
                     help="parameter value to project at")
    prj.set_defaults(func=_cmd_project)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ModelFileError, FeasibilityError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
