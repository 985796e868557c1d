import numpy as np
import pytest

import mindiv as md
from mindiv.estimator import OuterGridConfig, projection_lipschitz_probe
from mindiv.sampling import EmpiricalMeasure


class TestInnerPopulation:
    def test_projects_member_onto_itself(self, model, cfg, p0):
        # the data density satisfies the constraint at 0.4, so the
        # projection is the density itself and the objective is -d1
        sol = md.inner_minimize_population(0.4, p0, model, cfg)
        assert abs(sol.a_star - 4.0) < 1e-4
        assert abs(sol.objective - (-md.d1(p0, cfg))) < 1e-8
        assert md.check_membership(sol.density, 0.4, model).admitted

    def test_objective_grows_away_from_true_mean(self, model, cfg, p0):
        at_true = md.inner_minimize_population(0.4, p0, model, cfg).objective
        away = md.inner_minimize_population(0.5, p0, model, cfg).objective
        assert away > at_true

    def test_matches_brute_force_grid(self, model, cfg, p0):
        # coarse independent scan of the projected criterion
        theta = 0.45
        a_lo, a_hi = md.feasible_a_interval(theta, model)
        grid = np.linspace(a_lo, a_hi, 20_001)
        coeff = 1.0 + 1.0 / cfg.alpha
        nodes, w = cfg.quadrature.nodes, cfg.quadrature.weights
        pvals = p0(nodes)

        def objective(a):
            q = md.density_from_constraints(a, theta, model.domain)
            qv = np.maximum(q(nodes), 0.0)
            return float(w @ (qv ** 1.5)) - coeff * float(w @ (qv ** 0.5 * pvals))

        oracle = grid[np.argmin([objective(a) for a in grid])]
        sol = md.inner_minimize_population(theta, p0, model, cfg)
        assert abs(sol.a_star - oracle) <= (a_hi - a_lo) / 20_000

    def test_minimizing_full_divergence_gives_same_argmin(self, model, cfg, p0):
        # the q-free term does not move the minimizer
        theta = 0.45
        a_lo, a_hi = md.feasible_a_interval(theta, model)
        grid = np.linspace(a_lo, a_hi, 20_001)
        vals = [md.d_alpha(md.density_from_constraints(a, theta, model.domain),
                           p0, cfg) for a in grid]
        oracle = grid[np.argmin(vals)]
        sol = md.inner_minimize_population(theta, p0, model, cfg)
        assert abs(sol.a_star - oracle) <= (a_hi - a_lo) / 20_000

    def test_infeasible_theta_raises(self, model, cfg, p0):
        with pytest.raises(md.FeasibilityError):
            md.inner_minimize_population(0.205, p0, model, cfg)


class TestInnerEmpirical:
    def test_tiny_sample_is_well_posed(self, model, cfg, p0):
        sample = md.sample(p0, 10, 5)
        sol = md.inner_minimize_empirical(0.5, sample, model, cfg)
        assert np.isfinite(sol.objective)
        lo, hi = sol.feasible_interval
        assert lo <= sol.a_star <= hi

    def test_large_sample_close_to_truth(self, model, cfg, p0):
        sample = md.sample(p0, 50_000, 7)
        sol = md.inner_minimize_empirical(0.4, sample, model, cfg)
        assert abs(sol.a_star - 4.0) < 0.5

    def test_boundary_solution_is_flagged(self, model, cfg):
        # mass at the interval ends rewards extreme curvature
        sample = EmpiricalMeasure(points=np.array([0.0, 0.01, 0.99, 1.0]),
                                  seed=0, source_descriptor="synthetic")
        sol = md.inner_minimize_empirical(0.5, sample, model, cfg)
        assert sol.at_boundary
        lo, hi = sol.feasible_interval
        assert min(sol.a_star - lo, hi - sol.a_star) < 1e-6

    def test_solution_satisfies_constraints(self, model, cfg, p0):
        sample = md.sample(p0, 200, 11)
        sol = md.inner_minimize_empirical(0.45, sample, model, cfg)
        assert abs(sol.density.mass() - 1.0) < 1e-10
        assert abs(sol.density.moment(1) - 0.45) < 1e-10

    def test_never_beaten_by_population_projection(self, model, cfg, p0):
        # the empirical inner optimum is minimal for the sampled criterion,
        # so the projected population density can never score lower
        coeff = 1.0 + 1.0 / cfg.alpha
        for k, theta in enumerate((0.35, 0.4, 0.45)):
            pop = md.inner_minimize_population(theta, p0, model, cfg)
            sample = md.sample(p0, 500, md.derive_seed(60, k))
            emp = md.inner_minimize_empirical(theta, sample, model, cfg)
            pop_on_sample = md.d0(pop.density, cfg) - coeff * md.empirical_mean_of(
                pop.density, cfg.alpha, sample)
            assert emp.objective <= pop_on_sample + 1e-7


class TestWellPosedness:
    def test_restarts_agree(self, model, cfg, p0):
        # perturbed brackets and varied scan resolutions must find the
        # same unique inner minimizer; tol = 1e-6 keeps the target above
        # the sqrt(eps) position-resolution floor of value-comparison search
        from mindiv.numerics import minimize_1d
        gen = np.random.Generator(np.random.Philox(key=3141))
        coeff = 1.0 + 1.0 / cfg.alpha
        tol = 1e-6
        for trial in range(20):
            theta = float(gen.uniform(0.32, 0.48))
            sample = md.sample(p0, 400, md.derive_seed(17, trial))
            a_lo, a_hi = md.feasible_a_interval(theta, model)

            def objective(a):
                q = md.density_from_constraints(a, theta, model.domain)
                return md.d0(q, cfg) - coeff * md.empirical_mean_of(q, cfg.alpha, sample)

            width = a_hi - a_lo
            argmins = []
            for cells in (64, 67, 73, 81, 97):
                dlo = float(gen.uniform(0.0, 2e-3)) * width
                dhi = float(gen.uniform(0.0, 2e-3)) * width
                res = minimize_1d(objective, a_lo + dlo, a_hi - dhi,
                                  tol=tol, grid_cells=cells)
                argmins.append(res.argmin)
            assert max(argmins) - min(argmins) <= 10.0 * tol


class TestSupDistance:
    def test_zero_on_identical(self, p0):
        assert md.sup_distance(p0, p0) == 0.0

    def test_constant_offset(self, model, p0):
        shifted = md.QuadraticDensity(p0.a, p0.b, p0.c + 0.125, model.domain)
        assert abs(md.sup_distance(p0, shifted) - 0.125) < 1e-14

    def test_matches_grid_oracle(self, model, p0, uniform):
        xs = np.linspace(0.0, 1.0, 500_001)
        oracle = float(np.max(np.abs(p0(xs) - uniform(xs))))
        assert abs(md.sup_distance(p0, uniform) - oracle) < 1e-9


class TestOuterMinimize:
    def test_population_identifies_truth(self, model, cfg, p0):
        result = md.outer_minimize(p0, model, cfg)
        assert abs(result.theta_hat - 0.4) < 1e-4
        assert abs(result.a_hat - 4.0) < 1e-3
        assert result.n is None

    def test_profile_totality_small_sample(self, model, cfg, p0):
        sample = md.sample(p0, 10, 77)
        result = md.outer_minimize(sample, model, cfg)
        assert model.theta_min <= result.theta_hat <= model.theta_max
        assert len(result.profile) == 41
        assert result.n == 10

    def test_objective_is_profile_minimum(self, model, cfg, p0):
        sample = md.sample(p0, 300, 5)
        result = md.outer_minimize(sample, model, cfg)
        best_grid = min(pt.objective for pt in result.profile if pt.feasible)
        assert result.inner.objective <= best_grid + 1e-12

    def test_grid_too_small_rejected(self):
        with pytest.raises(ValueError, match="8"):
            OuterGridConfig(points=5)

    def test_all_infeasible_raises(self, cfg, p0):
        bad = md.unit_interval_model(theta_min=0.05, theta_max=0.15)
        with pytest.raises(md.FeasibilityError, match="grid"):
            md.outer_minimize(p0, bad, cfg)

    def test_infeasible_points_recorded(self, model, cfg, p0):
        result = md.outer_minimize(p0, model, cfg)
        flags = [pt.feasible for pt in result.profile]
        assert not flags[0]          # theta = 0.2 is unattainable
        assert sum(flags) >= 38

    def test_deterministic(self, model, cfg, p0):
        sample = md.sample(p0, 150, 3)
        r1 = md.outer_minimize(sample, model, cfg)
        r2 = md.outer_minimize(sample, model, cfg)
        assert r1.theta_hat == r2.theta_hat
        assert r1.a_hat == r2.a_hat
        assert r1.profile == r2.profile

    def test_separation_of_population_profile(self, model, cfg, p0):
        result = md.outer_minimize(p0, model, cfg)
        obj0 = min(pt.objective for pt in result.profile
                   if pt.feasible and abs(pt.theta - 0.4) < 1e-12)
        for pt in result.profile:
            if pt.feasible and abs(pt.theta - 0.4) >= 0.05:
                assert pt.objective > obj0

    def test_summary_and_profile_csv(self, model, cfg, p0):
        sample = md.sample(p0, 100, 9)
        result = md.outer_minimize(sample, model, cfg)
        text = result.summary_text()
        assert "theta_hat" in text and "seed = 9" in text
        csv_text = result.profile_csv()
        lines = csv_text.splitlines()
        assert lines[0] == "theta,objective,a_star,feasible"
        assert len(lines) == 42
        assert lines[1].endswith(",0")  # infeasible left edge

    def test_config_echo(self, model, cfg, p0):
        result = md.outer_minimize(p0, model, cfg)
        echo = result.config_echo
        assert echo["alpha"] == 0.5
        assert echo["grid_points"] == 41
        assert echo["source"] == "population"


class TestProjectionLipschitzProbe:
    def test_short_grids_return_zero(self, model, cfg, p0):
        assert projection_lipschitz_probe(model, p0, cfg, []) == 0.0
        assert projection_lipschitz_probe(model, p0, cfg, [0.4]) == 0.0
        assert projection_lipschitz_probe(model, p0, cfg, [0.4, 0.4]) == 0.0

    def test_stable_under_refinement(self, model, cfg, p0):
        coarse = [0.3 + 0.01 * k for k in range(21)]
        fine = [0.3 + 0.005 * k for k in range(41)]
        r1 = projection_lipschitz_probe(model, p0, cfg, coarse)
        r2 = projection_lipschitz_probe(model, p0, cfg, fine)
        assert r1 > 0.0
        assert abs(r2 - r1) / r1 < 0.2


class TestConsistencyProxies:
    @pytest.mark.parametrize("theta", [0.35, 0.4, 0.45])
    def test_inner_projection_converges_to_population(self, model, cfg, p0, theta):
        pop = md.inner_minimize_population(theta, p0, model, cfg)
        medians = []
        for n in (100, 1000, 10_000, 50_000):
            dists = []
            for k in range(20):
                s = md.sample(p0, n, md.derive_seed(5000 + int(theta * 100),
                                                    1000 * n + k))
                emp = md.inner_minimize_empirical(theta, s, model, cfg)
                dists.append(md.sup_distance(emp.density, pop.density))
            medians.append(float(np.median(dists)))
        assert all(a >= b for a, b in zip(medians, medians[1:])), (theta, medians)
        assert medians[-1] < 0.05
