"""Minimum power-divergence estimation for mean-constrained quadratic densities.

The package implements the two-step scheme: an inner projection of the data
measure on the constrained density family at fixed parameter value, and an
outer minimization of the projected criterion over the parameter interval,
together with the sampling, quadrature and sweep machinery needed to study
the estimator's convergence.
"""

from .divergence import (DivergenceConfig, DivergenceValue, d0, d1, d_alpha,
                         phi_integrand, r_alpha, rho_expectation)
from .estimator import (EstimationResult, InnerSolution, OuterGridConfig,
                        ProfilePoint, inner_minimize_empirical,
                        inner_minimize_population, outer_minimize,
                        projection_lipschitz_probe, sup_distance)
from .harness import (DEFAULT_N_LADDER, AuditReport, ExperimentConfig,
                      SweepRow, audit_model, run_experiment,
                      write_experiment_outputs)
from .model import (ConstraintReport, Domain, FeasibilityError,
                    ModelDescription, ModelFileError, MomentModel,
                    QuadraticDensity, SmoothClassConfig, UNIT_DOMAIN,
                    check_membership, coeffs_from_constraints,
                    default_model_description, density_from_constraints,
                    feasible_a_interval, load_model_description,
                    parse_model_description, separation_witness,
                    unit_interval_model)
from .numerics import (Minimizer1DResult, QuadratureRule, find_root_increasing,
                       gauss_quadrature, minimize_1d)
from .sampling import (EmpiricalMeasure, derive_seed, empirical_mean_of,
                       load_sample_csv, sample, save_sample_csv)

__version__ = "0.1.0"
