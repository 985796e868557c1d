"""Quadratic density family on a compact interval under a mean constraint.

The estimation target space is the set of densities q(x) = a*x^2 + b*x + c
on a compact interval K that

  * integrate to one,
  * have prescribed mean theta (the parameter of interest),
  * stay above a positivity floor gamma > 0, and
  * belong to a smooth class: uniformly bounded, with q**alpha uniformly
    Lipschitz (the floor makes the Lipschitz constant finite for every
    alpha in (0, 1]).

For a given (a, theta) the mass and mean constraints determine (b, c)
through a 2x2 linear system, so each constrained submodel is a segment
parametrized by the leading coefficient alone.  All suprema, moments and
extrema of quadratics are computed in closed form.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np


class FeasibilityError(ValueError):
    """No density in the family satisfies the constraints."""


class ModelFileError(ValueError):
    """A model description file could not be parsed."""


@dataclass(frozen=True)
class Domain:
    """Compact support K = [lower, upper]."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError("domain bounds must be finite")
        if self.lower >= self.upper:
            raise ValueError(
                f"domain lower bound {self.lower} must lie below upper bound {self.upper}"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all((x >= self.lower) & (x <= self.upper)))


UNIT_DOMAIN = Domain(0.0, 1.0)


@dataclass(frozen=True)
class QuadraticDensity:
    """q(x) = a*x^2 + b*x + c on a fixed domain.

    Moments, extrema and the CDF are exact; no quadrature is involved at
    this level.
    """

    a: float
    b: float
    c: float
    domain: Domain

    def __call__(self, x):
        return (self.a * x + self.b) * x + self.c

    @property
    def coefficients(self) -> Tuple[float, float, float]:
        return (self.a, self.b, self.c)

    def _monomial_integral(self, k: int) -> float:
        # integral of x^k over the domain
        j = k + 1
        return (self.domain.upper ** j - self.domain.lower ** j) / j

    def moment(self, k: int) -> float:
        """Exact integral of x^k * q(x) over the domain."""
        return (self.a * self._monomial_integral(k + 2)
                + self.b * self._monomial_integral(k + 1)
                + self.c * self._monomial_integral(k))

    def mass(self) -> float:
        return self.moment(0)

    def mean_residual(self, theta: float) -> float:
        """Exact value of the mean-constraint integral ∫ (x - theta) q dx."""
        return self.moment(1) - theta * self.moment(0)

    def _critical_points(self) -> list:
        pts = [self.domain.lower, self.domain.upper]
        if self.a != 0.0:
            vertex = -self.b / (2.0 * self.a)
            if self.domain.lower < vertex < self.domain.upper:
                pts.append(vertex)
        return pts

    def min_on_domain(self) -> float:
        return min(self(x) for x in self._critical_points())

    def max_on_domain(self) -> float:
        return max(self(x) for x in self._critical_points())

    def sup_abs(self) -> float:
        return max(abs(self(x)) for x in self._critical_points())

    def derivative_sup(self) -> float:
        """Exact sup of |q'| over the domain (q' is affine)."""
        lo = 2.0 * self.a * self.domain.lower + self.b
        hi = 2.0 * self.a * self.domain.upper + self.b
        return max(abs(lo), abs(hi))

    def cdf(self, x):
        """Explicit cubic antiderivative, anchored at the lower endpoint."""
        lo = self.domain.lower

        def anti(t):
            return ((self.a / 3.0 * t + self.b / 2.0) * t + self.c) * t

        return anti(x) - anti(lo)


def sup_distance(q1: QuadraticDensity, q2: QuadraticDensity) -> float:
    """Exact sup-norm distance between two quadratics on a common domain.

    The difference is itself a quadratic, so the supremum is attained at an
    endpoint or at the vertex of the difference.
    """
    if q1.domain != q2.domain:
        raise ValueError("densities live on different domains")
    diff = QuadraticDensity(q1.a - q2.a, q1.b - q2.b, q1.c - q2.c, q1.domain)
    return diff.sup_abs()


def separation_witness(q: QuadraticDensity, q2: QuadraticDensity) -> float:
    """Sup-norm gap between two candidate densities.

    Used to confirm that submodels with separated means stay separated in
    sup norm: unit mass and |x| <= max(|K|) give
    |theta - theta'| = |∫ x (q - q') dx| <= sup|q - q'| * |K| * max|x|.
    """
    return sup_distance(q, q2)


def coeffs_from_constraints(a: float, mu: float, domain: Domain = UNIT_DOMAIN
                            ) -> Tuple[float, float]:
    """Solve for (b, c) so that a*x^2 + b*x + c has unit mass and mean mu.

    The two constraints are linear in (b, c); the system determinant is
    -(upper - lower)^4 / 12, never zero.
    """
    lo, hi = domain.lower, domain.upper

    def j(k):
        return (hi ** (k + 1) - lo ** (k + 1)) / (k + 1)

    j0, j1, j2, j3 = j(0), j(1), j(2), j(3)
    r0 = 1.0 - a * j2          # mass constraint right-hand side
    r1 = mu - a * j3           # mean constraint right-hand side
    det = j1 * j1 - j0 * j2
    b = (r0 * j1 - r1 * j0) / det
    c = (r1 * j1 - r0 * j2) / det
    return (b, c)


def density_from_constraints(a: float, mu: float, domain: Domain = UNIT_DOMAIN
                             ) -> QuadraticDensity:
    """The unique quadratic with leading coefficient a, unit mass and mean mu."""
    b, c = coeffs_from_constraints(a, mu, domain)
    return QuadraticDensity(a, b, c, domain)


@dataclass(frozen=True)
class SmoothClassConfig:
    """Constants describing the smooth class the family must live in.

    `bound` caps sup|q| over the class; `derivative_bound` caps |q'| and,
    combined with the floor, yields the Lipschitz constant of q**alpha:
    by the mean value theorem the slope of q**alpha is at most
    alpha * derivative_bound / gamma**(1 - alpha).  An explicit
    `lipschitz_m` overrides the derived constant.
    """

    bound: float = 30.0
    derivative_bound: float = 60.0
    floor_gamma: float = 1e-6
    alpha: float = 0.5
    lipschitz_m: Optional[float] = None

    def __post_init__(self):
        if self.bound <= 0 or self.derivative_bound <= 0:
            raise ValueError("class bounds must be positive")
        if self.floor_gamma <= 0:
            raise ValueError("positivity floor gamma must be strictly positive")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.lipschitz_m is not None and self.lipschitz_m <= 0:
            raise ValueError("lipschitz_m must be positive")

    def slope_bound(self) -> float:
        if self.lipschitz_m is not None:
            return self.lipschitz_m
        return self.alpha * self.derivative_bound / self.floor_gamma ** (1.0 - self.alpha)


@dataclass(frozen=True)
class MomentModel:
    """Mean-constraint model: g(x, theta) = x - theta, theta in [theta_min, theta_max].

    The constraint function is continuous and uniformly bounded on
    K x Theta, and submodels with distinct theta are disjoint (a density
    has one mean).
    """

    domain: Domain
    theta_min: float
    theta_max: float
    class_config: SmoothClassConfig

    def __post_init__(self):
        if not (math.isfinite(self.theta_min) and math.isfinite(self.theta_max)):
            raise ValueError("parameter interval must be finite")
        if self.theta_min >= self.theta_max:
            raise ValueError(
                f"parameter interval [{self.theta_min}, {self.theta_max}] is empty"
            )

    def g(self, x, theta):
        """Constraint function whose zero integral pins the mean at theta."""
        return x - theta

    @property
    def theta_interval(self) -> Tuple[float, float]:
        return (self.theta_min, self.theta_max)


def unit_interval_model(theta_min: float = 0.2, theta_max: float = 0.6,
                        gamma: float = 1e-6, alpha: float = 0.5,
                        bound: float = 30.0, derivative_bound: float = 60.0,
                        lipschitz_m: Optional[float] = None) -> MomentModel:
    """Default model: quadratics on [0, 1] with mean in [theta_min, theta_max]."""
    cfg = SmoothClassConfig(bound=bound, derivative_bound=derivative_bound,
                            floor_gamma=gamma, alpha=alpha,
                            lipschitz_m=lipschitz_m)
    return MomentModel(UNIT_DOMAIN, theta_min, theta_max, cfg)


# ---------------------------------------------------------------------------
# Feasibility of the leading coefficient
# ---------------------------------------------------------------------------

def _floor_margin(a: float, mu: float, model: MomentModel) -> float:
    q = density_from_constraints(a, mu, model.domain)
    return q.min_on_domain() - model.class_config.floor_gamma


def feasible_a_interval(mu: float, model: MomentModel) -> Tuple[float, float]:
    """Maximal interval of leading coefficients keeping q >= gamma on K.

    min_x q_a(x) is a concave function of a (pointwise q_a is affine in a),
    so the feasible set is a closed interval.  We locate the concave peak
    with the grid+golden minimizer, then bisect outward for each endpoint.
    Raises FeasibilityError when no coefficient reaches the floor.
    """
    if not model.theta_min <= mu <= model.theta_max:
        raise FeasibilityError(
            f"mu={mu} outside the parameter interval [{model.theta_min}, {model.theta_max}]"
        )

    from .numerics import minimize_1d  # local import keeps module load light

    margin = lambda a: _floor_margin(a, mu, model)

    half_width = 64.0
    while True:
        res = minimize_1d(lambda a: -margin(a), -half_width, half_width,
                          tol=1e-10, grid_cells=128)
        a_peak = res.argmin
        # a concave peak on the bracket edge means the bracket was too small
        if abs(a_peak) < 0.99 * half_width or half_width > 1e6:
            break
        half_width *= 4.0

    if margin(a_peak) < 0.0:
        raise FeasibilityError(
            f"no quadratic with mean {mu} stays above the floor "
            f"{model.class_config.floor_gamma} (best margin {margin(a_peak):.3e})"
        )

    def outward_root(direction: float) -> float:
        step = 1.0
        inner = a_peak
        outer = a_peak + direction * step
        while margin(outer) >= 0.0:
            inner = outer
            step *= 2.0
            outer = a_peak + direction * step
            if step > 1e9:  # pragma: no cover - margin always turns negative
                raise FeasibilityError("feasible interval failed to close")
        # keep `inner` feasible, `outer` infeasible
        while abs(outer - inner) > 1e-12 * max(1.0, abs(inner)):
            mid = 0.5 * (inner + outer)
            if margin(mid) >= 0.0:
                inner = mid
            else:
                outer = mid
        return inner

    a_max = outward_root(+1.0)
    a_min = outward_root(-1.0)
    return (a_min, a_max)


# ---------------------------------------------------------------------------
# Membership checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstraintReport:
    """Outcome of the membership audit for one candidate density."""

    bound_ok: bool
    sup_abs: float
    lipschitz_ok: bool
    max_power_slope: float
    floor_ok: bool
    min_value: float
    moment_residual: float
    normalization_residual: float
    residual_tol: float = 1e-8

    @property
    def admitted(self) -> bool:
        return (self.bound_ok and self.lipschitz_ok and self.floor_ok
                and abs(self.moment_residual) < self.residual_tol
                and abs(self.normalization_residual) < self.residual_tol)


def power_slope_estimate(q: QuadraticDensity, alpha: float,
                         grid_points: int = 2048) -> float:
    """Grid estimate of the Lipschitz constant of q**alpha.

    Divided differences over an equispaced grid approximate the supremum
    over all pairs; the resolution is a documented knob.
    """
    xs = np.linspace(q.domain.lower, q.domain.upper, grid_points)
    vals = np.maximum(q(xs), 0.0) ** alpha
    return float(np.max(np.abs(np.diff(vals)))) / (xs[1] - xs[0])


def check_membership(q: QuadraticDensity, theta: float, model: MomentModel,
                     alpha: Optional[float] = None,
                     grid_points: int = 2048) -> ConstraintReport:
    """Full membership report for q against the submodel at theta.

    Residuals are exact (closed-form moments); the Lipschitz check uses
    divided differences of q**alpha on an equispaced grid.  Always returns
    a report, never raises.
    """
    cc = model.class_config
    if alpha is None:
        alpha = cc.alpha
    sup_abs = q.sup_abs()
    min_value = q.min_on_domain()
    slope = power_slope_estimate(q, alpha, grid_points)
    return ConstraintReport(
        bound_ok=sup_abs <= cc.bound,
        sup_abs=sup_abs,
        lipschitz_ok=slope <= cc.slope_bound(),
        max_power_slope=slope,
        floor_ok=min_value >= cc.floor_gamma,
        min_value=min_value,
        moment_residual=q.mean_residual(theta),
        normalization_residual=q.mass() - 1.0,
    )


# ---------------------------------------------------------------------------
# Model description files
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelDescription:
    """A moment model plus the run settings stored alongside it."""

    model: MomentModel
    alpha: float
    quad_order: int
    true_a: float
    true_mu: float


_REQUIRED_KEYS = ("domain_lower", "domain_upper", "theta_min", "theta_max",
                  "gamma", "alpha", "quad_order")
_OPTIONAL_KEYS = ("bound", "derivative_bound", "lipschitz_m", "true_a", "true_mu")
_INT_KEYS = ("quad_order",)


def parse_model_description(text: str, source: str = "<string>") -> ModelDescription:
    """Parse the plain-text key = value model format.

    Errors name the offending key and line.  Keys:
    required  domain_lower, domain_upper, theta_min, theta_max, gamma,
              alpha, quad_order
    optional  bound, derivative_bound, lipschitz_m, true_a, true_mu
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)$", line)
        if m is None:
            raise ModelFileError(f"{source}: line {lineno}: expected 'key = value', got {raw!r}")
        key, value = m.group(1), m.group(2)
        if key not in _REQUIRED_KEYS and key not in _OPTIONAL_KEYS:
            raise ModelFileError(f"{source}: line {lineno}: unknown key {key!r}")
        if key in values:
            raise ModelFileError(f"{source}: line {lineno}: duplicate key {key!r}")
        try:
            values[key] = int(value) if key in _INT_KEYS else float(value)
        except ValueError:
            raise ModelFileError(
                f"{source}: line {lineno}: key {key!r} has non-numeric value {value!r}"
            ) from None

    for key in _REQUIRED_KEYS:
        if key not in values:
            raise ModelFileError(f"{source}: missing required key {key!r}")

    try:
        model = MomentModel(
            domain=Domain(values["domain_lower"], values["domain_upper"]),
            theta_min=values["theta_min"],
            theta_max=values["theta_max"],
            class_config=SmoothClassConfig(
                bound=values.get("bound", 30.0),
                derivative_bound=values.get("derivative_bound", 60.0),
                floor_gamma=values["gamma"],
                alpha=values["alpha"],
                lipschitz_m=values.get("lipschitz_m"),
            ),
        )
    except ValueError as exc:
        raise ModelFileError(f"{source}: {exc}") from None
    return ModelDescription(
        model=model,
        alpha=values["alpha"],
        quad_order=values["quad_order"],
        true_a=values.get("true_a", 4.0),
        true_mu=values.get("true_mu", 0.4),
    )


def load_model_description(path) -> ModelDescription:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model_description(fh.read(), source=str(path))


def format_model_description(desc: ModelDescription) -> str:
    cc = desc.model.class_config
    lines = [
        "# moment model description",
        f"domain_lower = {desc.model.domain.lower!r}",
        f"domain_upper = {desc.model.domain.upper!r}",
        f"theta_min = {desc.model.theta_min!r}",
        f"theta_max = {desc.model.theta_max!r}",
        f"gamma = {cc.floor_gamma!r}",
        f"alpha = {desc.alpha!r}",
        f"quad_order = {desc.quad_order}",
        f"bound = {cc.bound!r}",
        f"derivative_bound = {cc.derivative_bound!r}",
        f"true_a = {desc.true_a!r}",
        f"true_mu = {desc.true_mu!r}",
    ]
    if cc.lipschitz_m is not None:
        lines.append(f"lipschitz_m = {cc.lipschitz_m!r}")
    return "\n".join(lines) + "\n"


def default_model_description(alpha: float = 0.5, quad_order: int = 32) -> ModelDescription:
    return ModelDescription(
        model=unit_interval_model(alpha=alpha),
        alpha=alpha,
        quad_order=quad_order,
        true_a=4.0,
        true_mu=0.4,
    )
