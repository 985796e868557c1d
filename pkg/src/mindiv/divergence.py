"""Power divergence between densities on a compact interval.

For densities q, p on K and an exponent alpha in (0, 1], the divergence is

    d_alpha(q, p) = ∫ { q^(1+a) - (1 + 1/a) q^a p + (1/a) p^(1+a) } dx

with a = alpha.  The integrand is pointwise nonnegative and vanishes only
where q = p, so d_alpha >= 0 with equality iff q = p.  It splits into a
q-only term, a p-only term, and an expectation under P:

    d0(q)     = ∫ q^(1+a) dx
    d1(p)     = (1/a) ∫ p^(1+a) dx
    rho_q     = -(1 + 1/a) q^a,      d_alpha = d0 + d1 + ∫ rho_q dP.

Dropping the q-free term gives the reduced criterion

    r_alpha(q, P) = d0(q) + ∫ rho_q dP,

which has the same minimizers in q and stays computable when P is known
only through a sample: ∫ rho_q dP_n is a plain average over the points.
alpha = 1 recovers the squared L2 distance ∫ (q - p)^2 dx; alpha = 0 (the
Kullback-Leibler limit) is outside the supported range.

All integrals in a run share one quadrature rule so that the identities
above hold at machine precision rather than quadrature-mismatch precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .numerics import QuadratureRule, gauss_quadrature
from .sampling import EmpiricalMeasure, empirical_mean_of

DEFAULT_QUAD_ORDER = 32


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")


@dataclass(frozen=True)
class DivergenceConfig:
    """Exponent alpha plus the quadrature rule shared across a run."""

    alpha: float
    quadrature: QuadratureRule

    def __post_init__(self):
        _check_alpha(self.alpha)

    @classmethod
    def for_domain(cls, alpha: float, domain, order: int = DEFAULT_QUAD_ORDER
                   ) -> "DivergenceConfig":
        return cls(alpha=alpha, quadrature=gauss_quadrature(order, domain))


@dataclass(frozen=True)
class DivergenceValue:
    """Evaluated criterion pieces.

    d_alpha and d1 are only populated when the second argument is an
    absolutely continuous density; against an empirical measure only the
    reduced criterion is defined.  When present, d_alpha = r_alpha + d1.
    """

    r_alpha: float
    d0: float
    rho_mean: float
    d1: Optional[float] = None
    d_alpha: Optional[float] = None


def phi_integrand(q_val, p_val, alpha: float):
    """Pointwise integrand q^(1+a) - (1 + 1/a) q^a p + (1/a) p^(1+a).

    Nonnegative for all nonnegative arguments; zero when q_val = p_val.
    Accepts scalars or arrays.  u**alpha is 0 at u = 0 by continuity.
    """
    _check_alpha(alpha)
    q = np.asarray(q_val, dtype=float)
    p = np.asarray(p_val, dtype=float)
    if np.any(q < 0.0) or np.any(p < 0.0):
        raise ValueError("density values must be nonnegative")
    out = q ** (alpha + 1.0) - (1.0 + 1.0 / alpha) * q ** alpha * p \
        + (1.0 / alpha) * p ** (alpha + 1.0)
    if out.ndim == 0:
        return float(out)
    return out


def _node_values(q, cfg: DivergenceConfig) -> np.ndarray:
    # floor at zero: continuous extension for boundary-touching densities
    return np.maximum(np.asarray(q(cfg.quadrature.nodes), dtype=float), 0.0)


def d0(q, cfg: DivergenceConfig) -> float:
    """Q-only term ∫ q^(1+alpha) dx by the configured quadrature."""
    vals = _node_values(q, cfg)
    return cfg.quadrature.integrate_values(vals ** (cfg.alpha + 1.0))


def d1(p, cfg: DivergenceConfig) -> float:
    """P-only term (1/alpha) ∫ p^(1+alpha) dx."""
    vals = _node_values(p, cfg)
    return cfg.quadrature.integrate_values(vals ** (cfg.alpha + 1.0)) / cfg.alpha


MeasureView = Union[EmpiricalMeasure, object]  # density or empirical measure


def rho_expectation(q, p: MeasureView, cfg: DivergenceConfig) -> float:
    """Expectation of rho_q = -(1 + 1/alpha) q**alpha under p.

    p may be a density on K (quadrature) or an EmpiricalMeasure (average
    over the points, index order).  Sample points outside K are an error:
    the model is supported on K.
    """
    coeff = -(1.0 + 1.0 / cfg.alpha)
    if isinstance(p, EmpiricalMeasure):
        rule = cfg.quadrature
        pts = p.points
        if np.any(pts < rule.lower) or np.any(pts > rule.upper):
            bad = pts[(pts < rule.lower) | (pts > rule.upper)][0]
            raise ValueError(
                f"sample point {bad} lies outside the support [{rule.lower}, {rule.upper}]"
            )
        return coeff * empirical_mean_of(q, cfg.alpha, p)
    qvals = _node_values(q, cfg)
    pvals = _node_values(p, cfg)
    return coeff * cfg.quadrature.integrate_values(qvals ** cfg.alpha * pvals)


def d_alpha(q, p, cfg: DivergenceConfig) -> float:
    """Full divergence ∫ phi(q(x), p(x)) dx between two densities on K."""
    qvals = _node_values(q, cfg)
    pvals = _node_values(p, cfg)
    return cfg.quadrature.integrate_values(phi_integrand(qvals, pvals, cfg.alpha))


def r_alpha(q, p: MeasureView, cfg: DivergenceConfig) -> DivergenceValue:
    """Reduced criterion d0(q) + ∫ rho_q dP, with the full split when possible."""
    d0_val = d0(q, cfg)
    rho = rho_expectation(q, p, cfg)
    reduced = d0_val + rho
    if isinstance(p, EmpiricalMeasure):
        return DivergenceValue(r_alpha=reduced, d0=d0_val, rho_mean=rho)
    d1_val = d1(p, cfg)
    return DivergenceValue(r_alpha=reduced, d0=d0_val, rho_mean=rho,
                           d1=d1_val, d_alpha=d_alpha(q, p, cfg))
