"""Deterministic numerical kernels shared by the whole package.

Three small tools: Gauss-Legendre quadrature on a finite interval, a
bisection root finder for monotone functions, and a one-dimensional
minimizer that combines a coarse grid scan with golden-section refinement.
Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for integration over a fixed interval.

    The rule is exact for polynomials up to degree 2*order - 1.  One rule
    instance is meant to be shared by every integral in a run, so that
    algebraic identities between integrals hold at machine precision
    instead of quadrature-mismatch precision.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int
    lower: float
    upper: float

    def integrate(self, f: Callable) -> float:
        """Integrate a vectorized callable over [lower, upper]."""
        return float(self.weights @ np.asarray(f(self.nodes), dtype=float))

    def integrate_values(self, values) -> float:
        """Integrate from values already evaluated at the rule's nodes."""
        return float(self.weights @ np.asarray(values, dtype=float))


def gauss_quadrature(order: int, domain) -> QuadratureRule:
    """Gauss-Legendre rule with `order` nodes mapped onto `domain`.

    `domain` is any object with `lower` and `upper` attributes.
    """
    if order < 2:
        raise ValueError(f"quadrature order must be at least 2, got {order}")
    xi, wi = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (domain.upper - domain.lower)
    mid = 0.5 * (domain.upper + domain.lower)
    return QuadratureRule(
        nodes=mid + half * xi,
        weights=half * wi,
        order=order,
        lower=float(domain.lower),
        upper=float(domain.upper),
    )


def find_root_increasing(f: Callable[[float], float], lo: float, hi: float,
                         tol: float = 1e-10) -> float:
    """Root of a nondecreasing function by bisection.

    Requires f(lo) <= 0 <= f(hi).  Stops when |f(x)| <= tol or the bracket
    width drops below tol; bisection guarantees termination either way.
    """
    if lo > hi:
        raise ValueError(f"invalid bracket [{lo}, {hi}]")
    flo = f(lo)
    fhi = f(hi)
    if flo > 0.0 or fhi < 0.0:
        raise ValueError(
            f"bracket violation: f({lo})={flo}, f({hi})={fhi} do not straddle 0"
        )
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) <= tol:
            return mid
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class Minimizer1DResult:
    argmin: float
    value: float
    iterations: int
    bracket: Tuple[float, float]


def minimize_1d(f: Callable[[float], float], lo: float, hi: float,
                tol: float = 1e-8, grid_cells: int = 64) -> Minimizer1DResult:
    """Minimize a continuous scalar function on [lo, hi].

    Unimodality is NOT assumed: a coarse scan over `grid_cells` cells first
    locates the best cell, then golden-section refinement runs inside the
    two cells around it.  The returned value is the best over every point
    probed, so it never exceeds the grid minimum.  Deterministic.
    """
    if lo >= hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if grid_cells < 1:
        raise ValueError("grid_cells must be positive")

    xs = np.linspace(lo, hi, grid_cells + 1)
    vals = [float(f(x)) for x in xs]
    i = int(np.argmin(vals))  # argmin takes the first of ties: smaller x wins
    best_x, best_v = float(xs[i]), vals[i]
    iterations = len(xs)

    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, grid_cells)])
    bracket = (a, b)

    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = float(f(c)), float(f(d))
    iterations += 2
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = float(f(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = float(f(d))
        iterations += 1
        if fc < best_v:
            best_x, best_v = c, fc
        if fd < best_v:
            best_x, best_v = d, fd

    mid = 0.5 * (a + b)
    fmid = float(f(mid))
    iterations += 1
    if fmid < best_v:
        best_x, best_v = mid, fmid

    return Minimizer1DResult(argmin=best_x, value=best_v,
                             iterations=iterations, bracket=bracket)
