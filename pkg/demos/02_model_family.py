"""The constrained quadratic family and its feasibility geometry.

A member is q(x) = a x^2 + b x + c on [0, 1] with unit mass, mean theta,
and q >= gamma > 0.  Mass and mean pin (b, c) once (a, theta) is chosen,
so each submodel is a one-parameter segment in a.  Not every theta is
attainable: positive quadratics on [0, 1] cannot have a mean arbitrarily
close to 0 or 1.
"""

import numpy as np

import mindiv as md

model = md.unit_interval_model()          # theta in [0.2, 0.6], gamma = 1e-6

# build the reference density and audit it
p0 = md.density_from_constraints(4.0, 0.4)
print("p0 coefficients:", p0.coefficients)
report = md.check_membership(p0, 0.4, model)
print("admitted:", report.admitted,
      "| moment residual:", report.moment_residual,
      "| min value:", report.min_value)

# the same density against the wrong theta leaves a visible residual
print("residual against theta=0.5:",
      md.check_membership(p0, 0.5, model).moment_residual)

# feasible leading coefficients per theta
for theta in (0.25, 0.4, 0.5):
    a_lo, a_hi = md.feasible_a_interval(theta, model)
    print(f"theta={theta}: feasible a in [{a_lo:.4f}, {a_hi:.4f}]")

# means below ~0.211 are unattainable for positive quadratics
try:
    md.feasible_a_interval(0.21, model)
except md.FeasibilityError as exc:
    print("theta=0.21:", exc)

# separated means force separated densities in sup norm
q1 = md.density_from_constraints(2.0, 0.4)
q2 = md.density_from_constraints(2.0, 0.5)
print("sup distance between mean-0.4 and mean-0.5 members:",
      md.separation_witness(q1, q2))

# the model description file format used by the command line
from mindiv.model import format_model_description, parse_model_description
text = format_model_description(md.default_model_description())
print("\nmodel description file:")
print(text)
print("round-trips:", parse_model_description(text) == md.default_model_description())
