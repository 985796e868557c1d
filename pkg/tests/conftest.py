import pytest

import mindiv as md


@pytest.fixture(scope="session")
def model():
    """Default model: quadratics on [0, 1], mean in [0.2, 0.6], floor 1e-6."""
    return md.unit_interval_model()


@pytest.fixture(scope="session")
def cfg(model):
    """Shared divergence configuration: alpha = 1/2, order-32 quadrature."""
    return md.DivergenceConfig.for_domain(0.5, model.domain, order=32)


@pytest.fixture(scope="session")
def p0(model):
    """Reference density: leading coefficient 4, mean 0.4."""
    return md.density_from_constraints(4.0, 0.4, model.domain)


@pytest.fixture(scope="session")
def uniform(model):
    return md.QuadraticDensity(0.0, 0.0, 1.0, model.domain)


def random_member(gen, model, mu_lo=0.25, mu_hi=0.55):
    """A random density from the feasible family, for property checks."""
    theta = gen.uniform(mu_lo, mu_hi)
    a_lo, a_hi = md.feasible_a_interval(theta, model)
    a = gen.uniform(a_lo, a_hi)
    return md.density_from_constraints(a, theta, model.domain)
