import numpy as np
import pytest

from trineknap.objective import ObjectiveSpec, make_objective


@pytest.fixture
def smooth():
    return make_objective("smoothstep")


@pytest.fixture
def probit():
    return make_objective("probit", {"beta": 10, "beta0": 5})


@pytest.fixture
def probit_off_center():
    return make_objective("probit", {"beta": 8, "beta0": 3.2})


@pytest.fixture
def square():
    """x**2 around 0.5: convex everywhere, so not antisymmetric."""
    return ObjectiveSpec(
        family="custom",
        center=0.5,
        value=lambda x: x * x,
        deriv=lambda x: 2.0 * x,
        deriv2=lambda x: 2.0 + 0.0 * x,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ALL_FAMILIES = [
    ("smoothstep", {}),
    ("probit", {"beta": 10, "beta0": 5}),
    ("probit", {"beta": 8, "beta0": 3.2}),
    ("probit", {"beta": 15, "beta0": 10.5}),
    ("logistic", {"scale": 12, "center": 0.3}),
    ("logistic", {"scale": 6}),
    ("neg_tangent", {}),
    ("neg_tangent", {"scale": 1.4, "center": 0.35}),
]


@pytest.fixture(params=ALL_FAMILIES, ids=lambda p: f"{p[0]}-{'-'.join(str(v) for v in p[1].values())}")
def any_spec(request):
    family, params = request.param
    return make_objective(family, params)
