"""Random objectives and instances for self-checks."""

from __future__ import annotations

import numpy as np

from .kspace import ProblemInstance
from .objective import ObjectiveSpec, make_objective

RANDOM_FAMILIES = ("smoothstep", "probit", "logistic")

# keeps f'' clear of float underflow at the ends of [0, 1]
SLOPE_RANGE = (2.0, 20.0)
CENTER_RANGE = (0.1, 0.9)


def random_spec(rng: np.random.Generator, family: str | None = None) -> ObjectiveSpec:
    if family is None:
        family = RANDOM_FAMILIES[int(rng.integers(len(RANDOM_FAMILIES)))]
    if family == "smoothstep":
        return make_objective("smoothstep")
    slope = float(rng.uniform(*SLOPE_RANGE))
    c = float(rng.uniform(*CENTER_RANGE))
    if family == "probit":
        return make_objective("probit", {"beta": slope, "beta0": slope * c})
    if family == "logistic":
        return make_objective("logistic", {"scale": slope, "center": c})
    raise ValueError(f"no random generator for family {family!r}")


def random_instance(rng: np.random.Generator, max_n: int = 1000, family: str | None = None) -> ProblemInstance:
    spec = random_spec(rng, family)
    n = int(rng.integers(1, max_n + 1))
    M = float(rng.uniform(0.0, n))
    return ProblemInstance(n=n, M=M, spec=spec)
