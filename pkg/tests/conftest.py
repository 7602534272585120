import numpy as np
import pytest
from hypothesis import settings

from polyqha import operators as op
from polyqha.special_functions import build_gaussian_quadrature

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def mu_rule():
    """Gaussian-measure rule at the default orders 80/160."""
    return build_gaussian_quadrature(80, 160)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def inner_err(A, B, frac=0.5):
    """Operator norm of (A - B) on the inner block."""
    return op.operator_norm((A - B).inner(frac))
