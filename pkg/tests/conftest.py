"""Shared fixtures and independent oracles.

The oracles use mpmath at 40 digits and never call into the package, so
they can stand in for closed forms when checking it.
"""
import math

import mpmath as mp
import pytest

from isodeficit import CustomProfile, Gaussian, Laplace, Logistic, perturbed_profile

mp.mp.dps = 40


def gauss_quantile(p):
    return float(mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1))


def gauss_cdf(x):
    return float(mp.ncdf(x))


def gauss_J(t):
    t = mp.mpf(t)
    if t <= 0 or t >= 1:
        return 0.0
    return float(mp.npdf(mp.sqrt(2) * mp.erfinv(2 * t - 1)))


def logistic_J(t, s=1.0):
    return t * (1 - t) / s


def laplace_J(t, c=1.0):
    return c * min(t, 1 - t)


ORACLE_J = {"gaussian": gauss_J, "logistic": logistic_J, "laplace": laplace_J}


@pytest.fixture(scope="session")
def gauss():
    return Gaussian()


@pytest.fixture(scope="session")
def laplace():
    return Laplace()


@pytest.fixture(scope="session")
def logistic():
    return Logistic()


@pytest.fixture(scope="session")
def perturbed():
    return CustomProfile(perturbed_profile, name="perturbed")


@pytest.fixture(scope="session")
def laplace_from_profile():
    return CustomProfile(lambda t: min(t, 1.0 - t), name="laplace-profile")


@pytest.fixture(scope="session", params=["gaussian", "logistic", "laplace"])
def builtin(request):
    return request.param, {"gaussian": Gaussian(), "logistic": Logistic(),
                           "laplace": Laplace()}[request.param]


def endpoint_error(a, b):
    """Largest endpoint difference between two interval sets of equal length."""
    if len(a) != len(b):
        return math.inf
    err = 0.0
    for x, y in zip(a.endpoints, b.endpoints):
        if x != y:
            err = max(err, abs(x - y))
    return err
