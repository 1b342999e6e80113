"""Shared fixtures: forward spectral data is expensive, so the problems used
by several test modules are computed once per session."""
import numpy as np
import pytest

from isturm import (Polynomial, ProblemL, SigmaStep, SigmaZero,
                    forward_spectral_data)


@pytest.fixture(scope="session")
def robin_sd25():
    """sigma = 0, r1 = 1, r2 = 1, K = 25."""
    prob = ProblemL(SigmaZero(), Polynomial([1]), Polynomial([1]))
    return prob, forward_spectral_data(prob, 25, 1024)


@pytest.fixture(scope="session")
def poly_sd40():
    """sigma = 0, r1 = lam + 1, r2 = 1, K = 40 (M1 = 1, one negative eigenvalue)."""
    prob = ProblemL(SigmaZero(), Polynomial([1, 1]), Polynomial([1]))
    return prob, forward_spectral_data(prob, 40, 1024)


@pytest.fixture(scope="session")
def step_sd40():
    """sigma = Step(1, pi/2), r1 = 1, r2 = 1, K = 40."""
    prob = ProblemL(SigmaStep(1.0, np.pi / 2), Polynomial([1]), Polynomial([1]))
    return prob, forward_spectral_data(prob, 40, 1024)


@pytest.fixture(scope="session")
def step_poly_sd40():
    """sigma = Step(1, pi/2), r1 = lam + 1, r2 = 1, K = 40."""
    prob = ProblemL(SigmaStep(1.0, np.pi / 2), Polynomial([1, 1]), Polynomial([1]))
    return prob, forward_spectral_data(prob, 40, 1024)
