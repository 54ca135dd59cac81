"""Pytest fixtures for lowlying-lab tests."""

import numpy as np
import pytest
from click.testing import CliRunner

from lowlying_lab.testfn import Family, TestFunction


@pytest.fixture
def fejer_half():
    """Fejer test function with Fourier support [-1/2, 1/2].

    Phi_hat is the triangle 1 - 2|u| on [-1/2, 1/2], so every density
    prediction at this support has a closed form.
    """
    return TestFunction(Family.FEJER, 0.5)


@pytest.fixture
def cosine_half():
    """Cosine-squared test function with Fourier support [-1/2, 1/2]."""
    return TestFunction(Family.COSINE_SQUARED, 0.5)


@pytest.fixture
def rng():
    """Seeded generator so random draws are reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def runner():
    """Click runner keeping stdout and stderr apart."""
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        return CliRunner()
