import numpy as np
import pytest

from holobath import ErrorParams, LambdaParams, SpinBath


@pytest.fixture
def params():
    """The drive configuration used throughout the figure reproductions."""
    return LambdaParams(omega=1.0, delta=2.0)


@pytest.fixture
def bath50():
    """N=20 bath at 50 K with alpha = 15 ps^-1."""
    return SpinBath.from_temperature(20, 15.0e3, 50.0)


@pytest.fixture
def symmetric_errors():
    return ErrorParams.symmetric(0.1)


def assert_unitary(u, atol=1e-12):
    eye = np.eye(u.shape[0])
    np.testing.assert_allclose(u.conj().T @ u, eye, atol=atol, rtol=0.0)
