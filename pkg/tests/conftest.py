import mpmath as mp
import pytest

from macdopoly.precision import PrecisionContext, Params


@pytest.fixture(scope="session")
def ctx40():
    return PrecisionContext(40, 1e-20, 240)


@pytest.fixture(scope="session")
def ctx60():
    return PrecisionContext(60, 1e-30, 240)


@pytest.fixture(scope="session")
def ctx120():
    return PrecisionContext(120, 1e-60, 480)


@pytest.fixture(scope="session")
def base_params():
    return Params("0.5", "1.5", "1", "1")


def mpf(s):
    return mp.mpf(s)
