import pytest

from qseries import PrecisionCtx, full_registry


@pytest.fixture(scope="session")
def registry():
    return full_registry()


@pytest.fixture(scope="session")
def ctx40():
    return PrecisionCtx(digits=40)


@pytest.fixture(scope="session")
def ctx25():
    return PrecisionCtx(digits=25)
