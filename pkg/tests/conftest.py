import pytest

from qmforms.heckeeigen import registry


@pytest.fixture(scope="session")
def reg():
    """Shared engine registry at unit-test precision."""
    return registry(128)


@pytest.fixture(scope="session")
def reg512():
    """Full-precision registry for the acceptance sweeps."""
    return registry(512)
