import pytest

from cancelsum import PrecisionContext, build_sieve


@pytest.fixture(scope="session")
def ctx128():
    return PrecisionContext(bits=128)


@pytest.fixture(scope="session")
def ctx192():
    return PrecisionContext(bits=192)


@pytest.fixture(scope="session")
def ctx320():
    return PrecisionContext(bits=320)


@pytest.fixture(scope="session")
def sieve600():
    # covers e^sqrt(40) ~ 557.8, the range every (40, T) experiment needs
    return build_sieve(600)
