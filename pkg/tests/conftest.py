import numpy as np
import pytest

from holocorr import identity_chain, load_chain, validate


@pytest.fixture(scope="session")
def square():
    return validate(load_chain("@square"))


@pytest.fixture(scope="session")
def boyd():
    return validate(load_chain("@boyd"))


@pytest.fixture(scope="session")
def ident():
    return identity_chain()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
