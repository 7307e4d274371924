import pytest

from sig import load


@pytest.fixture
def corpus():
    return load
