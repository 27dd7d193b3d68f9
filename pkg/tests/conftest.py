import pytest

from helpers.random_stream import RandomStream
from stores.mdp.ringworld import build_ringworld, ring_policy


@pytest.fixture
def ring10():
    return build_ringworld(10)


@pytest.fixture
def ring5():
    return build_ringworld(5)


@pytest.fixture
def off_policy_ring10():
    model, target = build_ringworld(10)
    return model, target, ring_policy(10, 0.75)


@pytest.fixture
def rng():
    return RandomStream(1234)
