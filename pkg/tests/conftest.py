import pytest
from hypothesis import HealthCheck, settings

from rpqdet.ogtp import OgtpInstance, compile_reduction

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

ALL_FOUR_PAIRS = frozenset(
    ((d1, "black"), (d2, "black")) for d1 in "HV" for d2 in "HV")


@pytest.fixture(scope="session")
def black_instance() -> OgtpInstance:
    """One shade, nothing forbidden; solvable at n = 1."""
    return OgtpInstance(("black",), frozenset())


@pytest.fixture(scope="session")
def black_reduction(black_instance):
    return compile_reduction(black_instance)


@pytest.fixture(scope="session")
def blocked_instance() -> OgtpInstance:
    """One shade with all four direction pairs forbidden; unsolvable."""
    return OgtpInstance(("black",), ALL_FOUR_PAIRS)


@pytest.fixture(scope="session")
def blocked_reduction(blocked_instance):
    return compile_reduction(blocked_instance)


@pytest.fixture(scope="session")
def two_shade_instance() -> OgtpInstance:
    return OgtpInstance(("black", "grey"),
                        frozenset({(("H", "black"), ("V", "grey"))}))


@pytest.fixture(scope="session")
def two_shade_reduction(two_shade_instance):
    return compile_reduction(two_shade_instance)
