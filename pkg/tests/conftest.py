import pytest

from secrecy221 import WiretapChannel, sample_general_channels

SUITE_SEED = 20260808


@pytest.fixture
def example_a() -> WiretapChannel:
    """Identity main channel, eavesdropper gain (2, 0), unit power."""
    return WiretapChannel(((1.0, 0.0), (0.0, 1.0)), (2.0, 0.0), 1.0)


@pytest.fixture
def diag_example() -> WiretapChannel:
    """Diagonal main channel diag(0.9, 2), eavesdropper gain (2, 0)."""
    return WiretapChannel(((0.9, 0.0), (0.0, 2.0)), (2.0, 0.0), 1.0)


@pytest.fixture(scope="session")
def suite1000() -> list[WiretapChannel]:
    """The fixed 1000-channel non-degraded random suite shared by the
    property and acceptance tests."""
    channels, _ = sample_general_channels(SUITE_SEED, 1000)
    return channels
