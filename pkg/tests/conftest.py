import pytest

from mmcast.antenna import build_codebook
from mmcast.channel import LOS, NLOS, ChannelModel
from mmcast.topology import Topology


@pytest.fixture(scope="session")
def codebook():
    return build_codebook([15.0, 30.0, 45.0, 60.0])


@pytest.fixture(scope="session")
def los():
    return ChannelModel(LOS)


@pytest.fixture(scope="session")
def nlos():
    return ChannelModel(NLOS, shadowing_seed=7)


def make_topology(*users, ap=(10.0, 10.0), side=20.0, seed=0):
    return Topology(side, ap, tuple(tuple(map(float, u)) for u in users), seed)


@pytest.fixture
def fig1_topology():
    # A close to the AP; B and C side by side at 90 deg; D beyond A but off its bearing
    return make_topology((12.0, 10.0), (10.0, 13.0), (10.2, 13.1), (16.0, 13.0))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
