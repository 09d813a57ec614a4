import itertools

import pytest

from mmcast.channel import ChannelModel, NLOS, beam_rates
from mmcast.errors import InvalidArgument
from mmcast.oracle import enumerate_set_partitions, exhaustive_optimum
from mmcast.partition import partition_and_plan
from mmcast.schedule import build_schedule, check_feasibility, slots_needed
from mmcast.topology import AP, generate_topology

from conftest import make_topology

SLOT = 18e-6
BELL = [1, 1, 2, 5, 15, 52, 203, 877]


@pytest.mark.parametrize("n", range(0, 8))
def test_bell_numbers(n):
    parts = list(enumerate_set_partitions(range(n)))
    assert len(parts) == BELL[n]
    canon = {frozenset(frozenset(b) for b in p) for p in parts}
    assert len(canon) == BELL[n]
    assert all(sorted(x for b in p for x in b) == list(range(n)) for p in parts)


def test_enumeration_guard():
    with pytest.raises(InvalidArgument):
        next(enumerate_set_partitions(range(13)))


def _min_slots(topo, tx, block, codebook, model):
    rates = beam_rates(topo, tx, block, codebook, model, 30.0)
    return min(slots_needed(1e9, r, SLOT) for r in rates if r > 0)


def test_single_user_optimum(codebook, los):
    topo = make_topology((16.0, 13.0))
    sol = exhaustive_optimum(topo, [1], codebook, los, 30.0, 1e9, SLOT)
    assert sol.objective == _min_slots(topo, AP, (1,), codebook, los)
    assert [(p.tx_node, p.targets) for p in sol.best_schedule.phases] == [(AP, (1,))]


def test_two_user_candidates_listed(codebook, los):
    topo = make_topology((15.0, 10.0), (15.2, 10.1))
    sol = exhaustive_optimum(topo, [1, 2], codebook, los, 30.0, 1e9, SLOT)
    joint = _min_slots(topo, AP, (1, 2), codebook, los)
    split = [
        _min_slots(topo, AP, (a,), codebook, los) + _min_slots(topo, tx, (b,), codebook, los)
        for a, b in ((1, 2), (2, 1)) for tx in (AP, a)
    ]
    assert sol.objective == min([joint] + split)
    assert sol.explored == 1 + 2 * 2


def test_oracle_never_worse_than_md2d(codebook):
    for seed in range(15):
        topo = generate_topology(4, 20.0, seed)
        model = ChannelModel(NLOS, shadowing_seed=seed)
        sol = exhaustive_optimum(topo, topo.users, codebook, model, 30.0, 1e9, SLOT)
        part = partition_and_plan(topo, topo.users, codebook, model, 30.0, 6.0, 10.0)
        assert sol.objective <= build_schedule(part, 1e9, SLOT).total_slots
        assert check_feasibility(sol.best_schedule, sol.best_partition, topo.users, topo, codebook,
                                 model, 30.0).ok


def test_oracle_size_cap(codebook, los):
    topo = generate_topology(6, 20.0, 0)
    with pytest.raises(InvalidArgument):
        exhaustive_optimum(topo, topo.users, codebook, los, 30.0, 1e9, SLOT)
    with pytest.raises(InvalidArgument):
        exhaustive_optimum(topo, [], codebook, los, 30.0, 1e9, SLOT)
