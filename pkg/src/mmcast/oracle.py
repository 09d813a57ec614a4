"""Exhaustive solver for the minimum-slot multicast schedule on tiny groups.

Enumerates every set partition of the group, every order of its blocks,
every transmitter assignment allowed by the precedence rule (the AP or a
member of an earlier block) and every codebook beam per phase.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .antenna import Beam, Codebook
from .channel import ChannelModel, beam_rates
from .errors import InfeasibleSchedule, InvalidArgument, InvalidGeometry
from .partition import PartitionResult, Subset
from .schedule import Schedule, build_schedule, slots_needed
from .topology import AP, Topology

MAX_ENUM_ELEMENTS = 12


def enumerate_set_partitions(elements: Sequence) -> Iterator[list[list]]:
    """Yield every set partition once, in restricted-growth-string order."""
    items = list(elements)
    n = len(items)
    if n > MAX_ENUM_ELEMENTS:
        raise InvalidArgument(f"refusing to enumerate partitions of {n} > {MAX_ENUM_ELEMENTS} elements")
    if n == 0:
        yield []
        return
    rgs = [0] * n
    while True:
        blocks: list[list] = [[] for _ in range(max(rgs) + 1)]
        for item, b in zip(items, rgs):
            blocks[b].append(item)
        yield blocks
        # next restricted growth string: rgs[i] <= 1 + max(rgs[:i])
        i = n - 1
        while i > 0:
            if rgs[i] <= max(rgs[:i]):
                rgs[i] += 1
                rgs[i + 1:] = [0] * (n - i - 1)
                break
            i -= 1
        else:
            return


@dataclass(frozen=True)
class OracleSolution:
    best_partition: PartitionResult
    best_schedule: Schedule
    objective: int
    explored: int


def exhaustive_optimum(topology: Topology, group: Iterable[int], codebook: Codebook, model: ChannelModel,
                       tx_power_dbm: float, demand_bits: float, slot_duration_s: float,
                       max_group_size: int = 5) -> OracleSolution:
    users = sorted(set(group))
    if not users:
        raise InvalidArgument("multicast group is empty")
    if len(users) > max_group_size:
        raise InvalidArgument(f"group of {len(users)} exceeds the exhaustive-search cap of {max_group_size}")

    table = codebook.table
    phase_cache: dict[tuple[int, tuple[int, ...]], tuple[int, Beam, float] | None] = {}

    def phase(tx: int, block: tuple[int, ...]):
        key = (tx, block)
        if key not in phase_cache:
            try:
                rates = beam_rates(topology, tx, block, codebook, model, tx_power_dbm, table)
            except InvalidGeometry:
                phase_cache[key] = None
            else:
                best = None
                for i, r in enumerate(rates.tolist()):
                    if not r > 0:
                        continue
                    cand = (slots_needed(demand_bits, r, slot_duration_s), -r, i)
                    if best is None or cand < best:
                        best = cand
                phase_cache[key] = None if best is None else (best[0], table.beams[best[2]], -best[1])
        return phase_cache[key]

    best_obj = math.inf
    best_plan = None
    explored = 0
    for blocks in enumerate_set_partitions(users):
        blocks = [tuple(b) for b in blocks]
        for order in itertools.permutations(range(len(blocks))):
            seq = [blocks[i] for i in order]
            choices = []
            holders = [AP]
            for b in seq:
                choices.append(tuple(holders))
                holders = sorted(holders + list(b))
            for txs in itertools.product(*choices):
                explored += 1
                total = 0
                plan = []
                for tx, b in zip(txs, seq):
                    ph = phase(tx, b)
                    if ph is None:
                        break
                    total += ph[0]
                    plan.append((tx, b, ph))
                else:
                    if total < best_obj:
                        best_obj, best_plan = total, plan
    if best_plan is None:
        raise InfeasibleSchedule("no feasible schedule exists for this instance")

    owner = {}
    subsets = []
    for sid, (tx, block, (_, beam, rate)) in enumerate(best_plan, 1):
        subsets.append(Subset(sid, block, owner.get(tx, 0), tx, beam, rate))
        owner.update({u: sid for u in block})
    part = PartitionResult(tuple(subsets), d2d_enabled=any(s.transmit_node != AP for s in subsets))
    sched = build_schedule(part, demand_bits, slot_duration_s)
    return OracleSolution(part, sched, sched.total_slots, explored)
