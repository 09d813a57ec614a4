"""Comparison schedulers and a single entry point for all four schemes.

FDMAC  AP unicasts to each user in turn with its finest beam.
MC     multi-level codebook grouping, AP-only transmissions.
D2D    one user per phase with the finest beam, relayed by any holder.
MD2D   grouping plus D2D relaying.
"""
from __future__ import annotations

from typing import Iterable

from .antenna import Codebook
from .channel import ChannelModel, best_beam
from .errors import InfeasibleSchedule, InvalidArgument, InvalidGeometry
from .partition import PartitionResult, Subset, partition_and_plan
from .schedule import Schedule, build_schedule
from .topology import AP, Topology

SCHEMES = ("MD2D", "MC", "D2D", "FDMAC")


def _singletons(order: list[tuple[int, int, object, float]], serving: dict[int, int]) -> PartitionResult:
    # order: (user, tx, beam, rate) in service order
    subsets = tuple(
        Subset(k, (u,), serving.get(tx, 0), tx, beam, r) for k, (u, tx, beam, r) in enumerate(order, 1)
    )
    return PartitionResult(subsets, d2d_enabled=any(tx != AP for _, tx, _, _ in order))


def fdmac_partition(topology: Topology, group: Iterable[int], codebook: Codebook, model: ChannelModel,
                    tx_power_dbm: float) -> PartitionResult:
    users = sorted(set(group))
    if not users:
        raise InvalidArgument("multicast group is empty")
    order = []
    for u in users:
        try:
            beam, r = best_beam(topology, AP, [u], codebook, model, tx_power_dbm, finest_only=True)
        except InvalidGeometry as exc:
            raise InfeasibleSchedule(f"AP cannot reach user {u}: {exc}") from exc
        order.append((u, AP, beam, r))
    return _singletons(order, {})


def fdmac_schedule(topology, group, codebook, model, tx_power_dbm, demand_bits, slot_duration_s) -> Schedule:
    part = fdmac_partition(topology, group, codebook, model, tx_power_dbm)
    return build_schedule(part, demand_bits, slot_duration_s)


def mc_schedule(topology, group, codebook, model, tx_power_dbm, r_th, theta_th,
                demand_bits, slot_duration_s) -> Schedule:
    part = partition_and_plan(topology, group, codebook, model, tx_power_dbm, r_th, theta_th, d2d_enabled=False)
    return build_schedule(part, demand_bits, slot_duration_s)


def d2d_partition(topology: Topology, group: Iterable[int], codebook: Codebook, model: ChannelModel,
                  tx_power_dbm: float) -> PartitionResult:
    """Greedy relay chain: repeatedly serve the best (holder, user) finest-beam link."""
    unserved = set(group)
    if not unserved:
        raise InvalidArgument("multicast group is empty")
    best: dict[int, tuple[float, int, object]] = {}  # user -> (rate, holder, beam)

    def offer(holder: int):
        for u in unserved:
            try:
                beam, r = best_beam(topology, holder, [u], codebook, model, tx_power_dbm, finest_only=True)
            except InvalidGeometry:
                continue
            cur = best.get(u)
            if cur is None or r > cur[0] or (r == cur[0] and holder < cur[1]):
                best[u] = (r, holder, beam)

    offer(AP)
    order = []
    serving = {}
    while unserved:
        if not best:
            raise InfeasibleSchedule(f"users {sorted(unserved)} unreachable")
        u = min(best, key=lambda v: (-best[v][0], best[v][1], v))
        r, holder, beam = best.pop(u)
        if not r > 0:
            raise InfeasibleSchedule(f"best link to user {u} has zero rate")
        unserved.discard(u)
        order.append((u, holder, beam, r))
        serving[u] = len(order)
        offer(u)
    return _singletons(order, serving)


def d2d_schedule(topology, group, codebook, model, tx_power_dbm, demand_bits, slot_duration_s) -> Schedule:
    part = d2d_partition(topology, group, codebook, model, tx_power_dbm)
    return build_schedule(part, demand_bits, slot_duration_s)


def run_scheme(scheme: str, topology: Topology, group: Iterable[int], codebook: Codebook,
               model: ChannelModel, tx_power_dbm: float, r_th: float, theta_th: float,
               demand_bits: float, slot_duration_s: float) -> tuple[PartitionResult, Schedule]:
    if scheme == "MD2D":
        part = partition_and_plan(topology, group, codebook, model, tx_power_dbm, r_th, theta_th, True)
    elif scheme == "MC":
        part = partition_and_plan(topology, group, codebook, model, tx_power_dbm, r_th, theta_th, False)
    elif scheme == "D2D":
        part = d2d_partition(topology, group, codebook, model, tx_power_dbm)
    elif scheme == "FDMAC":
        part = fdmac_partition(topology, group, codebook, model, tx_power_dbm)
    else:
        raise InvalidArgument(f"unknown scheme {scheme!r}; expected one of {', '.join(SCHEMES)}")
    return part, build_schedule(part, demand_bits, slot_duration_s)
