"""Network throughput, energy consumption and energy efficiency of a schedule.

Throughput counts slot-quantized airtime; energy counts the exact
transmission time ``D / R_k`` of each phase. The two timing bases differ on
purpose.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidArgument
from .schedule import Schedule


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class MetricsReport:
    network_throughput_bps: float
    energy_consumption_j: float
    energy_efficiency_bpj: float
    group_size: int
    demand_bits: float
    tx_power_w: float
    total_slots: int


def network_throughput(schedule: Schedule, group_size: int) -> float:
    slots = sum(p.slots for p in schedule.phases)
    if slots <= 0:
        raise InvalidArgument("schedule has no slots")
    return group_size * schedule.demand_bits / (slots * schedule.slot_duration_s)


def energy_consumption(schedule: Schedule, tx_power_w: float) -> float:
    if any(not p.rate > 0 for p in schedule.phases):
        raise InvalidArgument("energy undefined for a zero-rate phase")
    return math.fsum(schedule.demand_bits / p.rate * tx_power_w for p in schedule.phases)


def energy_efficiency(nt: float, ec: float) -> float:
    if not ec > 0:
        raise InvalidArgument("energy consumption must be positive")
    return nt / ec


def evaluate(schedule: Schedule, group_size: int, tx_power_dbm: float) -> MetricsReport:
    p_w = dbm_to_watts(tx_power_dbm)
    nt = network_throughput(schedule, group_size)
    ec = energy_consumption(schedule, p_w)
    return MetricsReport(nt, ec, energy_efficiency(nt, ec), group_size, schedule.demand_bits, p_w,
                         sum(p.slots for p in schedule.phases))
