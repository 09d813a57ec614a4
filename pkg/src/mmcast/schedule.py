"""Phase construction, slot sizing and the constraint checker.

A schedule is a sequence of phases; each phase carries exactly one
multicast transmission (transmitter, beam, target subset) and occupies
``ceil(D / (R * slot))`` slots. The objective is the total slot count.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .antenna import Beam, Codebook
from .channel import ChannelModel, link_rate
from .errors import InfeasibleSchedule, InvalidArgument, InvalidGeometry
from .partition import PartitionResult, Subset
from .topology import AP, Topology

# float slack for re-derived rates; far below one slot of demand
REL_TOL = 1e-9

CONSTRAINTS = {
    "coverage": "subsets cover the multicast group",
    "partition": "1 <= S <= |U|, subsets nonempty and disjoint",
    "one-target": "each phase targets exactly one subset",
    "once": "each subset is scheduled exactly once",
    "min-rate": "phase rate equals min member rate",
    "codebook": "beams drawn from the codebook",
    "demand": "slots meet the multicast demand",
    "precedence": "D2D transmitter's subset served earlier",
}


@dataclass(frozen=True)
class Phase:
    phase_index: int
    tx_node: int
    target_subset_id: int
    targets: tuple[int, ...]
    tx_beam: Beam
    rate: float
    slots: int


@dataclass(frozen=True)
class Schedule:
    phases: tuple[Phase, ...]
    demand_bits: float
    slot_duration_s: float

    @property
    def total_slots(self) -> int:
        return total_slots(self)

    def dumps(self) -> str:
        lines = [f"# demand_bits={self.demand_bits!r} slot_duration_s={self.slot_duration_s!r}"]
        for p in self.phases:
            lines.append(
                f"k={p.phase_index} tx={p.tx_node} subset={p.target_subset_id} "
                f"members={','.join(map(str, p.targets))} "
                f"beam=({p.tx_beam.beam_index},{p.tx_beam.level_index}) "
                f"rate={p.rate!r} slots={p.slots}"
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, codebook: Codebook) -> "Schedule":
        demand = slot = None
        phases = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            fields = dict(re.findall(r"(\w+)=(\S+)", line))
            try:
                if line.startswith("#"):
                    demand = float(fields.get("demand_bits", demand))
                    slot = float(fields.get("slot_duration_s", slot))
                    continue
                t, l = (int(v) for v in fields["beam"].strip("()").split(","))
                phases.append(Phase(
                    phase_index=int(fields["k"]),
                    tx_node=int(fields["tx"]),
                    target_subset_id=int(fields["subset"]),
                    targets=tuple(int(v) for v in fields["members"].split(",") if v),
                    tx_beam=_lookup_beam(codebook, l, t),
                    rate=float(fields["rate"]),
                    slots=int(fields["slots"]),
                ))
            except (KeyError, ValueError, TypeError) as exc:
                raise InvalidArgument(f"schedule line {lineno}: malformed phase record") from exc
        if demand is None or slot is None:
            raise InvalidArgument("schedule header must give demand_bits and slot_duration_s")
        return cls(tuple(phases), demand, slot)


def _lookup_beam(codebook: Codebook, level: int, index: int) -> Beam:
    try:
        if level >= 0 and index >= 0:
            return codebook.beam(level, index)
    except IndexError:
        pass
    nan = math.nan
    return Beam(level, index, nan, nan, nan, nan, nan)


def slots_needed(demand_bits: float, rate_bps: float, slot_duration_s: float) -> int:
    """Smallest slot count whose airtime carries the demand at ``rate_bps``."""
    if not rate_bps > 0:
        raise InfeasibleSchedule("zero-rate transmission cannot meet the demand")
    n = max(1, math.ceil(demand_bits / (rate_bps * slot_duration_s)))
    # guard against rounding in the division
    while rate_bps * n * slot_duration_s < demand_bits:
        n += 1
    while n > 1 and rate_bps * (n - 1) * slot_duration_s >= demand_bits:
        n -= 1
    return n


def build_schedule(partition: PartitionResult, demand_bits: float, slot_duration_s: float) -> Schedule:
    """One phase per subset, in allocation order."""
    if not demand_bits > 0 or not slot_duration_s > 0:
        raise InvalidArgument("demand and slot duration must be positive")
    phases = []
    for k, s in enumerate(partition.subsets, 1):
        if not s.subset_rate > 0:
            raise InfeasibleSchedule(f"subset U{s.subset_id} has zero rate", s.subset_id)
        phases.append(Phase(k, s.transmit_node, s.subset_id, s.members, s.tx_beam, s.subset_rate,
                            slots_needed(demand_bits, s.subset_rate, slot_duration_s)))
    return Schedule(tuple(phases), demand_bits, slot_duration_s)


def schedule_partition(schedule: Schedule) -> PartitionResult:
    """Recover the subset structure implied by a schedule's phases."""
    owner = {}
    for p in schedule.phases:
        for m in p.targets:
            owner.setdefault(m, p.target_subset_id)
    subsets = tuple(
        Subset(p.target_subset_id, p.targets, owner.get(p.tx_node, 0), p.tx_node, p.tx_beam, p.rate)
        for p in schedule.phases
    )
    return PartitionResult(subsets)


def total_slots(schedule: Schedule) -> int:
    return sum(p.slots for p in schedule.phases)


@dataclass
class FeasibilityReport:
    violations: dict[str, list[str]] = field(default_factory=lambda: {c: [] for c in CONSTRAINTS})

    def flag(self, constraint: str, message: str):
        self.violations[constraint].append(message)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def failed(self) -> list[str]:
        return [c for c, v in self.violations.items() if v]

    def lines(self) -> list[str]:
        out = []
        for c, desc in CONSTRAINTS.items():
            v = self.violations[c]
            status = "PASS" if not v else "FAIL"
            out.append(f"{c:10s} {status} {desc}" + ("" if not v else ": " + "; ".join(v)))
        return out


def check_feasibility(schedule: Schedule, partition: PartitionResult | None, group, topology: Topology,
                      codebook: Codebook, model: ChannelModel, tx_power_dbm: float) -> FeasibilityReport:
    """Re-derive every constraint from positions and beams; never trusts cached rates."""
    report = FeasibilityReport()
    group = set(group)
    if partition is None:
        partition = schedule_partition(schedule)
    members = {}
    for s in partition.subsets:
        if s.subset_id in members or s.subset_id <= 0:
            report.flag("partition", f"bad or repeated subset id U{s.subset_id}")
        members[s.subset_id] = tuple(s.members)

    # coverage and partition: exact partition of the group
    covered: dict[int, int] = {}
    for sid, mem in members.items():
        if not mem:
            report.flag("partition", f"U{sid} is empty")
        for u in mem:
            if u in covered:
                report.flag("partition", f"user {u} in U{covered[u]} and U{sid}")
            covered[u] = sid
    missing = sorted(group - covered.keys())
    extra = sorted(covered.keys() - group)
    if missing:
        report.flag("coverage", f"users {missing} not served")
    if extra:
        report.flag("coverage", f"users {extra} not in the group")
    if not 1 <= len(members) <= max(len(group), 1):
        report.flag("partition", f"S={len(members)} outside [1, {len(group)}]")

    # one-target and once: phase-to-subset assignment
    scheduled_at: dict[int, list[int]] = {sid: [] for sid in members}
    for k, p in enumerate(schedule.phases, 1):
        if p.target_subset_id not in members:
            report.flag("one-target", f"phase {k} targets unknown subset U{p.target_subset_id}")
            continue
        if tuple(sorted(p.targets)) != tuple(sorted(members[p.target_subset_id])):
            report.flag("one-target", f"phase {k} members differ from U{p.target_subset_id}")
        scheduled_at[p.target_subset_id].append(k)
    for sid, ks in scheduled_at.items():
        if len(ks) != 1:
            report.flag("once", f"U{sid} scheduled in phases {ks}")

    # min-rate, codebook, demand
    for k, p in enumerate(schedule.phases, 1):
        beam_ok = codebook.contains(p.tx_beam)
        if not beam_ok:
            report.flag("codebook", f"phase {k} beam ({p.tx_beam.beam_index},{p.tx_beam.level_index}) not in codebook")
        targets = members.get(p.target_subset_id, p.targets)
        recomputed = None
        if beam_ok and targets:
            try:
                recomputed = min(link_rate(topology, p.tx_node, p.tx_beam, u, codebook, model, tx_power_dbm)
                                 for u in targets)
            except InvalidGeometry as exc:
                report.flag("min-rate", f"phase {k}: {exc}")
        if recomputed is not None and not math.isclose(recomputed, p.rate, rel_tol=REL_TOL):
            report.flag("min-rate", f"phase {k} rate {p.rate!r} != min member rate {recomputed!r}")
        if not isinstance(p.slots, int) or p.slots < 1:
            report.flag("demand", f"phase {k} has {p.slots!r} slots")
        elif recomputed is not None:
            carried = recomputed * p.slots * schedule.slot_duration_s
            if carried < schedule.demand_bits * (1.0 - REL_TOL):
                report.flag("demand", f"phase {k} carries {carried:.6g} < D={schedule.demand_bits:.6g} bits")
        elif beam_ok:
            report.flag("demand", f"phase {k} demand unverifiable")

    # precedence, for every prefix of the schedule
    first_phase = {sid: ks[0] for sid, ks in scheduled_at.items() if ks}
    for k, p in enumerate(schedule.phases, 1):
        if p.tx_node == AP:
            continue
        f = covered.get(p.tx_node)
        if f is None:
            report.flag("precedence", f"phase {k} transmitter {p.tx_node} never receives the data")
        elif f == p.target_subset_id:
            report.flag("precedence", f"phase {k} transmitter {p.tx_node} is in its own target subset")
        elif first_phase.get(f, math.inf) >= k:
            report.flag("precedence", f"phase {k} transmitter {p.tx_node} (U{f}) not served before phase {k}")
    return report
