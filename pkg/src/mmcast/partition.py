"""Greedy user partition, multicast path planning and max-min beam selection.

Starting from the AP pseudo-subset, each iteration finds the unallocated
user nearest to the center of some already-served subset, grows a new
subset around it by a radius band and an angular span measured in that
subset's polar frame, then picks the member of the serving subset (and its
beam) that maximizes the new subset's worst-member rate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .antenna import Beam, Codebook
from .channel import ChannelModel, best_beam
from .errors import InfeasibleSchedule, InvalidArgument, InvalidGeometry
from .topology import AP, Topology, circular_span, polar_relative, subset_center


@dataclass(frozen=True)
class Subset:
    subset_id: int
    members: tuple[int, ...]
    serving_subset_id: int
    transmit_node: int
    tx_beam: Beam
    subset_rate: float

    @property
    def path(self) -> tuple[int, int]:
        return (self.serving_subset_id, self.subset_id)


@dataclass(frozen=True)
class PartitionResult:
    """Subsets in allocation order. The AP pseudo-subset (id 0) is implicit."""

    subsets: tuple[Subset, ...]
    r_th: float = math.nan
    theta_th: float = math.nan
    d2d_enabled: bool = True

    def members_of(self, subset_id: int) -> tuple[int, ...]:
        if subset_id == 0:
            return (AP,)
        return self.by_id[subset_id].members

    @property
    def by_id(self) -> dict[int, Subset]:
        return {s.subset_id: s for s in self.subsets}

    def trace(self) -> str:
        lines = [f"# r_th={self.r_th!r} theta_th={self.theta_th!r} d2d={self.d2d_enabled}"]
        for s in self.subsets:
            members = ",".join(map(str, s.members))
            lines.append(
                f"U{s.subset_id} members={members} path=U{s.serving_subset_id}->U{s.subset_id} "
                f"tx={s.transmit_node} beam=({s.tx_beam.beam_index},{s.tx_beam.level_index}) "
                f"rate={s.subset_rate!r}"
            )
        return "\n".join(lines) + "\n"


@dataclass
class _State:
    topology: Topology
    members: list[tuple[int, ...]] = field(default_factory=lambda: [(AP,)])
    centers: list[tuple[float, float]] = field(default_factory=list)

    def __post_init__(self):
        if not self.centers:
            self.centers = [self.topology.ap_position]

    def add(self, members: tuple[int, ...]):
        self.members.append(members)
        self.centers.append(subset_center(self.topology, members))


def nearest_unallocated(centers: Sequence[tuple[float, float]], unallocated: Sequence[int],
                        topology: Topology) -> tuple[int, int, float]:
    """(subset id, user id, r^s) of the globally nearest unallocated user.

    ``centers[s]`` is the center of subset s. Ties go to the lower subset id,
    then the lower node id.
    """
    if not unallocated:
        raise InvalidArgument("no unallocated users")
    users = sorted(unallocated)
    pos = np.array([topology.position(u) for u in users])
    c = np.asarray(centers, dtype=float)
    dist = np.hypot(pos[None, :, 0] - c[:, None, 0], pos[None, :, 1] - c[:, None, 1])
    s, j = np.unravel_index(int(np.argmin(dist)), dist.shape)
    # report the radius exactly as the polar frame computes it
    r = polar_relative(centers[s], topology.position(users[j])).radius_m
    return int(s), users[j], r


def grow_subset(center: tuple[float, float], anchor_radius: float, unallocated: Iterable[int],
                topology: Topology, r_th: float, theta_th: float) -> tuple[int, ...]:
    """Admit users in ascending radius order while both threshold tests pass."""
    polar = sorted(
        ((p.radius_m, node, p.angle_deg)
         for node in unallocated
         for p in (polar_relative(center, topology.position(node)),)),
    )
    admitted: list[int] = []
    angles: list[float] = []
    for r, node, theta in polar:
        if abs(r - anchor_radius) > r_th:
            continue
        if angles and circular_span(angles + [theta]) > theta_th:
            continue
        admitted.append(node)
        angles.append(theta)
    return tuple(admitted)


def select_transmitter_and_beam(targets: Sequence[int], sources: Sequence[int], topology: Topology,
                                codebook: Codebook, model: ChannelModel,
                                tx_power_dbm: float) -> tuple[int, Beam, float]:
    if not targets or not sources:
        raise InvalidArgument("source and target sets must be nonempty")
    if set(targets) & set(sources):
        raise InvalidArgument("source and target sets overlap")
    best = None
    for node in sorted(sources):
        try:
            beam, r = best_beam(topology, node, targets, codebook, model, tx_power_dbm)
        except InvalidGeometry:
            continue
        if best is None or r > best[2]:
            best = (node, beam, r)
    if best is None:
        raise InfeasibleSchedule(f"no member of {sorted(sources)} can serve {sorted(targets)}")
    return best


def partition_and_plan(topology: Topology, group: Iterable[int], codebook: Codebook,
                       model: ChannelModel, tx_power_dbm: float, r_th: float, theta_th: float,
                       d2d_enabled: bool = True) -> PartitionResult:
    unallocated = set(group)
    if not unallocated:
        raise InvalidArgument("multicast group is empty")
    if AP in unallocated:
        raise InvalidArgument("the AP cannot be a multicast group member")
    if r_th < 0 or theta_th < 0:
        raise InvalidArgument("thresholds must be nonnegative")
    state = _State(topology)
    subsets: list[Subset] = []
    while unallocated:
        centers = state.centers if d2d_enabled else state.centers[:1]
        s, _, r_s = nearest_unallocated(centers, sorted(unallocated), topology)
        members = grow_subset(state.centers[s], r_s, unallocated, topology, r_th, theta_th)
        unallocated.difference_update(members)
        tx, beam, rate = select_transmitter_and_beam(
            members, state.members[s], topology, codebook, model, tx_power_dbm)
        state.add(members)
        subsets.append(Subset(len(subsets) + 1, tuple(sorted(members)), s, tx, beam, rate))
    return PartitionResult(tuple(subsets), r_th, theta_th, d2d_enabled)
