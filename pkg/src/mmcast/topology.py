"""Small-cell geometry: node placement, polar frames and angular spans.

Node ids: the AP is node 0, users are 1..n in placement order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument

AP = 0

Point = tuple[float, float]


@dataclass(frozen=True)
class PolarCoordinate:
    radius_m: float
    angle_deg: float


@dataclass(frozen=True)
class Topology:
    area_side_m: float
    ap_position: Point
    user_positions: tuple[Point, ...]
    seed: int = 0

    @property
    def num_users(self) -> int:
        return len(self.user_positions)

    @property
    def users(self) -> tuple[int, ...]:
        return tuple(range(1, self.num_users + 1))

    def position(self, node: int) -> Point:
        if node == AP:
            return self.ap_position
        return self.user_positions[node - 1]

    def distance(self, a: int, b: int) -> float:
        pa, pb = self.position(a), self.position(b)
        return math.hypot(pb[0] - pa[0], pb[1] - pa[1])

    def positions_array(self) -> np.ndarray:
        """(n + 1, 2) array indexed by node id."""
        return np.array((self.ap_position,) + self.user_positions, dtype=float)

    # -- plain-text record -------------------------------------------------
    def dumps(self) -> str:
        lines = [
            f"seed {self.seed}",
            f"area_side_m {self.area_side_m!r}",
            f"ap {self.ap_position[0]!r} {self.ap_position[1]!r}",
        ]
        for node, (x, y) in zip(self.users, self.user_positions):
            lines.append(f"user {node} {x!r} {y!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Topology":
        seed, side, ap = 0, None, None
        users: list[Point] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, *vals = line.split()
            try:
                if key == "seed":
                    seed = int(vals[0])
                elif key == "area_side_m":
                    side = float(vals[0])
                elif key == "ap":
                    ap = (float(vals[0]), float(vals[1]))
                elif key == "user":
                    if int(vals[0]) != len(users) + 1:
                        raise InvalidArgument(f"line {lineno}: users must be numbered 1..n in order")
                    users.append((float(vals[1]), float(vals[2])))
                else:
                    raise InvalidArgument(f"line {lineno}: unknown record {key!r}")
            except (IndexError, ValueError) as exc:
                if isinstance(exc, InvalidArgument):
                    raise
                raise InvalidArgument(f"line {lineno}: malformed {key!r} record") from exc
        if side is None or ap is None or not users:
            raise InvalidArgument("topology record needs area_side_m, ap and at least one user")
        return cls(side, ap, tuple(users), seed)


def generate_topology(num_users: int, area_side_m: float, seed: int) -> Topology:
    """Place the AP at the square's center and users uniformly over the square.

    Placement uses numpy's PCG64 generator seeded with ``seed``.
    """
    if num_users < 1:
        raise InvalidArgument("num_users must be >= 1")
    if not area_side_m > 0:
        raise InvalidArgument("area_side_m must be positive")
    rng = np.random.default_rng(seed)
    xy = rng.uniform(0.0, area_side_m, size=(num_users, 2))
    users = tuple((float(x), float(y)) for x, y in xy)
    half = area_side_m / 2.0
    return Topology(float(area_side_m), (half, half), users, int(seed))


def polar_relative(center: Sequence[float], node: Sequence[float]) -> PolarCoordinate:
    dx = node[0] - center[0]
    dy = node[1] - center[1]
    r = math.hypot(dx, dy)
    if r == 0.0:
        return PolarCoordinate(0.0, 0.0)
    return PolarCoordinate(r, normalize_angle(math.degrees(math.atan2(dy, dx))))


def normalize_angle(angle_deg: float) -> float:
    a = angle_deg % 360.0
    # -1e-17 % 360 rounds to 360.0
    return 0.0 if a >= 360.0 else a


def direction_deg(src: Sequence[float], dst: Sequence[float]) -> float:
    """Bearing of ``dst`` as seen from ``src``, in [0, 360)."""
    return polar_relative(src, dst).angle_deg


def subset_center(topology: Topology, members: Iterable[int]) -> Point:
    members = list(members)
    if not members:
        raise InvalidArgument("subset has no members")
    if members == [AP]:
        return topology.ap_position
    xs = [topology.position(m)[0] for m in members]
    ys = [topology.position(m)[1] for m in members]
    return (math.fsum(xs) / len(xs), math.fsum(ys) / len(ys))


def circular_span(angles_deg: Iterable[float]) -> float:
    """Width of the smallest arc containing every angle (360 minus the largest gap)."""
    a = sorted(angles_deg)
    if not a:
        raise InvalidArgument("circular_span of an empty collection")
    if len(a) == 1:
        return 0.0
    gap = a[0] + 360.0 - a[-1]
    for lo, hi in zip(a, a[1:]):
        gap = max(gap, hi - lo)
    # the wrap gap can round past 360 when all angles coincide
    return max(0.0, 360.0 - gap)
