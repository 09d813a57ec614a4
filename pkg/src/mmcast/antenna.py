"""Multi-level beam codebook and the Gaussian-main-lobe gain pattern.

The pattern has a Gaussian main lobe (quadratic in dB) out to half the
main-lobe width and a constant side-lobe floor beyond it. The closure
constants tying the main-lobe width, peak gain and side-lobe level to the
half-power beamwidth follow the 802.15.3c reference antenna and live in
:class:`AntennaParams` so they can be recalibrated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import InvalidArgument

HALF_POWER_DB = 3.01


@dataclass(frozen=True)
class AntennaParams:
    main_lobe_factor: float = 2.6
    peak_gain_numerator: float = 1.6162
    side_lobe_slope: float = -0.4111
    side_lobe_offset_db: float = -10.579

    def main_lobe_width(self, theta_3db_deg: float) -> float:
        return self.main_lobe_factor * theta_3db_deg

    def peak_gain_db(self, theta_3db_deg: float) -> float:
        s = math.sin(math.radians(theta_3db_deg) / 2.0)
        return 10.0 * math.log10((self.peak_gain_numerator / s) ** 2)

    def side_lobe_gain_db(self, theta_3db_deg: float) -> float:
        return self.side_lobe_slope * math.log(theta_3db_deg) + self.side_lobe_offset_db


@dataclass(frozen=True)
class Beam:
    level_index: int
    beam_index: int
    boresight_deg: float
    theta_3db_deg: float
    theta_ml_deg: float
    g0_db: float
    gsl_db: float

    @property
    def key(self) -> tuple[int, int]:
        return (self.level_index, self.beam_index)


@dataclass(frozen=True)
class CodebookLevel:
    half_power_beamwidth_deg: float
    beams: tuple[Beam, ...]


@dataclass(frozen=True)
class Codebook:
    """Levels ordered widest first; the last level is the finest."""

    levels: tuple[CodebookLevel, ...]
    params: AntennaParams = field(default_factory=AntennaParams)

    @property
    def finest(self) -> CodebookLevel:
        return self.levels[-1]

    def beam(self, level_index: int, beam_index: int) -> Beam:
        return self.levels[level_index].beams[beam_index]

    def all_beams(self) -> list[Beam]:
        return [b for lvl in self.levels for b in lvl.beams]

    def search_order(self) -> list[Beam]:
        """All beams, narrowest level first then ascending beam index (tie-break order)."""
        return [b for lvl in reversed(self.levels) for b in lvl.beams]

    @cached_property
    def table(self) -> "BeamTable":
        return BeamTable(self.search_order())

    @cached_property
    def finest_table(self) -> "BeamTable":
        return BeamTable(self.finest.beams)

    def contains(self, beam: Beam) -> bool:
        try:
            return self.beam(beam.level_index, beam.beam_index) == beam
        except IndexError:
            return False


class BeamTable:
    """Beams flattened into parallel arrays for the rate kernels."""

    def __init__(self, beams: Sequence[Beam]):
        self.beams = list(beams)
        self.boresight = np.array([b.boresight_deg for b in self.beams])
        self.theta3 = np.array([b.theta_3db_deg for b in self.beams])
        self.half_ml = np.array([b.theta_ml_deg / 2.0 for b in self.beams])
        self.g0 = np.array([b.g0_db for b in self.beams])
        self.gsl = np.array([b.gsl_db for b in self.beams])


def build_codebook(beamwidths_deg: Sequence[float], params: AntennaParams | None = None) -> Codebook:
    params = params or AntennaParams()
    widths = list(beamwidths_deg)
    if not widths:
        raise InvalidArgument("codebook needs at least one beamwidth")
    for w in widths:
        if not 0.0 < w < 180.0:
            raise InvalidArgument(f"half-power beamwidth {w} outside (0, 180) degrees")
    if len(set(widths)) != len(widths):
        raise InvalidArgument("duplicate beamwidths in codebook")
    levels = []
    for li, w in enumerate(sorted(widths, reverse=True)):
        n = math.ceil(360.0 / w - 1e-9)
        beams = tuple(
            Beam(
                level_index=li,
                beam_index=t,
                boresight_deg=t * w,
                theta_3db_deg=w,
                theta_ml_deg=params.main_lobe_width(w),
                g0_db=params.peak_gain_db(w),
                gsl_db=params.side_lobe_gain_db(w),
            )
            for t in range(n)
        )
        levels.append(CodebookLevel(w, beams))
    return Codebook(tuple(levels), params)


def angular_offset(a_deg: float, b_deg: float) -> float:
    """Absolute angle between two bearings, folded into [0, 180]."""
    off = math.fabs(math.fmod(a_deg - b_deg, 360.0))
    if off > 180.0:
        off = 360.0 - off
    return off


def gain_db(beam: Beam, offset_deg: float) -> float:
    if offset_deg < beam.theta_ml_deg / 2.0:
        x = 2.0 * offset_deg / beam.theta_3db_deg
        return beam.g0_db - HALF_POWER_DB * x * x
    return beam.gsl_db


def best_receive_beam(codebook: Codebook, direction_deg: float) -> Beam:
    best, best_off = None, math.inf
    for beam in codebook.finest.beams:
        off = angular_offset(direction_deg, beam.boresight_deg)
        if off < best_off:
            best, best_off = beam, off
    return best
