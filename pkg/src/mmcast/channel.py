"""Link budget: received power, SNR and achievable rate, LOS and NLOS.

All quantities are handled in the dB domain:

    P_rx = P_t + G_tx + G_rx + 10 log10(k0) - 10 tau log10(d) [+ shadowing]
    SNR  = 10 ** ((P_rx - (N0 + 10 log10 W_MHz)) / 10)
    R    = eta * W * log2(1 + SNR)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import kernels
from .antenna import Beam, BeamTable, Codebook, angular_offset, best_receive_beam, gain_db
from .errors import InvalidArgument, InvalidGeometry
from .topology import Topology, direction_deg

SPEED_OF_LIGHT = 299_792_458.0
LOS, NLOS = "LOS", "NLOS"
DEFAULT_EXPONENT = {LOS: 2.0, NLOS: 3.01}


@dataclass(frozen=True)
class ChannelModel:
    mode: str = LOS
    path_loss_exponent: float | None = None  # None -> per-mode default
    carrier_frequency_hz: float = 60e9
    k0_offset_db: float = -67.0  # proportionality constant of k0 relative to (lambda / 4 pi)^2
    noise_psd_dbm_per_mhz: float = -134.0
    bandwidth_mhz: float = 2160.0
    efficiency: float = 0.5
    shadowing_sigma_db: float = 5.8
    shadowing_seed: int = 0

    def __post_init__(self):
        if self.mode not in DEFAULT_EXPONENT:
            raise InvalidArgument(f"channel mode must be LOS or NLOS, got {self.mode!r}")
        if self.path_loss_exponent is None:
            object.__setattr__(self, "path_loss_exponent", DEFAULT_EXPONENT[self.mode])
        if not self.path_loss_exponent > 0:
            raise InvalidArgument("path_loss_exponent must be positive")
        if not 0.0 < self.efficiency < 1.0:
            raise InvalidArgument("efficiency must lie in (0, 1)")
        if not self.bandwidth_mhz > 0:
            raise InvalidArgument("bandwidth_mhz must be positive")
        if not self.carrier_frequency_hz > 0:
            raise InvalidArgument("carrier_frequency_hz must be positive")
        if self.shadowing_sigma_db < 0:
            raise InvalidArgument("shadowing_sigma_db must be nonnegative")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency_hz

    @property
    def k0_db(self) -> float:
        return 20.0 * math.log10(self.wavelength_m / (4.0 * math.pi)) + self.k0_offset_db

    @property
    def noise_dbm(self) -> float:
        return self.noise_psd_dbm_per_mhz + 10.0 * math.log10(self.bandwidth_mhz)

    @property
    def eta_w_hz(self) -> float:
        return self.efficiency * self.bandwidth_mhz * 1e6

    @property
    def shadowed(self) -> bool:
        return self.mode == NLOS and self.shadowing_sigma_db > 0

    def shadowing_db(self, tx: int, rx: int) -> float:
        if not self.shadowed:
            return 0.0
        return self.shadowing_sigma_db * _standard_normal(self.shadowing_seed, tx, rx)


@lru_cache(maxsize=1 << 16)
def _standard_normal(seed: int, tx: int, rx: int) -> float:
    # one PCG64 stream per ordered link: independent of node count and call order
    return float(np.random.default_rng([seed, tx, rx]).standard_normal())


@dataclass(frozen=True)
class LinkBudget:
    rx_power_dbm: float
    snr_linear: float
    rate_bps: float


def received_power(tx_gain_db, rx_gain_db, distance_m, tx_power_dbm, model: ChannelModel,
                   shadowing_db: float = 0.0) -> float:
    if not distance_m > 0:
        raise InvalidGeometry("received_power needs a positive distance")
    loss_db = 10.0 * model.path_loss_exponent * math.log10(distance_m)
    return tx_power_dbm + tx_gain_db + rx_gain_db + model.k0_db - loss_db + shadowing_db


def snr(rx_power_dbm: float, model: ChannelModel) -> float:
    return 10.0 ** ((rx_power_dbm - model.noise_dbm) / 10.0)


def rate(snr_linear: float, model: ChannelModel) -> float:
    if snr_linear < 0:
        raise InvalidArgument("snr must be nonnegative")
    return model.eta_w_hz * math.log2(1.0 + snr_linear)


def link_budget(topology: Topology, tx_node: int, tx_beam: Beam, rx_node: int,
                codebook: Codebook, model: ChannelModel, tx_power_dbm: float) -> LinkBudget:
    if tx_node == rx_node:
        raise InvalidGeometry("link endpoints coincide")
    d = topology.distance(tx_node, rx_node)
    if d == 0.0:
        raise InvalidGeometry(f"nodes {tx_node} and {rx_node} are co-located")
    p_tx, p_rx = topology.position(tx_node), topology.position(rx_node)
    to_rx = direction_deg(p_tx, p_rx)
    to_tx = direction_deg(p_rx, p_tx)
    g_tx = gain_db(tx_beam, angular_offset(to_rx, tx_beam.boresight_deg))
    rx_beam = best_receive_beam(codebook, to_tx)
    g_rx = gain_db(rx_beam, angular_offset(to_tx, rx_beam.boresight_deg))
    p = received_power(g_tx, g_rx, d, tx_power_dbm, model, model.shadowing_db(tx_node, rx_node))
    s = snr(p, model)
    return LinkBudget(p, s, rate(s, model))


def link_rate(topology: Topology, tx_node: int, tx_beam: Beam, rx_node: int,
              codebook: Codebook, model: ChannelModel, tx_power_dbm: float) -> float:
    return link_budget(topology, tx_node, tx_beam, rx_node, codebook, model, tx_power_dbm).rate_bps


def beam_rates(topology: Topology, tx_node: int, targets: Sequence[int], codebook: Codebook,
               model: ChannelModel, tx_power_dbm: float, table: BeamTable | None = None) -> np.ndarray:
    """Min-over-targets rate for every beam in ``table`` (default: whole codebook).

    Raises InvalidGeometry if the transmitter coincides with any target.
    """
    table = table or codebook.table
    p_tx = topology.position(tx_node)
    base = np.empty(len(targets))
    dirs = np.empty(len(targets))
    for i, node in enumerate(targets):
        if node == tx_node:
            raise InvalidGeometry(f"node {node} cannot serve itself")
        d = topology.distance(tx_node, node)
        if d == 0.0:
            raise InvalidGeometry(f"nodes {tx_node} and {node} are co-located")
        p_rx = topology.position(node)
        to_tx = direction_deg(p_rx, p_tx)
        rx_beam = best_receive_beam(codebook, to_tx)
        g_rx = gain_db(rx_beam, angular_offset(to_tx, rx_beam.boresight_deg))
        base[i] = received_power(0.0, g_rx, d, tx_power_dbm, model, model.shadowing_db(tx_node, node))
        dirs[i] = direction_deg(p_tx, p_rx)
    return kernels.beam_min_rates(base, dirs, table.boresight, table.theta3, table.half_ml,
                                  table.g0, table.gsl, model.noise_dbm, model.eta_w_hz)


def best_beam(topology: Topology, tx_node: int, targets: Sequence[int], codebook: Codebook,
              model: ChannelModel, tx_power_dbm: float, finest_only: bool = False) -> tuple[Beam, float]:
    """Max-min beam for serving ``targets`` from ``tx_node``; ties keep the earlier beam."""
    table = codebook.finest_table if finest_only else codebook.table
    rates = beam_rates(topology, tx_node, targets, codebook, model, tx_power_dbm, table)
    i = int(np.argmax(rates))  # first maximum == narrowest, then lowest index
    return table.beams[i], float(rates[i])
