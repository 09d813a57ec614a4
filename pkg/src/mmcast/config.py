"""Experiment configuration: INI file with [experiment], [channel], [antenna].

Every field is addressable as ``section.key`` (used by ``--set``). List
fields take comma-separated values. Defaults reproduce the reference
small-cell setup: 20 m square, 2160 MHz, -134 dBm/MHz, path-loss exponent
2, 18 us slots, transceiver efficiency 0.5, four-level 15/30/45/60 degree
codebook, 100 runs per point.
"""
import configparser
import dataclasses
from dataclasses import dataclass, field, fields

from .antenna import AntennaParams, Codebook, build_codebook
from .baselines import SCHEMES
from .channel import DEFAULT_EXPONENT, LOS, NLOS, ChannelModel
from .errors import InvalidArgument


class ConfigError(InvalidArgument):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class ChannelConfig:
    carrier_frequency_hz: float = 60e9
    k0_offset_db: float = -67.0
    noise_psd_dbm_per_mhz: float = -134.0
    bandwidth_mhz: float = 2160.0
    efficiency: float = 0.5
    los_path_loss_exponent: float = DEFAULT_EXPONENT[LOS]
    nlos_path_loss_exponent: float = DEFAULT_EXPONENT[NLOS]
    shadowing_sigma_db: float = 5.8

    def model(self, mode: str, shadowing_seed: int = 0) -> ChannelModel:
        exponent = self.los_path_loss_exponent if mode == LOS else self.nlos_path_loss_exponent
        return ChannelModel(
            mode=mode,
            path_loss_exponent=exponent,
            carrier_frequency_hz=self.carrier_frequency_hz,
            k0_offset_db=self.k0_offset_db,
            noise_psd_dbm_per_mhz=self.noise_psd_dbm_per_mhz,
            bandwidth_mhz=self.bandwidth_mhz,
            efficiency=self.efficiency,
            shadowing_sigma_db=self.shadowing_sigma_db,
            shadowing_seed=shadowing_seed,
        )


@dataclass(frozen=True)
class AntennaConfig:
    beamwidths_deg: tuple[float, ...] = (15.0, 30.0, 45.0, 60.0)
    main_lobe_factor: float = 2.6
    peak_gain_numerator: float = 1.6162
    side_lobe_slope: float = -0.4111
    side_lobe_offset_db: float = -10.579

    def codebook(self) -> Codebook:
        params = AntennaParams(self.main_lobe_factor, self.peak_gain_numerator,
                               self.side_lobe_slope, self.side_lobe_offset_db)
        return build_codebook(self.beamwidths_deg, params)


@dataclass(frozen=True)
class ExperimentConfig:
    schemes: tuple[str, ...] = SCHEMES
    num_users: tuple[int, ...] = (5, 10, 15, 20, 25, 30)
    tx_power_dbm: tuple[float, ...] = (30.0,)
    demand_bits: tuple[float, ...] = (1e9,)
    modes: tuple[str, ...] = (LOS,)
    r_th_m: tuple[float, ...] = (6.0,)
    theta_th_deg: tuple[float, ...] = (10.0,)
    runs_per_point: int = 100
    master_seed: int = 0
    slot_duration_s: float = 18e-6
    area_side_m: float = 20.0
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    antenna: AntennaConfig = field(default_factory=AntennaConfig)

    def validate(self) -> "ExperimentConfig":
        if not self.schemes:
            raise ConfigError("experiment.schemes", "at least one scheme is required")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ConfigError("experiment.schemes", f"unknown scheme {s!r}")
        for name in ("num_users", "tx_power_dbm", "demand_bits", "modes", "r_th_m", "theta_th_deg"):
            if not getattr(self, name):
                raise ConfigError(f"experiment.{name}", "sweep must be nonempty")
        if any(n < 1 for n in self.num_users):
            raise ConfigError("experiment.num_users", "user counts must be >= 1")
        if any(d <= 0 for d in self.demand_bits):
            raise ConfigError("experiment.demand_bits", "demand must be positive")
        if any(m not in (LOS, NLOS) for m in self.modes):
            raise ConfigError("experiment.modes", "modes must be LOS or NLOS")
        if any(v < 0 for v in self.r_th_m):
            raise ConfigError("experiment.r_th_m", "thresholds must be nonnegative")
        if any(v < 0 for v in self.theta_th_deg):
            raise ConfigError("experiment.theta_th_deg", "thresholds must be nonnegative")
        if self.runs_per_point < 1:
            raise ConfigError("experiment.runs_per_point", "must be >= 1")
        if self.master_seed < 0:
            raise ConfigError("experiment.master_seed", "must be nonnegative")
        if not self.slot_duration_s > 0:
            raise ConfigError("experiment.slot_duration_s", "must be positive")
        if not self.area_side_m > 0:
            raise ConfigError("experiment.area_side_m", "must be positive")
        try:
            self.antenna.codebook()
        except InvalidArgument as exc:
            raise ConfigError("antenna.beamwidths_deg", str(exc)) from exc
        for mode in self.modes:
            try:
                self.channel.model(mode)
            except InvalidArgument as exc:
                raise ConfigError("channel", str(exc)) from exc
        return self


_SECTIONS = ("experiment", "channel", "antenna")


def _section_type(section: str):
    return {"experiment": ExperimentConfig, "channel": ChannelConfig, "antenna": AntennaConfig}[section]


def _parse_value(raw: str, typ, name: str):
    text = raw.strip()
    try:
        origin = getattr(typ, "__origin__", None)
        if origin is tuple:
            inner = typ.__args__[0]
            parts = [p.strip() for p in text.split(",") if p.strip()]
            return tuple(_scalar(p, inner) for p in parts)
        return _scalar(text, typ)
    except (ValueError, TypeError) as exc:
        raise ConfigError(name, f"cannot parse {raw!r}") from exc


def _scalar(text: str, typ):
    if typ is int:
        return int(float(text)) if "e" in text.lower() else int(text)
    if typ is float:
        return float(text)
    if typ is str:
        return text.upper() if text.upper() in (LOS, NLOS) else text
    raise TypeError(typ)


def _field_types(cls) -> dict:
    return {f.name: f.type for f in fields(cls)}


def apply_overrides(cfg: ExperimentConfig, items: dict[str, str]) -> ExperimentConfig:
    """Apply ``{"section.key": "value"}`` overrides; unknown keys raise ConfigError."""
    exp_changes: dict = {}
    sub_changes: dict[str, dict] = {"channel": {}, "antenna": {}}
    for dotted, raw in items.items():
        section, _, key = dotted.partition(".")
        if section not in _SECTIONS or not key:
            raise ConfigError(dotted, "expected section.key with section experiment, channel or antenna")
        types = _field_types(_section_type(section))
        if key not in types or key in ("channel", "antenna"):
            raise ConfigError(dotted, "unknown configuration field")
        value = _parse_value(raw, types[key], dotted)
        (exp_changes if section == "experiment" else sub_changes[section])[key] = value
    if sub_changes["channel"]:
        exp_changes["channel"] = dataclasses.replace(cfg.channel, **sub_changes["channel"])
    if sub_changes["antenna"]:
        exp_changes["antenna"] = dataclasses.replace(cfg.antenna, **sub_changes["antenna"])
    return dataclasses.replace(cfg, **exp_changes)


def load_config(path=None, overrides=None) -> ExperimentConfig:
    cfg = ExperimentConfig()
    items: dict[str, str] = {}
    if path is not None:
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except configparser.Error as exc:
            raise ConfigError(path, f"malformed config: {exc}") from exc
        except OSError as exc:
            raise ConfigError(path, f"cannot read config: {exc.strerror}") from exc
        for section in parser.sections():
            if section not in _SECTIONS:
                raise ConfigError(section, "unknown section")
            for key, value in parser.items(section):
                items[f"{section}.{key}"] = value
    items.update(overrides or {})
    return apply_overrides(cfg, items).validate()


def dump_config(cfg: ExperimentConfig) -> str:
    def fmt(v):
        if isinstance(v, tuple):
            return ", ".join(fmt(x) for x in v)
        return repr(v) if isinstance(v, float) else str(v)

    out = []
    for section, cls in (("experiment", ExperimentConfig), ("channel", ChannelConfig), ("antenna", AntennaConfig)):
        obj = cfg if section == "experiment" else getattr(cfg, section)
        out.append(f"[{section}]")
        for f in fields(cls):
            if f.name in ("channel", "antenna"):
                continue
            out.append(f"{f.name} = {fmt(getattr(obj, f.name))}")
        out.append("")
    return "\n".join(out)
