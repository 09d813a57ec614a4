import pytest

from mmcast.config import ConfigError, ExperimentConfig, apply_overrides, dump_config, load_config


def test_defaults():
    cfg = load_config()
    assert cfg.num_users == (5, 10, 15, 20, 25, 30)
    assert cfg.tx_power_dbm == (30.0,) and cfg.demand_bits == (1e9,)
    assert cfg.slot_duration_s == 18e-6 and cfg.runs_per_point == 100
    assert cfg.channel.bandwidth_mhz == 2160.0 and cfg.channel.noise_psd_dbm_per_mhz == -134.0
    assert cfg.channel.efficiency == 0.5 and cfg.channel.los_path_loss_exponent == 2.0
    assert cfg.antenna.beamwidths_deg == (15.0, 30.0, 45.0, 60.0)


def test_overrides_parse_types():
    cfg = apply_overrides(ExperimentConfig(), {"experiment.num_users": "9", "experiment.modes": "nlos, los",
                                               "channel.efficiency": "0.4", "antenna.beamwidths_deg": "10,20"})
    assert cfg.num_users == (9,) and cfg.modes == ("NLOS", "LOS")
    assert cfg.channel.efficiency == 0.4 and cfg.antenna.beamwidths_deg == (10.0, 20.0)


@pytest.mark.parametrize("key, value, field", [
    ("experiment.bogus", "1", "experiment.bogus"),
    ("nosection", "1", "nosection"),
    ("experiment.runs_per_point", "ten", "experiment.runs_per_point"),
    ("experiment.runs_per_point", "0", "experiment.runs_per_point"),
    ("experiment.schemes", "", "experiment.schemes"),
    ("experiment.schemes", "MD2D,XYZ", "experiment.schemes"),
    ("experiment.modes", "LOS,FOG", "experiment.modes"),
    ("antenna.beamwidths_deg", "200", "antenna.beamwidths_deg"),
    ("channel.efficiency", "1.5", "channel"),
])
def test_errors_name_the_field(key, value, field):
    with pytest.raises(ConfigError) as info:
        load_config(overrides={key: value})
    assert info.value.field == field
    assert field in str(info.value)


def test_file_roundtrip(tmp_path):
    cfg = load_config(overrides={"experiment.num_users": "4,8", "channel.k0_offset_db": "-60"})
    path = tmp_path / "exp.ini"
    path.write_text(dump_config(cfg))
    assert load_config(str(path)) == cfg


def test_file_errors(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[plotting]\ncolor = red\n")
    with pytest.raises(ConfigError, match="plotting"):
        load_config(str(bad))
    bad.write_text("no section header\n")
    with pytest.raises(ConfigError, match="malformed"):
        load_config(str(bad))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.ini"))
