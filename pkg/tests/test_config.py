import pytest

from d2drent import config
from d2drent.config import ConfigError, Mode


def test_defaults_match_documented_values():
    cfg = config.default_config()
    assert cfg.bandit.discounted_reward_r == 0.1
    assert cfg.bandit.intensity_beta == 0.2
    assert cfg.bandit.initial_belief_rho0 == 0.5
    assert cfg.bandit.time_step_eps == 0.3
    assert cfg.bandit.initial_mode is Mode.NOMA
    assert cfg.econ.phi_noma == 1.5
    assert cfg.econ.phi_oma == 1.0
    assert cfg.experiment.num_slots == 100
    assert cfg.experiment.num_reps == 1000


def test_empty_document_gives_defaults():
    assert config.load_config("") == config.default_config()


def test_phi_ordering_invariant():
    with pytest.raises(ConfigError, match="phi_oma < phi_noma"):
        config.load_config("phi_noma = 0.9\nphi_oma = 1.0\n")


def test_field_roundtrip():
    cfg = config.load_config("initial_belief_rho0 = 0.5\nintensity_beta = 0.2\n")
    assert cfg.bandit.initial_belief_rho0 == 0.5
    assert cfg.bandit.intensity_beta == 0.2


def test_serialize_roundtrip_default():
    cfg = config.default_config()
    assert config.load_config(config.serialize_config(cfg)) == cfg


def test_serialize_roundtrip_modified():
    cfg = config.config_from_mapping({
        "intensity_beta": 0.37, "phi_noma": 2.25, "num_slots": 17,
        "initial_mode": 0, "literal_c2_sum": True, "seed": 99,
    })
    assert config.load_config(config.serialize_config(cfg)) == cfg
    assert cfg.bandit.initial_mode is Mode.OMA
    assert cfg.radio.literal_c2_sum is True


@pytest.mark.parametrize("key,value", [
    ("intensity_beta", 0.0),
    ("initial_belief_rho0", 1.5),
    ("time_step_eps", -0.1),
    ("discounted_reward_r", -1.0),
    ("beta_noma_coupling", 1.0),
    ("noma_group_cap", 1),
    ("num_reps", 0),
    ("due_arrival_rate", -0.5),
    ("noise_power", 0.0),
])
def test_invariant_violations_name_the_field(key, value):
    with pytest.raises(ConfigError, match=key):
        config.config_from_mapping({key: value})


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown config key"):
        config.load_config("no_such_field = 1\n")


def test_dotted_keys():
    cfg = config.config_from_mapping({"bandit.intensity_beta": 0.3})
    assert cfg.bandit.intensity_beta == 0.3
    with pytest.raises(ConfigError, match="unknown config key"):
        config.config_from_mapping({"econ.intensity_beta": 0.3})


def test_initial_mode_spellings():
    assert config.config_from_mapping(
        {"initial_mode": "oma"}).bandit.initial_mode is Mode.OMA
    assert config.config_from_mapping(
        {"initial_mode": 1}).bandit.initial_mode is Mode.NOMA
    with pytest.raises(ConfigError, match="initial_mode"):
        config.config_from_mapping({"initial_mode": "duplex"})


def test_parse_failure():
    with pytest.raises(ConfigError, match="parse failure"):
        config.load_config("phi_noma = = 2\n")


def test_type_errors_name_the_field():
    with pytest.raises(ConfigError, match="num_slots"):
        config.config_from_mapping({"num_slots": 2.5})
    with pytest.raises(ConfigError, match="phi_noma"):
        config.config_from_mapping({"phi_noma": "high"})
