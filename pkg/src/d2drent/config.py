"""Simulation parameters: defaults, validation, and flat TOML config documents."""
from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, field, fields
from enum import IntEnum


class ConfigError(ValueError):
    """A config document is malformed or a parameter violates its bound."""


class Mode(IntEnum):
    """Resource-rental mode of a cellular user."""
    OMA = 0
    NOMA = 1


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


@dataclass(frozen=True)
class BanditParams:
    """Two-armed bandit policy parameters."""
    discounted_reward_r: float = 0.1
    intensity_beta: float = 0.2
    initial_belief_rho0: float = 0.5
    time_step_eps: float = 0.3
    initial_mode: Mode = Mode.NOMA

    def __post_init__(self):
        _require(self.discounted_reward_r >= 0, "discounted_reward_r must be >= 0")
        _require(self.intensity_beta > 0, "intensity_beta must be > 0")
        _require(0.0 <= self.initial_belief_rho0 <= 1.0,
                 "initial_belief_rho0 must be in [0, 1]")
        _require(self.time_step_eps > 0, "time_step_eps must be > 0")


@dataclass(frozen=True)
class EconomicParams:
    """Rental rates per D2D tenant per time unit."""
    phi_oma: float = 1.0
    phi_noma: float = 1.5
    slot_duration: float = 1.0

    def __post_init__(self):
        _require(self.phi_oma > 0, "phi_oma must be > 0")
        _require(self.phi_oma < self.phi_noma, "phi_oma < phi_noma violated")
        _require(self.slot_duration > 0, "slot_duration must be > 0")


@dataclass(frozen=True)
class RadioParams:
    """Physical-layer parameters (powers in linear mW, thresholds linear)."""
    p_cue: float = 200.0
    p_due: float = 10.0
    noise_power: float = 3.98e-12     # -114 dBm
    sinr_min_c: float = 2.0           # ~3 dB
    sinr_min_d: float = 2.0
    beta_noma_coupling: float = 0.5   # residual intra-group interference factor
    noma_group_cap: int = 2
    pathloss_intercept_db: float = 128.1
    pathloss_exponent_coeff: float = 37.6   # dB per decade of km
    cell_radius_m: float = 500.0
    d2d_max_sep_m: float = 20.0
    literal_c2_sum: bool = False      # sum cross-interference over all C-UEs, not just the host

    def __post_init__(self):
        _require(self.p_cue > 0, "p_cue must be > 0")
        _require(self.p_due > 0, "p_due must be > 0")
        _require(self.noise_power > 0, "noise_power must be > 0")
        _require(self.sinr_min_c > 0, "sinr_min_c must be > 0")
        _require(self.sinr_min_d > 0, "sinr_min_d must be > 0")
        _require(0.0 < self.beta_noma_coupling < 1.0,
                 "beta_noma_coupling must be in (0, 1)")
        _require(self.noma_group_cap >= 2, "noma_group_cap must be >= 2")
        _require(self.d2d_max_sep_m > 0, "d2d_max_sep_m must be > 0")
        _require(self.cell_radius_m > self.d2d_max_sep_m,
                 "cell_radius_m must exceed d2d_max_sep_m")


@dataclass(frozen=True)
class ExperimentParams:
    """Population sizes and Monte Carlo controls."""
    num_cue_m: int = 10
    due_arrival_rate: float = 0.5     # expected new D2D pairs per slot
    due_departure_prob: float = 0.0   # reserved; pairs persist by default
    num_slots: int = 100
    num_reps: int = 1000
    seed: int = 12345

    def __post_init__(self):
        _require(self.num_cue_m >= 0, "num_cue_m must be >= 0")
        _require(self.due_arrival_rate >= 0, "due_arrival_rate must be >= 0")
        _require(0.0 <= self.due_departure_prob <= 1.0,
                 "due_departure_prob must be in [0, 1]")
        _require(self.num_slots >= 0, "num_slots must be >= 0")
        _require(self.num_reps >= 1, "num_reps must be >= 1")
        _require(0 <= self.seed < 2**64, "seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SimConfig:
    bandit: BanditParams = field(default_factory=BanditParams)
    econ: EconomicParams = field(default_factory=EconomicParams)
    radio: RadioParams = field(default_factory=RadioParams)
    experiment: ExperimentParams = field(default_factory=ExperimentParams)


_SECTIONS = {
    "bandit": BanditParams,
    "econ": EconomicParams,
    "radio": RadioParams,
    "experiment": ExperimentParams,
}

# flat key -> (section name, field type)
_FIELD_MAP = {
    f.name: (section, f.type)
    for section, cls in _SECTIONS.items()
    for f in fields(cls)
}


def default_config() -> SimConfig:
    return SimConfig()


def _coerce(key: str, section: str, value):
    cls = _SECTIONS[section]
    ftype = {f.name: f.type for f in fields(cls)}[key]
    if ftype == "Mode":
        if isinstance(value, str):
            try:
                return Mode[value.upper()]
            except KeyError:
                raise ConfigError(f"{key}: unknown mode {value!r}") from None
        if value in (0, 1):
            return Mode(int(value))
        raise ConfigError(f"{key}: mode must be 0, 1, 'OMA' or 'NOMA'")
    if ftype == "bool":
        if isinstance(value, bool):
            return value
        raise ConfigError(f"{key}: expected a boolean")
    if ftype == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key}: expected an integer")
        return value
    if ftype == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key}: expected a number")
        return float(value)
    raise ConfigError(f"{key}: unsupported field type {ftype}")


def config_from_mapping(mapping: dict) -> SimConfig:
    """Build a validated SimConfig from a flat {field_name: value} mapping.

    Unspecified fields take their defaults.  Keys may optionally be prefixed
    with their section ("bandit.intensity_beta"); the bare field name is
    accepted because all field names are unique across sections.
    """
    by_section: dict[str, dict] = {name: {} for name in _SECTIONS}
    for key, value in mapping.items():
        name = key
        if "." in key:
            prefix, name = key.split(".", 1)
            if prefix not in _SECTIONS or name not in _FIELD_MAP \
                    or _FIELD_MAP[name][0] != prefix:
                raise ConfigError(f"unknown config key: {key}")
        if name not in _FIELD_MAP:
            raise ConfigError(f"unknown config key: {key}")
        section = _FIELD_MAP[name][0]
        by_section[section][name] = _coerce(name, section, value)
    return SimConfig(**{
        section: cls(**by_section[section]) for section, cls in _SECTIONS.items()
    })


def load_config(text: str) -> SimConfig:
    """Parse a flat TOML document into a validated SimConfig."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse failure: {exc}") from exc
    return config_from_mapping(raw)


def config_to_mapping(config: SimConfig) -> dict:
    """Flatten a SimConfig back into {field_name: value} (enums as ints)."""
    out = {}
    for section, cls in _SECTIONS.items():
        obj = getattr(config, section)
        for f in fields(cls):
            value = getattr(obj, f.name)
            out[f.name] = int(value) if isinstance(value, Mode) else value
    return out


def serialize_config(config: SimConfig) -> str:
    """Render a SimConfig as a flat TOML document; inverse of load_config."""
    lines = []
    for key, value in config_to_mapping(config).items():
        if isinstance(value, bool):
            rendered = "true" if value else "false"
        else:
            rendered = repr(value)
        lines.append(f"{key} = {rendered}")
    return "\n".join(lines) + "\n"
