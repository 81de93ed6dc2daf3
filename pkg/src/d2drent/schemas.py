"""Pydantic request/response models for the HTTP service."""
from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field


class ConfigPayload(BaseModel):
    """Flat partial config: same keys as the TOML config file, all optional."""
    model_config = ConfigDict(extra="forbid")

    # bandit
    discounted_reward_r: Optional[float] = None
    intensity_beta: Optional[float] = None
    initial_belief_rho0: Optional[float] = None
    time_step_eps: Optional[float] = None
    initial_mode: Optional[int | str] = None
    # economics
    phi_oma: Optional[float] = None
    phi_noma: Optional[float] = None
    slot_duration: Optional[float] = None
    # radio
    p_cue: Optional[float] = None
    p_due: Optional[float] = None
    noise_power: Optional[float] = None
    sinr_min_c: Optional[float] = None
    sinr_min_d: Optional[float] = None
    beta_noma_coupling: Optional[float] = None
    noma_group_cap: Optional[int] = None
    pathloss_intercept_db: Optional[float] = None
    pathloss_exponent_coeff: Optional[float] = None
    cell_radius_m: Optional[float] = None
    d2d_max_sep_m: Optional[float] = None
    literal_c2_sum: Optional[bool] = None
    # experiment
    num_cue_m: Optional[int] = None
    due_arrival_rate: Optional[float] = None
    due_departure_prob: Optional[float] = None
    num_slots: Optional[int] = None
    num_reps: Optional[int] = None
    seed: Optional[int] = None

    def to_mapping(self) -> dict[str, Any]:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class ThresholdRequest(BaseModel):
    config: ConfigPayload = Field(default_factory=ConfigPayload)


class ThresholdResponse(BaseModel):
    omega: float
    rho_star: float
    switch_slot: Optional[int]  # None when the policy never retires to OMA


class RunRequest(BaseModel):
    config: ConfigPayload = Field(default_factory=ConfigPayload)
    policy: str = "proposed"
    seed: Optional[int] = None


class SlotRow(BaseModel):
    slot: int
    policy: str
    active_due: int
    admitted: int
    revenue: float
    r_max: float
    eta: float
    cum_eta: float


class RunResponse(BaseModel):
    policy: str
    seed: int
    rows: list[SlotRow]


class CompareRequest(BaseModel):
    config: ConfigPayload = Field(default_factory=ConfigPayload)
    policies: list[str] = ["proposed", "all-noma", "all-oma", "random"]
    seed: Optional[int] = None
    jobs: int = Field(default=1, ge=1)


class CompareRow(BaseModel):
    policy: str
    slot: int
    mean_cum_eta: float
    std_cum_eta: float
    reps: int


class CompareResponse(BaseModel):
    seed: int
    reps: int
    rows: list[CompareRow]
    # final-slot mean cumulative eta per policy, sorted descending
    final_eta: dict[str, float]
