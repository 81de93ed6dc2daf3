"""Per-C-UE mode selection: threshold-bandit rule and baseline policies.

Each C-UE runs a two-armed bandit with one safe arm (OMA) and one risky arm
(NOMA).  The belief rho decays multiplicatively in odds while NOMA is played
and freezes once the C-UE retires to OMA, which makes OMA absorbing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import BanditParams, EconomicParams, Mode


class PolicyKind(Enum):
    PROPOSED = "proposed"
    ALL_NOMA = "all-noma"
    ALL_OMA = "all-oma"
    RANDOM = "random"


@dataclass(frozen=True)
class BanditState:
    rho: float
    mode: Mode
    slot: int = 0


@dataclass(frozen=True)
class Threshold:
    rho_star: float
    omega: float


def compute_threshold(bandit: BanditParams, econ: EconomicParams) -> Threshold:
    """Retirement threshold rho* from the rental rates and omega = r/beta."""
    if bandit.intensity_beta <= 0:
        raise ValueError("intensity_beta must be > 0")
    omega = bandit.discounted_reward_r / bandit.intensity_beta
    premium = econ.phi_noma - econ.phi_oma
    rho_star = (omega * econ.phi_oma
                / ((omega + 1.0) * premium + omega * econ.phi_oma))
    return Threshold(rho_star=rho_star, omega=omega)


def update_belief(rho: float, prev_action: Mode, bandit: BanditParams) -> float:
    """One belief step: odds(rho') = odds(rho) * exp(-A * beta * eps)."""
    decay = math.exp(-int(prev_action) * bandit.intensity_beta * bandit.time_step_eps)
    return rho * decay / (1.0 - rho + rho * decay)


def select_mode(rho: float, threshold: Threshold) -> Mode:
    """NOMA while the belief is at or above rho* (tie goes to the risky arm)."""
    return Mode.NOMA if rho >= threshold.rho_star else Mode.OMA


def step_bandit(state: BanditState, bandit: BanditParams,
                threshold: Threshold) -> BanditState:
    """Update the belief with the previous slot's action, then pick the new mode."""
    rho = update_belief(state.rho, state.mode, bandit)
    return BanditState(rho=rho, mode=select_mode(rho, threshold),
                       slot=state.slot + 1)


def switch_slot(bandit: BanditParams, econ: EconomicParams) -> int | None:
    """First slot at which the bandit plays OMA, in closed form.

    0 when rho0 starts below rho*; None when the policy never retires
    (rho0 = 1, or zero NOMA premium with rho0 = rho* = 1).
    """
    threshold = compute_threshold(bandit, econ)
    rho0 = bandit.initial_belief_rho0
    if rho0 < threshold.rho_star:
        return 0
    if rho0 >= 1.0:
        return None
    if rho0 == threshold.rho_star:
        return 1
    odds0 = rho0 / (1.0 - rho0)
    odds_star = threshold.rho_star / (1.0 - threshold.rho_star)
    rate = bandit.intensity_beta * bandit.time_step_eps
    return math.ceil(math.log(odds0 / odds_star) / rate)


def baseline_mode(policy_kind: PolicyKind, rng: np.random.Generator) -> Mode:
    """Mode for one C-UE in one slot under a non-bandit policy."""
    if policy_kind is PolicyKind.ALL_NOMA:
        return Mode.NOMA
    if policy_kind is PolicyKind.ALL_OMA:
        return Mode.OMA
    if policy_kind is PolicyKind.RANDOM:
        return Mode(int(rng.integers(0, 2)))
    raise ValueError(f"{policy_kind} is not a baseline policy")
