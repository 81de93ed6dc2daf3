"""Slotted episode simulation and Monte Carlo aggregation.

Per repetition, every policy replays the same arrival, placement, and fading
realizations (common random numbers): environment draws come from a stream
keyed by (seed, rep) only, while policy coin flips use a separate stream.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from . import admission, channel, policy as pol
from .config import Mode, SimConfig
from .policy import BanditState, PolicyKind


class SimulationError(RuntimeError):
    """A per-slot invariant (SINR feasibility, revenue bound) was violated."""


@dataclass(frozen=True)
class SlotResult:
    slot: int
    revenue: float
    r_max: float
    eta: float
    admitted_count: int
    active_due: int


@dataclass(frozen=True)
class EpisodeResult:
    per_slot: tuple[SlotResult, ...]
    cumulative_revenue: np.ndarray
    cumulative_eta: np.ndarray


@dataclass(frozen=True)
class PolicyCurve:
    mean_cum_eta: np.ndarray
    std_cum_eta: np.ndarray


@dataclass(frozen=True)
class McSummary:
    policies: tuple[PolicyKind, ...]
    reps: int
    curves: dict[PolicyKind, PolicyCurve]


def spawn_arrivals(rng: np.random.Generator, rate: float) -> int:
    """Number of new D2D pairs this slot (Poisson with the configured mean)."""
    if rate < 0:
        raise ValueError("arrival rate must be >= 0")
    if rate == 0:
        return 0
    return int(rng.poisson(rate))


def slot_accounting(revenue_rate: float, active_due: int,
                    config: SimConfig) -> tuple[float, float, float]:
    """Turn one slot's admitted rental rate into (revenue, r_max, eta).

    r_max is the interference-free bound: every active D-UE admitted at the
    NOMA rate.  eta is defined as 0 when there is nothing to rent.
    """
    econ = config.econ
    revenue = revenue_rate * econ.slot_duration
    r_max = active_due * econ.phi_noma * econ.slot_duration
    eta = revenue / r_max if r_max > 0 else 0.0
    return revenue, r_max, eta


def _check_slot(asg: admission.Assignment, report: admission.SinrReport,
                revenue: float, r_max: float, eta: float,
                config: SimConfig) -> None:
    radio = config.radio
    for i, group in enumerate(asg.groups):
        if group and report.cue[i] < radio.sinr_min_c:
            raise SimulationError(f"C1 violated for hosting C-UE {i}")
    for j in asg.admitted:
        if report.due[j] < radio.sinr_min_d:
            raise SimulationError(f"C2 violated for admitted D-UE {j}")
    if not (0.0 <= eta <= 1.0) or revenue > r_max:
        raise SimulationError(f"revenue bound violated: {revenue} > {r_max}")


class Episode:
    """Mutable state of one simulated episode for one policy."""

    def __init__(self, config: SimConfig, kind: PolicyKind,
                 env_rng: np.random.Generator, policy_rng: np.random.Generator):
        self.config = config
        self.kind = kind
        self.env_rng = env_rng
        self.policy_rng = policy_rng
        self.topology = channel.place_topology(config, env_rng)
        self.pathloss = channel.compute_pathloss(self.topology, config)
        self.threshold = pol.compute_threshold(config.bandit, config.econ)
        rho0 = config.bandit.initial_belief_rho0
        self.bandit_states = [
            BanditState(rho=rho0, mode=pol.select_mode(rho0, self.threshold))
            for _ in range(config.experiment.num_cue_m)
        ]
        self.slot = 0

    def _modes(self) -> list[Mode]:
        m = self.config.experiment.num_cue_m
        if self.kind is PolicyKind.PROPOSED:
            if self.slot > 0:
                self.bandit_states = [
                    pol.step_bandit(s, self.config.bandit, self.threshold)
                    for s in self.bandit_states
                ]
            return [s.mode for s in self.bandit_states]
        return [pol.baseline_mode(self.kind, self.policy_rng) for _ in range(m)]

    def run_slot(self) -> SlotResult:
        config = self.config
        exp = config.experiment
        if exp.due_departure_prob > 0 and self.topology.active_due_count:
            keep = self.env_rng.random(self.topology.active_due_count) \
                >= exp.due_departure_prob
            self.topology = channel.Topology(
                bs_position=self.topology.bs_position,
                cue_positions=self.topology.cue_positions,
                d2d_tx=self.topology.d2d_tx[keep],
                d2d_rx=self.topology.d2d_rx[keep],
            )
            self.pathloss = channel.compute_pathloss(self.topology, config)
        arrivals = spawn_arrivals(self.env_rng, exp.due_arrival_rate)
        self.topology = channel.add_d2d_pairs(self.topology, arrivals,
                                              config, self.env_rng)
        self.pathloss = channel.extend_pathloss(self.pathloss, self.topology,
                                                config)
        gains = channel.sample_gains(self.topology, config, self.env_rng,
                                     pathloss=self.pathloss)
        modes = self._modes()
        asg, report = admission.greedy_admit(modes, gains, self.topology, config)
        revenue_rate = admission.assignment_revenue(asg, config)
        active = self.topology.active_due_count
        revenue, r_max, eta = slot_accounting(revenue_rate, active, config)
        _check_slot(asg, report, revenue, r_max, eta, config)
        result = SlotResult(slot=self.slot, revenue=revenue, r_max=r_max, eta=eta,
                            admitted_count=len(asg.admitted), active_due=active)
        self.slot += 1
        return result


def _seed_entropy(seed) -> list[int]:
    return list(seed) if isinstance(seed, (tuple, list)) else [int(seed)]


def run_episode(config: SimConfig, kind: PolicyKind, seed) -> EpisodeResult:
    """Run one full episode; seed may be an int or a tuple (master, rep)."""
    entropy = _seed_entropy(seed)
    env_rng = np.random.default_rng(np.random.SeedSequence(entropy + [0]))
    policy_index = list(PolicyKind).index(kind)
    policy_rng = np.random.default_rng(
        np.random.SeedSequence(entropy + [1, policy_index]))

    episode = Episode(config, kind, env_rng, policy_rng)
    per_slot = tuple(episode.run_slot() for _ in range(config.experiment.num_slots))

    revenue = np.array([s.revenue for s in per_slot])
    r_max = np.array([s.r_max for s in per_slot])
    cum_rev = np.cumsum(revenue)
    cum_rmax = np.cumsum(r_max)
    cum_eta = np.divide(cum_rev, cum_rmax,
                        out=np.zeros_like(cum_rev), where=cum_rmax > 0)
    return EpisodeResult(per_slot=per_slot, cumulative_revenue=cum_rev,
                         cumulative_eta=cum_eta)


def _rep_curves(config: SimConfig, kinds: tuple[PolicyKind, ...],
                master_seed: int, rep: int) -> dict[PolicyKind, np.ndarray]:
    return {
        kind: run_episode(config, kind, (master_seed, rep)).cumulative_eta
        for kind in kinds
    }


def run_monte_carlo(config: SimConfig, policies, jobs: int = 1) -> McSummary:
    """Aggregate mean/std of cumulative eta per slot across repetitions.

    Repetitions may run in parallel; results are always reduced in repetition
    order, so the summary is bit-identical for any job count.
    """
    policies = tuple(policies)
    unique = tuple(dict.fromkeys(policies))
    exp = config.experiment
    worker = partial(_rep_curves, config, unique, exp.seed)
    if jobs > 1 and exp.num_reps > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunk = max(1, exp.num_reps // (jobs * 4))
            results = list(pool.map(worker, range(exp.num_reps), chunksize=chunk))
    else:
        results = [worker(rep) for rep in range(exp.num_reps)]

    curves = {}
    for kind in unique:
        stacked = np.stack([r[kind] for r in results])  # (reps, slots)
        curves[kind] = PolicyCurve(mean_cum_eta=stacked.mean(axis=0),
                                   std_cum_eta=stacked.std(axis=0))
    return McSummary(policies=policies, reps=exp.num_reps, curves=curves)
