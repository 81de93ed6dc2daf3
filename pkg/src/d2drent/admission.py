"""D-UE admission: SINR constraints, greedy assignment, brute-force oracle.

Resources are orthogonal across C-UEs, so a D-UE only interacts with its host
C-UE and with D-UEs sharing that host.  The uplink constraint (C1) guards each
hosting C-UE at the BS; the D2D constraint (C2) guards every admitted D-UE at
its own receiver.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import GainTable, Topology
from .config import Mode, SimConfig

UNASSIGNED = -1

# Greedy accepts only with this much headroom over the SINR thresholds so that
# an exact recheck of its output can never flip on float reordering noise.
_GREEDY_MARGIN = 1.0 + 1e-9


@dataclass(frozen=True)
class Assignment:
    """Per-slot mapping of D-UEs to C-UE resources."""
    host: np.ndarray                 # (N,) C-UE index per D-UE, -1 if unassigned
    modes: tuple[Mode, ...]          # (M,) rental mode per C-UE
    groups: tuple[tuple[int, ...], ...] = field(init=False)  # tenants per C-UE

    def __post_init__(self):
        groups = [[] for _ in self.modes]
        for j, i in enumerate(self.host):
            if i != UNASSIGNED:
                groups[i].append(j)
        object.__setattr__(self, "groups", tuple(tuple(g) for g in groups))

    @property
    def admitted(self) -> np.ndarray:
        return np.flatnonzero(self.host != UNASSIGNED)


@dataclass(frozen=True)
class SinrReport:
    cue: np.ndarray   # (M,) linear SINR at the BS
    due: np.ndarray   # (N,) linear SINR at each D2D receiver, NaN if unassigned


def cue_sinr(i: int, asg: Assignment, gains: GainTable, config: SimConfig) -> float:
    """Uplink SINR of C-UE i at the BS given its tenant group."""
    radio = config.radio
    interference = sum(radio.p_due * gains.due_bs[j] for j in asg.groups[i])
    return radio.p_cue * gains.cue_bs[i] / (interference + radio.noise_power)


def due_sinr(j: int, asg: Assignment, gains: GainTable, config: SimConfig) -> float:
    """SINR of admitted D-UE j at its own receiver."""
    i = int(asg.host[j])
    if i == UNASSIGNED:
        raise ValueError(f"D-UE {j} is unassigned")
    radio = config.radio
    if radio.literal_c2_sum:
        cross = radio.p_cue * float(np.sum(gains.cue_rx[:, j]))
    else:
        cross = radio.p_cue * gains.cue_rx[i, j]
    peer = 0.0
    if asg.modes[i] is Mode.NOMA:
        peer = sum(radio.beta_noma_coupling * radio.p_due * gains.due_rx[k, j]
                   for k in asg.groups[i] if k != j)
    signal = radio.p_due * gains.due_rx[j, j]
    return signal / (cross + peer + radio.noise_power)


def capacity(mode: Mode, config: SimConfig) -> int:
    return 1 if mode is Mode.OMA else config.radio.noma_group_cap


def is_feasible(asg: Assignment, gains: GainTable, config: SimConfig,
                check_idle_cues: bool = False) -> bool:
    """True iff C1 holds for every hosting C-UE and C2 for every admitted D-UE.

    Idle C-UEs (empty group) are skipped by default: their uplink outage is a
    fading event the admission decision cannot influence.  Pass
    check_idle_cues=True for the strict all-C-UE reading.
    """
    for i, group in enumerate(asg.groups):
        if len(group) > capacity(asg.modes[i], config):
            return False
        if not group and not check_idle_cues:
            continue
        if cue_sinr(i, asg, gains, config) < config.radio.sinr_min_c:
            return False
    for j in asg.admitted:
        if due_sinr(int(j), asg, gains, config) < config.radio.sinr_min_d:
            return False
    return True


def sinr_report(asg: Assignment, gains: GainTable, config: SimConfig) -> SinrReport:
    cue = np.array([cue_sinr(i, asg, gains, config) for i in range(len(asg.modes))])
    due = np.full(len(asg.host), np.nan)
    for j in asg.admitted:
        due[j] = due_sinr(int(j), asg, gains, config)
    return SinrReport(cue=cue, due=due)


def assignment_revenue(asg: Assignment, config: SimConfig) -> float:
    """Rental revenue rate of one slot: sum of the hosts' rates over tenants."""
    econ = config.econ
    rate = {Mode.OMA: econ.phi_oma, Mode.NOMA: econ.phi_noma}
    return sum(rate[asg.modes[i]] * len(g) for i, g in enumerate(asg.groups))


def greedy_admit(modes, gains: GainTable, topology: Topology,
                 config: SimConfig) -> tuple[Assignment, SinrReport]:
    """Deterministic greedy admission.

    D-UEs are processed by descending own-link gain; each tries C-UEs by
    ascending cross-gain at its receiver and takes the first host with spare
    capacity where the whole tentative assignment stays feasible.
    """
    radio = config.radio
    m = topology.num_cue
    n = topology.active_due_count
    modes = tuple(modes)
    host = np.full(n, UNASSIGNED, dtype=int)
    if not (n and m):
        asg = Assignment(host=host, modes=modes)
        return asg, sinr_report(asg, gains, config)

    own_gain = np.diagonal(gains.due_rx)
    own = (radio.p_due * own_gain).tolist()
    int_bs = (radio.p_due * gains.due_bs).tolist()   # interference at the BS per D-UE
    sig_c = (radio.p_cue * gains.cue_bs).tolist()
    cross = radio.p_cue * gains.cue_rx               # (M, N) C-UE power at each RX
    cross_all = cross.sum(axis=0).tolist()
    cross_cols = cross.T.tolist()                    # per D-UE: power from each C-UE
    peer_rows = (radio.beta_noma_coupling * radio.p_due * gains.due_rx).tolist()
    noise = radio.noise_power
    gamma_c = radio.sinr_min_c * _GREEDY_MARGIN
    gamma_d = radio.sinr_min_d * _GREEDY_MARGIN
    literal = radio.literal_c2_sum
    caps = [capacity(mode, config) for mode in modes]

    due_order = np.argsort(-own_gain, kind="stable").tolist()
    cand_order = np.argsort(cross, axis=0, kind="stable").T.tolist()

    groups: list[list[int]] = [[] for _ in range(m)]
    bs_interf = [0.0] * m                            # tenant power at the BS per C-UE
    due_denom = [0.0] * n                            # current C2 denominator per tenant

    for j in due_order:
        own_j = own[j]
        int_j = int_bs[j]
        cross_j = cross_cols[j]
        for i in cand_order[j]:
            group = groups[i]
            if len(group) >= caps[i]:
                continue
            if sig_c[i] < gamma_c * (bs_interf[i] + int_j + noise):
                continue
            base = cross_all[j] if literal else cross_j[i]
            denom_j = base + noise
            for k in group:
                denom_j += peer_rows[k][j]
            if own_j < gamma_d * denom_j:
                continue
            peer_j = peer_rows[j]
            if any(own[k] < gamma_d * (due_denom[k] + peer_j[k]) for k in group):
                continue
            for k in group:
                due_denom[k] += peer_j[k]
            due_denom[j] = denom_j
            bs_interf[i] += int_j
            group.append(j)
            host[j] = i
            break

    asg = Assignment(host=host, modes=modes)
    # report from the greedy running sums; matches the canonical per-link
    # formulas up to summation order
    cue = np.array([sig_c[i] / (bs_interf[i] + noise) for i in range(m)])
    due = np.full(n, np.nan)
    for j in range(n):
        if host[j] != UNASSIGNED:
            due[j] = own[j] / due_denom[j]
    return asg, SinrReport(cue=cue, due=due)


def optimal_admit_bruteforce(modes, gains: GainTable, topology: Topology,
                             config: SimConfig) -> Assignment:
    """Exhaustive revenue-maximizing assignment; test oracle for tiny instances.

    Ties prefer the lexicographically smallest host vector with UNASSIGNED
    ordered after every real host index.
    """
    import itertools

    m = topology.num_cue
    n = topology.active_due_count
    if m > 3 or n > 4:
        raise ValueError("instance too large for brute force (need M <= 3, N <= 4)")
    modes = tuple(modes)
    caps = [capacity(mode, config) for mode in modes]

    best = None
    best_rev = -1.0
    best_key = None
    for hosts in itertools.product(range(-1, m), repeat=n):
        counts = [0] * m
        ok = True
        for i in hosts:
            if i != UNASSIGNED:
                counts[i] += 1
                if counts[i] > caps[i]:
                    ok = False
                    break
        if not ok:
            continue
        asg = Assignment(host=np.array(hosts, dtype=int), modes=modes)
        if not is_feasible(asg, gains, config):
            continue
        rev = assignment_revenue(asg, config)
        key = tuple(i if i != UNASSIGNED else m for i in hosts)
        if rev > best_rev or (rev == best_rev and key < best_key):
            best, best_rev, best_key = asg, rev, key
    assert best is not None  # the empty assignment is always feasible
    return best
