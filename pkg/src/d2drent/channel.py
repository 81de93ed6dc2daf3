"""Cell geometry and per-slot channel gains (path loss x Rayleigh fading)."""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

from .config import SimConfig


class NodeKind(Enum):
    BS = "bs"
    CUE = "cue"
    DUE_TX = "due_tx"
    DUE_RX = "due_rx"


class NodeId(NamedTuple):
    kind: NodeKind
    index: int


@dataclass(frozen=True)
class Topology:
    """Static node positions for one episode; D2D pairs are appended as they arrive."""
    bs_position: np.ndarray        # (2,)
    cue_positions: np.ndarray      # (M, 2)
    d2d_tx: np.ndarray             # (N, 2)
    d2d_rx: np.ndarray             # (N, 2)

    @property
    def num_cue(self) -> int:
        return len(self.cue_positions)

    @property
    def active_due_count(self) -> int:
        return len(self.d2d_tx)


def _uniform_disc(rng: np.random.Generator, radius: float, center: np.ndarray,
                  n: int = 1) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return center + np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1)


def place_topology(config: SimConfig, rng: np.random.Generator) -> Topology:
    """BS at the origin, C-UEs i.i.d. uniform on the cell disc, no D2D pairs yet."""
    bs = np.zeros(2)
    cues = _uniform_disc(rng, config.radio.cell_radius_m, bs,
                         config.experiment.num_cue_m)
    empty = np.empty((0, 2))
    return Topology(bs_position=bs, cue_positions=cues, d2d_tx=empty, d2d_rx=empty)


def add_d2d_pairs(topology: Topology, count: int, config: SimConfig,
                  rng: np.random.Generator) -> Topology:
    """Append new D2D pairs: tx uniform on the cell, rx uniform within
    d2d_max_sep_m of its tx, redrawn until it lands inside the cell."""
    if count == 0:
        return topology
    radius = config.radio.cell_radius_m
    txs = _uniform_disc(rng, radius, topology.bs_position, count)
    rxs = np.empty((count, 2))
    for i in range(count):
        while True:
            rx = _uniform_disc(rng, config.radio.d2d_max_sep_m, txs[i])[0]
            if np.hypot(*(rx - topology.bs_position)) <= radius:
                rxs[i] = rx
                break
    return replace(
        topology,
        d2d_tx=np.concatenate([topology.d2d_tx, txs]),
        d2d_rx=np.concatenate([topology.d2d_rx, rxs]),
    )


def path_loss_linear(distance_m, config: SimConfig):
    """Linear power gain 10^(-(I + C*log10(d_km))/10); distances below 1 m clamp to 1 m."""
    d = np.asarray(distance_m, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    d = np.maximum(d, 1.0)
    radio = config.radio
    loss_db = radio.pathloss_intercept_db \
        + radio.pathloss_exponent_coeff * np.log10(d / 1000.0)
    out = 10.0 ** (-loss_db / 10.0)
    return float(out) if np.isscalar(distance_m) else out


def draw_fading(rng: np.random.Generator, size=None):
    """Rayleigh power fading: Exp(1) samples (mean 1)."""
    return rng.standard_exponential(size)


@dataclass(frozen=True)
class GainTable:
    """Per-slot linear channel gains for every link the model evaluates.

    due_rx[k, j] is DUE_TX k -> DUE_RX j; its diagonal is the own D2D link.
    """
    cue_bs: np.ndarray    # (M,)   CUE i -> BS
    cue_rx: np.ndarray    # (M, N) CUE i -> DUE_RX j
    due_bs: np.ndarray    # (N,)   DUE_TX j -> BS
    due_rx: np.ndarray    # (N, N) DUE_TX k -> DUE_RX j

    @property
    def due_own(self) -> np.ndarray:
        return np.diagonal(self.due_rx)

    def gain(self, a: NodeId, b: NodeId) -> float:
        if a.kind is NodeKind.CUE and b.kind is NodeKind.BS:
            return float(self.cue_bs[a.index])
        if a.kind is NodeKind.CUE and b.kind is NodeKind.DUE_RX:
            return float(self.cue_rx[a.index, b.index])
        if a.kind is NodeKind.DUE_TX and b.kind is NodeKind.BS:
            return float(self.due_bs[a.index])
        if a.kind is NodeKind.DUE_TX and b.kind is NodeKind.DUE_RX:
            return float(self.due_rx[a.index, b.index])
        raise KeyError(f"no such link: {a} -> {b}")


@dataclass(frozen=True)
class PathlossTable:
    """Path-loss part of the gains; fixed while positions are fixed."""
    cue_bs: np.ndarray    # (M,)
    cue_rx: np.ndarray    # (M, N)
    due_bs: np.ndarray    # (N,)
    due_rx: np.ndarray    # (N, N)


def compute_pathloss(topology: Topology, config: SimConfig) -> PathlossTable:
    bs = topology.bs_position
    d_cb = np.hypot(*(topology.cue_positions - bs).T)
    d_db = np.hypot(*(topology.d2d_tx - bs).T)
    # (M, N): CUE i to DUE_RX j, and (N, N): DUE_TX k to DUE_RX j
    d_cr = np.linalg.norm(topology.cue_positions[:, None, :]
                          - topology.d2d_rx[None, :, :], axis=2)
    d_xr = np.linalg.norm(topology.d2d_tx[:, None, :]
                          - topology.d2d_rx[None, :, :], axis=2)
    return PathlossTable(
        cue_bs=path_loss_linear(d_cb, config),
        cue_rx=path_loss_linear(d_cr, config),
        due_bs=path_loss_linear(d_db, config),
        due_rx=path_loss_linear(d_xr, config),
    )


def extend_pathloss(table: PathlossTable, topology: Topology,
                    config: SimConfig) -> PathlossTable:
    """Grow a cached table to cover D2D pairs appended since it was built."""
    old_n = len(table.due_bs)
    n = topology.active_due_count
    if n == old_n:
        return table
    bs = topology.bs_position
    new_tx = topology.d2d_tx[old_n:]
    new_rx = topology.d2d_rx[old_n:]

    due_bs = np.concatenate([
        table.due_bs, path_loss_linear(np.hypot(*(new_tx - bs).T), config)])
    d_cr = np.linalg.norm(topology.cue_positions[:, None, :]
                          - new_rx[None, :, :], axis=2)
    cue_rx = np.concatenate([table.cue_rx, path_loss_linear(d_cr, config)], axis=1)

    due_rx = np.empty((n, n))
    due_rx[:old_n, :old_n] = table.due_rx
    d_new_rows = np.linalg.norm(new_tx[:, None, :]
                                - topology.d2d_rx[None, :, :], axis=2)
    due_rx[old_n:, :] = path_loss_linear(d_new_rows, config)
    if old_n:
        d_new_cols = np.linalg.norm(topology.d2d_tx[:old_n, None, :]
                                    - new_rx[None, :, :], axis=2)
        due_rx[:old_n, old_n:] = path_loss_linear(d_new_cols, config)
    return PathlossTable(cue_bs=table.cue_bs, cue_rx=cue_rx,
                         due_bs=due_bs, due_rx=due_rx)


def sample_gains(topology: Topology, config: SimConfig, rng: np.random.Generator,
                 pathloss: PathlossTable | None = None) -> GainTable:
    """Draw one slot's gains: path loss times i.i.d. Exp(1) fading per link."""
    m = topology.num_cue
    n = topology.active_due_count
    if pathloss is None:
        pathloss = compute_pathloss(topology, config)

    fade = draw_fading(rng, m + n + m * n + n * n)
    f_cb = fade[:m]
    f_db = fade[m:m + n]
    f_cr = fade[m + n:m + n + m * n].reshape(m, n)
    f_xr = fade[m + n + m * n:].reshape(n, n)

    return GainTable(
        cue_bs=pathloss.cue_bs * f_cb,
        cue_rx=pathloss.cue_rx * f_cr,
        due_bs=pathloss.due_bs * f_db,
        due_rx=pathloss.due_rx * f_xr,
    )
