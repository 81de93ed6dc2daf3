"""HTTP service exposing threshold reporting, single runs, and comparisons."""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import engine, policy
from .config import ConfigError, SimConfig, config_from_mapping
from .schemas import (
    CompareRequest,
    CompareResponse,
    CompareRow,
    ConfigPayload,
    RunRequest,
    RunResponse,
    SlotRow,
    ThresholdRequest,
    ThresholdResponse,
)

app = FastAPI(title="d2drent", description="Slotted simulator of C-UEs renting "
              "spectrum to D2D pairs in OMA or NOMA mode.")


def _build_config(payload: ConfigPayload, seed: int | None = None) -> SimConfig:
    mapping = payload.to_mapping()
    if seed is not None:
        mapping["seed"] = seed
    try:
        return config_from_mapping(mapping)
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def _parse_policy(name: str) -> policy.PolicyKind:
    try:
        return policy.PolicyKind(name)
    except ValueError:
        raise HTTPException(status_code=422,
                            detail=f"unknown policy: {name}") from None


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/threshold", response_model=ThresholdResponse)
def threshold(request: ThresholdRequest) -> ThresholdResponse:
    config = _build_config(request.config)
    thr = policy.compute_threshold(config.bandit, config.econ)
    return ThresholdResponse(
        omega=thr.omega,
        rho_star=thr.rho_star,
        switch_slot=policy.switch_slot(config.bandit, config.econ),
    )


@app.post("/run", response_model=RunResponse)
def run(request: RunRequest) -> RunResponse:
    config = _build_config(request.config, request.seed)
    kind = _parse_policy(request.policy)
    result = engine.run_episode(config, kind, config.experiment.seed)
    rows = [
        SlotRow(slot=s.slot, policy=kind.value, active_due=s.active_due,
                admitted=s.admitted_count, revenue=s.revenue, r_max=s.r_max,
                eta=s.eta, cum_eta=float(result.cumulative_eta[s.slot]))
        for s in result.per_slot
    ]
    return RunResponse(policy=kind.value, seed=config.experiment.seed, rows=rows)


@app.post("/compare", response_model=CompareResponse)
def compare(request: CompareRequest) -> CompareResponse:
    config = _build_config(request.config, request.seed)
    kinds = [_parse_policy(name) for name in request.policies]
    summary = engine.run_monte_carlo(config, kinds, jobs=request.jobs)
    rows = []
    for kind in summary.policies:
        curve = summary.curves[kind]
        for slot in range(len(curve.mean_cum_eta)):
            rows.append(CompareRow(
                policy=kind.value, slot=slot,
                mean_cum_eta=float(curve.mean_cum_eta[slot]),
                std_cum_eta=float(curve.std_cum_eta[slot]),
                reps=summary.reps,
            ))
    final = {
        kind.value: float(summary.curves[kind].mean_cum_eta[-1])
        for kind in dict.fromkeys(summary.policies)
        if len(summary.curves[kind].mean_cum_eta)
    }
    final = dict(sorted(final.items(), key=lambda kv: -kv[1]))
    return CompareResponse(seed=config.experiment.seed, reps=summary.reps,
                           rows=rows, final_eta=final)
