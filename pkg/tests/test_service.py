import pytest
from fastapi.testclient import TestClient

from d2drent.service import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_threshold_defaults(client):
    response = client.post("/threshold", json={})
    assert response.status_code == 200
    body = response.json()
    assert body["omega"] == pytest.approx(0.5)
    assert body["rho_star"] == pytest.approx(0.4, abs=1e-12)
    assert body["switch_slot"] == 7


def test_threshold_never_switches(client):
    response = client.post(
        "/threshold", json={"config": {"initial_belief_rho0": 1.0}})
    assert response.status_code == 200
    assert response.json()["switch_slot"] is None


def test_threshold_invalid_config(client):
    response = client.post(
        "/threshold", json={"config": {"intensity_beta": 0.0}})
    assert response.status_code == 422
    assert "intensity_beta" in response.json()["detail"]


def test_unknown_config_key_rejected(client):
    response = client.post(
        "/threshold", json={"config": {"warp_factor": 9}})
    assert response.status_code == 422


def test_run_deterministic(client):
    payload = {"config": {"num_slots": 10}, "policy": "random", "seed": 5}
    a = client.post("/run", json=payload)
    b = client.post("/run", json=payload)
    assert a.status_code == 200
    assert a.json() == b.json()
    rows = a.json()["rows"]
    assert len(rows) == 10
    assert rows[0]["policy"] == "random"
    assert all(0.0 <= r["eta"] <= 1.0 for r in rows)


def test_run_unknown_policy(client):
    response = client.post("/run", json={"policy": "psychic"})
    assert response.status_code == 422
    assert "psychic" in response.json()["detail"]


def test_run_seed_override(client):
    a = client.post("/run", json={"config": {"num_slots": 5}, "seed": 1})
    b = client.post("/run", json={"config": {"num_slots": 5}, "seed": 2})
    assert a.json()["seed"] == 1
    assert b.json()["seed"] == 2
    assert a.json() != b.json()


def test_compare_minimal_shape(client):
    payload = {"config": {"num_slots": 1, "num_reps": 1}}
    response = client.post("/compare", json=payload)
    assert response.status_code == 200
    body = response.json()
    assert len(body["rows"]) == 4
    assert body["reps"] == 1
    assert set(body["final_eta"]) \
        == {"proposed", "all-noma", "all-oma", "random"}
    etas = list(body["final_eta"].values())
    assert etas == sorted(etas, reverse=True)


def test_compare_jobs_equivalent(client):
    payload = {"config": {"num_slots": 8, "num_reps": 4}}
    serial = client.post("/compare", json=payload | {"jobs": 1})
    parallel = client.post("/compare", json=payload | {"jobs": 2})
    assert serial.json() == parallel.json()
