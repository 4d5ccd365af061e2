import pytest
from fastapi.testclient import TestClient

from vrdsim.api import app
from vrdsim.experiments import records_to_json, run_experiment
from vrdsim.schemas import ExperimentConfig, ResultRecord


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok"


@pytest.mark.parametrize("experiment", ["coherence", "entangle", "teleport", "qfi"])
def test_endpoints_return_records(client, experiment):
    response = client.post(f"/experiments/{experiment}", json={"mode": "exact", "xi": [0.5], "seed": 3})
    assert response.status_code == 200
    records = response.json()["records"]
    assert records
    assert all(r["schema_version"] == 1 for r in records)
    assert all(r["experiment"] == experiment for r in records)


def test_endpoint_matches_in_process_runner(client):
    body = {"xi": [0.6, 1.0], "mode": "exact", "seed": 9}
    response = client.post("/experiments/entangle", json=body)
    remote = [ResultRecord(**r) for r in response.json()["records"]]
    local = run_experiment(ExperimentConfig(experiment="entangle", **body))
    assert records_to_json(remote) == records_to_json(local)


def test_sampled_run_deterministic_across_calls(client):
    body = {"xi": [0.4], "mode": "sampled", "shots": 2000, "seed": 17}
    first = client.post("/experiments/entangle", json=body).json()
    second = client.post("/experiments/entangle", json=body).json()
    assert first == second


def test_validation_error_translates_to_422(client):
    assert client.post("/experiments/entangle", json={"xi": [2.0]}).status_code == 422
    assert client.post("/experiments/qfi", json={"shots": -1}).status_code == 422
    assert client.post("/experiments/teleport", json={"mode": "oracle"}).status_code == 422
