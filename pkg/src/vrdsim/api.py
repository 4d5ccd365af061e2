"""FastAPI service wrapping the experiment runner.

Run with ``uvicorn vrdsim.api:app``.  Each endpoint accepts an
ExperimentRequest body and returns the records the CLI would produce for the
same parameters; identical seeds give identical records.
"""

from __future__ import annotations

from fastapi import FastAPI

from . import __version__
from .experiments import run_experiment
from .schemas import ExperimentConfig, ExperimentRequest, RecordsResponse

__all__ = ["app"]

app = FastAPI(
    title="vrdsim",
    version=__version__,
    description="Virtual distillation of coherence and entanglement: simulation as a service.",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


def _run(experiment: str, request: ExperimentRequest) -> RecordsResponse:
    cfg = ExperimentConfig(experiment=experiment, **request.model_dump())
    return RecordsResponse(records=run_experiment(cfg))


@app.post("/experiments/coherence", response_model=RecordsResponse)
def coherence(request: ExperimentRequest) -> RecordsResponse:
    return _run("coherence", request)


@app.post("/experiments/entangle", response_model=RecordsResponse)
def entangle(request: ExperimentRequest) -> RecordsResponse:
    return _run("entangle", request)


@app.post("/experiments/teleport", response_model=RecordsResponse)
def teleport(request: ExperimentRequest) -> RecordsResponse:
    return _run("teleport", request)


@app.post("/experiments/qfi", response_model=RecordsResponse)
def qfi(request: ExperimentRequest) -> RecordsResponse:
    return _run("qfi", request)
