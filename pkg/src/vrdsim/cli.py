"""Command-line client for the experiment runner.

Thin by design: parses flags into an ExperimentConfig, runs the experiment
in-process (or against a running vrdsim service via --server) and serializes
the records.  Exit code 0 on success, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from pydantic import ValidationError

from .experiments import records_to_csv, records_to_json, run_experiment
from .schemas import EXPERIMENTS, ExperimentConfig, ResultRecord

__all__ = ["build_parser", "main"]

_EXPERIMENT_HELP = {
    "coherence": "distill the dimension-4 maximally coherent state from a two-level superposition",
    "entangle": "distill the singlet from Werner states over a parameter grid",
    "teleport": "teleportation fidelity with raw and virtually distilled resources",
    "qfi": "Fisher information and Cramer-Rao coefficients for the noisy Bell family",
}


def _parse_xi(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--xi expects a comma-separated list of numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vrdsim", description=__doc__)
    sub = parser.add_subparsers(dest="experiment", required=True, metavar="{" + ",".join(EXPERIMENTS) + "}")
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=_EXPERIMENT_HELP[name])
        p.add_argument("--xi", type=_parse_xi, default=None, help="comma-separated Werner parameters (default: experiment grid)")
        p.add_argument("--shots", type=int, default=100_000, help="shots per estimate / tomography setting (default 100000)")
        p.add_argument("--seed", type=int, default=0, help="root seed (default 0)")
        p.add_argument("--noise-p", type=float, default=0.0, dest="noise_p", help="depolarizing noise on the prepared inputs")
        p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", type=Path, default=None, help="output path (default: stdout)")
        p.add_argument("--server", default=None, help="base URL of a running vrdsim service; runs in-process if omitted")
    return parser


def _run_remote(server: str, cfg: ExperimentConfig) -> list[ResultRecord]:
    import httpx

    body = cfg.model_dump()
    experiment = body.pop("experiment")
    response = httpx.post(f"{server.rstrip('/')}/experiments/{experiment}", json=body, timeout=600.0)
    response.raise_for_status()
    return [ResultRecord(**r) for r in response.json()["records"]]


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig(
            experiment=args.experiment,
            xi=args.xi,
            shots=args.shots,
            seed=args.seed,
            noise_p=args.noise_p,
            mode=args.mode,
        )
    except ValidationError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2

    records = _run_remote(args.server, cfg) if args.server else run_experiment(cfg)
    text = records_to_json(records) if args.format == "json" else records_to_csv(records)
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
