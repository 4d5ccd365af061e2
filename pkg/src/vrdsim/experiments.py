"""Experiment runner: the service layer behind the HTTP API and the CLI."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Callable

import numpy as np

from . import linalg, metrics
from .channels import DepolarizingChannel, QuasiChannel
from .estimator import PAULI, derive_seed
from .protocols import (
    XI_THRESHOLD,
    coherence_input_state,
    coherence_vrd,
    entanglement_vrd,
    vrd_cost,
)
from .schemas import CSV_COLUMNS, ExperimentConfig, ResultRecord
from .states import DensityOperator, bell, eta_state, isotropic, mcs, werner
from .teleport import (
    CLASSICAL_FIDELITY_LIMIT,
    INPUT_LABELS,
    input_state,
    teleport_exact,
)
from .tomography import (
    project_physical,
    linear_inversion,
    sample_dataset,
    virtual_tomography,
    virtual_tomography_exact,
)

__all__ = [
    "DEFAULT_XI_ENTANGLE",
    "DEFAULT_XI_TELEPORT",
    "DEFAULT_XI_QFI",
    "run_coherence",
    "run_entangle",
    "run_teleport",
    "run_qfi",
    "run_experiment",
    "records_to_json",
    "records_to_csv",
]

DEFAULT_XI_ENTANGLE = (0.0, 0.1, 0.2, 1.0 / 3.0, 0.4, 0.6, 0.8, 1.0)
DEFAULT_XI_TELEPORT = (0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0)
DEFAULT_XI_QFI = tuple(round(0.1 * i, 1) for i in range(1, 11))

# Values reported by the photonic hardware run of these experiments; emitted
# as annotations for context, never asserted or reproduced by the simulator.
_LAB_NOTES = {
    "coherence_fidelity_input": "hardware reference 0.426 +/- 0.007 (photonic run, not a target)",
    "coherence_fidelity_distilled": "hardware reference 0.932 +/- 0.004 (photonic run, not a target)",
    "coherence_coh_input": "hardware reference 0.958 +/- 0.024 (photonic run, not a target)",
    "coherence_coh_distilled": "hardware reference 1.769 +/- 0.029 (photonic run, not a target)",
}
_SIGNED_NOTE = "signed convention: sum of negative partial-transpose eigenvalues"

_TOMO_REPLICATES = 3


def _maybe_depolarize(rho: DensityOperator, p: float) -> DensityOperator:
    if p <= 0.0:
        return rho
    return DepolarizingChannel(p, rho.dim).apply(rho)


def _replicated(
    build: Callable[[int], DensityOperator],
    fns: dict[str, Callable[[DensityOperator], float]],
    seed: int,
) -> dict[str, tuple[float, float]]:
    """Monte-Carlo value and spread of state functionals over tomography replicates."""
    samples: dict[str, list[float]] = {name: [] for name in fns}
    for r in range(_TOMO_REPLICATES):
        state = build(derive_seed(seed, r))
        for name, fn in fns.items():
            samples[name].append(fn(state))
    out = {}
    for name, vals in samples.items():
        arr = np.array(vals)
        out[name] = (float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(len(arr))))
    return out


def _tomo_state(rho: DensityOperator, shots: int, seed: int) -> DensityOperator:
    return project_physical(linear_inversion(sample_dataset(rho, shots, seed)))


def _virtual_state(qc: QuasiChannel, rho: DensityOperator, shots: int, seed: int) -> DensityOperator:
    return virtual_tomography(qc, rho, shots, seed)[1]


def run_coherence(cfg: ExperimentConfig) -> list[ResultRecord]:
    """Distillation of the dimension-4 maximally coherent state from a two-level
    superposition: fidelities and relative entropies of coherence, before and after."""
    qc = coherence_vrd()
    target = mcs(4)
    rho_in = _maybe_depolarize(coherence_input_state().to_density().with_dims((2, 2)), cfg.noise_p)
    target_flat = target.with_dims((2, 2))

    exact_in_f = metrics.fidelity_to_pure(rho_in, target_flat)
    exact_in_c = metrics.rel_entropy_coherence(rho_in)
    _, phys_exact = virtual_tomography_exact(qc, rho_in)
    exact_out_f = metrics.fidelity_to_pure(phys_exact, target_flat)
    exact_out_c = metrics.rel_entropy_coherence(phys_exact)

    fid = lambda s: metrics.fidelity_to_pure(s, target_flat)
    coh = metrics.rel_entropy_coherence
    if cfg.mode == "sampled":
        est_in = _replicated(lambda s: _tomo_state(rho_in, cfg.shots, s), {"f": fid, "c": coh}, derive_seed(cfg.seed, 0))
        est_out = _replicated(lambda s: _virtual_state(qc, rho_in, cfg.shots, s), {"f": fid, "c": coh}, derive_seed(cfg.seed, 1))
    else:
        est_in = {"f": (exact_in_f, 0.0), "c": (exact_in_c, 0.0)}
        est_out = {"f": (exact_out_f, 0.0), "c": (exact_out_c, 0.0)}

    common = dict(experiment="coherence", mode=cfg.mode, seed=cfg.seed, noise_p=cfg.noise_p)
    shots = cfg.shots if cfg.mode == "sampled" else None
    return [
        ResultRecord(metric="fidelity_input", value=est_in["f"][0], stderr=est_in["f"][1], exact=exact_in_f,
                     cost=1.0, shots=shots, note=_LAB_NOTES["coherence_fidelity_input"], **common),
        ResultRecord(metric="fidelity_distilled", value=est_out["f"][0], stderr=est_out["f"][1], exact=exact_out_f,
                     cost=qc.cost, shots=shots, note=_LAB_NOTES["coherence_fidelity_distilled"], **common),
        ResultRecord(metric="coherence_input", value=est_in["c"][0], stderr=est_in["c"][1], exact=exact_in_c,
                     cost=1.0, shots=shots, note=_LAB_NOTES["coherence_coh_input"], **common),
        ResultRecord(metric="coherence_distilled", value=est_out["c"][0], stderr=est_out["c"][1], exact=exact_out_c,
                     cost=qc.cost, shots=shots, note=_LAB_NOTES["coherence_coh_distilled"], **common),
        ResultRecord(metric="cost", value=qc.cost, exact=qc.cost, cost=qc.cost, **common),
    ]


def run_entangle(cfg: ExperimentConfig) -> list[ResultRecord]:
    """Werner-state distillation curve: input/distilled fidelity to the singlet
    and signed negativities, per Werner parameter."""
    xis = cfg.xi if cfg.xi is not None else list(DEFAULT_XI_ENTANGLE)
    target = bell("psi_minus")
    records: list[ResultRecord] = []
    for i, xi in enumerate(xis):
        qc = entanglement_vrd(xi)
        rho_in = _maybe_depolarize(werner(xi), cfg.noise_p)
        exact_in_f = metrics.fidelity_to_pure(rho_in, target)
        exact_in_n = metrics.negativity(rho_in, "signed")
        _, phys_exact = virtual_tomography_exact(qc, rho_in)
        exact_out_f = metrics.fidelity_to_pure(phys_exact, target)
        exact_out_n = metrics.negativity(phys_exact, "signed")

        fid = lambda s: metrics.fidelity_to_pure(s, target)
        neg = lambda s: metrics.negativity(s, "signed")
        if cfg.mode == "sampled":
            est_in = _replicated(lambda s: _tomo_state(rho_in, cfg.shots, s), {"f": fid, "n": neg}, derive_seed(cfg.seed, 0, i))
            est_out = _replicated(lambda s: _virtual_state(qc, rho_in, cfg.shots, s), {"f": fid, "n": neg}, derive_seed(cfg.seed, 1, i))
        else:
            est_in = {"f": (exact_in_f, 0.0), "n": (exact_in_n, 0.0)}
            est_out = {"f": (exact_out_f, 0.0), "n": (exact_out_n, 0.0)}

        common = dict(experiment="entangle", mode=cfg.mode, xi=xi, seed=cfg.seed, noise_p=cfg.noise_p)
        shots = cfg.shots if cfg.mode == "sampled" else None
        records += [
            ResultRecord(metric="fidelity_input", value=est_in["f"][0], stderr=est_in["f"][1], exact=exact_in_f,
                         cost=1.0, shots=shots, **common),
            ResultRecord(metric="fidelity_distilled", value=est_out["f"][0], stderr=est_out["f"][1], exact=exact_out_f,
                         cost=qc.cost, shots=shots, **common),
            ResultRecord(metric="negativity_input", value=est_in["n"][0], stderr=est_in["n"][1], exact=exact_in_n,
                         cost=1.0, shots=shots, note=_SIGNED_NOTE, **common),
            ResultRecord(metric="negativity_distilled", value=est_out["n"][0], stderr=est_out["n"][1], exact=exact_out_n,
                         cost=qc.cost, shots=shots, note=_SIGNED_NOTE, **common),
            ResultRecord(metric="cost", value=qc.cost, exact=vrd_cost(xi), cost=qc.cost, **common),
        ]
    return records


def _teleport_fidelities(resource_w: DensityOperator, resource_eta: DensityOperator, xi_eff: float):
    """Per-input raw and virtually-distilled teleportation fidelities."""
    raw, virt = [], []
    for label in INPUT_LABELS:
        st = input_state(label)
        out_w = teleport_exact(resource_w, st)
        out_eta = teleport_exact(resource_eta, st)
        raw.append(metrics.fidelity_to_pure(out_w, st))
        combo = (4.0 * out_w.matrix - (3.0 - 3.0 * xi_eff) * out_eta.matrix) / (1.0 + 3.0 * xi_eff)
        virt.append(metrics.fidelity_to_pure(project_physical(combo), st))
    return float(np.mean(raw)), float(np.mean(virt))


def _sampled_teleport_fidelities(
    resource_w: DensityOperator, resource_eta: DensityOperator, xi_eff: float, shots: int, seed: int
):
    raw, virt = [], []
    for l_idx, label in enumerate(INPUT_LABELS):
        st = input_state(label)
        out_w = teleport_exact(resource_w, st)
        out_eta = teleport_exact(resource_eta, st)
        hat_w = linear_inversion(sample_dataset(out_w, shots, derive_seed(seed, l_idx, 0)))
        hat_eta = linear_inversion(sample_dataset(out_eta, shots, derive_seed(seed, l_idx, 1)))
        raw.append(metrics.fidelity_to_pure(project_physical(hat_w), st))
        combo = (4.0 * hat_w - (3.0 - 3.0 * xi_eff) * hat_eta) / (1.0 + 3.0 * xi_eff)
        virt.append(metrics.fidelity_to_pure(project_physical(combo), st))
    return float(np.mean(raw)), float(np.mean(virt))


def run_teleport(cfg: ExperimentConfig) -> list[ResultRecord]:
    """Teleportation benchmark: average fidelity over the four probe inputs with
    the raw Werner resource and with the virtually distilled one."""
    xis = cfg.xi if cfg.xi is not None else list(DEFAULT_XI_TELEPORT)
    records: list[ResultRecord] = []
    for i, xi in enumerate(xis):
        xi_eff = max(xi, XI_THRESHOLD)
        resource_raw = _maybe_depolarize(werner(xi), cfg.noise_p)
        resource_w = _maybe_depolarize(werner(xi_eff), cfg.noise_p)
        resource_eta = _maybe_depolarize(eta_state(), cfg.noise_p)
        exact_raw, _ = _teleport_fidelities(resource_raw, resource_eta, xi_eff)
        _, exact_virt = _teleport_fidelities(resource_w, resource_eta, xi_eff)

        if cfg.mode == "sampled":
            reps_raw, reps_virt = [], []
            for r in range(_TOMO_REPLICATES):
                s = derive_seed(cfg.seed, i, r)
                f_raw, _ = _sampled_teleport_fidelities(resource_raw, resource_eta, xi_eff, cfg.shots, derive_seed(s, 0))
                _, f_virt = _sampled_teleport_fidelities(resource_w, resource_eta, xi_eff, cfg.shots, derive_seed(s, 1))
                reps_raw.append(f_raw)
                reps_virt.append(f_virt)
            val_raw = (float(np.mean(reps_raw)), float(np.std(reps_raw, ddof=1) / math.sqrt(len(reps_raw))))
            val_virt = (float(np.mean(reps_virt)), float(np.std(reps_virt, ddof=1) / math.sqrt(len(reps_virt))))
        else:
            val_raw = (exact_raw, 0.0)
            val_virt = (exact_virt, 0.0)

        common = dict(experiment="teleport", mode=cfg.mode, xi=xi, seed=cfg.seed, noise_p=cfg.noise_p)
        shots = cfg.shots if cfg.mode == "sampled" else None
        cost = vrd_cost(xi)
        records += [
            ResultRecord(metric="avg_fidelity_raw", value=val_raw[0], stderr=val_raw[1], exact=exact_raw,
                         cost=1.0, shots=shots, **common),
            ResultRecord(metric="avg_fidelity_vrd", value=val_virt[0], stderr=val_virt[1], exact=exact_virt,
                         cost=cost, shots=shots, **common),
            ResultRecord(metric="below_classical_raw", value=1.0 if val_raw[0] < CLASSICAL_FIDELITY_LIMIT else 0.0,
                         exact=1.0 if exact_raw < CLASSICAL_FIDELITY_LIMIT else 0.0, cost=1.0,
                         note=f"1 if raw average fidelity < {CLASSICAL_FIDELITY_LIMIT:.6f}", **common),
        ]
    return records


def run_qfi(cfg: ExperimentConfig) -> list[ResultRecord]:
    """Fisher-information comparison for the noisy Bell family with generator
    Z x I + I x Z; analytic in both modes (noise rescales the family parameter)."""
    xis = cfg.xi if cfg.xi is not None else list(DEFAULT_XI_QFI)
    gen = linalg.tensor(PAULI["Z"], PAULI["I"]) + linalg.tensor(PAULI["I"], PAULI["Z"])
    records: list[ResultRecord] = []
    for xi in xis:
        xi_eff = xi * (1.0 - cfg.noise_p)
        state = _maybe_depolarize(isotropic(xi), cfg.noise_p)
        closed = metrics.qfi_isotropic_total_z(xi_eff)
        eig = metrics.qfi(state, gen)
        noisy_c, virtual_c = metrics.crb_coefficients(xi_eff)
        common = dict(experiment="qfi", mode=cfg.mode, xi=xi, seed=cfg.seed, noise_p=cfg.noise_p)
        note = "analytic quantities; sampling mode has no effect" if cfg.mode == "sampled" else ""
        records += [
            ResultRecord(metric="qfi_closed_form", value=closed, exact=closed, note=note, **common),
            ResultRecord(metric="qfi_eig", value=eig, exact=closed, note=note, **common),
            ResultRecord(metric="crb_noisy", value=noisy_c, exact=noisy_c, **common),
            ResultRecord(metric="crb_virtual", value=virtual_c, exact=virtual_c, cost=vrd_cost(min(max(xi_eff, 0.0), 1.0)), **common),
        ]
    return records


_RUNNERS = {
    "coherence": run_coherence,
    "entangle": run_entangle,
    "teleport": run_teleport,
    "qfi": run_qfi,
}


def run_experiment(cfg: ExperimentConfig) -> list[ResultRecord]:
    return _RUNNERS[cfg.experiment](cfg)


def records_to_json(records: list[ResultRecord]) -> str:
    return json.dumps([r.model_dump() for r in records], indent=2) + "\n"


def records_to_csv(records: list[ResultRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        d = r.model_dump()
        writer.writerow(["" if d[c] is None else d[c] for c in CSV_COLUMNS])
    return buf.getvalue()
