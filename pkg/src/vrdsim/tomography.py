"""Pauli tomography: linear inversion, physical projection, virtual-state pipeline."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import linalg
from .channels import QuasiChannel, quasi_apply_exact
from .estimator import PAULI, derive_seed, measure_pauli_setting
from .states import DensityOperator

__all__ = [
    "PauliDataset",
    "full_settings",
    "sample_dataset",
    "exact_expectations",
    "expectations_from_counts",
    "reconstruct_from_expectations",
    "linear_inversion",
    "simplex_project",
    "project_physical",
    "virtual_tomography",
    "virtual_tomography_exact",
]

CSV_HEADER = ["setting", "c0", "c1", "c2", "c3", "shots", "seed"]


def full_settings(n_qubits: int) -> tuple[tuple[str, ...], ...]:
    """All-XYZ measurement settings; informationally complete for n qubits."""
    return tuple(itertools.product("XYZ", repeat=n_qubits))


@dataclass(frozen=True, eq=False)
class PauliDataset:
    """Per-setting outcome counts from complete Pauli measurements."""

    settings: tuple[tuple[str, ...], ...]
    counts: tuple[np.ndarray, ...]
    shots: int
    seed: int

    def __post_init__(self) -> None:
        if len(self.settings) != len(self.counts):
            raise ValueError("settings and counts must align")
        n = self.n_qubits
        for setting, cnt in zip(self.settings, self.counts):
            if len(setting) != n:
                raise ValueError("all settings must address the same number of qubits")
            if cnt.sum() != self.shots:
                raise ValueError(f"counts for setting {setting} sum to {cnt.sum()}, expected {self.shots}")
        object.__setattr__(self, "counts", tuple(np.asarray(c, dtype=np.int64) for c in self.counts))

    @property
    def n_qubits(self) -> int:
        return len(self.settings[0])

    def is_complete(self) -> bool:
        return set(self.settings) >= set(full_settings(self.n_qubits))

    def to_csv(self, path: str | Path) -> None:
        """Flat record per setting: label, four outcome counts, shots, seed."""
        if self.n_qubits != 2:
            raise ValueError("CSV serialization is defined for the two-qubit dataset layout")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for setting, cnt in zip(self.settings, self.counts):
                writer.writerow(["".join(setting), *[int(c) for c in cnt], self.shots, self.seed])

    @classmethod
    def from_csv(cls, path: str | Path) -> "PauliDataset":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or rows[0] != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {rows[0] if rows else None}")
        settings, counts, shots, seed = [], [], None, None
        for row in rows[1:]:
            settings.append(tuple(row[0]))
            counts.append(np.array([int(x) for x in row[1:5]], dtype=np.int64))
            shots = int(row[5])
            seed = int(row[6])
        return cls(settings=tuple(settings), counts=tuple(counts), shots=shots, seed=seed)


def sample_dataset(rho: DensityOperator, shots_per_setting: int, seed: int) -> PauliDataset:
    """Measure every complete Pauli setting; per-setting seeds are derived
    from the root seed by setting index."""
    settings = full_settings(len(rho.dims))
    counts = tuple(
        measure_pauli_setting(rho, setting, shots_per_setting, derive_seed(seed, i))
        for i, setting in enumerate(settings)
    )
    return PauliDataset(settings=settings, counts=counts, shots=shots_per_setting, seed=seed)


def _pauli_strings(n_qubits: int) -> list[tuple[str, ...]]:
    return [s for s in itertools.product("IXYZ", repeat=n_qubits) if set(s) != {"I"}]


def _outcome_signs(setting_len: int) -> np.ndarray:
    """signs[v_mask, outcome]: product of outcome signs over the qubits in v_mask."""
    n_out = 2**setting_len
    signs = np.ones((2**setting_len, n_out))
    for mask in range(2**setting_len):
        for outcome in range(n_out):
            s = 1.0
            for pos in range(setting_len):
                if (mask >> (setting_len - 1 - pos)) & 1:
                    bit = (outcome >> (setting_len - 1 - pos)) & 1
                    s *= 1.0 - 2.0 * bit
            signs[mask, outcome] = s
    return signs


def expectations_from_counts(dataset: PauliDataset) -> dict[tuple[str, ...], float]:
    """Empirical expectations for every nontrivial Pauli string.

    Strings containing I are marginals; their estimates average over all
    measured settings that are compatible, which uses every recorded count.
    """
    if not dataset.is_complete():
        raise ValueError("dataset is not informationally complete (missing Pauli settings)")
    n = dataset.n_qubits
    signs = _outcome_signs(n)
    sums: dict[tuple[str, ...], float] = {}
    hits: dict[tuple[str, ...], int] = {}
    for v in _pauli_strings(n):
        sums[v] = 0.0
        hits[v] = 0
    for setting, cnt in zip(dataset.settings, dataset.counts):
        freq = cnt / dataset.shots
        for v in _pauli_strings(n):
            if any(c != "I" and c != s for c, s in zip(v, setting)):
                continue
            mask = 0
            for pos, c in enumerate(v):
                if c != "I":
                    mask |= 1 << (n - 1 - pos)
            sums[v] += float(signs[mask] @ freq)
            hits[v] += 1
    return {v: sums[v] / hits[v] for v in sums}


def exact_expectations(rho: DensityOperator) -> dict[tuple[str, ...], float]:
    n = len(rho.dims)
    out = {}
    for v in _pauli_strings(n):
        m = linalg.tensor(*(PAULI[c] for c in v))
        out[v] = float(np.trace(m @ rho.matrix).real)
    return out


def reconstruct_from_expectations(expectations: dict[tuple[str, ...], float], n_qubits: int) -> np.ndarray:
    """Linear inversion (1/2^n)(I + sum_v f_v M_v); Hermitian and unit trace
    but not necessarily positive."""
    d = 2**n_qubits
    rho = np.eye(d, dtype=complex)
    for v, f in expectations.items():
        rho += f * linalg.tensor(*(PAULI[c] for c in v))
    return rho / d


def linear_inversion(dataset: PauliDataset) -> np.ndarray:
    return reconstruct_from_expectations(expectations_from_counts(dataset), dataset.n_qubits)


def simplex_project(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of a real vector onto the probability simplex.

    Sort-and-threshold: shift the largest entries by a common amount so they
    sum to one, zero the rest.
    """
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, len(v) + 1)
    cond = u + (1.0 - css) / idx > 0.0
    k = int(idx[cond][-1])
    shift = (1.0 - css[k - 1]) / k
    return np.maximum(v + shift, 0.0)


def project_physical(
    m: np.ndarray, trace_tol: float = 1e-8, dims: tuple[int, ...] | None = None
) -> DensityOperator:
    """Frobenius-nearest density operator to a Hermitian unit-trace matrix.

    Eigendecompose, project the spectrum onto the probability simplex, keep
    the eigenvectors; this is the exact minimizer under the trace constraint.
    """
    a = np.asarray(m, dtype=complex)
    tr = complex(np.trace(a))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace {tr} deviates from 1 beyond {trace_tol}")
    w, v = linalg.hermitian_eig(a)
    w_proj = simplex_project(w)
    out = (v * w_proj) @ v.conj().T
    out = (out + out.conj().T) / 2.0
    if dims is None:
        d = a.shape[0]
        nq = d.bit_length() - 1
        dims = (2,) * nq if 2**nq == d else (d,)
    return DensityOperator(out, dims, validate=False)


def _branch_linear_inversions(
    qc: QuasiChannel, rho: DensityOperator, shots_per_setting: int, seed: int
) -> list[np.ndarray]:
    lins = []
    for b_idx, branch in enumerate(qc.branches):
        out = branch.channel.apply(rho)
        ds = sample_dataset(out, shots_per_setting, derive_seed(seed, 1, b_idx))
        lins.append(linear_inversion(ds))
    return lins


def virtual_tomography(
    qc: QuasiChannel,
    rho: DensityOperator,
    shots_per_setting: int,
    seed: int,
    allocation: str = "per_branch",
) -> tuple[np.ndarray, DensityOperator]:
    """Reconstruct the virtual output state from sampled Pauli data.

    allocation="per_branch" measures each branch output with the full shot
    budget and combines the reconstructions with the exact signed weights
    C * sign * prob.  allocation="sampled" draws the branch per shot instead
    and combines with the empirical weights, mirroring single-shot operation.
    Returns the (generally unphysical) linear-inversion combination and its
    projection onto the physical set.
    """
    if rho.dim != qc.dim:
        raise ValueError(f"dimension mismatch: state {rho.dim} vs quasi-channel {qc.dim}")
    n = len(rho.dims)
    if allocation == "per_branch":
        lins = _branch_linear_inversions(qc, rho, shots_per_setting, seed)
        combo = np.zeros((rho.dim, rho.dim), dtype=complex)
        for branch, lin in zip(qc.branches, lins):
            combo += branch.sign * branch.probability * lin
        combo *= qc.cost
    elif allocation == "sampled":
        combo = _sampled_allocation(qc, rho, shots_per_setting, seed, n)
    else:
        raise ValueError(f"unknown allocation {allocation!r}")
    return combo, project_physical(combo)


def _sampled_allocation(
    qc: QuasiChannel, rho: DensityOperator, shots_per_setting: int, seed: int, n: int
) -> np.ndarray:
    outs = [b.channel.apply(rho) for b in qc.branches]
    probs = np.array([b.probability for b in qc.branches])
    cum = np.cumsum(probs)
    settings = full_settings(n)
    expectations: dict[tuple[str, ...], float] = {}
    sums: dict[tuple[str, ...], float] = {v: 0.0 for v in _pauli_strings(n)}
    hits: dict[tuple[str, ...], int] = {v: 0 for v in sums}
    signs_table = _outcome_signs(n)
    for s_idx, setting in enumerate(settings):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(derive_seed(seed, 2, s_idx))))
        u = rng.random(shots_per_setting)
        b_of_shot = np.minimum(np.searchsorted(cum, u, side="right"), len(cum) - 1)
        signed_counts = np.zeros(2**n)
        for b_idx, branch in enumerate(qc.branches):
            n_b = int((b_of_shot == b_idx).sum())
            if n_b == 0:
                continue
            cnt = measure_pauli_setting(outs[b_idx], setting, n_b, derive_seed(seed, 3, s_idx, b_idx))
            signed_counts += branch.sign * cnt
        freq = qc.cost * signed_counts / shots_per_setting
        for v in sums:
            if any(c != "I" and c != s for c, s in zip(v, setting)):
                continue
            mask = 0
            for pos, c in enumerate(v):
                if c != "I":
                    mask |= 1 << (n - 1 - pos)
            sums[v] += float(signs_table[mask] @ freq)
            hits[v] += 1
    expectations = {v: sums[v] / hits[v] for v in sums}
    return reconstruct_from_expectations(expectations, n)


def virtual_tomography_exact(qc: QuasiChannel, rho: DensityOperator) -> tuple[np.ndarray, DensityOperator]:
    """Infinite-shot limit of the pipeline: exact signed combination, then projection."""
    combo = quasi_apply_exact(qc, rho)
    return combo, project_physical(combo)
