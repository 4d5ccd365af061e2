"""Monte Carlo realization of quasi-channel estimation and shot planning.

Randomness contract
-------------------
All sampling uses the counter-based Philox generator keyed by the plan seed.
Shot ``i`` consumes a fixed slice of the uniform stream (row ``i`` of the
generated ``(shots, 2)`` block: one uniform for the branch draw, one for the
measurement outcome), so results are a pure function of ``(seed, inputs)``
and independent of how shots might be sharded across workers, as long as the
per-shot row mapping is preserved.  Derived seeds for independent subtasks
come from ``numpy.random.SeedSequence`` spawn keys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .channels import QuasiChannel
from .states import DensityOperator

__all__ = [
    "PAULI",
    "PAULI_EIGENVECTORS",
    "Observable",
    "SamplingPlan",
    "EstimateResult",
    "derive_seed",
    "estimate",
    "shots_for_accuracy",
    "measure_pauli_setting",
    "born_probabilities",
]

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Eigenvectors listed as (+1 outcome, -1 outcome).
PAULI_EIGENVECTORS = {
    "X": (np.array([1, 1], dtype=complex) / np.sqrt(2), np.array([1, -1], dtype=complex) / np.sqrt(2)),
    "Y": (np.array([1, 1j], dtype=complex) / np.sqrt(2), np.array([1, -1j], dtype=complex) / np.sqrt(2)),
    "Z": (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
}

MODES = ("expectation_oracle", "projective_sampling")


@dataclass(frozen=True, eq=False)
class Observable:
    """Bounded Hermitian observable with its recorded spectral bound."""

    matrix: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if not np.isfinite(m).all():
            raise ValueError("observable entries must be finite")
        asym = linalg.max_asymmetry(m)
        if asym > 1e-10:
            raise ValueError(f"observable not Hermitian: max asymmetry {asym:.3e}")
        m = (m + m.conj().T) / 2.0
        object.__setattr__(self, "matrix", m)

    @property
    def bound(self) -> float:
        w, _ = linalg.hermitian_eig(self.matrix)
        return float(np.abs(w).max())

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def projector_onto(cls, state, name: str = "") -> "Observable":
        return cls(state.projector(), name=name or "projector")

    @classmethod
    def pauli(cls, labels: str) -> "Observable":
        m = linalg.tensor(*(PAULI[c] for c in labels))
        return cls(m, name=labels)


@dataclass(frozen=True)
class SamplingPlan:
    shots: int
    seed: int
    mode: str = "projective_sampling"

    def __post_init__(self) -> None:
        if self.shots <= 0:
            raise ValueError(f"shots must be positive, got {self.shots}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class EstimateResult:
    mean: float
    stderr: float
    shots: int
    cost: float
    seed: int


def derive_seed(seed: int, *key: int) -> int:
    """Stable child seed for an independent subtask (branch, setting, ...)."""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return int(seq.generate_state(1, np.uint64)[0])


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def _draw_indices(cum_probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(cum_probs, u, side="right")
    return np.minimum(idx, len(cum_probs) - 1)


def born_probabilities(rho: DensityOperator, vectors: np.ndarray) -> np.ndarray:
    """Outcome probabilities <v_k|rho|v_k> for measurement vectors as columns."""
    probs = np.real(np.einsum("ik,ij,jk->k", vectors.conj(), rho.matrix, vectors))
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    if total <= 0.0:
        raise ValueError("measurement probabilities sum to zero")
    return probs / total


def estimate(qc: QuasiChannel, rho: DensityOperator, obs: Observable, plan: SamplingPlan) -> EstimateResult:
    """Sample the quasi-channel branch per shot, measure, sign and rescale.

    In ``projective_sampling`` mode each shot draws an eigenvalue of the
    observable with Born probability on the branch output; the shot value is
    C * sign * eigenvalue.  In ``expectation_oracle`` mode the exact branch
    expectation replaces the projective draw, isolating the quasi-probability
    sampling noise.  The mean over shots estimates tr[O Gamma~(rho)]
    unbiasedly; stderr is the sample standard deviation over sqrt(shots).
    """
    if rho.dim != qc.dim:
        raise ValueError(f"dimension mismatch: state {rho.dim} vs quasi-channel {qc.dim}")
    if obs.dim != rho.dim:
        raise ValueError(f"dimension mismatch: observable {obs.dim} vs state {rho.dim}")

    outs = [b.channel.apply(rho) for b in qc.branches]
    signs = np.array([b.sign for b in qc.branches], dtype=float)
    probs = np.array([b.probability for b in qc.branches], dtype=float)
    cum_branch = np.cumsum(probs)

    rng = _generator(plan.seed)
    u = rng.random((plan.shots, 2))
    b_idx = _draw_indices(cum_branch, u[:, 0])

    if plan.mode == "expectation_oracle":
        branch_vals = np.array([out.expectation(obs.matrix) for out in outs])
        shot_values = qc.cost * signs[b_idx] * branch_vals[b_idx]
    else:
        w, v = linalg.hermitian_eig(obs.matrix)
        cum_out = np.empty((len(outs), len(w)))
        for i, out in enumerate(outs):
            cum_out[i] = np.cumsum(born_probabilities(out, v))
        shot_values = np.empty(plan.shots)
        for i in range(len(outs)):
            mask = b_idx == i
            if not mask.any():
                continue
            o_idx = _draw_indices(cum_out[i], u[mask, 1])
            shot_values[mask] = qc.cost * signs[i] * w[o_idx]

    mean = float(shot_values.mean())
    stderr = float(shot_values.std(ddof=1) / math.sqrt(plan.shots)) if plan.shots > 1 else 0.0
    return EstimateResult(mean=mean, stderr=stderr, shots=plan.shots, cost=qc.cost, seed=plan.seed)


def shots_for_accuracy(cost: float, obs_bound: float, epsilon: float, delta: float) -> int:
    """Smallest shot count with Hoeffding failure probability at most delta.

    Shot values lie in [-C*B, C*B], so N = ceil(2 (C B)^2 ln(2/delta) / eps^2)
    guarantees |mean - truth| <= epsilon with probability >= 1 - delta; the
    quadratic dependence on C is the distillation sampling overhead.
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if cost < 1.0 or obs_bound < 0.0:
        raise ValueError("cost must be >= 1 and the observable bound nonnegative")
    n = 2.0 * (cost * obs_bound) ** 2 * math.log(2.0 / delta) / epsilon**2
    return max(1, math.ceil(n))


def pauli_basis_vectors(setting: tuple[str, ...]) -> np.ndarray:
    """Joint eigenbasis columns for a tensor Pauli setting.

    Outcome index bit ``i`` is 0 for the +1 eigenvalue of the i-th factor
    (subsystem 0 = most significant bit).
    """
    n = len(setting)
    vectors = np.empty((2**n, 2**n), dtype=complex)
    for outcome in range(2**n):
        vec = np.array([1.0], dtype=complex)
        for pos, label in enumerate(setting):
            bit = (outcome >> (n - 1 - pos)) & 1
            vec = np.kron(vec, PAULI_EIGENVECTORS[label][bit])
        vectors[:, outcome] = vec
    return vectors


def measure_pauli_setting(
    rho: DensityOperator,
    setting: tuple[str, ...],
    shots: int,
    seed: int | np.random.SeedSequence,
) -> np.ndarray:
    """Simulate a complete projective Pauli measurement; returns outcome counts.

    For two qubits the four bins are ordered (+,+), (+,-), (-,+), (-,-).
    """
    if shots <= 0:
        raise ValueError(f"shots must be positive, got {shots}")
    setting = tuple(setting)
    if any(label not in PAULI_EIGENVECTORS for label in setting):
        raise ValueError(f"invalid Pauli setting {setting}")
    if rho.dim != 2 ** len(setting) or any(d != 2 for d in rho.dims):
        raise ValueError(f"state dims {rho.dims} do not match a {len(setting)}-qubit Pauli setting")
    vectors = pauli_basis_vectors(setting)
    cum = np.cumsum(born_probabilities(rho, vectors))
    if isinstance(seed, np.random.SeedSequence):
        rng = np.random.Generator(np.random.Philox(seed))
    else:
        rng = _generator(seed)
    outcomes = _draw_indices(cum, rng.random(shots))
    return np.bincount(outcomes, minlength=len(cum))
