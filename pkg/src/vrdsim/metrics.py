"""Figures of merit: fidelity, coherence, negativity, Fisher information."""

from __future__ import annotations

import math

import numpy as np

from . import linalg
from .states import DensityOperator, PureState

__all__ = [
    "fidelity_to_pure",
    "rel_entropy_coherence",
    "negativity",
    "qfi",
    "qfi_pure",
    "qfi_isotropic_total_z",
    "crb_coefficients",
]

_EIG_FLOOR = 1e-12


def fidelity_to_pure(rho: DensityOperator, target: PureState) -> float:
    """<target| rho |target>."""
    if rho.dim != target.dim:
        raise ValueError(f"dimension mismatch: state {rho.dim} vs target {target.dim}")
    amp = target.amplitudes
    return float(np.real(np.vdot(amp, rho.matrix @ amp)))


def _entropy_bits(probs: np.ndarray) -> float:
    p = np.clip(np.real(probs), 0.0, None)
    p = p[p > _EIG_FLOOR]
    return float(-(p * np.log2(p)).sum())


def rel_entropy_coherence(rho: DensityOperator) -> float:
    """Relative entropy of coherence in bits: S(diag(rho)) - S(rho)."""
    w, _ = linalg.hermitian_eig(rho.matrix)
    return _entropy_bits(np.diag(rho.matrix)) - _entropy_bits(w)


def negativity(rho: DensityOperator, convention: str = "signed") -> float:
    """Entanglement negativity from the partial transpose over subsystem 0.

    convention="trace_norm" returns (||rho^PT||_1 - 1)/2 >= 0; the "signed"
    convention returns the sum of the negative partial-transpose eigenvalues,
    which is <= 0 and matches sign-sensitive reporting of distillation gains.
    """
    if len(rho.dims) < 2:
        raise ValueError(f"negativity requires a bipartite state, got dims {rho.dims}")
    pt = rho.partial_transpose(0)
    w, _ = linalg.hermitian_eig(pt)
    if convention == "trace_norm":
        return float((np.abs(w).sum() - 1.0) / 2.0)
    if convention == "signed":
        return float(w[w < 0.0].sum())
    raise ValueError(f"unknown negativity convention {convention!r}")


def qfi(rho: DensityOperator, generator: np.ndarray) -> float:
    """Quantum Fisher information of rho for the unitary family exp(-i G theta).

    2 * sum_{k,l} (w_k - w_l)^2 / (w_k + w_l) |<k|G|l>|^2 over eigenpairs of
    rho with w_k + w_l above a fixed floor.
    """
    g = np.asarray(generator, dtype=complex)
    if linalg.max_asymmetry(g) > 1e-10:
        raise ValueError("generator must be Hermitian")
    w, v = linalg.hermitian_eig(rho.matrix)
    gv = v.conj().T @ g @ v
    total = 0.0
    for k in range(len(w)):
        for l in range(len(w)):
            denom = w[k] + w[l]
            if denom > _EIG_FLOOR:
                total += (w[k] - w[l]) ** 2 / denom * abs(gv[k, l]) ** 2
    return 2.0 * total


def qfi_pure(psi: PureState, generator: np.ndarray) -> float:
    """Pure-state value 4 (<G^2> - <G>^2)."""
    g = np.asarray(generator, dtype=complex)
    amp = psi.amplitudes
    mean = np.real(np.vdot(amp, g @ amp))
    second = np.real(np.vdot(amp, g @ (g @ amp)))
    return float(4.0 * (second - mean**2))


def qfi_isotropic_total_z(xi: float) -> float:
    """Closed form 32 xi^2 / (1 + xi) for the noisy Bell family with generator
    Z x I + I x Z."""
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"xi must lie in [0, 1], got {xi}")
    return 32.0 * xi**2 / (1.0 + xi)


def crb_coefficients(xi: float) -> tuple[float, float]:
    """Single-copy Cramer-Rao coefficients (noisy state, virtually distilled).

    noisy  = sqrt((1+xi)/(32 xi^2)); diverges at xi = 0 (returned as +inf).
    virtual = (7-3xi')/(4(1+3xi')) with xi' clamped to the 1/3 threshold,
    i.e. the distillation cost slows estimation by the full C factor.

    The virtual coefficient dominates the noisy one on xi in [1/3, 1], with
    equality only at xi = 1.  Below the threshold the noisy state carries
    almost no phase information while the clamped protocol keeps a fixed
    rate, so the ordering reverses there.
    """
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"xi must lie in [0, 1], got {xi}")
    noisy = math.inf if xi == 0.0 else math.sqrt((1.0 + xi) / (32.0 * xi**2))
    xi_eff = max(xi, 1.0 / 3.0)
    virtual = (7.0 - 3.0 * xi_eff) / (4.0 * (1.0 + 3.0 * xi_eff))
    return noisy, virtual
