"""Physical channels and signed quasi-channels (linear combinations of channels)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .states import DensityOperator

__all__ = [
    "Channel",
    "UnitaryChannel",
    "ReplacementChannel",
    "DepolarizingChannel",
    "ComposedChannel",
    "QuasiBranch",
    "QuasiChannel",
    "swap_unitary",
    "sign_flip_unitary",
    "incoherent_op",
    "identity_quasi_channel",
    "quasi_apply_exact",
]

UNITARITY_TOL = 1e-10
PROB_TOL = 1e-12


class Channel:
    """Trace-preserving, positivity-preserving map on density operators."""

    dim: int

    def apply(self, rho: DensityOperator) -> DensityOperator:
        raise NotImplementedError

    def _check_dim(self, rho: DensityOperator) -> None:
        if rho.dim != self.dim:
            raise ValueError(f"channel acts on dimension {self.dim}, state has dimension {rho.dim}")


@dataclass(frozen=True, eq=False)
class UnitaryChannel(Channel):
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        u = np.asarray(self.matrix, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError(f"unitary must be square, got shape {u.shape}")
        if not np.isfinite(u).all():
            raise ValueError("unitary entries must be finite")
        dev = float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())
        if dev > UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary: max deviation {dev:.3e}")
        object.__setattr__(self, "matrix", u)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, rho: DensityOperator) -> DensityOperator:
        self._check_dim(rho)
        out = self.matrix @ rho.matrix @ self.matrix.conj().T
        return DensityOperator(out, rho.dims, validate=False)


@dataclass(frozen=True, eq=False)
class ReplacementChannel(Channel):
    """Discards the input and outputs a fixed state."""

    output: DensityOperator
    name: str = ""

    @property
    def dim(self) -> int:
        return self.output.dim

    def apply(self, rho: DensityOperator) -> DensityOperator:
        self._check_dim(rho)
        return self.output


@dataclass(frozen=True, eq=False)
class DepolarizingChannel(Channel):
    """rho -> (1-p) rho + p I/d."""

    p: float
    d: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"depolarizing probability must lie in [0, 1], got {self.p}")

    @property
    def dim(self) -> int:
        return self.d

    def apply(self, rho: DensityOperator) -> DensityOperator:
        self._check_dim(rho)
        out = (1.0 - self.p) * rho.matrix + self.p * np.eye(self.d) / self.d
        return DensityOperator(out, rho.dims, validate=False)


@dataclass(frozen=True, eq=False)
class ComposedChannel(Channel):
    """Channels applied in sequence, first element first."""

    steps: tuple[Channel, ...]

    def __post_init__(self) -> None:
        if not self.steps:
            raise ValueError("composition requires at least one channel")
        object.__setattr__(self, "steps", tuple(self.steps))

    @property
    def dim(self) -> int:
        return self.steps[0].dim

    def apply(self, rho: DensityOperator) -> DensityOperator:
        for step in self.steps:
            rho = step.apply(rho)
        return rho


class QuasiBranch(NamedTuple):
    sign: int
    probability: float
    channel: Channel


@dataclass(frozen=True, eq=False)
class QuasiChannel:
    """Signed probabilistic mixture of channels with sampling cost C.

    Represents C * sum_b sign_b prob_b Gamma_b with sum_b prob_b = 1 and
    C * sum_b sign_b prob_b = 1, so the map is trace preserving but in
    general not physical.
    """

    branches: tuple[QuasiBranch, ...]
    cost: float

    def __post_init__(self) -> None:
        branches = tuple(QuasiBranch(int(s), float(p), ch) for s, p, ch in self.branches)
        if not branches:
            raise ValueError("quasi-channel requires at least one branch")
        for b in branches:
            if b.sign not in (+1, -1):
                raise ValueError(f"branch sign must be +1 or -1, got {b.sign}")
            if b.probability < 0.0:
                raise ValueError(f"branch probability must be nonnegative, got {b.probability}")
        psum = sum(b.probability for b in branches)
        if abs(psum - 1.0) > PROB_TOL:
            raise ValueError(f"branch probabilities sum to {psum}, expected 1")
        if self.cost < 1.0 - PROB_TOL:
            raise ValueError(f"cost must be >= 1, got {self.cost}")
        signed = self.cost * sum(b.sign * b.probability for b in branches)
        if abs(signed - 1.0) > PROB_TOL:
            raise ValueError(f"C * sum(sign * prob) = {signed}, expected 1")
        object.__setattr__(self, "branches", branches)
        object.__setattr__(self, "cost", float(self.cost))

    @property
    def dim(self) -> int:
        return self.branches[0].channel.dim


def quasi_apply_exact(qc: QuasiChannel, rho: DensityOperator) -> np.ndarray:
    """Exact virtual output C * sum_b sign_b prob_b Gamma_b(rho).

    Hermitian with unit trace; may have negative eigenvalues, so the result
    is returned as a plain matrix rather than a DensityOperator.
    """
    out = np.zeros((rho.dim, rho.dim), dtype=complex)
    for b in qc.branches:
        out += b.sign * b.probability * b.channel.apply(rho).matrix
    return qc.cost * out


def identity_quasi_channel(dim: int) -> QuasiChannel:
    ident = UnitaryChannel(np.eye(dim), name="identity")
    return QuasiChannel(branches=(QuasiBranch(+1, 1.0, ident),), cost=1.0)


def swap_unitary(j: int, k: int, d: int = 4) -> np.ndarray:
    """|j><k| + |k><j| completed with the identity on the untouched states."""
    u = np.eye(d, dtype=complex)
    u[j, j] = u[k, k] = 0.0
    u[j, k] = u[k, j] = 1.0
    return u


def sign_flip_unitary(j: int, k: int, d: int = 4) -> np.ndarray:
    """Diagonal +1 at j, -1 at k, +1 on the untouched states."""
    u = np.eye(d, dtype=complex)
    u[k, k] = -1.0
    return u


def _double_swap(j1: int, k1: int, j2: int, k2: int, d: int = 4) -> np.ndarray:
    return swap_unitary(j1, k1, d) @ swap_unitary(j2, k2, d)


# Incoherent unitaries used by the dimension-2-to-4 coherence protocol,
# indexed by k = 1..6 and branch sign.
_PLUS_OPS = {
    1: lambda: np.eye(4, dtype=complex),
    2: lambda: swap_unitary(1, 2),
    3: lambda: swap_unitary(1, 3),
    4: lambda: swap_unitary(0, 2),
    5: lambda: swap_unitary(0, 3),
    6: lambda: _double_swap(0, 2, 1, 3),
}
_MINUS_OPS = {
    1: lambda: sign_flip_unitary(0, 1),
    2: lambda: sign_flip_unitary(0, 2) @ swap_unitary(1, 2),
    3: lambda: sign_flip_unitary(0, 3) @ swap_unitary(1, 3),
    4: lambda: sign_flip_unitary(1, 2) @ swap_unitary(0, 2),
    5: lambda: sign_flip_unitary(1, 3) @ swap_unitary(0, 3),
    6: lambda: sign_flip_unitary(2, 3) @ _double_swap(0, 2, 1, 3),
}


def incoherent_op(k: int, sign: int) -> UnitaryChannel:
    """The k-th incoherent unitary of the coherence protocol, k in 1..6."""
    if k not in _PLUS_OPS:
        raise ValueError(f"k must be in 1..6, got {k}")
    if sign == +1:
        return UnitaryChannel(_PLUS_OPS[k](), name=f"gamma_plus_{k}")
    if sign == -1:
        return UnitaryChannel(_MINUS_OPS[k](), name=f"gamma_minus_{k}")
    raise ValueError(f"sign must be +1 or -1, got {sign}")
