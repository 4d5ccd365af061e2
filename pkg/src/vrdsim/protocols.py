"""The two concrete distillation protocols, their costs and rates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import (
    QuasiBranch,
    QuasiChannel,
    ReplacementChannel,
    UnitaryChannel,
    incoherent_op,
)
from .states import PureState, bell, eta_state, mcs, pair_superposition, werner

__all__ = [
    "coherence_vrd",
    "entanglement_vrd",
    "vrd_cost",
    "one_shot_rate",
    "ProtocolSpec",
    "coherence_protocol",
    "entanglement_protocol",
    "coherence_input_state",
]

XI_THRESHOLD = 1.0 / 3.0


def coherence_input_state() -> PureState:
    """Two-level superposition (|0> + |1>)/sqrt(2) embedded in dimension 4."""
    return pair_superposition(4, 0, 1, +1)


def coherence_vrd() -> QuasiChannel:
    """Quasi-channel distilling the 4-dimensional maximally coherent state
    from the two-level superposition, at cost C = 3.

    Twelve branches: the six positive incoherent unitaries each with
    probability (2/3)/6 and the six negative ones each with (1/3)/6.
    """
    branches = []
    for k in range(1, 7):
        branches.append(QuasiBranch(+1, (2.0 / 3.0) / 6.0, incoherent_op(k, +1)))
        branches.append(QuasiBranch(-1, (1.0 / 3.0) / 6.0, incoherent_op(k, -1)))
    return QuasiChannel(branches=tuple(branches), cost=3.0)


def entanglement_vrd(xi: float) -> QuasiChannel:
    """Quasi-channel distilling the singlet from the Werner state at parameter xi.

    For xi >= 1/3 the positive branch is the identity and the negative branch
    replaces the input with (I - psi_minus)/3.  Below the threshold the input
    is effectively replaced by the xi = 1/3 Werner state, realized here as a
    replacement preparation inside the positive branch, so callers always pass
    the state they actually hold.
    """
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"Werner parameter must lie in [0, 1], got {xi}")
    xi_eff = max(xi, XI_THRESHOLD)
    p_plus = 4.0 / (7.0 - 3.0 * xi_eff)
    p_minus = (3.0 - 3.0 * xi_eff) / (7.0 - 3.0 * xi_eff)
    cost = (7.0 - 3.0 * xi_eff) / (1.0 + 3.0 * xi_eff)
    if xi < XI_THRESHOLD:
        positive = ReplacementChannel(werner(XI_THRESHOLD), name="prepare_werner_third")
    else:
        positive = UnitaryChannel(np.eye(4), name="identity")
    branches = [QuasiBranch(+1, p_plus, positive)]
    if p_minus > 0.0:
        branches.append(QuasiBranch(-1, p_minus, ReplacementChannel(eta_state(), name="replace_eta")))
    return QuasiChannel(branches=tuple(branches), cost=cost)


def vrd_cost(xi: float) -> float:
    """Sampling cost of the Werner distillation, min{(7-3xi)/(1+3xi), 3}."""
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"Werner parameter must lie in [0, 1], got {xi}")
    return min((7.0 - 3.0 * xi) / (1.0 + 3.0 * xi), 3.0)


def one_shot_rate(cost: float, m: int = 1) -> float:
    """Single-copy virtual distillation rate m / C^2."""
    if cost < 1.0:
        raise ValueError(f"cost must be >= 1, got {cost}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return m / cost**2


@dataclass(frozen=True)
class ProtocolSpec:
    """A named protocol bundled with its input, target and cost."""

    name: str
    xi: float | None
    cost: float
    target: PureState
    quasi_channel: QuasiChannel


def coherence_protocol() -> ProtocolSpec:
    return ProtocolSpec(
        name="coherence_2to4",
        xi=None,
        cost=3.0,
        target=mcs(4),
        quasi_channel=coherence_vrd(),
    )


def entanglement_protocol(xi: float) -> ProtocolSpec:
    return ProtocolSpec(
        name="entanglement_werner",
        xi=float(xi),
        cost=vrd_cost(xi),
        target=bell("psi_minus"),
        quasi_channel=entanglement_vrd(xi),
    )
