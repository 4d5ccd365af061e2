"""vrdsim: virtual distillation of coherence and entanglement on a desk.

Density-matrix simulation of quasi-probability (signed-mixture) distillation
protocols, with shot-noise Monte Carlo estimation, Pauli tomography, a Jones
calculus model of the photonic apparatus, and an experiment-runner service.
"""

from .states import DensityOperator, PureState, bell, eta_state, mcs, werner, werner_mixture
from .channels import QuasiChannel, quasi_apply_exact
from .protocols import coherence_vrd, entanglement_vrd, one_shot_rate, vrd_cost
from .estimator import EstimateResult, Observable, SamplingPlan, estimate, shots_for_accuracy
from .metrics import fidelity_to_pure, negativity, qfi, rel_entropy_coherence

__version__ = "0.1.0"

__all__ = [
    "DensityOperator",
    "PureState",
    "bell",
    "eta_state",
    "mcs",
    "werner",
    "werner_mixture",
    "QuasiChannel",
    "quasi_apply_exact",
    "coherence_vrd",
    "entanglement_vrd",
    "one_shot_rate",
    "vrd_cost",
    "EstimateResult",
    "Observable",
    "SamplingPlan",
    "estimate",
    "shots_for_accuracy",
    "fidelity_to_pure",
    "negativity",
    "qfi",
    "rel_entropy_coherence",
    "__version__",
]
