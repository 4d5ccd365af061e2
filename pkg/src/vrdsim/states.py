"""State containers and constructors for every state the protocols use."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg

__all__ = [
    "PureState",
    "DensityOperator",
    "basis_state",
    "pair_superposition",
    "mcs",
    "bell",
    "werner",
    "werner_mixture",
    "eta_state",
    "isotropic",
    "maximally_mixed",
    "QUQUART_DIMS",
    "ququart_index",
]

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
MIN_EIG_TOL = -1e-9
NORM_TOL = 1e-12

# Ququart encoding on polarization x path: |0> = |H,v>, |1> = |V,v>,
# |2> = |H,h>, |3> = |V,h>.  Subsystem 0 is the path (v=0, h=1), subsystem 1
# the polarization (H=0, V=1), so the composite index is 2*path + pol.
QUQUART_DIMS = (2, 2)
_POL_INDEX = {"H": 0, "V": 1}
_PATH_INDEX = {"v": 0, "h": 1}


def ququart_index(pol: str, path: str) -> int:
    return 2 * _PATH_INDEX[path] + _POL_INDEX[pol]


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector over a labeled tensor-product space."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if not np.isfinite(amp).all():
            raise ValueError("state amplitudes must be finite")
        dims = tuple(int(d) for d in self.dims)
        if int(np.prod(dims)) != amp.size:
            raise ValueError(f"dims {dims} inconsistent with vector length {amp.size}")
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state vector norm {norm} deviates from 1 beyond {NORM_TOL}")
        object.__setattr__(self, "amplitudes", _freeze(amp))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_density(self) -> "DensityOperator":
        return DensityOperator(self.projector(), self.dims, validate=False)

    def with_dims(self, dims: tuple[int, ...]) -> "PureState":
        return PureState(self.amplitudes, dims)

    def tensor(self, other: "PureState") -> "PureState":
        return PureState(np.kron(self.amplitudes, other.amplitudes), self.dims + other.dims)

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite matrix over labeled subsystems."""

    matrix: np.ndarray
    dims: tuple[int, ...]
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if not np.isfinite(m).all():
            raise ValueError("density matrix entries must be finite")
        dims = tuple(int(d) for d in self.dims)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if int(np.prod(dims)) != m.shape[0]:
            raise ValueError(f"dims {dims} inconsistent with matrix dimension {m.shape[0]}")
        if self.validate:
            asym = linalg.max_asymmetry(m)
            if asym > HERMITICITY_TOL:
                raise ValueError(f"density matrix not Hermitian: max asymmetry {asym:.3e}")
            tr = complex(np.trace(m))
            if abs(tr - 1.0) > TRACE_TOL:
                raise ValueError(f"density matrix trace {tr} deviates from 1 beyond {TRACE_TOL}")
            w, _ = linalg.hermitian_eig(m, hermiticity_tol=HERMITICITY_TOL)
            if w[-1] < MIN_EIG_TOL:
                raise ValueError(f"density matrix has negative eigenvalue {w[-1]:.3e}")
        object.__setattr__(self, "matrix", _freeze(m))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def with_dims(self, dims: tuple[int, ...]) -> "DensityOperator":
        return DensityOperator(self.matrix, dims, validate=False)

    def tensor(self, other: "DensityOperator") -> "DensityOperator":
        return DensityOperator(np.kron(self.matrix, other.matrix), self.dims + other.dims, validate=False)

    def partial_transpose(self, subsystem: int) -> np.ndarray:
        return linalg.partial_transpose(self.matrix, self.dims, subsystem)

    def partial_trace(self, keep: tuple[int, ...]) -> "DensityOperator":
        keep_sorted = tuple(sorted(set(int(k) for k in keep)))
        reduced = linalg.partial_trace(self.matrix, self.dims, keep_sorted)
        return DensityOperator(reduced, tuple(self.dims[k] for k in keep_sorted), validate=False)

    def expectation(self, observable: np.ndarray) -> float:
        return float(np.trace(np.asarray(observable) @ self.matrix).real)


def _phase_fixed(amp: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first nonzero amplitude is real positive."""
    amp = np.asarray(amp, dtype=complex)
    for a in amp:
        if abs(a) > 1e-14:
            return amp * (abs(a) / a)
    return amp


def basis_state(index: int, dims: tuple[int, ...] | int) -> PureState:
    dims = (dims,) if isinstance(dims, int) else tuple(dims)
    d = int(np.prod(dims))
    if not 0 <= index < d:
        raise ValueError(f"basis index {index} out of range for dimension {d}")
    amp = np.zeros(d, dtype=complex)
    amp[index] = 1.0
    return PureState(amp, dims)


def pair_superposition(d: int, i: int, j: int, sign: int = +1) -> PureState:
    """(|i> + sign |j>)/sqrt(2) in dimension d."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    amp = np.zeros(d, dtype=complex)
    amp[i] = 1.0 / np.sqrt(2.0)
    amp[j] = sign / np.sqrt(2.0)
    return PureState(_phase_fixed(amp), (d,))


def mcs(d: int) -> PureState:
    """Maximally coherent state: uniform amplitude over all d basis states."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    amp = np.full(d, 1.0 / np.sqrt(d), dtype=complex)
    return PureState(amp, (d,))


_BELL_AMPLITUDES = {
    "phi_plus": np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0),
    "phi_minus": np.array([1.0, 0.0, 0.0, -1.0]) / np.sqrt(2.0),
    "psi_plus": np.array([0.0, 1.0, 1.0, 0.0]) / np.sqrt(2.0),
    "psi_minus": np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0),
}


def bell(label: str) -> PureState:
    """Bell state by label: phi_plus, phi_minus, psi_plus or psi_minus."""
    try:
        amp = _BELL_AMPLITUDES[label]
    except KeyError:
        raise ValueError(f"unknown Bell state label {label!r}") from None
    return PureState(_phase_fixed(amp), (2, 2))


def _check_xi(xi: float) -> float:
    xi = float(xi)
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"Werner parameter must lie in [0, 1], got {xi}")
    return xi


def werner(xi: float) -> DensityOperator:
    """Werner family: xi * psi_minus projector + (1-xi) * I/4."""
    xi = _check_xi(xi)
    m = xi * bell("psi_minus").projector() + (1.0 - xi) * np.eye(4) / 4.0
    return DensityOperator(m, (2, 2))


def werner_mixture(xi: float) -> list[tuple[float, PureState]]:
    """Werner state as a mixture of four pure states (zero-weight terms dropped)."""
    xi = _check_xi(xi)
    terms = [
        ((1.0 + 3.0 * xi) / 4.0, bell("psi_minus")),
        ((1.0 - xi) / 4.0, bell("psi_plus")),
        ((1.0 - xi) / 4.0, basis_state(0, (2, 2))),
        ((1.0 - xi) / 4.0, basis_state(3, (2, 2))),
    ]
    return [(w, s) for w, s in terms if w > 0.0]


def eta_state() -> DensityOperator:
    """Replacement-channel output (I - psi_minus projector)/3."""
    m = (np.eye(4) - bell("psi_minus").projector()) / 3.0
    return DensityOperator(m, (2, 2))


def isotropic(xi: float) -> DensityOperator:
    """Noisy Bell family xi * phi_plus projector + (1-xi) * I/4."""
    xi = _check_xi(xi)
    m = xi * bell("phi_plus").projector() + (1.0 - xi) * np.eye(4) / 4.0
    return DensityOperator(m, (2, 2))


def maximally_mixed(dims: tuple[int, ...] | int) -> DensityOperator:
    dims = (dims,) if isinstance(dims, int) else tuple(dims)
    d = int(np.prod(dims))
    return DensityOperator(np.eye(d) / d, dims)
