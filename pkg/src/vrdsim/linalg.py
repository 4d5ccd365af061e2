"""Dense complex linear algebra for small Hilbert spaces (dimension <= 16).

Index convention used throughout the package: subsystem 0 is the most
significant digit of the composite basis index, matching ``numpy.kron``
ordering (first factor varies slowest).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "dagger",
    "max_asymmetry",
    "is_hermitian",
    "hermitian_eig",
    "trace_norm",
    "tensor",
    "partial_transpose",
    "partial_trace",
]

_MAX_SWEEPS = 60


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def max_asymmetry(m: np.ndarray) -> float:
    """Largest elementwise deviation of ``m`` from its conjugate transpose."""
    m = np.asarray(m)
    return float(np.abs(m - m.conj().T).max())


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    return max_asymmetry(m) <= tol


def _check_square(m: np.ndarray) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    return a


def hermitian_eig(m: np.ndarray, hermiticity_tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with the real eigenvalues sorted
    in descending order and the matching eigenvectors as columns of a unitary
    matrix, so that ``m = V @ diag(w) @ V.conj().T``.

    Raises ``ValueError`` if the input deviates from Hermiticity by more than
    ``hermiticity_tol`` (the maximum asymmetry is reported in the message).
    """
    a = _check_square(m)
    asym = max_asymmetry(a)
    if asym > hermiticity_tol:
        raise ValueError(f"matrix is not Hermitian: max asymmetry {asym:.3e} exceeds {hermiticity_tol:.1e}")
    a = (a + a.conj().T) / 2.0
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n == 1:
        return np.array([a[0, 0].real]), v

    scale = max(1.0, float(np.abs(a).max()))
    off_tol = 1e-15 * scale
    for _ in range(_MAX_SWEEPS):
        off = float(np.abs(a - np.diag(np.diag(a))).max())
        if off <= off_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= off_tol / n:
                    continue
                phase = apq / r
                # Zero the (p, q) entry: a phase rotation makes the 2x2 block
                # real symmetric, then a standard symmetric Schur rotation.
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # Unitary pivot: U[p,p]=c, U[p,q]=s, U[q,p]=-s*conj(phase), U[q,q]=c*conj(phase)
                up = c
                uqp = -s * phase.conjugate()
                uq = s
                uqq = c * phase.conjugate()
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = up * col_p + uqp * col_q
                a[:, q] = uq * col_p + uqq * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(up) * row_p + np.conj(uqp) * row_q
                a[q, :] = np.conj(uq) * row_p + np.conj(uqq) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vcol_p = v[:, p].copy()
                vcol_q = v[:, q].copy()
                v[:, p] = up * vcol_p + uqp * vcol_q
                v[:, q] = uq * vcol_p + uqq * vcol_q

    w = np.real(np.diag(a))
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values, tr sqrt(m^dag m)."""
    a = _check_square(m)
    w, _ = hermitian_eig(a.conj().T @ a)
    return float(np.sqrt(np.clip(w, 0.0, None)).sum())


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more operators (first factor most significant)."""
    if not ops:
        raise ValueError("tensor() requires at least one operator")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def _check_dims(m: np.ndarray, dims: tuple[int, ...]) -> None:
    d = int(np.prod(dims))
    if m.shape != (d, d):
        raise ValueError(f"matrix shape {m.shape} inconsistent with subsystem dims {dims}")


def partial_transpose(m: np.ndarray, dims: tuple[int, ...], subsystem: int) -> np.ndarray:
    """Transpose the chosen tensor factor only, leaving the others untouched."""
    a = _check_square(m)
    dims = tuple(int(d) for d in dims)
    _check_dims(a, dims)
    n = len(dims)
    if not 0 <= subsystem < n:
        raise ValueError(f"subsystem {subsystem} out of range for dims {dims}")
    arr = a.reshape(dims + dims)
    arr = arr.swapaxes(subsystem, n + subsystem)
    d = int(np.prod(dims))
    return arr.reshape(d, d)


def partial_trace(m: np.ndarray, dims: tuple[int, ...], keep: tuple[int, ...]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep`` (order preserved)."""
    a = _check_square(m)
    dims = tuple(int(d) for d in dims)
    _check_dims(a, dims)
    n = len(dims)
    keep_sorted = sorted(set(int(k) for k in keep))
    if not keep_sorted:
        raise ValueError("keep must name at least one subsystem")
    if keep_sorted[0] < 0 or keep_sorted[-1] >= n:
        raise ValueError(f"keep {keep} out of range for dims {dims}")
    arr = a.reshape(dims + dims)
    remaining = n
    for ax in sorted(set(range(n)) - set(keep_sorted), reverse=True):
        arr = np.trace(arr, axis1=ax, axis2=ax + remaining)
        remaining -= 1
    d = int(np.prod([dims[k] for k in keep_sorted]))
    return arr.reshape(d, d)
