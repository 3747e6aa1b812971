"""Dense complex linear algebra for multi-qubit operators.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Qubit 0 is the
leftmost (most significant) tensor factor everywhere, so the basis index of
``|q0 q1 ... q_{n-1}>`` is the bitstring read as a binary number.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

HERMITIAN_TOL = 1e-9
PSD_CLIP_TOL = 1e-9
JACOBI_OFF_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)


class DimensionError(ValueError):
    """Raised when a matrix or vector has the wrong shape for an operation."""


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a square complex matrix, without reshaping."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def qubit_count(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if n < 0 or 1 << n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def kron(a, b) -> np.ndarray:
    """Kronecker product, ``(a⊗b)[i*db + k, j*db + l] = a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Iterable) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, as_matrix(f))
    return out


def _check_qubits(m: np.ndarray, n: int) -> None:
    if n < 1 or m.shape[0] != 2**n:
        raise DimensionError(f"matrix of dimension {m.shape[0]} is not a {n}-qubit operator")


def partial_trace(m, n: int, keep) -> np.ndarray:
    """Trace out every qubit not listed in ``keep``.

    Parameters
    ----------
    m : array_like
        Operator on ``n`` qubits, shape ``(2**n, 2**n)``.
    n : int
        Total number of qubits.
    keep : iterable of int
        Qubits to keep. The result is ordered by increasing qubit index,
        whatever order ``keep`` is given in.

    Returns
    -------
    numpy.ndarray
        Reduced operator of dimension ``2**len(keep)``.
    """
    m = as_matrix(m)
    _check_qubits(m, n)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set must be non-empty")
    if keep[0] < 0 or keep[-1] >= n:
        raise IndexError(f"qubit index out of range for {n} qubits: {keep}")
    traced = [q for q in range(n) if q not in keep]
    t = m.reshape((2,) * (2 * n))
    # row axes are 0..n-1, column axes n..2n-1
    row = list(range(n))
    col = [q + n for q in range(n)]
    for q in traced:
        col[q] = row[q]
    out_axes = [row[q] for q in keep] + [col[q] for q in keep]
    r = np.einsum(t, row + col, out_axes)
    d = 2 ** len(keep)
    return r.reshape(d, d)


def partial_transpose(m, n: int, transpose_on: int) -> np.ndarray:
    """Transpose the tensor factor belonging to qubit ``transpose_on``."""
    m = as_matrix(m)
    _check_qubits(m, n)
    q = int(transpose_on)
    if not 0 <= q < n:
        raise IndexError(f"qubit index {q} out of range for {n} qubits")
    t = m.reshape((2,) * (2 * n))
    return np.swapaxes(t, q, q + n).reshape(m.shape)


@dataclass(frozen=True)
class HermEigResult:
    """Eigenvalues in descending order and the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _hermitian_part(m: np.ndarray, tol: float) -> np.ndarray:
    dev = np.abs(m - m.conj().T).max()
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max |A - A^H| = {dev:.3e})")
    return 0.5 * (m + m.conj().T)


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi sweeps on a Hermitian matrix (modified in place)."""
    d = a.shape[0]
    v = np.eye(d, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    pairs = [(p, q) for p in range(d - 1) for q in range(p + 1, d)]
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < JACOBI_OFF_TOL * scale:
            break
        for p, q in pairs:
            apq = a[p, q]
            mag = abs(apq)
            if mag < 1e-300:
                continue
            app, aqq = a[p, p].real, a[q, q].real
            zeta = (aqq - app) / (2.0 * mag)
            t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            phase = apq / mag
            # U = diag(1, conj(phase)) @ [[c, s], [-s, c]]
            u = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
            idx = [p, q]
            a[:, idx] = a[:, idx] @ u
            a[idx, :] = u.conj().T @ a[idx, :]
            a[p, q] = a[q, p] = 0.0
            v[:, idx] = v[:, idx] @ u
    else:
        raise RuntimeError("Jacobi eigensolver did not converge")
    return np.diag(a).real.copy(), v


def herm_eig(m, tol: float = HERMITIAN_TOL) -> HermEigResult:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    The input is symmetrized as ``(m + m^H) / 2`` after checking that it is
    Hermitian to within ``tol`` per entry. Eigenvalues come back in
    descending order; ties keep the order in which the sweep left them.
    """
    a = _hermitian_part(as_matrix(m), tol).copy()
    w, v = _jacobi(a)
    order = np.argsort(-w, kind="stable")
    return HermEigResult(w[order], v[:, order])


def eigvalsh_desc(m) -> np.ndarray:
    return herm_eig(m).eigenvalues


def psd_sqrt(m, clip_tol: float = PSD_CLIP_TOL) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in ``[-clip_tol, 0)`` are treated as zero; anything more
    negative raises ``ValueError``.
    """
    res = herm_eig(m)
    w = res.eigenvalues
    if w.size and w[-1] < -clip_tol:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w[-1]:.3e})")
    v = res.eigenvectors
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return 0.5 * (root + root.conj().T)


def hs_distance(a, b) -> float:
    """Hilbert-Schmidt distance ``sqrt(Tr[(a - b)^2] / 2)``."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    d = a - b
    # Tr[d^2] = sum |d_ij|^2 for Hermitian d
    return float(np.sqrt(0.5 * np.sum(np.abs(d) ** 2)))


def sigma_y_power(n: int) -> np.ndarray:
    """``sigma_y`` tensored with itself ``n`` times."""
    return kron_all([SIGMA_Y] * n)
