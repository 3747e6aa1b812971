"""Single-particle, bipartite and tripartite quantities of qubit states.

Every function takes a state object (``PureState``/``DensityMatrix``), a ket
or a density matrix as a numpy array.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    SIGMA_PLUS,
    SIGMA_Z,
    PSD_CLIP_TOL,
    DimensionError,
    hs_distance,
    herm_eig,
    partial_trace,
    partial_transpose,
    qubit_count,
    sigma_y_power,
)
from .states import DensityMatrix, PureState, density_of, ket_of

ETA_NOISE_TOL = 1e-8
# eigenvalues of rho at or below this are treated as exact zeros
RANK_TOL = 1e-14
_YY = sigma_y_power(2)


class NumericalNoiseWarning(UserWarning):
    """A quantity bounded below by zero came out slightly negative."""


def spin_flip(state):
    """Spin-flipped state.

    A ket ``psi`` maps to ``sigma_y^{⊗n} psi*``; a density matrix maps to
    ``sigma_y^{⊗n} rho* sigma_y^{⊗n}``. The result has the same kind as the
    input (state objects in, state objects out).
    """
    if isinstance(state, PureState):
        return PureState(state.n_qubits, _flip_ket(state.amplitudes))
    if isinstance(state, DensityMatrix):
        return DensityMatrix(state.n_qubits, _flip_density(state.matrix))
    arr = np.asarray(state, dtype=complex)
    return _flip_ket(arr) if arr.ndim == 1 else _flip_density(arr)


def _flip_ket(psi: np.ndarray) -> np.ndarray:
    y = sigma_y_power(qubit_count(psi.size))
    return y @ psi.conj()


def _flip_density(rho: np.ndarray) -> np.ndarray:
    y = sigma_y_power(qubit_count(rho.shape[0]))
    return y @ rho.conj() @ y


@dataclass(frozen=True)
class SingleQubitProperties:
    coherence: float
    predictability: float
    s2bar: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "s2bar", 0.5 * (self.coherence**2 + self.predictability**2)
        )


def single_qubit_properties(rho_k) -> SingleQubitProperties:
    """Coherence ``2|Tr(rho sigma_+)|`` and predictability ``|Tr(rho sigma_z)|``."""
    m = density_of(rho_k)
    if m.shape != (2, 2):
        raise DimensionError(f"expected a single-qubit state, got shape {m.shape}")
    nu = 2 * abs(np.trace(m @ SIGMA_PLUS))
    p = abs(np.trace(m @ SIGMA_Z))
    return SingleQubitProperties(float(nu), float(p))


def marginal(state, k: int) -> np.ndarray:
    m = density_of(state)
    return partial_trace(m, qubit_count(m.shape[0]), {k})


def qubit_properties(state) -> list[SingleQubitProperties]:
    m = density_of(state)
    n = qubit_count(m.shape[0])
    return [single_qubit_properties(partial_trace(m, n, {k})) for k in range(n)]


def purity(state) -> float:
    m = density_of(state)
    return float(np.sum(np.abs(m) ** 2))


def mixedness(state) -> float:
    """Linear entropy ``1 - Tr(rho^2)``."""
    return 1.0 - purity(state)


def concurrence_pure(psi) -> float:
    """``|<psi|psi~>|`` for a two-qubit ket."""
    v = ket_of(psi)
    if v.size != 4:
        raise DimensionError(f"expected a two-qubit ket, got {v.size} amplitudes")
    return float(abs(np.vdot(v, _flip_ket(v))))


def wootters_eigenvalues(rho) -> np.ndarray:
    """Descending eigenvalues of ``sqrt(rho) rho~ sqrt(rho)``.

    Their square roots are the Takagi values of ``tau = V^T (Y⊗Y) V`` where
    the columns of ``V`` are the eigenvectors of ``rho`` scaled by the square
    roots of their eigenvalues. Those are read off as the non-negative
    eigenvalues of the Hermitian dilation ``[[0, tau], [tau^H, 0]]``, which
    keeps zero eigenvalues at round-off level instead of at its square root.
    """
    return wootters_roots(rho) ** 2


def wootters_roots(rho) -> np.ndarray:
    """Square roots of :func:`wootters_eigenvalues`, in descending order."""
    m = density_of(rho)
    if m.shape != (4, 4):
        raise DimensionError(f"expected a two-qubit state, got shape {m.shape}")
    eig = herm_eig(m)
    if eig.eigenvalues[-1] < -PSD_CLIP_TOL:
        raise ValueError(f"state is not positive semidefinite ({eig.eigenvalues[-1]:.3e})")
    keep = eig.eigenvalues > RANK_TOL
    v = eig.eigenvectors[:, keep] * np.sqrt(eig.eigenvalues[keep])
    r = v.shape[1]
    out = np.zeros(4)
    if r:
        tau = v.T @ _YY @ v
        dil = np.zeros((2 * r, 2 * r), dtype=complex)
        dil[:r, r:] = tau
        dil[r:, :r] = tau.conj().T
        out[:r] = np.clip(herm_eig(dil).eigenvalues[:r], 0.0, None)
    return out


def wootters_concurrence(rho) -> float:
    """Closed-form two-qubit concurrence ``max(0, s1 - s2 - s3 - s4)``."""
    s = wootters_roots(rho)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def tangle(rho) -> float:
    """Two-qubit tangle, the squared Wootters concurrence."""
    return wootters_concurrence(rho) ** 2


def tr_rho_rhotilde(state) -> float:
    m = density_of(state)
    val = np.trace(m @ _flip_density(m))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"Tr(rho rho~) has imaginary part {val.imag:.3e}")
    return float(val.real)


def hs_to_spinflip(state) -> float:
    m = density_of(state)
    return hs_distance(m, _flip_density(m))


def indistinguishability(state) -> float:
    """``1 - D_HS(rho - rho~)^2``."""
    return 1.0 - hs_to_spinflip(state) ** 2


def i_tangle_pure(psi, k: int) -> float:
    """Tangle between qubit ``k`` and the rest of a pure state, ``2 M(rho_k)``."""
    v = ket_of(psi)
    n = qubit_count(v.size)
    if not 0 <= k < n:
        raise IndexError(f"qubit index {k} out of range for {n} qubits")
    return 2.0 * mixedness(partial_trace(np.outer(v, v.conj()), n, {k}))


@dataclass(frozen=True)
class ResidualTangleReport:
    """One-vs-rest tangles, pairwise tangles and the residual tangle.

    ``tau_123`` is the permutation-symmetrized form; ``tau_123_pivot`` keeps
    the three single-pivot values ``tau_k{ij} - tau_ki - tau_kj``.
    """

    tau_1_23: float
    tau_2_13: float
    tau_3_12: float
    tau_12: float
    tau_13: float
    tau_23: float
    tau_123: float
    tau_123_pivot: tuple[float, float, float]

    @property
    def pivot_spread(self) -> float:
        return max(abs(t - self.tau_123) for t in self.tau_123_pivot)


def residual_tangle(psi) -> ResidualTangleReport:
    v = ket_of(psi)
    if v.size != 8:
        raise DimensionError(f"expected a three-qubit ket, got {v.size} amplitudes")
    rho = np.outer(v, v.conj())
    t1, t2, t3 = (i_tangle_pure(v, k) for k in range(3))
    t12 = tangle(partial_trace(rho, 3, {0, 1}))
    t13 = tangle(partial_trace(rho, 3, {0, 2}))
    t23 = tangle(partial_trace(rho, 3, {1, 2}))
    sym = (t1 + t2 + t3 - 2 * (t12 + t13 + t23)) / 3
    pivots = (t1 - t12 - t13, t2 - t12 - t23, t3 - t13 - t23)
    return ResidualTangleReport(t1, t2, t3, t12, t13, t23, sym, pivots)


def _eta_with_flag(rho) -> tuple[float, bool]:
    m = density_of(rho)
    eta = tr_rho_rhotilde(m) + mixedness(m) - tangle(m)
    if eta < -ETA_NOISE_TOL:
        raise ValueError(f"separable uncertainty {eta:.3e} is negative beyond noise")
    if eta < 0:
        return 0.0, True
    return eta, False


def separable_uncertainty(rho) -> float:
    """``Tr(rho rho~) + M(rho) - tau(rho)`` for a two-qubit state.

    Values in ``[-1e-8, 0)`` are reported as 0 with a
    ``NumericalNoiseWarning``; more negative values raise ``ValueError``.
    """
    eta, clipped = _eta_with_flag(rho)
    if clipped:
        warnings.warn("separable uncertainty clipped to 0", NumericalNoiseWarning, stacklevel=2)
    return eta


def ppt_min_eigenvalue(rho) -> float:
    """Smallest eigenvalue of the partial transpose on the second qubit."""
    m = density_of(rho)
    if m.shape != (4, 4):
        raise DimensionError(f"expected a two-qubit state, got shape {m.shape}")
    return float(herm_eig(partial_transpose(m, 2, 1)).eigenvalues[-1])


def is_ppt(rho, tol: float = 1e-9) -> bool:
    return ppt_min_eigenvalue(rho) >= -tol


@dataclass(frozen=True)
class MeasureSet:
    n_qubits: int
    mixedness: float
    purity: float
    tr_rho_rhotilde: float
    indistinguishability: float
    hs_to_spinflip: float
    per_qubit: tuple[SingleQubitProperties, ...]
    tangle: float | None = None
    separable_uncertainty: float | None = None
    eta_clipped: bool = False
    ppt_min_eig: float | None = None

    def as_dict(self) -> dict:
        d = {
            "n_qubits": self.n_qubits,
            "mixedness": self.mixedness,
            "purity": self.purity,
            "tr_rho_rhotilde": self.tr_rho_rhotilde,
            "indistinguishability": self.indistinguishability,
            "hs_to_spinflip": self.hs_to_spinflip,
        }
        if self.tangle is not None:
            d["tangle"] = self.tangle
            d["eta"] = self.separable_uncertainty
            d["eta_clipped"] = self.eta_clipped
            d["ppt_min_eig"] = self.ppt_min_eig
        d["per_qubit"] = [
            {"coherence": q.coherence, "predictability": q.predictability, "s2bar": q.s2bar}
            for q in self.per_qubit
        ]
        return d


def measure_set(state) -> MeasureSet:
    """Evaluate every measure that applies to ``state``."""
    m = density_of(state)
    n = qubit_count(m.shape[0])
    mix = mixedness(m)
    hs = hs_to_spinflip(m)
    extra = {}
    if n == 2:
        eta, clipped = _eta_with_flag(m)
        extra = dict(
            tangle=tangle(m),
            separable_uncertainty=eta,
            eta_clipped=clipped,
            ppt_min_eig=ppt_min_eigenvalue(m),
        )
    return MeasureSet(
        n_qubits=n,
        mixedness=mix,
        purity=1.0 - mix,
        tr_rho_rhotilde=tr_rho_rhotilde(m),
        indistinguishability=1.0 - hs**2,
        hs_to_spinflip=hs,
        per_qubit=tuple(qubit_properties(m)),
        **extra,
    )
