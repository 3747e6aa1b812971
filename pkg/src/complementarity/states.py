"""State types, named families, random samplers and the JSON state format.

Random samplers draw from ``numpy``'s PCG64 generator seeded through
``SeedSequence``. A sample is identified by ``(seed, index)``: the index is
placed in the sequence's spawn key, so sample ``i`` of a batch is the same
no matter how the batch is split across workers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .linalg import DimensionError, as_matrix, herm_eig, qubit_count

NORM_TOL = 1e-10
STATE_TOL = 1e-9
MAX_QUBITS = 5


class StateValidationError(ValueError):
    """A state failed one of its invariants.

    ``invariant`` names the failed check: one of ``"shape"``, ``"norm"``,
    ``"hermitian"``, ``"trace"``, ``"psd"`` or ``"parameters"``.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant} invariant violated: {message}")
        self.invariant = invariant


@dataclass(frozen=True)
class PureState:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != 1 or self.n_qubits < 1 or amp.size != 2**self.n_qubits:
            raise StateValidationError(
                "shape", f"{amp.shape} amplitudes for {self.n_qubits} qubits"
            )
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise StateValidationError("norm", f"|psi| = {float(norm):.12g}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> "PureState":
        amp = np.asarray(amplitudes, dtype=complex)
        if normalize:
            amp = amp / np.linalg.norm(amp)
        return cls(qubit_count(amp.size), amp)

    def density(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(self.n_qubits, np.outer(a, a.conj()))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True)
class DensityMatrix:
    n_qubits: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        try:
            m = as_matrix(self.matrix)
        except DimensionError as err:
            raise StateValidationError("shape", str(err)) from None
        if self.n_qubits < 1 or m.shape[0] != 2**self.n_qubits:
            raise StateValidationError(
                "shape", f"dimension {m.shape[0]} for {self.n_qubits} qubits"
            )
        herm = np.abs(m - m.conj().T).max()
        if herm > STATE_TOL:
            raise StateValidationError("hermitian", f"max |rho - rho^H| = {herm:.3e}")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > STATE_TOL:
            raise StateValidationError("trace", f"Tr(rho) = {float(tr):.12g}")
        lo = herm_eig(m).eigenvalues[-1]
        if lo < -STATE_TOL:
            raise StateValidationError("psd", f"min eigenvalue {lo:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, matrix) -> "DensityMatrix":
        try:
            m = as_matrix(matrix)
            n = qubit_count(m.shape[0])
        except DimensionError as err:
            raise StateValidationError("shape", str(err)) from None
        return cls(n, m)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def density_of(state) -> np.ndarray:
    """Density matrix of a state given as a state object, ket or matrix."""
    if isinstance(state, DensityMatrix):
        return state.matrix
    if isinstance(state, PureState):
        a = state.amplitudes
        return np.outer(a, a.conj())
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return np.outer(arr, arr.conj())
    return as_matrix(arr)


def ket_of(state) -> np.ndarray:
    if isinstance(state, PureState):
        return state.amplitudes
    arr = np.asarray(state, dtype=complex)
    if arr.ndim != 1:
        raise DimensionError("expected a state vector")
    return arr


# --- named pure states -----------------------------------------------------

class Bell(str, Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


_BELL_AMPLITUDES = {
    Bell.PHI_PLUS: (1, 0, 0, 1),
    Bell.PHI_MINUS: (1, 0, 0, -1),
    Bell.PSI_PLUS: (0, 1, 1, 0),
    Bell.PSI_MINUS: (0, 1, -1, 0),
}


def basis(bitstring: str) -> PureState:
    if not bitstring or set(bitstring) - {"0", "1"} or len(bitstring) > MAX_QUBITS:
        raise ValueError(f"malformed bitstring {bitstring!r}")
    n = len(bitstring)
    amp = np.zeros(2**n, dtype=complex)
    amp[int(bitstring, 2)] = 1.0
    return PureState(n, amp)


def bell(which: str | Bell = Bell.PHI_PLUS) -> PureState:
    """Bell states with Φ± = (|00> ± |11>)/√2 and Ψ± = (|01> ± |10>)/√2."""
    try:
        key = Bell(which)
    except ValueError:
        raise ValueError(f"unknown Bell state {which!r}") from None
    amp = np.array(_BELL_AMPLITUDES[key], dtype=complex) / math.sqrt(2)
    return PureState(2, amp)


def ghz(n: int) -> PureState:
    if not 2 <= n <= MAX_QUBITS:
        raise ValueError(f"ghz needs 2..{MAX_QUBITS} qubits, got {n}")
    amp = np.zeros(2**n, dtype=complex)
    amp[0] = amp[-1] = 1 / math.sqrt(2)
    return PureState(n, amp)


def w(n: int) -> PureState:
    if not 2 <= n <= MAX_QUBITS:
        raise ValueError(f"w needs 2..{MAX_QUBITS} qubits, got {n}")
    amp = np.zeros(2**n, dtype=complex)
    amp[[1 << k for k in range(n)]] = 1 / math.sqrt(n)
    return PureState(n, amp)


def named_state(name: str) -> PureState:
    """Parse ``basis:0110``, ``bell:phi+``, ``ghz:3`` or ``w:3``."""
    kind, _, arg = name.partition(":")
    kind = kind.strip().lower()
    if kind == "basis":
        return basis(arg)
    if kind == "bell":
        return bell(arg or Bell.PHI_PLUS)
    if kind in ("ghz", "w"):
        try:
            n = int(arg)
        except ValueError:
            raise ValueError(f"{kind} needs an integer qubit count, got {arg!r}") from None
        return ghz(n) if kind == "ghz" else w(n)
    raise ValueError(f"unknown state name {name!r}")


# --- mixed families --------------------------------------------------------

@dataclass(frozen=True)
class WernerParams:
    lam: float
    bell_choice: Bell = Bell.PHI_PLUS

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise StateValidationError("parameters", f"lambda = {self.lam} outside [0, 1]")
        object.__setattr__(self, "bell_choice", Bell(self.bell_choice))


@dataclass(frozen=True)
class MEMSParams:
    x1: float
    x2: float

    def __post_init__(self):
        if min(self.x1, self.x2) < 0 or max(self.x1, self.x2) > 1:
            raise StateValidationError("parameters", f"x1, x2 = {self.x1}, {self.x2} outside [0, 1]")
        if self.x1 + self.x2 > 1 + 1e-12:
            raise StateValidationError("parameters", f"x1 + x2 = {self.x1 + self.x2} > 1")


@dataclass(frozen=True)
class Form15Params:
    omega: tuple[float, float, float, float]
    a: complex = 0.0
    e: complex = 0.0
    f: complex = 0.0

    def __post_init__(self):
        om = tuple(float(x) for x in self.omega)
        if len(om) != 4:
            raise StateValidationError("parameters", "omega needs four entries")
        if min(om) < 0 or max(om) > 1 or abs(sum(om) - 1) > STATE_TOL:
            raise StateValidationError("parameters", f"omega = {om} is not a probability vector")
        object.__setattr__(self, "omega", om)
        for k in ("a", "e", "f"):
            object.__setattr__(self, k, complex(getattr(self, k)))

    def matrix(self) -> np.ndarray:
        w1, w2, w3, w4 = self.omega
        a, e, f = self.a, self.e, self.f
        ac = a.conjugate()
        return np.array(
            [
                [w1, a, a, e],
                [ac, w2, f, a],
                [ac, f.conjugate(), w3, a],
                [e.conjugate(), ac, ac, w4],
            ],
            dtype=complex,
        )


def werner(params: WernerParams | float, bell_choice: str | Bell = Bell.PHI_PLUS) -> DensityMatrix:
    """``lam |Bell><Bell| + (1 - lam) I/4``."""
    if not isinstance(params, WernerParams):
        params = WernerParams(float(params), bell_choice)
    b = bell(params.bell_choice).amplitudes
    m = params.lam * np.outer(b, b.conj()) + (1 - params.lam) / 4 * np.eye(4)
    return DensityMatrix(2, m)


def mems(params: MEMSParams | float, x2: float | None = None) -> DensityMatrix:
    if not isinstance(params, MEMSParams):
        params = MEMSParams(float(params), float(x2))
    x1, x2 = params.x1, params.x2
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0], m[3, 3] = x1, x2
    m[0, 3] = m[3, 0] = math.sqrt(x1 * x2)
    m[2, 2] = max(0.0, 1 - x1 - x2)
    return DensityMatrix(2, m)


def form15_state(params: Form15Params) -> DensityMatrix:
    """State with equal single-coherence entries ``a`` and corner/inner
    coherences ``e``, ``f``. Parameters giving a non-positive matrix are
    rejected rather than projected."""
    return DensityMatrix(2, params.matrix())


# --- sampling --------------------------------------------------------------

def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator for ``seed`` and an optional stream path.

    The stream path (for example a sample index) becomes the spawn key of the
    ``SeedSequence``, giving independent, reproducible substreams.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.PCG64(ss))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, tuple):
        return make_rng(*seed)
    return make_rng(seed)


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_pure(n: int, seed=0) -> PureState:
    """Haar-random pure state: a normalized vector of complex Gaussians.

    ``seed`` is an int, a ``(seed, index, ...)`` tuple, or a Generator.
    """
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in 1..{MAX_QUBITS}, got {n}")
    v = _ginibre(_rng(seed), 2**n, 1)[:, 0]
    return PureState(n, v / np.linalg.norm(v))


def random_mixed(n: int, rank: int, seed=0) -> DensityMatrix:
    """Induced-measure random state ``G G^H / Tr(G G^H)`` with ``G`` of shape
    ``(2**n, rank)``."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in 1..{MAX_QUBITS}, got {n}")
    if not 1 <= rank <= 2**n:
        raise ValueError(f"rank must be in 1..{2**n}, got {rank}")
    g = _ginibre(_rng(seed), 2**n, rank)
    m = g @ g.conj().T
    return DensityMatrix(n, m / np.trace(m).real)


def random_product(n: int, seed=0) -> PureState:
    """Tensor product of ``n`` independent Haar-random qubit states."""
    rng = _rng(seed)
    out = np.ones(1, dtype=complex)
    for _ in range(n):
        v = _ginibre(rng, 2, 1)[:, 0]
        out = np.kron(out, v / np.linalg.norm(v))
    return PureState(n, out)


def random_local_unitary(n: int, seed=0) -> np.ndarray:
    """Tensor product of ``n`` Haar-random 2x2 unitaries."""
    rng = _rng(seed)
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        q, r = np.linalg.qr(_ginibre(rng, 2, 2))
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        out = np.kron(out, q)
    return out


# --- file format -----------------------------------------------------------

def state_to_json(state: PureState | DensityMatrix) -> str:
    if isinstance(state, PureState):
        data = state.amplitudes
        kind = "pure"
    else:
        data = state.matrix.reshape(-1)
        kind = "density"
    payload = {
        "kind": kind,
        "n_qubits": state.n_qubits,
        "data": [[float(z.real), float(z.imag)] for z in data],
    }
    return json.dumps(payload)


def state_from_json(text: str) -> PureState | DensityMatrix:
    """Parse and validate a state document.

    Raises ``StateValidationError`` naming the failed invariant, or
    ``ValueError`` when the document itself is malformed.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(f"state file is not valid JSON: {err}") from None
    if not isinstance(doc, dict):
        raise ValueError("state file must hold a JSON object")
    missing = {"kind", "n_qubits", "data"} - doc.keys()
    if missing:
        raise ValueError(f"state file is missing fields: {sorted(missing)}")
    kind, n = doc["kind"], doc["n_qubits"]
    if not isinstance(n, int) or not 1 <= n <= MAX_QUBITS:
        raise StateValidationError("shape", f"n_qubits = {n!r}")
    try:
        data = np.array([complex(re, im) for re, im in doc["data"]])
    except (TypeError, ValueError):
        raise ValueError("data must be a list of [re, im] pairs") from None
    d = 2**n
    if kind == "pure":
        if data.size != d:
            raise StateValidationError("shape", f"{data.size} amplitudes for {n} qubits")
        return PureState(n, data)
    if kind == "density":
        if data.size != d * d:
            raise StateValidationError("shape", f"{data.size} entries for a {d}x{d} matrix")
        return DensityMatrix(n, data.reshape(d, d))
    raise ValueError(f"unknown state kind {kind!r}")


def load_state(path: str | Path) -> PureState | DensityMatrix:
    return state_from_json(Path(path).read_text())


def save_state(state: PureState | DensityMatrix, path: str | Path) -> None:
    Path(path).write_text(state_to_json(state) + "\n")


def werner_grid(step: float) -> Sequence[float]:
    count = round(1 / step)
    if count < 1 or abs(count * step - 1) > 1e-9:
        raise ValueError(f"grid step {step} must divide 1")
    return [k / count for k in range(count + 1)]


def simplex_grid(step: float) -> list[tuple[float, float]]:
    count = round(1 / step)
    if count < 1 or abs(count * step - 1) > 1e-9:
        raise ValueError(f"grid step {step} must divide 1")
    return [(i / count, j / count) for i in range(count + 1) for j in range(count + 1 - i)]
