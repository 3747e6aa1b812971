"""Independent reference computations used to cross-check the library.

Each oracle takes a different route from the production code: explicit index
loops instead of reshapes, LAPACK instead of the Jacobi sweeps, the
non-Hermitian product for the Wootters spectrum, and a generic SDP solver
for the best separable approximation.
"""

from __future__ import annotations

import itertools

import warnings

import numpy as np

SY = np.array([[0, -1j], [1j, 0]])


def kron_loops(a, b):
    a, b = np.asarray(a), np.asarray(b)
    da, db = a.shape[0], b.shape[0]
    out = np.zeros((da * db, da * db), dtype=complex)
    for i, j, k, l in itertools.product(range(da), range(da), range(db), range(db)):
        out[i * db + k, j * db + l] = a[i, j] * b[k, l]
    return out


def bits(index: int, n: int) -> tuple[int, ...]:
    """Bits of ``index``, qubit 0 first (most significant)."""
    return tuple((index >> (n - 1 - q)) & 1 for q in range(n))


def partial_trace_loops(m, n: int, keep) -> np.ndarray:
    keep = sorted(keep)
    out = np.zeros((2 ** len(keep),) * 2, dtype=complex)
    for i in range(2**n):
        for j in range(2**n):
            bi, bj = bits(i, n), bits(j, n)
            if any(bi[q] != bj[q] for q in range(n) if q not in keep):
                continue
            r = int("".join(str(bi[q]) for q in keep), 2)
            c = int("".join(str(bj[q]) for q in keep), 2)
            out[r, c] += m[i, j]
    return out


def partial_transpose_loops(m, n: int, q: int) -> np.ndarray:
    out = np.zeros_like(m, dtype=complex)
    for i in range(2**n):
        for j in range(2**n):
            bi, bj = list(bits(i, n)), list(bits(j, n))
            bi[q], bj[q] = bj[q], bi[q]
            out[int("".join(map(str, bi)), 2), int("".join(map(str, bj)), 2)] = m[i, j]
    return out


def sy_power(n: int) -> np.ndarray:
    out = np.eye(1)
    for _ in range(n):
        out = np.kron(out, SY)
    return out


def spin_flip_oracle(rho) -> np.ndarray:
    y = sy_power(int(np.log2(rho.shape[0])))
    return y @ rho.conj() @ y


def wootters_oracle(rho) -> float:
    """Concurrence from the non-Hermitian product ``rho rho~``."""
    mu = np.sort(np.abs(np.linalg.eigvals(rho @ spin_flip_oracle(rho))))[::-1]
    s = np.sqrt(mu)
    return max(0.0, s[0] - s[1] - s[2] - s[3])


def mixedness_oracle(rho) -> float:
    return 1.0 - float(np.real(np.trace(rho @ rho)))


def ppt_min_oracle(rho) -> float:
    return float(np.linalg.eigvalsh(partial_transpose_loops(rho, 2, 1))[0])


def qubit_info_oracle(rho_k) -> float:
    """``(nu^2 + p^2) / 2`` from Pauli expectation values (Bloch vector)."""
    sx = np.array([[0, 1], [1, 0]])
    sz = np.diag([1, -1])
    x = np.real(np.trace(rho_k @ sx))
    y = np.real(np.trace(rho_k @ SY))
    z = np.real(np.trace(rho_k @ sz))
    return 0.5 * (x * x + y * y + z * z)


def bsa_sdp(rho) -> float | None:
    """Least entangled weight ``1 - lambda`` from a generic SDP solver.

    Minimizes ``Tr X`` over ``X >= 0`` with ``rho - X`` PSD and PPT. Returns
    ``None`` when cvxpy is unavailable.
    """
    try:
        import cvxpy as cp
    except ImportError:
        return None
    x = cp.Variable((4, 4), hermitian=True)
    s = rho - x
    prob = cp.Problem(
        cp.Minimize(cp.real(cp.trace(x))),
        [x >> 0, s >> 0, cp.partial_transpose(s, [2, 2], 1) >> 0],
    )
    with warnings.catch_warnings():
        # inaccuracy on rank-deficient inputs is expected and bounded by callers
        warnings.simplefilter("ignore", UserWarning)
        try:
            prob.solve(solver=cp.CLARABEL)
        except Exception:
            prob.solve(solver=cp.SCS, eps=1e-10, max_iters=200000)
    return float(prob.value)


def mean_abs_cos_on_sphere(points: int = 200001) -> float:
    """Haar average of ``|cos theta|`` over the Bloch sphere by quadrature."""
    theta = np.linspace(0.0, np.pi, points)
    f = np.abs(np.cos(theta)) * np.sin(theta) / 2
    return float(np.sum((f[1:] + f[:-1]) / 2 * np.diff(theta)))


def random_form15_params(seed, max_tries=1000):
    """Rejection sampler for valid canonical-form parameters.

    ``omega`` is uniform on the simplex; ``a``, ``e``, ``f`` are complex with
    magnitudes scaled to the populations, and draws whose matrix is not
    positive semidefinite are discarded.
    """
    from complementarity.states import Form15Params, make_rng

    rng = make_rng(*seed) if isinstance(seed, tuple) else make_rng(seed)
    for _ in range(max_tries):
        w = rng.dirichlet(np.ones(4))
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        z *= rng.uniform(0, 1, 3) / np.abs(z)
        a = z[0] * np.sqrt(min(w)) / 2
        e = z[1] * np.sqrt(w[0] * w[3])
        f = z[2] * np.sqrt(w[1] * w[2])
        p = Form15Params(tuple(w), a, e, f)
        if np.linalg.eigvalsh(p.matrix())[0] >= 1e-12:
            return p
    raise RuntimeError("no valid parameters found")


def perturbed_decomposition(rho, seed, scale=0.05, max_tries=200):
    """A feasible, generally suboptimal decomposition of an entangled ``rho``.

    Starting from the solver's optimum, the entangled vector is nudged within
    the support and the separable weight pulled below its feasible maximum
    for that vector. Feasibility (PSD and PPT of the separable part) is
    checked with numpy, independently of the solver's certificates.
    """
    from complementarity.lewenstein_sanpera import (
        LSDecomposition,
        best_separable_approximation,
        max_separable_weight,
    )
    from complementarity.states import make_rng

    rng = make_rng(*seed) if isinstance(seed, tuple) else make_rng(seed)
    w, v = np.linalg.eigh(rho)
    if np.sum(w > 1e-12) == 2:
        return _rank_two_mixture(rho, v[:, w > 1e-12], rng.uniform())
    opt = best_separable_approximation(rho)
    if opt.psi_e is None or opt.rho_s is None:
        return None
    vs = v[:, w > 1e-12]
    r = vs.shape[1]

    def feasible(lam, psi):
        rho_s = (rho - (1 - lam) * np.outer(psi, psi.conj())) / lam
        ok = np.linalg.eigvalsh(rho_s)[0] >= -1e-9 and ppt_min_oracle(rho_s) >= -1e-9
        return LSDecomposition(lam, psi, rho_s) if ok else None

    for k in range(max_tries):
        psi = opt.psi_e
        if k % 2 == 0:
            c = rng.standard_normal(r) + 1j * rng.standard_normal(r)
            psi = psi + scale * rng.uniform() * (vs @ c) / np.linalg.norm(c)
            psi /= np.linalg.norm(psi)
        lam_max = max_separable_weight(rho, psi)
        if lam_max is None or not 0 < lam_max < 1:
            continue
        out = feasible(lam_max * (1 - scale * rng.uniform()), psi)
        if out is not None:
            return out
    return None


def _rank_two_mixture(rho, vs, mu):
    """Rank-2 decomposition whose separable part mixes the two product
    vectors of the support with weights ``mu`` and ``1 - mu``."""
    from complementarity.lewenstein_sanpera import LSDecomposition

    yy = sy_power(2)
    a, b = vs[:, 0], vs[:, 1]
    # (x a + b)^T (Y⊗Y) (x a + b) = 0 is quadratic in x
    roots = np.roots([a @ yy @ a, 2 * (a @ yy @ b), b @ yy @ b])
    if len(roots) != 2:
        return None
    prods = [x * a + b for x in roots]
    prods = [p / np.linalg.norm(p) for p in prods]
    rho_s = mu * np.outer(prods[0], prods[0].conj()) + (1 - mu) * np.outer(prods[1], prods[1].conj())
    # largest lam with rho - lam rho_s still PSD, computed in the support
    r = vs.conj().T @ rho @ vs
    s = vs.conj().T @ rho_s @ vs
    lr = np.linalg.cholesky(r)
    li = np.linalg.inv(lr)
    lam = 1 / np.linalg.eigvalsh(li @ s @ li.conj().T)[-1]
    if not 0 < lam < 1:
        return None
    rest = rho - lam * rho_s
    ew, ev = np.linalg.eigh(rest)
    psi = ev[:, -1]
    if ew[-2] > 1e-9:
        return None
    return LSDecomposition(lam, psi, rho_s)
