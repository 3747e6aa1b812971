"""Best separable approximation of two-qubit states.

The decomposition is ``rho = lam * rho_s + (1 - lam) |psi_e><psi_e|`` with
``rho_s`` separable and ``lam`` as large as possible. For two qubits a state
is separable exactly when it is PSD and PPT, so for a fixed ``psi_e`` the
best weight follows from two spectral conditions on
``rho - t |psi_e><psi_e|`` with ``t = 1 - lam``:

* PSD holds iff ``t <= 1 / <psi_e| rho^+ |psi_e>`` (``psi_e`` in the support);
* PPT holds iff ``f(t) = lambda_min((rho - t P)^Γ) >= 0``. ``f`` is concave
  in ``t`` and negative at ``t = 0`` for an entangled ``rho``, so Newton
  steps from the left using the supergradient ``-<v|P^Γ|v>`` approach the
  smallest root monotonically.

Choosing ``psi_e`` is nonconvex, so two routes are offered for rank 3 and 4
inputs. ``"search"`` runs pattern search over the support coefficients of
``psi_e`` with random restarts and the Newton inner step above. ``"barrier"``
instead solves the convex problem of maximizing ``Tr Y`` over ``Y`` with
``Y >= 0``, ``Y^Γ >= 0`` and ``rho - Y >= 0`` by a log-barrier interior point
method; for two qubits its optimal remainder ``rho - Y`` is rank one, which
gives ``psi_e`` directly. Pattern search can stall where the PSD and PPT
limits meet, so the barrier route is the default.

For rank 2 inputs the feasible ``psi_e`` form a set of measure zero, so the
optimum is built directly from the (at most two) product vectors in the
support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import DimensionError, herm_eig, partial_transpose, sigma_y_power
from .measures import concurrence_pure, tr_rho_rhotilde, wootters_concurrence
from .relations import RelationReport, _report
from .states import density_of, make_rng

SUPPORT_TOL = 1e-12
PPT_TOL = 1e-9
RECONSTRUCTION_TOL = 1e-8
NEWTON_TOL = 1e-13
EQ22_TOL = 1e-9
OPTIMALITY_TOL = 1e-3
_YY = sigma_y_power(2)


@dataclass(frozen=True)
class LSDecomposition:
    """``rho = lam * rho_s + (1 - lam) |psi_e><psi_e|``.

    ``psi_e`` is ``None`` when ``lam == 1`` and ``rho_s`` is ``None`` when
    ``lam == 0``. ``certificates`` holds the smallest eigenvalue of ``rho_s``
    and of its partial transpose; both nonnegative (to round-off) certify
    that ``rho_s`` is separable.
    """

    lam: float
    psi_e: np.ndarray | None
    rho_s: np.ndarray | None
    certificates: dict[str, float] = field(default_factory=dict)
    converged: bool = True
    method: str = ""

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((4, 4), dtype=complex)
        if self.rho_s is not None:
            out += self.lam * self.rho_s
        if self.psi_e is not None:
            out += (1 - self.lam) * np.outer(self.psi_e, self.psi_e.conj())
        return out

    def as_dict(self) -> dict:
        def cplx(a):
            return None if a is None else [[float(z.real), float(z.imag)] for z in np.ravel(a)]

        return {
            "lambda": self.lam,
            "psi_e": cplx(self.psi_e),
            "rho_s": cplx(self.rho_s),
            "certificates": dict(self.certificates),
            "converged": self.converged,
            "method": self.method,
        }


def _pt(m: np.ndarray) -> np.ndarray:
    """Partial transpose on the second qubit, batched over leading axes."""
    return m.reshape(m.shape[:-2] + (2, 2, 2, 2)).swapaxes(-3, -1).reshape(m.shape)


def _certify(rho_s: np.ndarray) -> dict[str, float]:
    return {
        "residual_min_eig": float(herm_eig(rho_s).eigenvalues[-1]),
        "residual_ppt_min_eig": float(herm_eig(partial_transpose(rho_s, 2, 1)).eigenvalues[-1]),
    }


def _assemble(rho: np.ndarray, t: float, psi: np.ndarray, converged: bool,
              method: str) -> LSDecomposition:
    psi = psi / np.linalg.norm(psi)
    lam = 1.0 - t
    rho_s = (rho - t * np.outer(psi, psi.conj())) / lam
    rho_s = 0.5 * (rho_s + rho_s.conj().T)
    return LSDecomposition(lam, psi, rho_s, _certify(rho_s), converged, method)


# --- inner problem: best weight for fixed psi_e ----------------------------

def _entangled_weight(a_pt, pinv, psi, max_iter: int = 60) -> np.ndarray:
    """Least feasible ``t`` for each row of ``psi`` (batched).

    Returns ``t`` in ``[0, 1]`` when feasible. Infeasible rows get a score
    above 1 that still ranks nearby points: ``1 + overshoot`` when the PPT
    root lies past the PSD limit and ``2 + |max f|`` when ``f`` never reaches
    zero.
    """
    psi = psi / np.linalg.norm(psi, axis=1, keepdims=True)
    proj = psi[:, :, None] * psi[:, None, :].conj()
    proj_pt = _pt(proj)
    t_psd = 1.0 / np.einsum("bi,ij,bj->b", psi.conj(), pinv, psi).real
    t = np.zeros(len(psi))
    out = np.full(len(psi), np.nan)
    active = np.ones(len(psi), bool)
    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        vals, vecs = np.linalg.eigh(a_pt - t[idx, None, None] * proj_pt[idx])
        f = vals[:, 0]
        v = vecs[:, :, 0]
        g = -np.einsum("bi,bij,bj->b", v.conj(), proj_pt[idx], v).real
        done = f >= -NEWTON_TOL
        stuck = ~done & (g <= 0)
        step = np.where(done | stuck, 0.0, -f / np.where(g > 0, g, 1.0))
        out[idx[done]] = t[idx[done]]
        out[idx[stuck]] = 2.0 - f[stuck]
        t[idx] += step
        over = ~done & ~stuck & (t[idx] > t_psd[idx])
        out[idx[over]] = 1.0 + t[idx[over]] - t_psd[idx[over]]
        tiny = ~done & ~stuck & ~over & (step < 1e-15)
        out[idx[tiny]] = t[idx[tiny]]
        active[idx[done | stuck | over | tiny]] = False
    out[active] = t[active]
    return np.where((out <= 1) & (out > t_psd), 1.0 + out - t_psd, out)


def max_separable_weight(rho, psi) -> float | None:
    """Largest ``lam`` with ``(rho - (1 - lam) |psi><psi|) / lam`` separable.

    Returns ``None`` when no weight below 1 works for this ``psi`` (for
    example when ``psi`` leaves the support of ``rho``). PPT inputs give 1.
    """
    m = density_of(rho)
    if _min_ppt(m) >= -PPT_TOL:
        return 1.0
    eig = herm_eig(m)
    keep = eig.eigenvalues > SUPPORT_TOL
    vs = eig.eigenvectors[:, keep]
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    if np.linalg.norm(psi - vs @ (vs.conj().T @ psi)) > 1e-9:
        return None
    pinv = (vs / eig.eigenvalues[keep]) @ vs.conj().T
    t = _entangled_weight(_pt(m), pinv, psi[None, :])[0]
    return None if t > 1 else 1.0 - float(t)


def _min_ppt(m: np.ndarray) -> float:
    return float(herm_eig(partial_transpose(m, 2, 1)).eigenvalues[-1])


# --- rank 2: product vectors in the support --------------------------------

def _product_vectors(a: np.ndarray, b: np.ndarray) -> list[np.ndarray]:
    """Product vectors ``alpha a + beta b`` (normalized, up to two).

    ``x`` is a product vector iff its 2x2 coefficient matrix is singular,
    which is a homogeneous quadratic in ``(alpha, beta)``.
    """
    def det(x):
        return x[0] * x[3] - x[1] * x[2]

    da, db = det(a), det(b)
    mid = det(a + b) - da - db
    if max(abs(da), abs(db)) < 1e-14:
        if abs(mid) < 1e-14:
            raise ValueError("support contains a continuum of product vectors")
        vecs = [a, b]
    elif abs(da) >= abs(db):
        vecs = [al * a + b for al in np.roots([da, mid, db])]
    else:
        vecs = [a + be * b for be in np.roots([db, mid, da])]
    return [v / np.linalg.norm(v) for v in vecs]


def _rank_two(m: np.ndarray, vs: np.ndarray, evals: np.ndarray) -> LSDecomposition:
    """Exact optimum for a rank-2 entangled state.

    In support coordinates ``rho`` is ``R = diag(evals)`` and a separable
    part is ``x E1 + y E2`` with ``Ei`` the product-vector projectors. The
    remainder ``R - x E1 - y E2`` must be rank one, i.e.
    ``D - x u1 - y u2 + x y w = 0`` with ``D = det R``,
    ``ui = <ei|adj R|ei>`` and ``w = |det[e1 e2]|^2``. Along this curve
    ``x + y`` peaks where ``(u2 - x w)^2 = K``, ``K = u1 u2 - w D``.
    """
    e = [vs.conj().T @ v for v in _product_vectors(vs[:, 0], vs[:, 1])]
    r = np.diag(evals).astype(complex)
    adj = np.array([[r[1, 1], -r[0, 1]], [-r[1, 0], r[0, 0]]])
    d = float(evals[0] * evals[1])
    u = [float((x.conj() @ adj @ x).real) for x in e]
    # order so that e1 gives the larger single-vector weight d / u1
    if u[0] > u[1]:
        e, u = e[::-1], u[::-1]
    w = abs(e[0][0] * e[1][1] - e[0][1] * e[1][0]) ** 2
    if w < 1e-12:
        x, y = d / u[0], 0.0
    else:
        k = max(0.0, u[0] * u[1] - w * d)
        x = min(max((u[1] - math.sqrt(k)) / w, 0.0), d / u[0])
        y = max((d - x * u[0]) / (u[1] - x * w), 0.0)
    sep = x * np.outer(e[0], e[0].conj()) + y * np.outer(e[1], e[1].conj())
    rest = herm_eig(r - sep)
    psi = vs @ rest.eigenvectors[:, 0]
    return _assemble(m, 1.0 - (x + y), psi, True, "rank2-product-vectors")


# --- rank 3 and 4: log-barrier interior point ------------------------------

def _hermitian_basis(r: int) -> np.ndarray:
    basis = []
    for i in range(r):
        e = np.zeros((r, r), dtype=complex)
        e[i, i] = 1
        basis.append(e)
    for i in range(r):
        for j in range(i + 1, r):
            e = np.zeros((r, r), dtype=complex)
            e[i, j] = e[j, i] = 1
            basis.append(e)
            e = np.zeros((r, r), dtype=complex)
            e[i, j], e[j, i] = -1j, 1j
            basis.append(e)
    return np.array(basis)


def _is_pd(m: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        return False
    return True


def _barrier(vs, evals, gap=1e-12, max_newton=100):
    """Maximize ``Tr Y`` over separable ``Y <= rho`` supported on ``vs``.

    ``Y = vs Z vs^†`` with ``Z`` an ``r x r`` Hermitian matrix. The three
    cones are ``Z``, ``diag(evals) - Z`` and ``Y^Γ``. Returns the optimal
    ``Z`` or ``None`` when the start ``Z = (min evals / 2) I`` is not
    strictly feasible (the support's complement is a product vector).
    """
    r = vs.shape[1]
    basis = _hermitian_basis(r)
    ops = [basis, -basis, _pt(np.einsum("ia,kab,jb->kij", vs, basis, vs.conj()))]
    lam = np.diag(evals).astype(complex)

    def cones(z):
        zm = np.einsum("k,kab->ab", z, basis)
        return [zm, lam - zm, _pt(vs @ zm @ vs.conj().T)]

    z = np.zeros(len(basis))
    z[:r] = evals.min() / 2
    if not _is_pd(cones(z)[2]):
        return None
    cost = -np.einsum("kii->k", basis).real
    nu = 2 * r + 4
    mu = 1.0
    while True:
        for _ in range(max_newton):
            grad = mu * cost
            hess = np.zeros((len(z), len(z)))
            for fc, ac in zip(cones(z), ops):
                g = np.einsum("ij,kjl->kil", np.linalg.inv(fc), ac)
                grad = grad - np.einsum("kii->k", g).real
                hess += np.einsum("kij,lji->kl", g, g).real
            step = -np.linalg.solve(hess, grad)
            dec = math.sqrt(max(-grad @ step, 0.0))
            a = 1.0 if dec < 0.25 else 1.0 / (1.0 + dec)
            while not all(_is_pd(f) for f in cones(z + a * step)):
                a *= 0.5
            z = z + a * step
            if dec < 1e-7:
                break
        if nu / mu < gap:
            break
        mu *= 10.0
    return np.einsum("k,kab->ab", z, basis)


# --- rank 3 and 4: pattern search ------------------------------------------

def _pattern_search(m, vs, evals, budget, seed, *, h0=0.25, coarse=1e-3,
                    hmin=1e-10, keep=4, max_sweeps=300):
    r = vs.shape[1]
    dim = 2 * r
    a_pt = _pt(m)
    pinv = (vs / evals) @ vs.conj().T
    rngs = [make_rng(seed, k) for k in range(budget)]

    def score(x):
        return _entangled_weight(a_pt, pinv, (x[:, :r] + 1j * x[:, r:]) @ vs.T)

    def run(x, fx, h, ids, stop):
        sweeps = 0
        while (h > stop).any() and sweeps < max_sweeps:
            sweeps += 1
            before = fx.copy()
            basis = np.linalg.qr(np.array([rngs[k].standard_normal((dim, dim)) for k in ids]))[0]
            live = (h > stop)[:, None]
            for j in range(dim):
                for sign in (1.0, -1.0):
                    xn = x + sign * h[:, None] * basis[:, :, j] * live
                    fn = score(xn)
                    acc = fn < fx - 1e-16
                    x = np.where(acc[:, None], xn, x)
                    fx = np.where(acc, fn, fx)
            h = np.where(before - fx > 1e-13, h, 0.5 * h)
            x /= np.linalg.norm(x, axis=1, keepdims=True)
        return x, fx, h

    ids = np.arange(budget)
    x = np.array([rngs[k].standard_normal(dim) for k in ids])
    x, fx, h = run(x, score(x), np.full(budget, h0), ids, coarse)
    top = np.lexsort((ids, fx))[:keep]
    ids = ids[top]
    x, fx, h = run(x[top], fx[top], h[top], ids, hmin)
    best = np.lexsort((ids, fx))[0]
    t = float(fx[best])
    psi = vs @ (x[best, :r] + 1j * x[best, r:])
    return t, psi, bool(h[best] <= hmin and t <= 1.0)


def best_separable_approximation(rho, budget: int = 64, seed: int = 0,
                                 method: str = "barrier") -> LSDecomposition:
    """Decomposition of a two-qubit ``rho`` with maximal separable weight.

    PPT inputs return ``lam = 1`` with ``rho_s = rho``; pure entangled inputs
    return ``lam = 0`` with ``psi_e`` the state itself; rank 2 inputs use the
    exact product-vector construction. Rank 3 and 4 inputs go to ``method``:

    ``"barrier"``
        Interior point solve of the convex formulation. Falls back to
        ``"search"`` in the measure-zero case without a strictly feasible
        start.
    ``"search"``
        ``budget`` pattern-search restarts; restart ``k`` uses random stream
        ``(seed, k)`` and the winner is the least entangled weight, ties
        going to the lowest restart index. If no restart reaches the
        feasible set, the barrier solution is returned with
        ``converged=False``.

    A ``RuntimeError`` is raised only when neither route yields a feasible
    decomposition.
    """
    if method not in ("barrier", "search"):
        raise ValueError(f"unknown method {method!r}")
    m = density_of(rho)
    if m.shape != (4, 4):
        raise DimensionError(f"expected a two-qubit state, got shape {m.shape}")
    m = 0.5 * (m + m.conj().T)
    if _min_ppt(m) >= -PPT_TOL:
        return LSDecomposition(1.0, None, m.copy(), _certify(m), True, "ppt")
    eig = herm_eig(m)
    keep = eig.eigenvalues > SUPPORT_TOL
    vs, evals = eig.eigenvectors[:, keep], eig.eigenvalues[keep]
    if vs.shape[1] == 1:
        return LSDecomposition(0.0, vs[:, 0].copy(), None, {}, True, "pure")
    if vs.shape[1] == 2:
        return _rank_two(m, vs, evals)
    if method == "barrier":
        zm = _barrier(vs, evals)
        if zm is not None:
            rest = herm_eig(vs @ (np.diag(evals) - zm) @ vs.conj().T)
            return _assemble(m, float(rest.eigenvalues[0]), rest.eigenvectors[:, 0],
                             True, "barrier")
    t, psi, converged = _pattern_search(m, vs, evals, budget, seed)
    if t > 1.0:
        # no restart reached the feasible set; the barrier answer is returned
        # flagged as not converged so the caller can tell the search failed
        zm = _barrier(vs, evals) if method == "search" else None
        if zm is None:
            raise RuntimeError("no feasible decomposition found; raise the budget")
        rest = herm_eig(vs @ (np.diag(evals) - zm) @ vs.conj().T)
        return _assemble(m, float(rest.eigenvalues[0]), rest.eigenvectors[:, 0],
                         False, "barrier")
    return _assemble(m, t, psi, converged, "pattern-search")


def verify_ls(rho, lsd: LSDecomposition, tol: float = EQ22_TOL,
              optimality_tol: float = OPTIMALITY_TOL) -> list[RelationReport]:
    """Spin-flip expansion and optimality checks for a decomposition.

    ``eq22`` expands ``Tr(rho rho~)`` over the decomposition and holds for any
    valid decomposition. ``eq23`` compares the concurrence of ``rho`` with
    ``(1 - lam) C(psi_e)`` and ``eq24`` does the same for the tangle; these
    two express optimality.
    """
    m = density_of(rho)
    err = np.linalg.norm(m - lsd.reconstruct())
    if err > RECONSTRUCTION_TOL:
        raise ValueError(f"decomposition does not reconstruct the state (error {err:.3e})")
    lam = lsd.lam
    if lsd.rho_s is not None:
        rs = lsd.rho_s
        rs_flip = _YY @ rs.conj() @ _YY
        sep_term = lam**2 * float(np.real(np.vdot(rs.conj().T, rs_flip)))
    else:
        rs, sep_term = None, 0.0
    if lsd.psi_e is not None:
        psi = lsd.psi_e
        psi_flip = _YY @ psi.conj()
        overlap = abs(np.vdot(psi, psi_flip)) ** 2
        cross = 0.0 if rs is None else 2 * lam * (1 - lam) * float(np.real(psi_flip.conj() @ rs @ psi_flip))
        pure_term = (1 - lam) ** 2 * overlap
        c_psi = concurrence_pure(psi)
    else:
        cross = pure_term = c_psi = 0.0
    terms22 = {"separable": sep_term, "cross": cross, "entangled": pure_term}
    c_rho = wootters_concurrence(m)
    return [
        _report("eq22", terms22, sum(terms22.values()), tr_rho_rhotilde(m), tol),
        _report("eq23", {"C": c_rho, "lambda": lam, "C_psi_e": c_psi},
                c_rho, (1 - lam) * c_psi, optimality_tol),
        _report("eq24", {"tau": c_rho**2, "lambda": lam, "overlap_sq": c_psi**2},
                c_rho**2, (1 - lam) ** 2 * c_psi**2, optimality_tol),
    ]
