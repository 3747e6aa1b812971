import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complementarity.linalg import (
    SIGMA_Y,
    DimensionError,
    herm_eig,
    hs_distance,
    kron,
    partial_trace,
    partial_transpose,
    psd_sqrt,
)
from complementarity.states import bell, ghz, make_rng, random_mixed

from oracles import kron_loops, partial_trace_loops, partial_transpose_loops


def _rng(seed):
    return make_rng(*seed) if isinstance(seed, tuple) else make_rng(seed)


def random_hermitian(dim, seed):
    rng = _rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2


def random_square(dim, seed):
    rng = _rng(seed)
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def proj(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


# --- kron -------------------------------------------------------------------

def test_kron_identity():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_sigma_y_pair():
    expected = np.zeros((4, 4))
    expected[0, 3] = expected[3, 0] = -1
    expected[1, 2] = expected[2, 1] = 1
    assert np.allclose(kron(SIGMA_Y, SIGMA_Y), expected, atol=0)


def test_kron_projectors():
    p = np.diag([1.0, 0.0])
    assert np.array_equal(kron(p, p), np.diag([1.0, 0, 0, 0]))


@pytest.mark.parametrize("da,db", [(2, 2), (2, 4), (4, 2)])
def test_kron_entry_layout(da, db):
    a, b = random_square(da, 1), random_square(db, 2)
    assert np.allclose(kron(a, b), kron_loops(a, b), atol=1e-14)


def test_kron_rejects_non_square():
    with pytest.raises(DimensionError):
        kron(np.ones((2, 3)), np.eye(2))


# --- partial trace ----------------------------------------------------------

def test_partial_trace_bell_marginal():
    assert np.allclose(partial_trace(proj(bell("phi+").amplitudes), 2, {0}), np.eye(2) / 2)


def test_partial_trace_product():
    assert np.allclose(partial_trace(proj([1, 0, 0, 0]), 2, {1}), np.diag([1, 0]))


def test_partial_trace_ghz_pair():
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[3, 3] = 0.5
    assert np.allclose(partial_trace(proj(ghz(3).amplitudes), 3, {0, 1}), expected)


@pytest.mark.parametrize("n,keep", [(2, {0}), (2, {1}), (3, {1}), (3, {0, 2}), (4, {1, 3}), (4, {0, 1, 2})])
def test_partial_trace_matches_loops(n, keep):
    m = random_square(2**n, 10 + n)
    assert np.allclose(partial_trace(m, n, keep), partial_trace_loops(m, n, keep), atol=1e-13)


@pytest.mark.parametrize("keep", [set(), {2}, {-1}])
def test_partial_trace_bad_keep(keep):
    with pytest.raises((ValueError, IndexError)):
        partial_trace(np.eye(4), 2, keep)


def test_partial_trace_wrong_dimension():
    with pytest.raises(DimensionError):
        partial_trace(np.eye(4), 3, {0})


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 4), data=st.data())
def test_partial_trace_complementary_traces(seed, n, data):
    m = random_mixed(n, 2**n, seed).matrix
    keep = data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n - 1))
    rest = set(range(n)) - keep
    ta = np.trace(partial_trace(m, n, keep))
    tb = np.trace(partial_trace(m, n, rest))
    assert abs(ta - tb) <= 1e-12
    assert abs(ta - np.trace(m)) <= 1e-12


# --- partial transpose ------------------------------------------------------

def test_partial_transpose_product():
    rho = random_mixed(1, 2, 1).matrix
    sigma = random_mixed(1, 2, 2).matrix
    assert np.allclose(partial_transpose(np.kron(rho, sigma), 2, 1), np.kron(rho, sigma.T))


@pytest.mark.parametrize("n,q", [(2, 0), (2, 1), (3, 1), (3, 2)])
def test_partial_transpose_involution_and_loops(n, q):
    x = random_square(2**n, 3)
    once = partial_transpose(x, n, q)
    assert np.array_equal(partial_transpose(once, n, q), x)
    assert np.allclose(once, partial_transpose_loops(x, n, q), atol=0)


def test_partial_transpose_bell_spectrum():
    w = herm_eig(partial_transpose(proj(bell("phi+").amplitudes), 2, 0)).eigenvalues
    assert np.allclose(w, [0.5, 0.5, 0.5, -0.5], atol=1e-12)


def test_partial_transpose_bad_index():
    with pytest.raises(IndexError):
        partial_transpose(np.eye(4), 2, 2)


# --- herm_eig ---------------------------------------------------------------

def test_herm_eig_diagonal():
    assert np.allclose(herm_eig(np.diag([3.0, 1.0, 2.0])).eigenvalues, [3, 2, 1])


def test_herm_eig_scalar():
    assert np.allclose(herm_eig(np.eye(4) / 4).eigenvalues, [0.25] * 4)


def test_herm_eig_projector():
    assert np.allclose(herm_eig(proj(bell("phi+").amplitudes)).eigenvalues, [1, 0, 0, 0], atol=1e-14)


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        herm_eig(np.array([[0, 1], [0, 0]], dtype=complex))


def test_herm_eig_symmetrizes_small_asymmetry():
    m = np.diag([1.0, 2.0]).astype(complex)
    m[0, 1] = 1e-11
    assert np.allclose(herm_eig(m).eigenvalues, [2, 1], atol=1e-10)


@pytest.mark.parametrize("dim", [2, 4, 8])
def test_herm_eig_bulk(dim):
    """Reconstruction and orthonormality over many random Hermitian matrices."""
    for seed in range(334):
        a = random_hermitian(dim, (dim, seed))
        res = herm_eig(a)
        v = res.eigenvectors
        scale = max(1.0, np.linalg.norm(a))
        assert np.linalg.norm(a - res.reconstruct()) <= 1e-10 * scale
        assert np.abs(v.conj().T @ v - np.eye(dim)).max() <= 1e-10
        assert np.all(np.diff(res.eigenvalues) <= 0)
        assert np.allclose(res.eigenvalues, np.linalg.eigvalsh(a)[::-1], atol=1e-10 * scale)


@pytest.mark.parametrize("dim", [16, 32])
def test_herm_eig_largest_sizes(dim):
    a = random_hermitian(dim, dim)
    res = herm_eig(a)
    assert np.linalg.norm(a - res.reconstruct()) <= 1e-10 * np.linalg.norm(a)


def test_herm_eig_degenerate_input():
    u = np.linalg.qr(random_square(4, 5))[0]
    a = u @ np.diag([1.0, 1.0, 1.0, -2.0]) @ u.conj().T
    res = herm_eig(a)
    assert np.allclose(res.eigenvalues, [1, 1, 1, -2], atol=1e-12)
    assert np.linalg.norm(a - res.reconstruct()) <= 1e-12


# --- psd_sqrt ---------------------------------------------------------------

def test_psd_sqrt_examples():
    assert np.allclose(psd_sqrt(np.eye(4)), np.eye(4))
    assert np.allclose(psd_sqrt(np.diag([4.0, 1, 0, 0])), np.diag([2.0, 1, 0, 0]))
    p = proj(bell("phi+").amplitudes)
    assert np.allclose(psd_sqrt(p), p, atol=1e-12)


def test_psd_sqrt_squares_back():
    for seed in range(50):
        m = random_mixed(2, 1 + seed % 4, seed).matrix
        r = psd_sqrt(m)
        assert np.allclose(r, r.conj().T)
        assert np.linalg.eigvalsh(r)[0] >= -1e-12
        assert np.linalg.norm(r @ r - m) <= 1e-8


def test_psd_sqrt_clips_round_off():
    r = psd_sqrt(np.diag([1.0, -5e-10]))
    assert np.allclose(r, np.diag([1.0, 0.0]))


def test_psd_sqrt_rejects_negative():
    with pytest.raises(ValueError):
        psd_sqrt(np.diag([1.0, -1e-6]))


# --- hs_distance ------------------------------------------------------------

def test_hs_distance_examples():
    rho = random_mixed(2, 3, 0).matrix
    assert hs_distance(rho, rho) == 0
    assert hs_distance(proj([1, 0, 0, 0]), proj([0, 0, 0, 1])) == pytest.approx(1.0, abs=1e-15)
    assert hs_distance(np.eye(2) / 2, np.diag([1.0, 0.0])) == pytest.approx(0.5, abs=1e-15)


def test_hs_distance_mismatch():
    with pytest.raises(DimensionError):
        hs_distance(np.eye(2), np.eye(4))


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_hs_distance_metric(seed):
    a, b, c = (random_hermitian(4, (seed, k)) for k in range(3))
    ab, bc, ac = hs_distance(a, b), hs_distance(b, c), hs_distance(a, c)
    assert ab == pytest.approx(hs_distance(b, a), abs=1e-14)
    assert ac <= ab + bc + 1e-10
    d = a - b
    assert ab == pytest.approx(np.sqrt(0.5 * np.trace(d @ d).real), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_trace_cyclicity(seed):
    a, b = random_square(4, (seed, 0)), random_square(4, (seed, 1))
    assert abs(np.trace(a @ b) - np.trace(b @ a)) <= 1e-10
    assert abs(np.trace(a + 2 * b) - np.trace(a) - 2 * np.trace(b)) <= 1e-10
