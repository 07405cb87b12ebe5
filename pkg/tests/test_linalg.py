import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_hermitian, random_matrix
from pptdiscrim import linalg
from pptdiscrim.errors import DimensionMismatch, NonHermitian
from pptdiscrim.space import BipartiteSpace
from pptdiscrim.states import bell_state, schmidt_form

QUBITS = BipartiteSpace.ab(2, 2)


def transpose_oracle(m, da, db):
    """Entrywise index swap <ij|m|kl> -> <kj|m|il>, written as plain loops."""
    out = np.zeros_like(m)
    for i in range(da):
        for j in range(db):
            for k in range(da):
                for l in range(db):
                    out[i * db + j, k * db + l] = m[k * db + j, i * db + l]
    return out


class TestHermitianEigen:
    def test_identity(self):
        assert np.allclose(linalg.hermitian_eigen(np.eye(2)).eigenvalues, [1, 1])

    def test_diagonal_sorted_ascending(self):
        assert np.allclose(linalg.hermitian_eigen(np.diag([1.0, -1.0])).eigenvalues, [-1, 1])

    def test_transposed_partially_entangled_state(self):
        psi = schmidt_form([0.8, 0.2])
        vals = linalg.hermitian_eigen(linalg.partial_transpose(psi.projector, psi.space)).eigenvalues
        assert np.allclose(vals, [-0.4, 0.2, 0.4, 0.8], atol=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitian):
            linalg.hermitian_eigen(np.array([[0, 1], [0, 0]]))

    @pytest.mark.parametrize("n", [1, 2, 5, 17, 40])
    def test_reconstruction_and_unitarity(self, rng, n):
        h = random_hermitian(rng, n)
        eig = linalg.hermitian_eigen(h, method="jacobi")
        scale = max(1.0, linalg.max_abs(h))
        assert linalg.max_abs(eig.reconstruct() - h) <= 1e-10 * scale
        v = eig.eigenvectors
        assert linalg.max_abs(v.conj().T @ v - np.eye(n)) <= 1e-10
        assert np.all(np.diff(eig.eigenvalues) >= 0)
        assert np.allclose(eig.eigenvalues, np.linalg.eigvalsh(h), atol=1e-10 * scale)

    def test_degenerate_spectrum(self, rng):
        u = np.linalg.qr(random_matrix(rng, 6))[0]
        h = u @ np.diag([1, 1, 1, 2, 2, -3.0]) @ u.conj().T
        eig = linalg.hermitian_eigen(h, method="jacobi")
        assert np.allclose(eig.eigenvalues, [-3, 1, 1, 1, 2, 2], atol=1e-10)
        assert linalg.max_abs(eig.reconstruct() - h) <= 1e-10 * 3


class TestSvd:
    def test_zero(self):
        _, s, _ = linalg.svd(np.zeros((3, 2)))
        assert np.allclose(s, 0)

    def test_diag_permutes(self):
        _, s, _ = linalg.svd(np.diag([3.0, 4.0]))
        assert np.allclose(s, [4, 3])

    def test_schmidt_like(self):
        _, s, _ = linalg.svd(np.diag([np.sqrt(0.8), np.sqrt(0.2)]))
        assert np.allclose(s, [np.sqrt(0.8), np.sqrt(0.2)])

    @pytest.mark.parametrize("shape", [(4, 4), (3, 7), (8, 2)])
    def test_reconstruction(self, rng, shape):
        m = random_matrix(rng, *shape)
        u, s, v = linalg.svd(m)
        k = s.size
        recon = u[:, :k] @ np.diag(s) @ v[:, :k].conj().T
        assert linalg.max_abs(recon - m) <= 1e-10 * max(1, linalg.max_abs(m))
        assert np.all(np.diff(s) <= 1e-12) and np.all(s >= 0)
        assert np.allclose(s, np.linalg.svd(m, compute_uv=False)[:k], atol=1e-10)


class TestKron:
    def test_identity(self):
        assert np.array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_diag(self):
        assert np.allclose(linalg.kron(np.diag([1, -1]), np.eye(2)), np.diag([1, 1, -1, -1]))

    def test_associative(self, rng):
        a, b, c = (random_matrix(rng, 2) for _ in range(3))
        assert np.allclose(linalg.kron(linalg.kron(a, b), c), linalg.kron(a, linalg.kron(b, c)))


class TestPartialTranspose:
    def test_product(self, rng):
        for _ in range(5):
            a, b = random_matrix(rng, 2), random_matrix(rng, 2)
            assert np.allclose(linalg.partial_transpose(np.kron(a, b), QUBITS), np.kron(a.T, b))

    def test_basis_element(self):
        e = lambda i, j: np.outer(np.eye(2)[i], np.eye(2)[j])  # noqa: E731
        m = np.kron(e(0, 1), e(1, 0))
        assert np.array_equal(linalg.partial_transpose(m, QUBITS), np.kron(e(1, 0), e(1, 0)))

    def test_bell_minimum(self):
        pt = transpose_oracle(bell_state(0).projector, 2, 2)
        assert np.allclose(linalg.partial_transpose(bell_state(0).projector, QUBITS), pt)
        assert abs(linalg.min_eigenvalue(pt) + 0.5) <= 1e-12

    @pytest.mark.parametrize("da,db", [(2, 3), (3, 2), (3, 3)])
    def test_matches_oracle(self, rng, da, db):
        m = random_matrix(rng, da * db)
        assert np.allclose(linalg.partial_transpose(m, BipartiteSpace.ab(da, db)), transpose_oracle(m, da, db))

    def test_multi_factor_alice(self, rng):
        space = BipartiteSpace.of((2, "A"), (2, "B"), (3, "A"))
        a1, b, a2 = random_matrix(rng, 2), random_matrix(rng, 2), random_matrix(rng, 3)
        m = np.kron(np.kron(a1, b), a2)
        assert np.allclose(linalg.partial_transpose(m, space), np.kron(np.kron(a1.T, b), a2.T))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            linalg.partial_transpose(np.eye(3), QUBITS)

    def test_involution_many(self, rng):
        space = BipartiteSpace.ab(2, 3)
        for _ in range(1000):
            m = random_matrix(rng, 6)
            assert np.max(np.abs(linalg.partial_transpose(linalg.partial_transpose(m, space), space) - m)) <= 1e-14

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2**31 - 1))
    def test_trace_preserved(self, da, db, seed):
        m = random_matrix(np.random.default_rng(seed), da * db)
        space = BipartiteSpace.ab(da, db)
        assert abs(np.trace(linalg.partial_transpose(m, space)) - np.trace(m)) <= 1e-12


class TestPartialTrace:
    def test_product(self, rng):
        a, b = random_matrix(rng, 2), random_matrix(rng, 3)
        out = linalg.partial_trace(np.kron(a, b), BipartiteSpace.ab(2, 3), keep=[0])
        assert np.allclose(out, np.trace(b) * a)

    def test_bell_reduced(self):
        for keep in ([0], [1]):
            assert np.allclose(linalg.partial_trace(bell_state(0).projector, QUBITS, keep), np.eye(2) / 2)

    def test_schmidt_reduced(self):
        psi = schmidt_form([0.8, 0.2])
        assert np.allclose(linalg.partial_trace(psi.projector, psi.space, [0]), np.diag([0.8, 0.2]))

    def test_trace_preserved(self, rng):
        space = BipartiteSpace.of((2, "A"), (3, "B"), (2, "B"))
        m = random_matrix(rng, 12)
        for keep in ([0], [1, 2], [0, 2]):
            assert np.isclose(np.trace(linalg.partial_trace(m, space, keep)), np.trace(m))


class TestPsdCheck:
    def test_identity(self):
        assert linalg.psd_check(np.eye(3))

    def test_negative_entry(self):
        assert not linalg.psd_check(np.diag([1, -0.1]), 1e-9)

    def test_bell_transposed(self):
        assert not linalg.psd_check(linalg.partial_transpose(bell_state(0).projector, QUBITS))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitian):
            linalg.psd_check(np.array([[1, 2], [0, 1]]))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 12), st.integers(0, 2**31 - 1))
    def test_projection_passes(self, n, seed):
        h = random_hermitian(np.random.default_rng(seed), n)
        assert linalg.psd_check(linalg.psd_projection(h), 1e-9)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 12), st.integers(0, 2**31 - 1))
    def test_eigenvalue_sum_is_trace(self, n, seed):
        h = random_hermitian(np.random.default_rng(seed), n)
        assert abs(linalg.eigvalsh(h).sum() - np.trace(h).real) <= 1e-10 * max(1, linalg.max_abs(h))


def test_matrix_json_round_trip(rng):
    m = random_matrix(rng, 3, 2)
    data = linalg.matrix_to_json(m)
    assert data["rows"] == 3 and data["cols"] == 2
    assert np.array_equal(linalg.matrix_from_json(data), m)
