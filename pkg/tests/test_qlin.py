import numpy as np
import pytest

from potentia import qlin
from potentia.errors import CapacityError, DomainError, ShapeError

from conftest import projector

SX = np.array([[0, 1], [1, 0]], dtype=complex)


def kron_oracle(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Definition-level Kronecker product via explicit index loops."""
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


class TestKron:
    def test_identity_case(self):
        assert np.array_equal(qlin.kron(np.eye(2), np.eye(3)), np.eye(6))

    def test_basis_projector_placement(self):
        p0 = np.diag([1.0, 0.0]).astype(complex)
        p1 = np.diag([0.0, 1.0]).astype(complex)
        assert np.array_equal(qlin.kron(p0, p1), np.diag([0.0, 1.0, 0.0, 0.0]))

    def test_sx_sx_maps_00_to_11(self):
        oracle = kron_oracle(SX, SX)
        lib = qlin.kron(SX, SX)
        assert np.allclose(lib, oracle)
        e00 = np.array([1, 0, 0, 0], dtype=complex)
        assert np.allclose(lib @ e00, [0, 0, 0, 1])

    def test_associativity(self, rng):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        c = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        left = qlin.kron(qlin.kron(a, b), c)
        right = qlin.kron(a, qlin.kron(b, c))
        assert np.max(np.abs(left - right)) <= 1e-12

    def test_capacity_cap(self):
        big = np.eye(128)
        with pytest.raises(CapacityError):
            qlin.kron(big, np.eye(64))


class TestPartialTrace:
    def test_product_state_factorization(self, rng):
        rho_a = projector(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        rho_b = projector(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        reduced = qlin.partial_trace(np.kron(rho_a, rho_b), (2, 3), (0,))
        assert np.max(np.abs(reduced - rho_a)) <= 1e-12

    def test_bell_state_reduction(self):
        phi = projector([1, 0, 0, 1])
        # Index-summation oracle over all basis pairs: rhoA[i,k] = sum_j rho[ij, kj].
        oracle = np.zeros((2, 2), dtype=complex)
        for i in range(2):
            for k in range(2):
                for j in range(2):
                    oracle[i, k] += phi[2 * i + j, 2 * k + j]
        assert np.allclose(oracle, np.eye(2) / 2)
        assert np.allclose(qlin.partial_trace(phi, (2, 2), (0,)), oracle)

    def test_trace_everything(self):
        rho = np.diag([0.25, 0.25, 0.5]).astype(complex)
        assert np.allclose(qlin.partial_trace(rho, (3,), ()), [[1.0]])

    def test_trace_preservation_and_linearity(self, rng):
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        b = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        ta = qlin.partial_trace(a, (2, 3), (1,))
        tb = qlin.partial_trace(b, (2, 3), (1,))
        combined = qlin.partial_trace(2.0 * a + 3.0 * b, (2, 3), (1,))
        assert np.max(np.abs(combined - 2.0 * ta - 3.0 * tb)) <= 1e-12
        assert abs(np.trace(ta) - np.trace(a)) <= 1e-12

    def test_dims_mismatch(self):
        with pytest.raises(ShapeError):
            qlin.partial_trace(np.eye(6), (2, 2), (0,))


def partial_transpose_oracle(rho: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    """Block-transpose oracle: (i j, k l) -> (i l, k j)."""
    out = np.zeros_like(rho)
    for i in range(d_a):
        for j in range(d_b):
            for k in range(d_a):
                for l in range(d_b):
                    out[i * d_b + j, k * d_b + l] = rho[i * d_b + l, k * d_b + j]
    return out


class TestPartialTranspose:
    def test_product_case_spectrum(self, rng):
        rho_a = projector(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        rho_b = projector(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        rho = np.kron(rho_a, rho_b)
        transposed = qlin.partial_transpose(rho, (2, 2), "B")
        assert np.allclose(transposed, np.kron(rho_a, rho_b.T))
        assert np.allclose(
            np.sort(np.linalg.eigvalsh(transposed)), np.sort(np.linalg.eigvalsh(rho))
        )

    def test_bell_state_minimum_eigenvalue(self):
        phi = projector([1, 0, 0, 1])
        oracle = partial_transpose_oracle(phi, 2, 2)
        assert abs(np.linalg.eigvalsh(oracle)[0] + 0.5) <= 1e-12
        lib = qlin.partial_transpose(phi, (2, 2), "B")
        assert np.allclose(lib, oracle)
        assert abs(np.linalg.eigvalsh(lib)[0] + 0.5) <= 1e-12

    def test_both_parties_share_spectrum(self, rng):
        mat = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        rho = mat @ mat.conj().T
        rho /= np.trace(rho)
        s_a = np.linalg.eigvalsh(qlin.partial_transpose(rho, (2, 3), "A"))
        s_b = np.linalg.eigvalsh(qlin.partial_transpose(rho, (2, 3), "B"))
        assert np.max(np.abs(np.sort(s_a) - np.sort(s_b))) <= 1e-10

    def test_involution_hermiticity_trace(self, rng):
        mat = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        rho = (mat + mat.conj().T) / 2
        once = qlin.partial_transpose(rho, (2, 2), "B")
        twice = qlin.partial_transpose(once, (2, 2), "B")
        assert np.array_equal(twice, rho)
        assert qlin.is_hermitian(once, 1e-12)
        assert abs(np.trace(once) - np.trace(rho)) <= 1e-12

    def test_non_bipartite_dims(self):
        with pytest.raises(ShapeError):
            qlin.partial_transpose(np.eye(8), (2, 2, 2), "B")


def eig2_oracle(mat: np.ndarray) -> tuple[float, float]:
    """Characteristic-polynomial eigenvalues of a 2x2 Hermitian matrix."""
    tr = float(np.real(np.trace(mat)))
    det = float(np.real(np.linalg.det(mat)))
    root = np.sqrt(tr * tr - 4 * det)
    return (tr + root) / 2, (tr - root) / 2


class TestHermEig:
    def test_already_diagonal(self):
        spectrum = qlin.herm_eig(np.diag([0.7, 0.3]).astype(complex))
        assert np.allclose(spectrum.eigenvalues, [0.7, 0.3])

    def test_pauli_x(self):
        hi, lo = eig2_oracle(SX)
        assert (hi, lo) == (1.0, -1.0)
        spectrum = qlin.herm_eig(SX)
        assert np.allclose(spectrum.eigenvalues, [hi, lo], atol=1e-12)

    def test_rank_one_projector(self):
        spectrum = qlin.herm_eig(projector([1, 0, 0, 1]))
        assert np.allclose(spectrum.eigenvalues, [1, 0, 0, 0], atol=1e-12)

    def test_invariants(self, rng):
        for dim in (2, 5, 8):
            mat = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            h = (mat + mat.conj().T) / 2
            spectrum = qlin.herm_eig(h)
            assert np.all(np.diff(spectrum.eigenvalues) <= 1e-12)
            assert abs(spectrum.eigenvalues.sum() - np.real(np.trace(h))) <= 1e-9
            gram = spectrum.eigenvectors.conj().T @ spectrum.eigenvectors
            assert np.max(np.abs(gram - np.eye(dim))) <= 1e-9
            assert np.max(np.abs(spectrum.reconstruct() - h)) <= 1e-8

    def test_degenerate_eigenspace_is_usable(self):
        # Any orthonormal basis of a degenerate eigenspace must do: the
        # reconstruction and all spectral functions stay basis-independent.
        rho = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
        spectrum = qlin.herm_eig(rho)
        assert np.allclose(spectrum.eigenvalues, [0.5, 0.5, 0.0, 0.0])
        assert np.max(np.abs(spectrum.reconstruct() - rho)) <= 1e-12
        gram = spectrum.eigenvectors.conj().T @ spectrum.eigenvectors
        assert np.max(np.abs(gram - np.eye(4))) <= 1e-9

    def test_non_hermitian_rejected(self):
        with pytest.raises(DomainError):
            qlin.herm_eig(np.array([[0, 1], [0, 0]], dtype=complex))


class TestCommutes:
    def test_self(self):
        p = projector([1, 2j, 0])
        assert qlin.commutes(p, p, 1e-10)

    def test_common_eigenbasis(self):
        assert qlin.commutes(np.diag([1.0, 0, 0]), np.diag([0, 1.0, 0]), 1e-12)

    def test_incompatible_projectors(self):
        p = np.diag([1.0, 0.0]).astype(complex)
        q = projector([1, 1])
        # Hand oracle: PQ - QP = [[0, 1/2], [-1/2, 0]].
        commutator = p @ q - q @ p
        assert np.allclose(commutator, [[0, 0.5], [-0.5, 0]])
        assert not qlin.commutes(p, q, 1e-8)

    def test_dim_mismatch(self):
        with pytest.raises(ShapeError):
            qlin.commutes(np.eye(2), np.eye(3))
