import numpy as np
import pytest

from potentia.entanglement import (
    Verdict,
    WernerRegion,
    check_witness_on_products,
    entropy_additivity_check,
    entropy_criterion,
    majorization_criterion,
    min_pt_eigenvalue,
    ppt_criterion,
    schmidt,
    schmidt_rank,
    von_neumann_entropy,
    werner,
    werner_classify,
    witness_from_entangled,
)
from potentia.errors import DomainError, NoWitnessError, ShapeError
from potentia.qlin import kron, partial_transpose
from potentia.sampling import random_density, random_pure, random_separable, random_unitary
from potentia.states import DensityOperator, PureVector, density_from_vector

from conftest import projector

PHI_PLUS = PureVector.normalized([1, 0, 0, 1])
RHO_PHI = density_from_vector(PHI_PLUS)


def entropy_oracle(eigenvalues) -> float:
    """Scalar formula oracle: -sum p log2 p over positive entries."""
    total = 0.0
    for p in eigenvalues:
        if p > 0:
            total -= p * np.log2(p)
    return total


class TestSchmidt:
    def test_product_state(self):
        coefficients = schmidt(PureVector.normalized([0, 1, 0, 0]), (2, 2))
        assert coefficients[0] == pytest.approx(1.0)
        assert coefficients[1] == pytest.approx(0.0, abs=1e-12)

    def test_bell_state(self):
        # SVD oracle by hand: coefficient matrix diag(1,1)/sqrt(2) has equal
        # singular values sqrt(eig(M M^dag)) = (1/sqrt2, 1/sqrt2).
        m = PHI_PLUS.amplitudes.reshape(2, 2)
        gram_eigs = np.linalg.eigvalsh(m @ m.conj().T)
        expected = np.sqrt(np.sort(gram_eigs)[::-1])
        assert np.allclose(expected, [1 / np.sqrt(2)] * 2)
        assert np.allclose(schmidt(PHI_PLUS, (2, 2)), expected)

    def test_factoring_superposition(self):
        vector = PureVector.normalized([1, 1, 0, 0])  # |0> (x) |+>
        assert schmidt_rank(vector, (2, 2)) == 1

    def test_dims_mismatch(self):
        with pytest.raises(ShapeError):
            schmidt(PHI_PLUS, (2, 3))


class TestEntropy:
    def test_rank_one_is_zero(self, rng):
        rho = density_from_vector(random_pure(4, rng))
        assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed_qubit(self):
        assert von_neumann_entropy(DensityOperator.maximally_mixed(2)) == pytest.approx(1.0)

    def test_seven_three_mixture(self):
        expected = entropy_oracle([0.7, 0.3])
        assert expected == pytest.approx(0.8812908992306927)
        rho = DensityOperator(np.diag([0.7, 0.3]).astype(complex))
        assert von_neumann_entropy(rho) == pytest.approx(expected, abs=1e-12)

    def test_additivity_pure(self, rng):
        a = density_from_vector(random_pure(2, rng))
        b = density_from_vector(random_pure(3, rng))
        assert entropy_additivity_check(a, b)

    def test_additivity_maximally_mixed(self):
        half = DensityOperator.maximally_mixed(2)
        joint = DensityOperator(kron(half.matrix, half.matrix))
        assert von_neumann_entropy(joint) == pytest.approx(2.0, abs=1e-12)
        assert entropy_additivity_check(half, half)

    def test_additivity_value_by_eigenvalue_products(self):
        # Eigenvalue-product oracle: spectrum of a (x) b is the outer product.
        eig_a = [0.7, 0.3]
        eig_b = [0.5, 0.5]
        products = [x * y for x in eig_a for y in eig_b]
        expected = entropy_oracle(products)
        assert expected == pytest.approx(1.8812908992306927)
        joint = DensityOperator(
            kron(np.diag(eig_a).astype(complex), np.diag(eig_b).astype(complex))
        )
        assert von_neumann_entropy(joint) == pytest.approx(expected, abs=1e-9)

    def test_unitary_invariance(self, rng):
        for _ in range(50):
            rho = random_density(4, rng)
            u = random_unitary(4, rng)
            rotated = DensityOperator(u @ rho.matrix @ u.conj().T)
            assert von_neumann_entropy(rotated) == pytest.approx(
                von_neumann_entropy(rho), abs=1e-9
            )


class TestEntropyCriterion:
    def test_bell_state_detected(self):
        verdict = entropy_criterion(RHO_PHI, (2, 2))
        assert verdict.verdict is Verdict.ENTANGLED
        # Oracle: S(rho) = 0 while S(rho_A) = 1, margin -1.
        assert verdict.evidence == pytest.approx(-1.0, abs=1e-9)

    def test_product_state_inconclusive(self, rng):
        rho = DensityOperator(
            kron(random_density(2, rng).matrix, random_density(2, rng).matrix)
        )
        assert entropy_criterion(rho, (2, 2)).verdict is Verdict.INCONCLUSIVE

    def test_maximally_mixed_inconclusive(self):
        assert (
            entropy_criterion(DensityOperator.maximally_mixed(4), (2, 2)).verdict
            is Verdict.INCONCLUSIVE
        )


class TestMajorizationCriterion:
    def test_bell_state_partial_sums(self):
        # Partial-sum oracle: global (1,0,0,0) vs padded reduced (1/2,1/2,0,0);
        # first partial sum already violates by 1/2.
        global_spec = np.array([1.0, 0.0, 0.0, 0.0])
        reduced = np.array([0.5, 0.5, 0.0, 0.0])
        worst = np.min(np.cumsum(reduced) - np.cumsum(global_spec))
        assert worst == pytest.approx(-0.5)
        verdict = majorization_criterion(RHO_PHI, (2, 2))
        assert verdict.verdict is Verdict.ENTANGLED
        assert verdict.evidence == pytest.approx(worst, abs=1e-9)

    def test_product_state_inconclusive(self, rng):
        # Brute-force oracle over eigenvalue products: for a (x) b the global
        # spectrum is the product distribution, majorized by both marginals.
        for _ in range(20):
            a = random_density(2, rng)
            b = random_density(3, rng)
            rho = DensityOperator(kron(a.matrix, b.matrix))
            verdict = majorization_criterion(rho, (2, 3))
            assert verdict.verdict is Verdict.INCONCLUSIVE

    def test_maximally_mixed_inconclusive(self):
        assert (
            majorization_criterion(DensityOperator.maximally_mixed(4), (2, 2)).verdict
            is Verdict.INCONCLUSIVE
        )


class TestPptCriterion:
    def test_werner_half_entangled(self):
        # PT eigensolve oracle: min eigenvalue (1 - 3p)/4 = -1/8 at p = 1/2.
        rho = werner(0.5)
        oracle = np.linalg.eigvalsh(partial_transpose(rho.matrix, (2, 2), "B"))[0]
        assert oracle == pytest.approx(-0.125, abs=1e-12)
        verdict = ppt_criterion(rho, (2, 2))
        assert verdict.verdict is Verdict.ENTANGLED
        assert verdict.evidence == pytest.approx(oracle, abs=1e-12)

    def test_werner_fifth_separable(self):
        assert ppt_criterion(werner(0.2), (2, 2)).verdict is Verdict.SEPARABLE

    def test_large_dims_inconclusive(self, rng):
        rho = DensityOperator(
            kron(random_density(3, rng).matrix, random_density(3, rng).matrix)
        )
        assert ppt_criterion(rho, (3, 3)).verdict is Verdict.INCONCLUSIVE

    def test_agrees_with_schmidt_rank_on_pure_states(self, rng):
        for _ in range(300):
            if rng.random() < 0.5:
                vector = PureVector(
                    np.kron(random_pure(2, rng).amplitudes, random_pure(2, rng).amplitudes)
                )
            else:
                vector = random_pure(4, rng)
            entangled = ppt_criterion(density_from_vector(vector), (2, 2)).verdict is Verdict.ENTANGLED
            assert entangled == (schmidt_rank(vector, (2, 2)) > 1)

    def test_criterion_strength_ordering(self, rng):
        for _ in range(400):
            rho = random_density(4, rng, rank=int(rng.integers(1, 5)))
            by_entropy = entropy_criterion(rho, (2, 2)).verdict is Verdict.ENTANGLED
            by_majorization = majorization_criterion(rho, (2, 2)).verdict is Verdict.ENTANGLED
            by_ppt = ppt_criterion(rho, (2, 2)).verdict is Verdict.ENTANGLED
            assert (not by_entropy) or by_majorization
            assert (not by_majorization) or by_ppt


class TestWitness:
    def test_bell_state_expectation(self):
        # Trace oracle: Tr(W rho) = <eta| rho^T_B |eta> = min PT eigenvalue = -1/2.
        witness = witness_from_entangled(RHO_PHI, (2, 2))
        assert witness.expectation(RHO_PHI) == pytest.approx(-0.5, abs=1e-9)

    def test_werner_09_detected(self):
        rho = werner(0.9)
        witness = witness_from_entangled(rho, (2, 2))
        expected = min_pt_eigenvalue(rho, (2, 2))
        assert witness.expectation(rho) == pytest.approx(expected, abs=1e-9)
        assert witness.expectation(rho) < 0

    def test_nonnegative_on_sampled_products(self):
        witness = witness_from_entangled(RHO_PHI, (2, 2))
        worst = check_witness_on_products(witness, (2, 2), samples=10_000, seed=0)
        assert worst >= -1e-9

    def test_ppt_state_has_no_witness(self):
        with pytest.raises(NoWitnessError):
            witness_from_entangled(werner(0.2), (2, 2))

    def test_linearity(self, rng):
        witness = witness_from_entangled(RHO_PHI, (2, 2))
        sigma1 = random_separable((2, 2), rng)
        sigma2 = random_separable((2, 2), rng)
        alpha = 0.3
        blend = DensityOperator(alpha * sigma1.matrix + (1 - alpha) * sigma2.matrix)
        assert witness.expectation(blend) == pytest.approx(
            alpha * witness.expectation(sigma1) + (1 - alpha) * witness.expectation(sigma2),
            abs=1e-12,
        )


class TestWerner:
    def test_boundary_pt_eigenvalue(self):
        assert min_pt_eigenvalue(werner(1 / 3), (2, 2)) == pytest.approx(0.0, abs=1e-12)

    def test_half_is_entangled_but_local(self):
        assert werner_classify(0.5) is WernerRegion.ENTANGLED_LOCAL

    def test_pure_is_nonlocal(self):
        from potentia.bell import chsh_max

        assert werner_classify(1.0) is WernerRegion.NONLOCAL
        assert chsh_max(werner(1.0)).value == pytest.approx(2 * np.sqrt(2), abs=1e-9)

    def test_pt_eigenvalue_is_affine_with_root_one_third(self):
        # Affinity: the midpoint value is the average of the endpoints.
        ends = min_pt_eigenvalue(werner(0.0), (2, 2)), min_pt_eigenvalue(werner(1.0), (2, 2))
        midpoint = min_pt_eigenvalue(werner(0.5), (2, 2))
        assert midpoint == pytest.approx(sum(ends) / 2, abs=1e-12)
        # Bisection oracle on the affine minimum eigenvalue.
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = (lo + hi) / 2
            if min_pt_eigenvalue(werner(mid), (2, 2)) > 0:
                lo = mid
            else:
                hi = mid
        assert (lo + hi) / 2 == pytest.approx(1 / 3, abs=1e-9)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            werner(1.2)
