import math

import mpmath
import numpy as np
import pytest

import oracles
from entrolab.errors import DimensionError, ValidationError
from entrolab.probdist import Distribution, Joint2, LogBase, mutual_information, shannon_entropy
from entrolab.qentropy import (
    POVM,
    Ensemble,
    holevo_chi,
    measured_mutual_info,
    measurement_joint,
    mixing_bound_terms,
    orthogonal_embedding,
    quantum_joint_marginals,
    quantum_relative_entropy,
    s_conditional,
    s_mutual,
    sanov_confusion_probability,
    spread_clusters,
    subentropy,
    tripartite_entropies,
    von_neumann,
)
from entrolab.qlinalg import BipartiteDims, DensityMatrix, random_density, random_unitary, tensor

LN2 = math.log(2)
KET0 = DensityMatrix.pure([1, 0])
KET1 = DensityMatrix.pure([0, 1])
PLUS = DensityMatrix.pure([1, 1])
MIXED2 = DensityMatrix.maximally_mixed(2)
BELL = DensityMatrix.pure([1, 0, 0, 1])
CLASSICAL = DensityMatrix.diagonal([0.5, 0, 0, 0.5])
D22 = BipartiteDims(2, 2)


def random_pure(dim, seed):
    return random_density(dim, 1, seed)


class TestVonNeumann:
    def test_maximally_mixed(self):
        assert von_neumann(MIXED2) == pytest.approx(0.693147, abs=1e-6)

    @pytest.mark.parametrize("seed", range(5))
    def test_pure_is_zero(self, seed):
        assert abs(von_neumann(random_pure(3, seed))) <= 1e-9

    def test_diagonal(self):
        expected = float(oracles.entropy([0.7, 0.3], base=mpmath.e))
        assert expected == pytest.approx(0.610864, abs=1e-6)
        assert von_neumann(DensityMatrix.diagonal([0.7, 0.3])) == pytest.approx(expected, abs=1e-14)

    def test_bits(self):
        assert von_neumann(DensityMatrix.maximally_mixed(4), LogBase.BITS) == pytest.approx(2.0, abs=1e-14)

    @pytest.mark.parametrize("seed", range(5))
    def test_against_lapack_oracle(self, seed):
        rho = random_density(5, 3, seed)
        assert von_neumann(rho) == pytest.approx(float(oracles.von_neumann(rho.matrix)), abs=1e-11)


class TestSubentropy:
    @pytest.mark.parametrize("seed", range(3))
    def test_pure(self, seed):
        assert abs(subentropy(random_pure(3, seed))) <= 1e-8

    def test_two_level(self):
        expected = float(oracles.subentropy_two_level(0.7, 0.3))
        assert expected == pytest.approx(0.166033, abs=1e-6)
        assert subentropy(DensityMatrix.diagonal([0.7, 0.3])) == pytest.approx(expected, abs=1e-12)

    def test_degenerate_qubit(self):
        assert subentropy(MIXED2) == pytest.approx(LN2 - 0.5, abs=1e-6)

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 8])
    def test_maximally_mixed_closed_form(self, d):
        expected = float(oracles.subentropy_maximally_mixed(d))
        assert subentropy(DensityMatrix.maximally_mixed(d)) == pytest.approx(expected, abs=1e-5)

    def test_partial_degeneracy_with_zeros(self):
        # eigenvalues (1/2, 1/2, 0): limit of the two-level formula plus a vanishing zero term
        rho = DensityMatrix.diagonal([0.5, 0.5, 0.0])
        assert subentropy(rho) == pytest.approx(LN2 - 0.5, abs=1e-5)

    @pytest.mark.parametrize("seed", range(10))
    def test_bounded_by_entropy(self, seed):
        rho = random_density(4, 1 + seed % 4, seed)
        assert -1e-9 <= subentropy(rho) <= von_neumann(rho) + 1e-9

    def test_accepts_raw_spectrum(self):
        assert subentropy(np.array([0.7, 0.3])) == pytest.approx(subentropy(DensityMatrix.diagonal([0.7, 0.3])))

    def test_spread_preserves_mean(self):
        points = spread_clusters(np.array([0.4, 0.3, 0.3, 0.0]), 1e-7)
        assert points.sum() == pytest.approx(1.0, abs=1e-15)
        assert np.min(np.abs(np.diff(np.sort(points)))) >= 1e-7 * (1 - 1e-6)

    def test_spread_leaves_separated_points(self):
        points = np.array([0.6, 0.3, 0.1])
        np.testing.assert_array_equal(np.sort(spread_clusters(points, 1e-7)), np.sort(points))


class TestJointMarginals:
    def test_product(self):
        ra, rb = random_density(2, 2, 1), random_density(3, 2, 2)
        e = quantum_joint_marginals(tensor(ra, rb), BipartiteDims(2, 3))
        assert e.s_ab == pytest.approx(e.s_a + e.s_b, abs=1e-9)

    def test_bell(self):
        e = quantum_joint_marginals(BELL, D22)
        assert e.s_ab == pytest.approx(0.0, abs=1e-9)
        assert e.s_a == pytest.approx(LN2, abs=1e-12)
        assert e.s_b == pytest.approx(LN2, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_pure_symmetry(self, seed):
        e = quantum_joint_marginals(random_pure(6, seed), BipartiteDims(2, 3))
        assert abs(e.s_a - e.s_b) <= 1e-8

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            quantum_joint_marginals(BELL, BipartiteDims(2, 3))

    def test_tripartite_dims_rejected(self):
        with pytest.raises(DimensionError):
            quantum_joint_marginals(BELL, BipartiteDims(2, 2, 1))


class TestConditionalAndMutual:
    def test_conditional_product(self):
        ra = DensityMatrix.diagonal([0.7, 0.3])
        value = s_conditional(tensor(ra, random_density(2, 2, 3)), D22)
        assert value == pytest.approx(von_neumann(ra), abs=1e-9)

    def test_conditional_bell(self):
        assert s_conditional(BELL, D22) == pytest.approx(-LN2, abs=1e-9)

    def test_conditional_classical(self):
        expected = float(oracles.brute_conditional([[0.5, 0], [0, 0.5]]))
        assert s_conditional(CLASSICAL, D22) == pytest.approx(expected, abs=1e-12)

    def test_mutual_product(self):
        assert s_mutual(tensor(random_density(2, 2, 4), random_density(2, 2, 5)), D22) == pytest.approx(0.0, abs=1e-9)

    def test_mutual_bell(self):
        assert s_mutual(BELL, D22) == pytest.approx(2 * LN2, abs=1e-9)

    def test_mutual_classical(self):
        expected = float(oracles.brute_mutual([[0.5, 0], [0, 0.5]], base=mpmath.e))
        assert s_mutual(CLASSICAL, D22) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_three_forms(self, seed):
        rho = random_density(4, 3, seed)
        e = quantum_joint_marginals(rho, D22)
        mi = s_mutual(rho, D22)
        assert mi == pytest.approx(e.s_a - s_conditional(rho, D22, given="B"), abs=1e-10)
        assert mi == pytest.approx(e.s_b - s_conditional(rho, D22, given="A"), abs=1e-10)

    def test_bad_given(self):
        with pytest.raises(ValueError):
            s_conditional(BELL, D22, given="C")


class TestTripartite:
    def test_product_of_three(self):
        parts = [DensityMatrix.diagonal([0.7, 0.3]), MIXED2, KET0]
        rho = tensor(tensor(parts[0], parts[1]), parts[2])
        t = tripartite_entropies(rho, BipartiteDims(2, 2, 2))
        s = [von_neumann(p) for p in parts]
        assert t.s_a == pytest.approx(s[0], abs=1e-12)
        assert t.s_b == pytest.approx(s[1], abs=1e-12)
        assert t.s_c == pytest.approx(s[2], abs=1e-12)
        assert t.s_abc == pytest.approx(sum(s), abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_strong_subadditivity(self, seed):
        t = tripartite_entropies(random_density(8, 1 + seed, seed), BipartiteDims(2, 2, 2))
        assert t.s_abc + t.s_b <= t.s_ab + t.s_bc + 1e-8

    def test_needs_third_dim(self):
        with pytest.raises(DimensionError):
            tripartite_entropies(BELL, D22)


class TestRelativeEntropy:
    @pytest.mark.parametrize("seed", range(5))
    def test_self(self, seed):
        rho = random_density(3, 1 + seed % 3, seed)
        assert abs(quantum_relative_entropy(rho, rho)) <= 1e-9

    def test_pure_against_mixed(self):
        expected = float(oracles.kl([1, 0], [0.5, 0.5], base=mpmath.e))
        assert quantum_relative_entropy(KET0, MIXED2) == pytest.approx(expected, abs=1e-12)

    def test_support_violation(self):
        assert quantum_relative_entropy(MIXED2, KET0) == math.inf

    def test_rotated_support(self):
        assert quantum_relative_entropy(KET0, PLUS) == math.inf
        assert quantum_relative_entropy(PLUS, PLUS) == pytest.approx(0.0, abs=1e-9)

    def test_bits(self):
        assert quantum_relative_entropy(KET0, MIXED2, "bits") == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_commuting_pairs(self, seed):
        rng = np.random.default_rng(seed)
        p, q = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(3))
        u = random_unitary(3, seed)
        rho = DensityMatrix(u @ np.diag(p) @ u.conj().T)
        sigma = DensityMatrix(u @ np.diag(q) @ u.conj().T)
        expected = float(oracles.kl(p, q, base=mpmath.e))
        assert quantum_relative_entropy(rho, sigma) == pytest.approx(expected, abs=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            quantum_relative_entropy(MIXED2, DensityMatrix.maximally_mixed(3))


class TestHolevo:
    def test_orthogonal(self):
        assert holevo_chi(Ensemble([0.5, 0.5], (KET0, KET1))) == pytest.approx(LN2, abs=1e-12)

    def test_identical(self):
        rho = random_density(2, 2, 9)
        assert abs(holevo_chi(Ensemble([0.3, 0.7], (rho, rho)))) <= 1e-9

    def test_zero_plus(self):
        avg = (KET0.matrix + PLUS.matrix) / 2
        expected = float(oracles.von_neumann(avg))
        # eigenvalues (1 +- 1/sqrt 2) / 2
        assert expected == pytest.approx(0.416496, abs=1e-6)
        assert holevo_chi(Ensemble([0.5, 0.5], (KET0, PLUS))) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_sandwich(self, seed):
        rng = np.random.default_rng(seed)
        states = tuple(random_density(3, 2, seed * 10 + k) for k in range(3))
        e = Ensemble(rng.dirichlet(np.ones(3)), states)
        chi = holevo_chi(e)
        assert -1e-9 <= chi <= shannon_entropy(e.probs, LogBase.NATS) + 1e-9
        assert chi <= math.log(3) + 1e-9


class TestMeasurement:
    def test_perfect_discrimination(self):
        e = Ensemble([0.5, 0.5], (KET0, KET1))
        assert measured_mutual_info(e, POVM.projective(np.eye(2))) == pytest.approx(LN2, abs=1e-12)

    def test_trivial_povm(self):
        e = Ensemble([0.5, 0.5], (KET0, PLUS))
        assert measured_mutual_info(e, POVM((np.eye(2),))) == 0.0

    def test_zero_plus_joint(self):
        e = Ensemble([0.5, 0.5], (KET0, PLUS))
        j = measurement_joint(e, POVM.projective(np.eye(2)))
        np.testing.assert_allclose(j.probs, [[0.5, 0], [0.25, 0.25]], atol=1e-15)
        expected = float(oracles.brute_mutual([[0.5, 0], [0.25, 0.25]]))
        assert expected == pytest.approx(0.311278, abs=1e-6)
        assert measured_mutual_info(e, POVM.projective(np.eye(2)), "bits") == pytest.approx(expected, abs=1e-12)
        assert mutual_information(j) == pytest.approx(expected, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            measurement_joint(Ensemble([1.0], (KET0,)), POVM((np.eye(3),)))


class TestPOVM:
    def test_incomplete(self):
        with pytest.raises(ValidationError) as info:
            POVM((np.diag([1.0, 0.0]),))
        assert info.value.invariant == "completeness"

    def test_negative_element(self):
        with pytest.raises(ValidationError) as info:
            POVM((np.diag([2.0, 0.5]), np.diag([-1.0, 0.5])))
        assert info.value.invariant == "positive-semidefinite"

    def test_non_hermitian(self):
        with pytest.raises(ValidationError) as info:
            POVM((np.array([[0.5, 0.5], [0, 0.5]]), np.array([[0.5, -0.5], [0, 0.5]])))
        assert info.value.invariant == "hermitian"

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            POVM((np.eye(2), np.eye(3)))

    def test_more_outcomes_than_dim(self):
        # trine measurement on a qubit
        kets = [np.array([np.cos(t), np.sin(t)]) for t in (0, 2 * np.pi / 3, 4 * np.pi / 3)]
        m = POVM(tuple(2 / 3 * np.outer(k, k) for k in kets))
        assert len(m) == 3 and m.dim == 2


class TestEnsemble:
    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            Ensemble([0.5, 0.5], (KET0,))

    def test_dim_mismatch(self):
        with pytest.raises(DimensionError):
            Ensemble([0.5, 0.5], (KET0, DensityMatrix.maximally_mixed(3)))

    def test_bad_probs(self):
        with pytest.raises(ValidationError):
            Ensemble([0.5, 0.6], (KET0, KET1))

    def test_average(self):
        np.testing.assert_allclose(Ensemble([0.5, 0.5], (KET0, KET1)).average().matrix, np.eye(2) / 2)


class TestMixingAndEmbedding:
    def test_identical_states_gap(self):
        rho = random_density(2, 2, 4)
        e = Ensemble([0.25, 0.75], (rho, rho))
        t = mixing_bound_terms(e)
        assert t.h_p + t.avg_s - t.s_avg == pytest.approx(float(oracles.entropy([0.25, 0.75], mpmath.e)), abs=1e-12)

    def test_orthogonal_support_equality(self):
        e = Ensemble([0.3, 0.7], (DensityMatrix.diagonal([1, 0, 0]), DensityMatrix.diagonal([0, 0.5, 0.5])))
        t = mixing_bound_terms(e)
        assert t.s_avg == pytest.approx(t.h_p + t.avg_s, abs=1e-8)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_qubit_inequality(self, seed):
        e = Ensemble([0.4, 0.6], (random_density(2, 2, seed), random_density(2, 1, seed + 50)))
        t = mixing_bound_terms(e)
        assert t.s_avg <= t.h_p + t.avg_s + 1e-9

    def test_embedding_single_state(self):
        rho = random_density(3, 2, 8)
        out = orthogonal_embedding(Ensemble([1.0], (rho,)))
        np.testing.assert_array_equal(out.matrix, rho.matrix)

    def test_embedding_mixed_pair(self):
        out = orthogonal_embedding(Ensemble([0.5, 0.5], (MIXED2, MIXED2)))
        np.testing.assert_allclose(out.matrix, np.eye(4) / 4)
        assert von_neumann(out) == pytest.approx(2 * LN2, abs=1e-12)

    def test_embedding_zero_plus(self):
        out = orthogonal_embedding(Ensemble([0.5, 0.5], (KET0, PLUS)))
        assert von_neumann(out) == pytest.approx(LN2, abs=1e-12)


class TestSanov:
    @pytest.mark.parametrize("n", [1, 7, 1000])
    def test_equal_states(self, n):
        rho = random_density(2, 2, 3)
        assert sanov_confusion_probability(rho, rho, n) == pytest.approx(1.0, abs=1e-9)

    def test_pure_against_mixed(self):
        assert sanov_confusion_probability(KET0, MIXED2, 20) == pytest.approx(2.0**-20, rel=1e-10)
        assert f"{2.0**-20:.4e}" == "9.5367e-07"

    def test_support_violation(self):
        assert sanov_confusion_probability(MIXED2, KET0, 5) == 0.0

    def test_monotone_in_n(self):
        rho, sigma = random_density(2, 2, 1), random_density(2, 2, 2)
        values = [sanov_confusion_probability(rho, sigma, n) for n in range(1, 30)]
        assert all(b <= a for a, b in zip(values, values[1:]))

    def test_rejects_zero_copies(self):
        with pytest.raises(ValueError):
            sanov_confusion_probability(KET0, KET0, 0)
