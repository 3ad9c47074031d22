import itertools
import math

import numpy as np
import pytest

from seqkern import (
    Alphabet,
    AlignmentParams,
    DataError,
    HAS_MASSES,
    LACKS_MASSES,
    HeavyTailedAlignmentGaps,
    HeavyTailedAlignmentMatches,
    NumericalError,
    Sequence,
    alignment_dp_R,
    alignment_kernel,
    empty,
    enumerate_up_to,
    has_discrete_masses_alignment,
    has_discrete_masses_local,
    local_alignment_kernel,
    seq,
)
from seqkern.alignment import alignment_value, exponential_letter_matrix, sigma_of

from conftest import random_distinct_sequences, random_sequence
from oracles import (
    alignment_sum_by_count,
    alignment_total,
    gamma_quadrature,
)

AB = Alphabet("AB")
ONE = Alphabet("A")
DMU_GRID = (0.0, 0.5, math.inf)


def exp_ks_fn(lam):
    return lambda a, b: math.exp(-lam * (a != b))


class TestDpMatchesEnumeration:
    """The dynamic programme equals exhaustive alignment enumeration."""

    @pytest.mark.parametrize("delta_mu", DMU_GRID)
    def test_global_kernel_all_short_pairs(self, delta_mu):
        lam, mu = 0.7, 0.4
        params = AlignmentParams.exponential(AB, lam, mu, delta_mu)
        k = alignment_kernel(params)
        seqs = enumerate_up_to(AB, 4)
        for x, y in itertools.product(seqs, repeat=2):
            expected = alignment_total(x, y, exp_ks_fn(lam), mu, delta_mu)
            assert k(x, y) == pytest.approx(expected, rel=1e-12, abs=1e-300)

    @pytest.mark.parametrize("delta_mu", DMU_GRID)
    def test_local_kernel_all_short_pairs(self, delta_mu):
        lam, mu = 0.7, 0.4
        params = AlignmentParams.exponential(AB, lam, mu, delta_mu)
        k = local_alignment_kernel(params)
        seqs = enumerate_up_to(AB, 4)
        for x, y in itertools.product(seqs, repeat=2):
            expected = alignment_total(x, y, exp_ks_fn(lam), mu, delta_mu,
                                       local=True)
            assert k(x, y) == pytest.approx(expected, rel=1e-12, abs=1e-300)

    @pytest.mark.parametrize("delta_mu", DMU_GRID)
    @pytest.mark.parametrize("marker", ["mismatch", "all"])
    def test_count_resolved_sums(self, delta_mu, marker):
        lam, mu = 0.9, 0.3
        ks = exponential_letter_matrix(2, lam)
        ell = {"mismatch": lambda a, b: int(a != b), "all": lambda a, b: 1}[marker]
        seqs = enumerate_up_to(AB, 3)
        for x, y in itertools.product(seqs, repeat=2):
            R = alignment_dp_R(x, y, ks, mu, delta_mu, marker)
            by_count = alignment_sum_by_count(x, y, exp_ks_fn(lam), mu,
                                              delta_mu, ell)
            for L, value in enumerate(R):
                assert value == pytest.approx(
                    by_count.get(L, 0.0), rel=1e-12, abs=1e-14)

    def test_matrix_and_callable_markers(self):
        # explicit 0/1 matrices and callables work as marker predicates
        rng = np.random.default_rng(19)
        M = rng.normal(size=(2, 2))
        K = M @ M.T + 0.1 * np.eye(2)
        marker_matrix = np.eye(2, dtype=bool)
        marker_fn = lambda a, b: int(a == b)
        for x, y in itertools.product(enumerate_up_to(AB, 3)[:10], repeat=2):
            R_mat = alignment_dp_R(x, y, K, 0.4, 0.5, marker_matrix)
            R_fn = alignment_dp_R(x, y, K, 0.4, 0.5, marker_fn)
            np.testing.assert_allclose(R_mat, R_fn, rtol=0, atol=0)
            by_count = alignment_sum_by_count(
                x, y, lambda a, b: K[a, b], 0.4, 0.5, marker_fn)
            for L, v in enumerate(R_mat):
                assert v == pytest.approx(by_count.get(L, 0.0), rel=1e-12,
                                          abs=1e-14)

    def test_count_vector_shape_and_total(self):
        lam, mu, dmu = 0.5, 0.2, 0.4
        ks = exponential_letter_matrix(2, lam)
        x, y = seq(AB, "ABBA"), seq(AB, "BA")
        R = alignment_dp_R(x, y, ks, mu, dmu, "none")
        assert len(R) == min(len(x), len(y)) + 1
        # a trivial marker puts the whole kernel mass at count zero
        assert R[1:] == pytest.approx(0.0, abs=0.0)
        assert R[0] == pytest.approx(alignment_value(x, y, ks, mu, dmu), rel=1e-14)


class TestSmallClosedForms:
    def test_empty_pair_is_one(self):
        params = AlignmentParams.exponential(AB, 1.0, 0.3, 0.7)
        assert alignment_kernel(params)(empty(AB), empty(AB)) == 1.0
        assert local_alignment_kernel(params)(empty(AB), empty(AB)) == 1.0

    def test_single_letter_alphabet_pair(self):
        # two alignments: both letters inserted, or matched
        mu, dmu, ks_val = 0.3, 0.9, 0.8
        params = AlignmentParams(ONE, np.array([[ks_val]]), mu, dmu)
        k = alignment_kernel(params)
        a = seq(ONE, "A")
        assert k(a, a) == pytest.approx(
            math.exp(-2 * (dmu + mu)) + ks_val, rel=1e-14)

    def test_empty_vector_from_dp(self):
        ks = exponential_letter_matrix(2, 1.0)
        R = alignment_dp_R(empty(AB), empty(AB), ks, 0.5, 0.5, "mismatch")
        assert R.tolist() == [1.0]


class TestDiscreteMassConditions:
    def test_exponential_sigma_closed_form(self):
        # sigma = (1/|B| + (1-1/|B|) e^-lam)^-1 for the mismatch kernel
        for size, lam in [(2, 0.5), (4, 1.0), (20, 2.0)]:
            K = exponential_letter_matrix(size, lam)
            expected = 1.0 / (1.0 / size + (1.0 - 1.0 / size) * math.exp(-lam))
            assert sigma_of(K) == pytest.approx(expected, rel=1e-12)

    def test_four_letter_example(self):
        B4 = Alphabet("ACGT")
        params = AlignmentParams.exponential(B4, 1.0, 0.8, 1.0)
        assert params.sigma == pytest.approx(
            1.0 / (0.25 + 0.75 * math.exp(-1.0)), rel=1e-12)
        assert math.log(params.sigma) < 1.6
        assert has_discrete_masses_alignment(params)

    def test_boundary_is_strict_without_gap_start_penalty(self):
        K = exponential_letter_matrix(2, 1.0)
        sigma = sigma_of(K)
        mu = 0.5 * math.log(sigma)
        params = AlignmentParams(AB, K, mu, 0.0)
        assert not has_discrete_masses_alignment(params)
        assert not has_discrete_masses_local(params)
        # the same boundary is admissible once starting a gap costs something
        params_pos = AlignmentParams(AB, K, mu, 0.25)
        assert has_discrete_masses_alignment(params_pos)
        assert has_discrete_masses_local(params_pos)

    def test_identity_letter_matrix_sigma_is_alphabet_size(self):
        assert sigma_of(np.eye(5)) == pytest.approx(5.0, rel=1e-14)

    def test_infinite_gap_start(self):
        params = AlignmentParams(AB, 0.1 * np.eye(2), 0.0, math.inf)
        # 2 mu = 0 < log sigma = log 20, yet both kernels stay flexible
        assert math.log(params.sigma) > 0
        assert has_discrete_masses_alignment(params)
        assert has_discrete_masses_local(params)

    def test_same_truth_table_for_finite_positive_penalty(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            lam = rng.uniform(0.2, 3.0)
            mu = rng.uniform(0.0, 1.0)
            dmu = rng.uniform(0.1, 2.0)
            params = AlignmentParams.exponential(AB, lam, mu, dmu)
            assert has_discrete_masses_alignment(params) == \
                has_discrete_masses_local(params)

    def test_kernel_flags_mirror_conditions(self):
        flexible = AlignmentParams.exponential(AB, 0.5, 1.0, 0.5)
        rigid = AlignmentParams.exponential(AB, 3.0, 0.0, 0.0)
        assert alignment_kernel(flexible).mass_status == HAS_MASSES
        assert alignment_kernel(rigid).mass_status == LACKS_MASSES


class TestHeavyTailedMatches:
    def test_empty_pair(self):
        k = HeavyTailedAlignmentMatches(AB, 1.5, 1.2, 0.4, 0.6)
        assert k(empty(AB), empty(AB)) == pytest.approx(1.5 ** -1.2, rel=1e-14)

    def test_matches_quadrature_over_mismatch_rate(self):
        C, beta, mu, dmu = 1.5, 1.2, 0.4, 0.6
        k = HeavyTailedAlignmentMatches(AB, C, beta, mu, dmu)
        rng = np.random.default_rng(14)
        for _ in range(8):
            x = random_sequence(rng, AB, 4)
            y = random_sequence(rng, AB, 4)
            q = gamma_quadrature(
                lambda lam: alignment_value(
                    x, y, exponential_letter_matrix(2, lam), mu, dmu),
                C, beta)
            assert k(x, y) == pytest.approx(q, rel=1e-4)

    def test_fixing_a_mismatch_increases_value(self):
        # same alignment set, one marked pair becomes unmarked
        k = HeavyTailedAlignmentMatches(AB, 1.0, 1.5, 0.5, 0.5)
        x = seq(AB, "ABA")
        closer, farther = seq(AB, "ABA"), seq(AB, "ABB")
        assert k(x, closer) > k(x, farther)


class TestHeavyTailedGaps:
    def test_empty_pair(self):
        k = HeavyTailedAlignmentGaps(AB, 2.0, 1.1, 0.6,
                                     exponential_letter_matrix(2, 0.7))
        assert k(empty(AB), empty(AB)) == pytest.approx(2.0 ** -1.1, rel=1e-14)

    def test_matches_quadrature_over_gap_extension(self):
        C, beta, dmu, lam = 1.5, 1.2, 0.6, 0.7
        ks = exponential_letter_matrix(2, lam)
        k = HeavyTailedAlignmentGaps(AB, C, beta, dmu, ks)
        rng = np.random.default_rng(15)
        for _ in range(8):
            x = random_sequence(rng, AB, 4)
            y = random_sequence(rng, AB, 4)
            q = gamma_quadrature(
                lambda mu: alignment_value(x, y, ks, mu, dmu), C, beta)
            assert k(x, y) == pytest.approx(q, rel=1e-4)

    def test_insertion_side_exchange_invariance(self):
        # with a diagonal letter kernel and free gap starts the weight
        # depends only on total inserted length |x|+|y|-2L
        k = HeavyTailedAlignmentGaps(AB, 1.0, 1.0, 0.0, np.eye(2))
        x1, y1 = seq(AB, "AAB"), seq(AB, "AB")
        x2, y2 = seq(AB, "AB"), seq(AB, "AAB")
        assert k(x1, y1) == pytest.approx(k(x2, y2), rel=1e-13)


class TestStructuralProperties:
    def test_gram_psd_on_random_sequences(self):
        rng = np.random.default_rng(16)
        seqs = random_distinct_sequences(rng, AB, 10, 8)
        for make in (alignment_kernel, local_alignment_kernel):
            k = make(AlignmentParams.exponential(AB, 0.8, 0.5, 0.5))
            K = k.pairwise(seqs)
            assert np.allclose(K, K.T, rtol=1e-12)
            assert np.linalg.eigvalsh(K).min() >= -1e-8 * np.trace(K)

    def test_nonincreasing_in_gap_penalties(self):
        rng = np.random.default_rng(17)
        lam = 0.6
        for _ in range(10):
            x = random_sequence(rng, AB, 6)
            y = random_sequence(rng, AB, 6)
            vals_mu = [
                alignment_kernel(AlignmentParams.exponential(AB, lam, mu, 0.5))(x, y)
                for mu in (0.0, 0.4, 0.8, 1.6)
            ]
            assert all(a >= b - 1e-15 for a, b in zip(vals_mu, vals_mu[1:]))
            vals_dmu = [
                alignment_kernel(AlignmentParams.exponential(AB, lam, 0.5, dmu))(x, y)
                for dmu in (0.0, 0.5, 1.0, math.inf)
            ]
            assert all(a >= b - 1e-15 for a, b in zip(vals_dmu, vals_dmu[1:]))

    def test_repeated_mixture_letter_matches_one_letter_kernel(self):
        # encode the letter mixture U = K^{-1} 1 / (1' K^{-1} 1); repeats
        # of U under the two-letter alignment kernel reproduce the
        # one-letter alignment kernel with letter value 1/sigma
        from seqkern import VectorSequence, eval_vector_encoded

        mu, dmu, lam = 0.4, 0.7, 0.9
        K = exponential_letter_matrix(2, lam)
        params2 = AlignmentParams(AB, K, mu, dmu)
        k2 = alignment_kernel(params2)
        sigma = params2.sigma
        u = np.linalg.solve(K, np.ones(2))
        u = u / (u @ K @ u)
        k1 = alignment_kernel(
            AlignmentParams(ONE, np.array([[1.0 / sigma]]), mu, dmu))
        for m, m2 in itertools.product(range(4), repeat=2):
            vu = VectorSequence(AB, np.tile(u, (m, 1)))
            wu = VectorSequence(AB, np.tile(u, (m2, 1)))
            lhs = eval_vector_encoded(k2, vu, wu)
            rhs = k1(Sequence(ONE, (0,) * m), Sequence(ONE, (0,) * m2))
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_one_letter_blocks_factorize(self):
        # on a one-letter alphabet the kernel of repeated-letter blocks
        # separated by fixed letters multiplies blockwise; the building
        # block is the one-letter kernel with letter value 1/sigma
        mu, dmu = 0.4, 0.7
        sigma = 3.0
        params = AlignmentParams(ONE, np.array([[1.0 / sigma]]), mu, dmu)
        k = alignment_kernel(params)
        for t, t2 in itertools.product(range(4), repeat=2):
            direct = k(Sequence(ONE, (0,) * t), Sequence(ONE, (0,) * t2))
            expected = alignment_total(
                Sequence(ONE, (0,) * t), Sequence(ONE, (0,) * t2),
                lambda a, b: 1.0 / sigma, mu, dmu)
            assert direct == pytest.approx(expected, rel=1e-12)

    @pytest.mark.filterwarnings("ignore:overflow encountered")
    def test_overflow_raises_instead_of_saturating(self):
        params = AlignmentParams(ONE, np.array([[1e308]]), 0.0, 0.0)
        k = alignment_kernel(params)
        x = Sequence(ONE, (0,) * 4)
        with pytest.raises(NumericalError):
            k(x, x)

    def test_parameter_validation(self):
        with pytest.raises(DataError):
            AlignmentParams(AB, np.ones((2, 2)), 0.5, 0.5)  # singular letters
        with pytest.raises(DataError):
            AlignmentParams.exponential(AB, 1.0, -0.1, 0.5)
        with pytest.raises(DataError):
            AlignmentParams.exponential(AB, 1.0, 0.5, -0.5)
