import numpy as np
import pytest

from pptdiscrim import linalg
from pptdiscrim.discrim import unambiguous_ppt_value
from pptdiscrim.errors import BadDimension, BadIndex, BadIndexing, TooLarge
from pptdiscrim.multicopy import ReducedLp, gamma_eigenvalue, lemma8_witness_check, unambiguous_multicopy_value
from pptdiscrim.space import BipartiteSpace
from pptdiscrim.states import complement_state, haar_unitary, maximally_entangled, multicopy
from pptdiscrim.symmetry import isotropic_twirl


def swap(d):
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[i * d + j, j * d + i] = 1
    return s


class TestGammaEigenvalue:
    def test_against_swap_spectrum(self):
        for d in (2, 3, 4):
            pt = linalg.partial_transpose(maximally_entangled(d).projector, BipartiteSpace.ab(d, d))
            assert np.allclose(pt, swap(d) / d)
            vals = set(np.round(np.linalg.eigvalsh(pt), 12))
            assert vals == {round(gamma_eigenvalue(1, "+", d), 12), round(gamma_eigenvalue(1, "-", d), 12)}

    def test_examples(self):
        assert gamma_eigenvalue(1, "+", 2) == 0.5
        assert np.isclose(gamma_eigenvalue(1, "-", 3), -1 / 3)
        assert gamma_eigenvalue(2, "-", 2) == 1.5

    def test_bad_label(self):
        with pytest.raises(BadIndex):
            gamma_eigenvalue(3, "+", 2)
        with pytest.raises(BadIndex):
            gamma_eigenvalue(1, "x", 2)


class TestValue:
    @pytest.mark.parametrize("d", [2, 3, 4])
    @pytest.mark.parametrize("m", range(1, 9))
    def test_zero(self, d, m):
        assert abs(unambiguous_multicopy_value(d, m)) <= 1e-8

    @pytest.mark.parametrize("d", [2, 3])
    def test_matches_full_program_single_copy(self, d):
        phi = maximally_entangled(d)
        full = unambiguous_ppt_value(phi, complement_state(phi))
        assert abs(full - unambiguous_multicopy_value(d, 1)) <= 1e-7

    @pytest.mark.parametrize("d,m", [(2, 3), (3, 5), (4, 8)])
    def test_symmetric_reduction_agrees(self, d, m):
        assert abs(unambiguous_multicopy_value(d, m, symmetric=True) - unambiguous_multicopy_value(d, m, symmetric=False)) <= 1e-12

    def test_large_copy_count_uses_reduction(self):
        assert abs(unambiguous_multicopy_value(2, 12)) <= 1e-8

    def test_limits(self):
        with pytest.raises(TooLarge):
            unambiguous_multicopy_value(2, 13)
        with pytest.raises(BadDimension):
            unambiguous_multicopy_value(1, 2)


class TestReductionSoundness:
    def test_spectrum_matrix_matches_dense(self):
        d, m = 2, 2
        p1 = maximally_entangled(d).projector
        p2 = np.eye(d * d) - p1
        lp = ReducedLp(d, m)
        rng = np.random.default_rng(0)
        c = rng.uniform(size=lp.size)
        ops = {1: p1, 2: p2}
        f = sum(ci * np.kron(ops[s[0]], ops[s[1]]) for ci, s in zip(c, lp.labels()))
        space = BipartiteSpace.ab(d, d).power(m)
        dense = np.sort(np.linalg.eigvalsh(linalg.partial_transpose(f, space)))
        predicted = lp.spectrum_matrix() @ c
        # each sign pattern eigenvalue appears with multiplicity given by the swap eigenspaces
        assert set(np.round(dense, 10)) == set(np.round(predicted, 10))
        # positivity of F reduces to nonnegative coefficients
        assert np.allclose(np.sort(np.linalg.eigvalsh(f))[-1], c.max())

    def test_unambiguity_picks_all_two_label(self):
        d, m = 2, 2
        p1 = maximally_entangled(d).projector
        rho2 = multicopy(complement_state(maximally_entangled(d)), m).matrix
        ops = {1: p1, 2: np.eye(4) - p1}
        for s in ReducedLp(d, m).labels():
            overlap = np.trace(np.kron(ops[s[0]], ops[s[1]]) @ rho2).real
            assert np.isclose(overlap, 1.0 if s == (2, 2) else 0.0)

    def test_twirl_consistency(self):
        """Twirling a PPT effect lands on LP-feasible coefficients with the
        same gain on the maximally entangled state."""
        rng = np.random.default_rng(5)
        d = 2
        lp = ReducedLp(d, 1)
        p1 = maximally_entangled(d).projector
        for _ in range(20):
            # random separable, hence PPT, effect scaled below the identity
            e = np.zeros((4, 4), dtype=complex)
            for _ in range(3):
                a = haar_unitary(2, rng)[:, 0]
                b = haar_unitary(2, rng)[:, 0]
                e += rng.uniform() * np.outer(np.kron(a, b), np.kron(a, b).conj())
            e /= max(1.0, np.linalg.eigvalsh(e)[-1])
            coeffs = isotropic_twirl(e, d)
            c = np.array([coeffs.a, coeffs.b / (d * d - 1)])
            assert np.all(lp.spectrum_matrix() @ c >= -1e-12)
            assert np.all((c >= -1e-12) & (c <= 1 + 1e-12))
            assert np.isclose(c[0], np.trace(e @ p1).real)


class TestWitness:
    def test_only_leading_term(self):
        c = np.zeros(4)
        c[0] = 1
        assert lemma8_witness_check(2, 2, c) is False

    def test_random_draws(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            c = rng.exponential(size=8)
            c[0] = 1
            assert lemma8_witness_check(2, 3, c) is False

    def test_single_copy_with_excluded_weight(self):
        assert lemma8_witness_check(2, 1, {(1,): 1.0, (2,): 1.0}) is False

    def test_bad_indexing(self):
        with pytest.raises(BadIndexing):
            lemma8_witness_check(2, 2, np.ones(3))
        with pytest.raises(BadIndexing):
            lemma8_witness_check(2, 1, {(3,): 1.0})
        with pytest.raises(BadIndexing):
            lemma8_witness_check(2, 1, np.array([0.5, 0.0]))
