import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pptdiscrim.errors import BadEnsemble, BadRange, DimensionMismatch, NotOrthogonal, SumMismatch
from pptdiscrim.hssh import (
    EnsembleSpec,
    catalysis_transform_check,
    ensemble_from_json,
    ensemble_possible,
    ensemble_to_json,
    flagged_superposition,
    hssh_detect,
    majorizes,
    nielsen_possible,
    random_detector_ensemble,
    three_bell_flagged_state,
    three_bell_lower_bound,
)
from pptdiscrim.space import BipartiteSpace
from pptdiscrim.states import (
    bell_state,
    product_state,
    ququad_set,
    random_pure_state,
    resource_state,
    schmidt_coefficients,
)


def probability_vectors(size=4):
    return st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=size, max_size=size).filter(lambda v: sum(v) > 1e-3).map(
        lambda v: np.sort(np.array(v) / sum(v))[::-1]
    )


class TestMajorizes:
    def test_extreme_point(self):
        assert majorizes([1, 0], [0.5, 0.5])

    def test_reverse(self):
        assert not majorizes([0.5, 0.5], [1, 0])

    def test_single_crossing(self):
        assert majorizes([0.55, 0.45], [0.5, 0.5])

    def test_padding(self):
        assert majorizes([1.0], [0.5, 0.25, 0.25])

    def test_sum_mismatch(self):
        with pytest.raises(SumMismatch):
            majorizes([1, 0], [0.5, 0.4])

    @settings(max_examples=100, deadline=None)
    @given(probability_vectors())
    def test_reflexive(self, x):
        assert majorizes(x, x)

    @settings(max_examples=100, deadline=None)
    @given(probability_vectors(), probability_vectors())
    def test_antisymmetric(self, x, y):
        if majorizes(x, y) and majorizes(y, x):
            assert np.allclose(x, y, atol=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(probability_vectors(), probability_vectors(), probability_vectors())
    def test_transitive(self, x, y, z):
        if majorizes(x, y) and majorizes(y, z):
            assert majorizes(x, z)


class TestNielsen:
    def test_destroying_entanglement(self):
        assert nielsen_possible(bell_state(0), product_state([1, 0], [1, 0]))

    def test_creating_entanglement(self):
        assert not nielsen_possible(product_state([1, 0], [1, 0]), bell_state(0))

    def test_partial_to_maximal(self):
        assert not nielsen_possible(resource_state(0.75), bell_state(0))

    def test_self(self, rng):
        psi = random_pure_state(BipartiteSpace.ab(3, 4), rng)
        assert nielsen_possible(psi, psi)


class TestEnsemble:
    def test_product_everything(self):
        ens = EnsembleSpec((0.5, 0.5), (product_state([1, 0], [1, 0]), product_state([0, 1], [1, 1])))
        assert ensemble_possible(product_state([1, 0], [0, 1]), ens)

    def test_destroy(self):
        assert ensemble_possible(bell_state(0), EnsembleSpec((1.0,), (product_state([1, 0], [1, 0]),)))

    def test_three_bell_chain(self):
        assert not ensemble_possible(three_bell_flagged_state(0.7), EnsembleSpec((1.0,), (bell_state(0),)))

    def test_bad_ensembles(self):
        with pytest.raises(BadEnsemble):
            EnsembleSpec((0.5, 0.6), (bell_state(0), bell_state(1)))
        with pytest.raises(BadEnsemble):
            EnsembleSpec((1.0,), (bell_state(0), bell_state(1)))

    def test_catalyst_does_not_change_answer(self, rng):
        for _ in range(50):
            ens = random_detector_ensemble(int(rng.integers(0, 2**31)), size=3)
            source = random_pure_state(BipartiteSpace.ab(int(rng.integers(2, 5)), int(rng.integers(2, 5))), rng)
            plain = ensemble_possible(source, ens)
            assert ensemble_possible(source.tensor(bell_state(0)), ens.tensor(bell_state(0))) == plain

    def test_json_round_trip(self):
        ens = random_detector_ensemble(3)
        back = ensemble_from_json(ensemble_to_json(ens))
        assert np.allclose(back.probabilities, ens.probabilities)
        assert all(np.allclose(a.vector, b.vector) for a, b in zip(back.detectors, ens.detectors))


def three_bell_states(lambda0):
    return [bell_state(k).tensor(resource_state(lambda0)) for k in (1, 2, 3)]


def bell_detectors():
    return EnsembleSpec((1 / 3,) * 3, tuple(bell_state(k) for k in (1, 2, 3)))


class TestDetect:
    def test_three_bell_detected(self):
        assert hssh_detect(three_bell_states(0.7), bell_detectors())

    def test_three_bell_threshold_not_detected(self):
        assert not hssh_detect(three_bell_states(2 / 3), bell_detectors())

    def test_monotone_in_weight(self):
        flags = [hssh_detect(three_bell_states(lam), bell_detectors()) for lam in (0.67, 0.7, 0.8, 0.9, 1.0)]
        assert all(flags)

    def test_product_detectors(self):
        ens = EnsembleSpec((1 / 3,) * 3, tuple(product_state(np.eye(3)[k], np.eye(3)[k]) for k in range(3)))
        assert not hssh_detect(three_bell_states(0.9), ens)

    def test_ququad_random_detectors(self):
        chis = ququad_set()
        for seed in range(30):
            assert not hssh_detect(chis, random_detector_ensemble(seed))

    def test_flagged_state_matches_generic_builder(self):
        lam = 0.7
        states = three_bell_states(lam)
        generic = flagged_superposition(states, bell_detectors())
        assert np.allclose(schmidt_coefficients(generic)[:4], schmidt_coefficients(three_bell_flagged_state(lam))[:4])

    def test_non_orthogonal(self):
        ens = EnsembleSpec((0.5, 0.5), (bell_state(0), bell_state(1)))
        with pytest.raises(NotOrthogonal):
            flagged_superposition([bell_state(0), bell_state(0)], ens)

    def test_count_mismatch(self):
        with pytest.raises(DimensionMismatch):
            hssh_detect([bell_state(0)], bell_detectors())

    def test_cut_mismatch(self):
        with pytest.raises(DimensionMismatch):
            hssh_detect(three_bell_states(0.7), bell_detectors(), cut=BipartiteSpace.ab(2, 2))


class TestLowerBound:
    @pytest.mark.parametrize("lam,expected,excluded", [(0.7, 0.525, True), (2 / 3, 0.5, False), (0.5, 0.375, False)])
    def test_examples(self, lam, expected, excluded):
        bound = three_bell_lower_bound(lam)
        assert abs(bound.lambda_max - expected) <= 1e-9
        assert bound.excluded is excluded

    def test_closed_form_on_grid(self):
        for lam in np.linspace(0.5, 1.0, 21):
            assert abs(three_bell_lower_bound(lam).lambda_max - 0.75 * lam) <= 1e-9

    def test_range(self):
        with pytest.raises(BadRange):
            three_bell_lower_bound(0.4)


class TestCatalysis:
    def test_uniform_bell_detectors(self):
        ens = EnsembleSpec((0.25,) * 4, (bell_state(0),) * 4)
        assert catalysis_transform_check(ens)

    def test_seeded(self):
        assert all(catalysis_transform_check(seed=s) for s in range(20))

    def test_needs_four(self):
        with pytest.raises(BadEnsemble):
            catalysis_transform_check(bell_detectors())

    def test_needs_input(self):
        with pytest.raises(BadEnsemble):
            catalysis_transform_check()
