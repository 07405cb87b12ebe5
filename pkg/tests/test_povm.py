import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pptdiscrim import linalg
from pptdiscrim.discrim import YES, perfect_ppt_feasibility
from pptdiscrim.errors import BadDimension, NotAPovm, NotEntangled, PreconditionViolated
from pptdiscrim.experiments import locally_rotated, random_spectrum
from pptdiscrim.povm import (
    Povm,
    check_construction,
    corner_parameters,
    discrimination_matrix,
    is_ppt_povm,
    thm15_povm,
    thm16_povm,
    thm19_iota,
    thm19_povm,
    three_bell_povm,
    verify_perfect_discrimination,
    verify_povm,
)
from pptdiscrim.space import BipartiteSpace
from pptdiscrim.states import (
    DiscriminationInstance,
    bell_state,
    maximally_entangled,
    product_state,
    schmidt_form,
)

QUBITS = BipartiteSpace.ab(2, 2)


def computational_projectors():
    return Povm(tuple(np.diag(np.eye(4)[k]) for k in range(4)), QUBITS)


class TestVerifiers:
    def test_singleton_identity(self):
        assert verify_povm(Povm((np.eye(4),), QUBITS))

    def test_computational_projectors(self):
        p = computational_projectors()
        assert verify_povm(p) and is_ppt_povm(p)

    def test_overscaled_effect(self):
        phi = bell_state(0).projector
        assert not verify_povm(Povm((1.1 * phi, np.eye(4) - 1.1 * phi), QUBITS))

    def test_entangled_projector_not_ppt(self):
        phi = bell_state(0).projector
        assert not is_ppt_povm(Povm((phi, np.eye(4) - phi), QUBITS))

    def test_ppt_requires_povm(self):
        with pytest.raises(NotAPovm):
            is_ppt_povm(Povm((0.5 * np.eye(4),), QUBITS))

    def test_discrimination_matrix(self):
        inst = DiscriminationInstance(tuple(product_state(np.eye(2)[i], np.eye(2)[j]) for i in range(2) for j in range(2)))
        assert np.allclose(discrimination_matrix(computational_projectors(), inst), np.eye(4))
        single = DiscriminationInstance((bell_state(0),))
        assert np.allclose(discrimination_matrix(Povm((np.eye(4),), QUBITS), single), [[1.0]])

    def test_json_round_trip(self):
        p = three_bell_povm().povm
        q = Povm.from_json(p.to_json())
        assert all(np.array_equal(a, b) for a, b in zip(p.effects, q.effects))


class TestThreeBell:
    def test_all_checks(self):
        c = three_bell_povm()
        check = check_construction(c)
        assert check.passed
        assert check.discrimination_error <= 1e-9
        assert check.residuals.completeness <= 1e-9
        assert check.residuals.min_transposed_eigenvalue >= -1e-9
        assert abs(c.iota - 2 / 3) <= 1e-12

    def test_completing_block_is_identity_third(self):
        assert np.allclose(three_bell_povm().params.blocks["N11"], np.eye(4) / 3)

    def test_agrees_with_solver(self):
        c = three_bell_povm()
        assert perfect_ppt_feasibility(c.instance, candidate=c.povm).feasible == YES


class TestMaximalResource:
    def test_bell_parameters(self):
        c = thm15_povm(bell_state(0))
        assert np.isclose(c.params["p"], 1 / 3) and np.isclose(c.params["q"], 1 / 6)

    def test_partial_spectrum(self):
        c = thm15_povm(schmidt_form([0.8, 0.2]))
        assert np.isclose(c.params["p"], 0.4 / 1.4)
        assert check_construction(c).passed

    def test_four_dimensional(self):
        assert check_construction(thm15_povm(maximally_entangled(4))).passed

    def test_product_rejected(self):
        with pytest.raises(NotEntangled):
            thm15_povm(product_state([1, 0], [0, 1]))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 5), st.integers(0, 2**31 - 1))
    def test_random_spectra(self, d, seed):
        rng = np.random.default_rng(seed)
        psi = locally_rotated(schmidt_form(random_spectrum(rng, d)), rng)
        c = thm15_povm(psi)
        assert check_construction(c).passed
        p, q = c.params["p"], c.params["q"]
        assert 0 <= p <= 1 / 3 + 1e-12 and 1 / 6 - 1e-12 <= q <= 1 / 2
        assert linalg.max_abs(linalg.abs_matrix(c.params.blocks["B"]) - c.params.blocks["A"]) <= 1e-10


class TestPartialResource:
    def test_worked_spectrum(self):
        c = thm16_povm(schmidt_form([0.8, 0.2]))
        assert np.isclose(c.params["r"], 0.4) and np.isclose(c.params["t"], 1.25)
        assert np.isclose(c.iota, 1 / 2.5625)
        assert check_construction(c).passed

    def test_uniform_three(self):
        c = thm16_povm(maximally_entangled(3))
        assert np.isclose(c.params["t"], 1.5) and np.isclose(c.iota, 4 / 13)
        assert check_construction(c).passed

    def test_bell_rejected(self):
        with pytest.raises(PreconditionViolated):
            thm16_povm(bell_state(0))

    def test_product_rejected(self):
        with pytest.raises(PreconditionViolated):
            thm16_povm(product_state([1, 0], [1, 0]))

    @settings(max_examples=200, deadline=None)
    @given(st.integers(2, 6), st.integers(0, 2**31 - 1))
    def test_parameter_chain(self, d, seed):
        lam = random_spectrum(np.random.default_rng(seed), d)
        r = float(np.sqrt(lam[0] * lam[1]))
        if r >= 0.5 - 1e-6:
            return
        t = min(np.sqrt((1 + r) / r), 1 / (2 * r))
        x, y = corner_parameters(r, t)
        tol = 1e-12
        assert -tol <= y <= x - y + tol
        assert abs((x - y) - t / (t * t + 1)) <= tol
        assert x - y <= 0.5 + tol

    @settings(max_examples=20, deadline=None)
    @given(st.integers(2, 5), st.integers(0, 2**31 - 1))
    def test_random_spectra_verify(self, d, seed):
        rng = np.random.default_rng(seed)
        lam = random_spectrum(rng, d)
        if np.sqrt(lam[0] * lam[1]) >= 0.5 - 1e-6:
            return
        c = thm16_povm(locally_rotated(schmidt_form(lam), rng))
        assert check_construction(c).passed and c.iota < 0.5


class TestDimensionFamily:
    @pytest.mark.parametrize("d", range(2, 9))
    def test_verifies(self, d):
        c = thm19_povm(d)
        assert check_construction(c).passed
        expected = 4 / (d * d + 4) if d <= 4 else 1 / (d + 2)
        assert abs(c.iota - expected) <= 1e-12
        assert abs(thm19_iota(d) - expected) <= 1e-12

    def test_five(self):
        assert np.isclose(thm19_povm(5).iota, 1 / 7)

    def test_two_is_maximal(self):
        assert np.isclose(thm19_povm(2).iota, 0.5)

    def test_bad_dimension(self):
        with pytest.raises(BadDimension):
            thm19_povm(1)

    def test_agrees_with_solver(self):
        c = thm19_povm(3)
        assert perfect_ppt_feasibility(c.instance, candidate=c.povm).feasible == YES


def test_perfect_discrimination_needs_matching_count():
    inst = DiscriminationInstance((bell_state(0),))
    assert not verify_perfect_discrimination(computational_projectors(), inst)
