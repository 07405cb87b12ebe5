import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pptdiscrim import linalg
from pptdiscrim.errors import BadDimension, BadIndex, DimensionMismatch, InvalidState, NotOrthogonal, OneSidedSpace, TooLarge
from pptdiscrim.space import BipartiteSpace
from pptdiscrim.states import (
    DensityOperator,
    DiscriminationInstance,
    PureState,
    bell_state,
    complement_state,
    entanglement_entropy,
    maximally_entangled,
    multicopy,
    pauli,
    product_state,
    ququad_set,
    random_pure_state,
    reduced_state,
    resource_state,
    schmidt,
    schmidt_coefficients,
    schmidt_form,
    schmidt_number,
    tensor_with_resource,
)


class TestPauli:
    def test_identity(self):
        assert np.array_equal(pauli(0), np.eye(2))

    def test_first_is_diagonal(self):
        assert np.array_equal(pauli(1), np.diag([1, -1]))

    @pytest.mark.parametrize("k", range(4))
    def test_involution(self, k):
        assert np.allclose(pauli(k) @ pauli(k), np.eye(2))

    def test_bad_index(self):
        with pytest.raises(BadIndex):
            pauli(4)


class TestBell:
    def test_first(self):
        assert np.allclose(bell_state(0).vector, np.array([1, 0, 0, 1]) / np.sqrt(2))

    def test_second_from_local_flip(self):
        expected = np.kron(np.eye(2), pauli(1)) @ bell_state(0).vector
        assert np.allclose(bell_state(1).vector, expected)
        assert np.allclose(bell_state(1).vector, np.array([1, 0, 0, -1]) / np.sqrt(2))

    def test_orthonormal(self):
        gram = np.array([[bell_state(i).inner(bell_state(j)) for j in range(4)] for i in range(4)])
        assert np.allclose(gram, np.eye(4))

    def test_bad_index(self):
        with pytest.raises(BadIndex):
            bell_state(-1)


class TestMaximallyEntangled:
    def test_two_is_bell(self):
        assert np.allclose(maximally_entangled(2).vector, bell_state(0).vector)

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_reduced_and_spectrum(self, d):
        phi = maximally_entangled(d)
        assert np.allclose(reduced_state(phi, "A"), np.eye(d) / d)
        assert np.allclose(reduced_state(phi, "B"), np.eye(d) / d)
        assert np.allclose(schmidt_coefficients(phi), np.full(d, 1 / d))

    def test_bad_dimension(self):
        with pytest.raises(BadDimension):
            maximally_entangled(1)


class TestSchmidt:
    def test_product(self):
        assert np.allclose(schmidt_coefficients(product_state([1, 0], [1, 0]))[:1], [1])
        assert schmidt_number(product_state([1, 0], [1, 0])) == 1

    def test_bell(self):
        assert np.allclose(schmidt_coefficients(bell_state(0)), [0.5, 0.5])

    def test_partial(self):
        assert np.allclose(schmidt_coefficients(schmidt_form([0.8, 0.2])), [0.8, 0.2])

    def test_one_sided(self):
        psi = PureState(np.array([1, 0]), BipartiteSpace.of((2, "A")))
        with pytest.raises(OneSidedSpace):
            schmidt(psi)

    def test_grouping_interleaved_factors(self):
        states = ququad_set()
        for chi in states:
            assert schmidt_number(chi) == 4

    def test_reconstruction_many(self, rng):
        for _ in range(500):
            da, db = rng.integers(1, 5, size=2)
            space = BipartiteSpace.ab(int(da), int(db))
            psi = random_pure_state(space, rng)
            dec = schmidt(psi)
            fidelity = abs(np.vdot(dec.reconstruct(), psi.vector)) ** 2
            assert fidelity >= 1 - 1e-9
            assert abs(dec.lambdas.sum() - 1) <= 1e-10
            assert np.all(np.diff(dec.lambdas) <= 1e-12)

    def test_number_multiplies_under_tensor(self, rng):
        for d1, d2 in [(2, 2), (2, 3), (3, 3)]:
            psi = schmidt_form(rng.dirichlet(np.ones(d1)))
            phi = schmidt_form(rng.dirichlet(np.ones(d2)))
            assert schmidt_number(psi.tensor(phi)) == schmidt_number(psi) * schmidt_number(phi)


class TestComplement:
    def test_bell_complement(self):
        rho = complement_state(bell_state(0))
        assert np.allclose(rho.matrix, (np.eye(4) - bell_state(0).projector) / 3)
        assert np.allclose(np.linalg.eigvalsh(rho.matrix), [0, 1 / 3, 1 / 3, 1 / 3])

    def test_orthogonal_and_normalized(self, rng):
        psi = random_pure_state(BipartiteSpace.ab(2, 3), rng)
        rho = complement_state(psi)
        assert abs(np.trace(rho.matrix @ psi.projector)) <= 1e-12
        assert abs(np.trace(rho.matrix) - 1) <= 1e-12

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**31 - 1))
    def test_resolution_of_identity(self, da, db, seed):
        if da * db < 2:
            return
        psi = random_pure_state(BipartiteSpace.ab(da, db), np.random.default_rng(seed))
        rho = complement_state(psi)
        assert linalg.max_abs((da * db - 1) * rho.matrix + psi.projector - np.eye(da * db)) <= 1e-12


class TestQuquad:
    def test_orthogonal(self):
        chis = ququad_set()
        gram = np.array([[a.inner(b) for b in chis] for a in chis])
        assert np.allclose(gram, np.eye(4))

    def test_alice_reduced_is_maximally_mixed(self):
        assert np.allclose(reduced_state(ququad_set()[2], "A"), np.eye(4) / 4)

    def test_layout(self):
        chi = ququad_set()[0]
        assert chi.space.sides == ("A", "A", "B", "B")


class TestInstance:
    def test_rejects_overlap(self):
        with pytest.raises(NotOrthogonal):
            DiscriminationInstance((bell_state(0), product_state([1, 0], [1, 0])))

    def test_rejects_mixed_spaces(self):
        with pytest.raises(DimensionMismatch):
            DiscriminationInstance((bell_state(0), product_state([1, 0, 0], [0, 1])))

    def test_three_bell_with_resource(self):
        inst = tensor_with_resource(DiscriminationInstance(tuple(bell_state(k) for k in range(3))), resource_state(2 / 3))
        assert len(inst) == 3
        assert inst.space.dim_a == 4 and inst.space.dim_b == 4
        for s in inst:
            assert abs(np.trace(s.matrix) - 1) <= 1e-12

    def test_product_resource_keeps_structure(self):
        base = DiscriminationInstance((bell_state(0), bell_state(1)))
        inst = tensor_with_resource(base, product_state([1, 0], [1, 0]))
        zero = np.zeros((4, 4))
        zero[0, 0] = 1
        for s, b in zip(inst, base):
            assert np.allclose(s.matrix, np.kron(b.matrix, zero))


class TestMulticopy:
    def test_one_copy(self):
        rho = complement_state(bell_state(0))
        assert np.array_equal(multicopy(rho, 1).matrix, rho.matrix)

    def test_trace_and_purity(self):
        rho = complement_state(bell_state(0))
        two = multicopy(rho, 2)
        assert abs(np.trace(two.matrix) - 1) <= 1e-12
        assert abs(np.trace(two.matrix @ two.matrix) - 1 / 9) <= 1e-12

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_trace_up_to_four(self, m):
        assert abs(np.trace(multicopy(bell_state(1).density(), m).matrix) - 1) <= 1e-9

    def test_too_large(self):
        with pytest.raises(TooLarge):
            multicopy(bell_state(0).density(), 7)


class TestEntropy:
    def test_product(self):
        assert entanglement_entropy(product_state([1, 0], [0, 1])) == 0

    def test_bell(self):
        assert abs(entanglement_entropy(bell_state(0)) - 1) <= 1e-12

    def test_two_thirds(self):
        p = 1 / 3
        binary = -p * np.log2(p) - (1 - p) * np.log2(1 - p)
        assert abs(entanglement_entropy(resource_state(2 / 3)) - binary) <= 1e-12
        assert abs(binary - 0.9183) <= 1e-4


class TestValidation:
    def test_unnormalized_vector(self):
        with pytest.raises(InvalidState):
            PureState(np.array([1, 1, 0, 0]), BipartiteSpace.ab(2, 2))

    def test_density_trace(self):
        with pytest.raises(InvalidState):
            DensityOperator(np.eye(4), BipartiteSpace.ab(2, 2))

    def test_phase_convention(self):
        a = PureState(-bell_state(0).vector, bell_state(0).space)
        assert np.allclose(a.vector, bell_state(0).vector)
