"""Pure and mixed bipartite states, Schmidt decompositions and the named
states used throughout the package (Bell basis, maximally entangled
states, orthogonal complements, the ququad-ququad set)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from . import linalg
from .errors import (
    BadDimension,
    BadIndex,
    DimensionMismatch,
    InvalidState,
    NotOrthogonal,
    TooLarge,
)
from .space import ALICE, BOB, BipartiteSpace, Factor

SCHMIDT_CUTOFF = 1e-10
MULTICOPY_MAX_DIM = 4096


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(vec) > 1e-12)
    if nz.size == 0:
        return vec
    first = vec[nz[0]]
    return vec * (np.conj(first) / abs(first))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalised ket on a bipartite space.

    The global phase is fixed on construction: the first nonzero amplitude
    is real and positive, so two equal states compare equal entrywise.
    """

    vector: np.ndarray
    space: BipartiteSpace

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=complex).reshape(-1)
        if vec.size != self.space.dim:
            raise DimensionMismatch(f"vector of length {vec.size} on a space of dimension {self.space.dim}")
        if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
            raise InvalidState(f"state vector has norm {np.linalg.norm(vec):.12f}")
        object.__setattr__(self, "vector", _frozen(_fix_phase(vec)))

    @classmethod
    def from_amplitudes(cls, amplitudes, space: BipartiteSpace) -> "PureState":
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(vec)
        if nrm == 0:
            raise InvalidState("zero vector")
        return cls(vec / nrm, space)

    @property
    def projector(self) -> np.ndarray:
        return linalg.projector(self.vector)

    def density(self) -> "DensityOperator":
        return DensityOperator(self.projector, self.space)

    def tensor(self, other: "PureState") -> "PureState":
        return PureState(np.kron(self.vector, other.vector), self.space.concat(other.space))

    def inner(self, other: "PureState") -> complex:
        return complex(np.vdot(self.vector, other.vector))

    def __repr__(self):
        return f"PureState(dims={self.space.dims}, sides={''.join(self.space.sides)})"


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace operator on a space."""

    matrix: np.ndarray
    space: BipartiteSpace
    validate: bool = True

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        n = self.space.dim
        if m.shape != (n, n):
            raise DimensionMismatch(f"matrix of shape {m.shape} on a space of dimension {n}")
        if self.validate:
            if not linalg.is_hermitian(m):
                raise InvalidState("density operator is not Hermitian")
            if abs(np.trace(m) - 1.0) > 1e-10:
                raise InvalidState(f"density operator has trace {np.trace(m).real:.12f}")
            if not linalg.psd_check(m, 1e-9):
                raise InvalidState("density operator is not positive semidefinite")
        object.__setattr__(self, "matrix", _frozen(m))

    def support_projector(self) -> np.ndarray:
        return linalg.support_projector(self.matrix, 1e-9)

    def tensor(self, other: "DensityOperator") -> "DensityOperator":
        return DensityOperator(np.kron(self.matrix, other.matrix), self.space.concat(other.space), validate=False)

    def __repr__(self):
        return f"DensityOperator(dims={self.space.dims}, sides={''.join(self.space.sides)})"


@dataclass(frozen=True)
class SchmidtDecomposition:
    lambdas: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    @property
    def number(self) -> int:
        return int(np.sum(self.lambdas > SCHMIDT_CUTOFF))

    def reconstruct(self) -> np.ndarray:
        """Vector in Alice-then-Bob grouped order."""
        amps = np.sqrt(self.lambdas)
        return np.einsum("k,ik,jk->ij", amps, self.left_vectors, self.right_vectors).reshape(-1)


def _grouping_permutation(space: BipartiteSpace) -> list[int]:
    return list(space.indices(ALICE)) + list(space.indices(BOB))


def coefficient_matrix(psi: PureState) -> np.ndarray:
    """Amplitudes reshaped to (Alice dims) x (Bob dims), factor order kept within each side."""
    space = psi.space
    space.require_bipartite()
    t = psi.vector.reshape(space.dims).transpose(_grouping_permutation(space))
    return t.reshape(space.dim_a, space.dim_b)


def schmidt(psi: PureState) -> SchmidtDecomposition:
    u, s, v = linalg.svd(coefficient_matrix(psi))
    lambdas = s**2
    # vector = sum_k s_k u_k ⊗ conj(v_k)
    return SchmidtDecomposition(lambdas, u, np.conj(v))


def schmidt_coefficients(psi: PureState) -> np.ndarray:
    return schmidt(psi).lambdas


def schmidt_number(psi: PureState) -> int:
    return schmidt(psi).number


def entanglement_entropy(psi: PureState) -> float:
    """Entropy of entanglement in bits."""
    lam = schmidt_coefficients(psi)
    lam = lam[lam > 1e-12]
    return float(-np.sum(lam * np.log2(lam)))


def reduced_state(psi: PureState, side: str = ALICE) -> np.ndarray:
    return linalg.partial_trace(psi.projector, psi.space, psi.space.indices(side))


_PAULI = (
    np.eye(2, dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
)


def pauli(k: int) -> np.ndarray:
    """Paulis indexed as sigma_0 = I, sigma_1 = Z, sigma_2 = X, sigma_3 = Y."""
    if k not in (0, 1, 2, 3):
        raise BadIndex(f"Pauli index must be 0..3, got {k!r}")
    return _PAULI[k].copy()


QUBITS = BipartiteSpace.ab(2, 2)


def bell_state(k: int) -> PureState:
    """(I ⊗ sigma_k)(|00> + |11>)/sqrt(2) on a qubit pair."""
    if k not in (0, 1, 2, 3):
        raise BadIndex(f"Bell index must be 0..3, got {k!r}")
    phi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return PureState(np.kron(np.eye(2), pauli(k)) @ phi, QUBITS)


def maximally_entangled(d: int) -> PureState:
    if int(d) != d or d < 2:
        raise BadDimension(f"maximally entangled state needs d >= 2, got {d!r}")
    d = int(d)
    vec = np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)
    return PureState(vec, BipartiteSpace.ab(d, d))


def schmidt_form(lambdas: Sequence[float], dim: int | None = None) -> PureState:
    """sum_i sqrt(lambda_i) |ii> on a dim ⊗ dim space."""
    lam = np.asarray(lambdas, dtype=float)
    if np.any(lam < 0) or abs(lam.sum() - 1.0) > 1e-10:
        raise InvalidState(f"Schmidt coefficients must be a probability vector, got {lam}")
    d = len(lam) if dim is None else int(dim)
    if d < len(lam):
        raise BadDimension(f"dimension {d} too small for {len(lam)} coefficients")
    vec = np.zeros((d, d), dtype=complex)
    vec[np.arange(len(lam)), np.arange(len(lam))] = np.sqrt(lam)
    return PureState(vec.reshape(-1), BipartiteSpace.ab(d, d))


def resource_state(lambda0: float) -> PureState:
    """sqrt(lambda0)|00> + sqrt(1 - lambda0)|11>."""
    if not 0.0 <= lambda0 <= 1.0:
        raise InvalidState(f"lambda0 must lie in [0, 1], got {lambda0}")
    return schmidt_form([lambda0, 1.0 - lambda0], 2)


def product_state(*kets) -> PureState:
    """Product of one local ket per party, first Alice then Bob."""
    a, b = (np.asarray(k, dtype=complex).reshape(-1) for k in kets)
    vec = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
    return PureState(vec, BipartiteSpace.ab(a.size, b.size))


def complement_state(psi: PureState) -> DensityOperator:
    """(I - |psi><psi|) / (D - 1)."""
    dim = psi.space.dim
    if dim < 2:
        raise BadDimension("complement needs total dimension >= 2")
    return DensityOperator((np.eye(dim) - psi.projector) / (dim - 1), psi.space, validate=False)


def permute_factors(vec_or_op: np.ndarray, space: BipartiteSpace, order: Sequence[int]) -> tuple[np.ndarray, BipartiteSpace]:
    """Reorder tensor factors of a ket (1-d) or operator (2-d)."""
    order = list(order)
    dims = space.dims
    new_space = BipartiteSpace(tuple(space.factors[i] for i in order))
    a = np.asarray(vec_or_op)
    if a.ndim == 1:
        out = a.reshape(dims).transpose(order).reshape(-1)
    else:
        k = len(dims)
        out = a.reshape(dims + dims).transpose(order + [k + i for i in order]).reshape(a.shape)
    return out, new_space


def ququad_set() -> list[PureState]:
    """chi_0..chi_3 = Psi_0Psi_0, Psi_1Psi_1, Psi_2Psi_1, Psi_3Psi_1 on (X1:A, X2:A, Y1:B, Y2:B)."""
    pairs = [(0, 0), (1, 1), (2, 1), (3, 1)]
    out = []
    for first, second in pairs:
        joint = bell_state(first).tensor(bell_state(second))  # X1 Y1 X2 Y2
        vec, space = permute_factors(joint.vector, joint.space, [0, 2, 1, 3])
        out.append(PureState(vec, space))
    return out


@dataclass(frozen=True, eq=False)
class DiscriminationInstance:
    """Mutually orthogonal density operators on one space."""

    states: tuple[DensityOperator, ...]

    def __post_init__(self):
        states = tuple(s.density() if isinstance(s, PureState) else s for s in self.states)
        object.__setattr__(self, "states", states)
        if not states:
            raise ValueError("an instance needs at least one state")
        space = states[0].space
        for s in states[1:]:
            if s.space != space:
                raise DimensionMismatch("all states of an instance must share one space")
        for (i, a), (j, b) in combinations(enumerate(states), 2):
            overlap = abs(np.trace(a.matrix @ b.matrix))
            if overlap > 1e-9:
                raise NotOrthogonal(f"states {i} and {j} overlap: tr(rho_i rho_j) = {overlap:.3e}")

    @property
    def space(self) -> BipartiteSpace:
        return self.states[0].space

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def support_projectors(self) -> list[np.ndarray]:
        return [s.support_projector() for s in self.states]


def tensor_with_resource(instance: DiscriminationInstance, alpha: PureState) -> DiscriminationInstance:
    """Each rho_k ⊗ |alpha><alpha| on the concatenated factor list."""
    res = alpha.density()
    return DiscriminationInstance(tuple(s.tensor(res) for s in instance.states))


def multicopy(rho: DensityOperator, m: int) -> DensityOperator:
    if int(m) != m or m < 1:
        raise BadDimension(f"copy count must be a positive integer, got {m!r}")
    m = int(m)
    if rho.space.dim**m > MULTICOPY_MAX_DIM:
        raise TooLarge(f"{m} copies of a {rho.space.dim}-dimensional state exceed {MULTICOPY_MAX_DIM}")
    out = rho.matrix
    for _ in range(m - 1):
        out = np.kron(out, rho.matrix)
    return DensityOperator(out, rho.space.power(m), validate=False)


def random_pure_state(space: BipartiteSpace, rng: np.random.Generator) -> PureState:
    vec = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    return PureState.from_amplitudes(vec, space)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from QR of a complex Ginibre matrix."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


__all__ = [
    "ALICE",
    "BOB",
    "BipartiteSpace",
    "Factor",
    "PureState",
    "DensityOperator",
    "SchmidtDecomposition",
    "DiscriminationInstance",
    "pauli",
    "bell_state",
    "maximally_entangled",
    "schmidt",
    "schmidt_coefficients",
    "schmidt_number",
    "schmidt_form",
    "resource_state",
    "product_state",
    "complement_state",
    "ququad_set",
    "tensor_with_resource",
    "multicopy",
    "entanglement_entropy",
    "reduced_state",
    "coefficient_matrix",
    "permute_factors",
    "random_pure_state",
    "haar_unitary",
]
