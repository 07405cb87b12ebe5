"""Twirling channels as exact projections, plus a Monte Carlo oracle.

Every twirl here averages ``g m g^†`` over a compact group of local
unitaries.  The exact versions are closed-form projections onto the
commutant of the group; ``haar_average_sample`` computes the same average
by sampling and exists to test the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import BadChannelKind, DimensionMismatch
from .space import BipartiteSpace
from .states import haar_unitary, maximally_entangled, pauli

CHANNEL_KINDS = ("identity", "isotropic", "diagonal_phase", "pauli")


@dataclass(frozen=True)
class TwirlCoefficients:
    """Weights of the isotropic twirl on the maximally entangled projector
    (``a``) and on its normalized complement (``b``)."""

    a: float
    b: float


def _local_dim(m: np.ndarray) -> int:
    n = m.shape[0]
    d = int(round(np.sqrt(n)))
    if m.shape != (n, n) or d * d != n:
        raise DimensionMismatch(f"expected an operator on d x d, got shape {m.shape}")
    return d


def _require_pair_space(m, d: int) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (d * d, d * d):
        raise DimensionMismatch(f"operator of shape {m.shape} does not act on {d} x {d}")
    return m


def isotropic_twirl(n, d: int) -> TwirlCoefficients:
    """Average of ``(V ⊗ V*) n (V ⊗ V*)^†`` over Haar-random ``V``.

    The commutant of ``V ⊗ V*`` is spanned by the maximally entangled
    projector ``P1`` and ``P2 = I - P1``.  The channel is trace preserving on
    each of these invariant subspaces, so the output is
    ``tr(n P1) P1 + tr(n P2) P2 / (d^2 - 1)``.
    """
    n = _require_pair_space(n, d)
    p1 = maximally_entangled(d).projector
    a = float(np.real(np.trace(n @ p1)))
    b = float(np.real(np.trace(n))) - a
    return TwirlCoefficients(a, b)


def isotropic_twirl_operator(n, d: int) -> np.ndarray:
    """The twirled operator ``a P1 + b (I - P1)/(d^2 - 1)`` itself."""
    coeffs = isotropic_twirl(n, d)
    p1 = maximally_entangled(d).projector
    return coeffs.a * p1 + coeffs.b * (np.eye(d * d) - p1) / (d * d - 1)


def _pauli_pairs() -> list[np.ndarray]:
    return [np.kron(pauli(k), pauli(k)) for k in range(4)]


def pauli_twirl(m) -> np.ndarray:
    """``(1/4) sum_k (s_k ⊗ s_k) m (s_k ⊗ s_k)`` on a qubit pair.

    The four ``s_k ⊗ s_k`` commute and share the Bell basis as eigenvectors,
    so the output is diagonal in the Bell basis.
    """
    m = _require_pair_space(m, 2)
    return sum(g @ m @ g for g in _pauli_pairs()) / 4.0


def w_matrix() -> np.ndarray:
    """Local unitary on a qubit pair that cycles the Bell vectors 1 -> 2 -> 3
    up to phases, leaving the first Bell vector fixed up to phase."""
    left = np.array([[-1j, 1], [-1j, -1]]) / np.sqrt(2)
    right = np.array([[1j, 1], [1j, -1]]) / np.sqrt(2)
    return np.kron(left, right)


def _phase_mask(d: int) -> np.ndarray:
    # Conjugating by v ⊗ v* with v = diag(e^{i theta}) multiplies the entry
    # <ij| m |kl> by exp(i(theta_i - theta_j - theta_k + theta_l)).  Its
    # average over independent uniform phases is 1 exactly when the index
    # multisets {i, l} and {j, k} coincide, that is (i = k and j = l) or
    # (i = j and k = l); otherwise it is 0.
    i, j, k, l = np.ix_(*(np.arange(d),) * 4)
    return ((i == k) & (j == l)) | ((i == j) & (k == l))


def diagonal_phase_twirl(m, local_dim: int, space: BipartiteSpace | None = None, pair: tuple[int, int] | None = None) -> np.ndarray:
    """Average over diagonal unitaries ``v ⊗ v*`` acting on two factors.

    Without ``space`` the operator must live on ``local_dim ⊗ local_dim``.
    With ``space``, ``pair`` names the two factor indices being twirled and
    every other factor is a bystander left untouched.
    """
    m = np.asarray(m, dtype=complex)
    d = int(local_dim)
    if space is None:
        m = _require_pair_space(m, d)
        space = BipartiteSpace.ab(d, d)
        pair = (0, 1)
    elif pair is None:
        raise DimensionMismatch("a twirled factor pair is required when a space is given")
    dims = space.dims
    if m.shape != (space.dim, space.dim):
        raise DimensionMismatch(f"operator of shape {m.shape} does not act on dimension {space.dim}")
    first, second = pair
    if first == second or dims[first] != d or dims[second] != d:
        raise DimensionMismatch(f"factors {pair} of {dims} are not a {d} x {d} pair")
    k = len(dims)
    mask4 = _phase_mask(d)  # axes (i, j, k, l) = (row first, row second, col first, col second)
    shape = [1] * (2 * k)
    shape[first], shape[second], shape[k + first], shape[k + second] = d, d, d, d
    order = sorted([(first, 0), (second, 1), (k + first, 2), (k + second, 3)])
    mask = np.transpose(mask4, [slot for _, slot in order]).reshape(shape)
    return (m.reshape(dims + dims) * mask).reshape(m.shape)


def _sample_group(kind: str, d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    if kind == "identity":
        return np.broadcast_to(np.eye(d * d, dtype=complex), (count, d * d, d * d))
    if kind == "isotropic":
        vs = np.stack([haar_unitary(d, rng) for _ in range(count)])
        return np.einsum("nab,ncd->nacbd", vs, np.conj(vs)).reshape(count, d * d, d * d)
    if kind == "diagonal_phase":
        phases = np.exp(1j * rng.uniform(0.0, 2 * np.pi, size=(count, d)))
        diag = np.einsum("na,nb->nab", phases, np.conj(phases)).reshape(count, d * d)
        return diag[:, :, None] * np.eye(d * d)
    if kind == "pauli":
        if d != 2:
            raise DimensionMismatch("the Pauli channel acts on a qubit pair")
        return np.stack(_pauli_pairs())[rng.integers(0, 4, size=count)]
    raise BadChannelKind(f"unknown channel {kind!r}; expected one of {CHANNEL_KINDS}")


def haar_average_sample(m, kind: str, samples: int, seed: int, batch: int = 2048) -> np.ndarray:
    """Empirical mean of ``g m g^†`` over ``samples`` random group elements.

    Deterministic for a given ``seed``.  ``kind`` is one of
    ``CHANNEL_KINDS``; all act on ``d ⊗ d`` with ``d`` read off ``m``.
    """
    if kind not in CHANNEL_KINDS:
        raise BadChannelKind(f"unknown channel {kind!r}; expected one of {CHANNEL_KINDS}")
    if samples < 1:
        raise ValueError("at least one sample is required")
    m = np.asarray(m, dtype=complex)
    d = _local_dim(m)
    rng = np.random.default_rng(seed)
    total = np.zeros_like(m)
    left = samples
    while left > 0:
        count = min(batch, left)
        gs = _sample_group(kind, d, count, rng)
        total += np.einsum("nab,bc,ndc->ad", gs, m, np.conj(gs))
        left -= count
    return total / samples


__all__ = [
    "CHANNEL_KINDS",
    "TwirlCoefficients",
    "isotropic_twirl",
    "isotropic_twirl_operator",
    "pauli_twirl",
    "w_matrix",
    "diagonal_phase_twirl",
    "haar_average_sample",
]
