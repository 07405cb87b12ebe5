"""Majorization tests for LOCC transformations of pure states, and the
flagged-superposition test for LOCC indistinguishability built on them.

The superposition test works as follows.  Given orthogonal states
``psi_k`` and detector states ``phi_k`` on a fresh pair of systems, if the
``psi_k`` were LOCC distinguishable then ``sum_k sqrt(p_k) psi_k phi_k``
could be turned into the ensemble ``{p_k, phi_k}`` by LOCC.  When the
ensemble majorization criterion rules that transformation out,
indistinguishability is detected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import BadEnsemble, BadRange, CrossCheckFailed, DimensionMismatch, NotOrthogonal, SumMismatch
from .space import BipartiteSpace
from .states import (
    PureState,
    bell_state,
    haar_unitary,
    ququad_set,
    random_pure_state,
    resource_state,
    schmidt_coefficients,
)

SUM_TOL = 1e-9
PARTIAL_SUM_TOL = 1e-10
EXCLUSION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class EnsembleSpec:
    """Probabilities paired with detector states on one common space."""

    probabilities: tuple[float, ...]
    detectors: tuple[PureState, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        detectors = tuple(self.detectors)
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "detectors", detectors)
        if len(probs) != len(detectors) or not probs:
            raise BadEnsemble(f"{len(probs)} probabilities for {len(detectors)} detectors")
        if min(probs) < 0 or abs(sum(probs) - 1.0) > 1e-10:
            raise BadEnsemble(f"probabilities {probs} are not a distribution")
        if any(d.space != detectors[0].space for d in detectors):
            raise BadEnsemble("detectors must share one space")

    @property
    def space(self) -> BipartiteSpace:
        return self.detectors[0].space

    def __len__(self):
        return len(self.probabilities)

    def tensor(self, extra: PureState) -> "EnsembleSpec":
        return EnsembleSpec(self.probabilities, tuple(d.tensor(extra) for d in self.detectors))

    def average_schmidt_vector(self) -> np.ndarray:
        vectors = [np.sort(schmidt_coefficients(d))[::-1] for d in self.detectors]
        width = max(v.size for v in vectors)
        return sum(p * _pad(v, width) for p, v in zip(self.probabilities, vectors))


def _pad(v: np.ndarray, width: int) -> np.ndarray:
    out = np.zeros(width)
    out[: v.size] = v
    return out


def majorizes(x: Sequence[float], y: Sequence[float]) -> bool:
    """Whether ``x`` majorizes ``y``: each partial sum of ``x`` sorted in
    descending order dominates the matching partial sum of ``y``."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if np.any(x < -SUM_TOL) or np.any(y < -SUM_TOL):
        raise ValueError("majorization is defined here for nonnegative vectors")
    if abs(x.sum() - y.sum()) > SUM_TOL:
        raise SumMismatch(f"sums differ: {x.sum():.12f} vs {y.sum():.12f}")
    width = max(x.size, y.size)
    sx = np.cumsum(np.sort(_pad(x, width))[::-1])
    sy = np.cumsum(np.sort(_pad(y, width))[::-1])
    return bool(np.all(sx >= sy - PARTIAL_SUM_TOL))


def nielsen_possible(source: PureState, target: PureState) -> bool:
    """Whether LOCC can turn ``source`` into ``target`` with certainty."""
    return majorizes(schmidt_coefficients(target), schmidt_coefficients(source))


def ensemble_possible(source: PureState, ens: EnsembleSpec) -> bool:
    """Whether LOCC can turn ``source`` into the ensemble ``ens``: the
    probability-weighted average of the detectors' descending Schmidt
    vectors must majorize the Schmidt vector of ``source``."""
    return majorizes(ens.average_schmidt_vector(), schmidt_coefficients(source))


def flagged_superposition(states: Sequence[PureState], ens: EnsembleSpec) -> PureState:
    """``sum_k sqrt(p_k) |psi_k>|phi_k>`` on the states' space followed by
    the detectors' space; the Alice/Bob tags of both carry over."""
    if len(states) != len(ens):
        raise DimensionMismatch(f"{len(states)} states for {len(ens)} detectors")
    space = states[0].space
    if any(s.space != space for s in states):
        raise DimensionMismatch("states must share one space")
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            if abs(states[i].inner(states[j])) > 1e-9:
                raise NotOrthogonal(f"states {i} and {j} are not orthogonal")
    vec = sum(np.sqrt(p) * np.kron(s.vector, d.vector) for p, s, d in zip(ens.probabilities, states, ens.detectors))
    return PureState(vec, space.concat(ens.space))


def hssh_detect(states: Sequence[PureState], ens: EnsembleSpec, cut: BipartiteSpace | None = None) -> bool:
    """True when the flagged superposition cannot reach the detector
    ensemble by LOCC, which proves the states LOCC indistinguishable.

    ``cut`` optionally restates the merged space; it must match the states'
    factors followed by the detectors' factors.
    """
    psi = flagged_superposition(states, ens)
    if cut is not None and cut != psi.space:
        raise DimensionMismatch(f"cut {cut.to_json()} does not match the merged space {psi.space.to_json()}")
    return not ensemble_possible(psi, ens)


@dataclass(frozen=True)
class LowerBound:
    lambda_max: float
    excluded: bool


def three_bell_flagged_state(lambda0: float) -> PureState:
    """``(1/sqrt 3) sum_{k=1..3} |Bell_k>|beta>|Bell_k>`` with
    ``beta = sqrt(lambda0)|00> + sqrt(1-lambda0)|11>``."""
    beta = resource_state(lambda0)
    terms = [bell_state(k).tensor(beta).tensor(bell_state(k)) for k in (1, 2, 3)]
    return PureState.from_amplitudes(sum(t.vector for t in terms), terms[0].space)


def three_bell_lower_bound(lambda0: float) -> LowerBound:
    """Largest Schmidt coefficient of the flagged three-Bell state.

    LOCC discrimination of three Bell states assisted by ``beta`` would
    allow converting this state into a two-qubit maximally entangled state,
    which needs the largest coefficient to be at most 1/2.
    """
    if not 0.5 <= lambda0 <= 1.0:
        raise BadRange(f"lambda0 must lie in [1/2, 1], got {lambda0}")
    lam_max = float(np.max(schmidt_coefficients(three_bell_flagged_state(lambda0))))
    return LowerBound(lam_max, lam_max > 0.5 + EXCLUSION_TOL)


def random_detector_ensemble(seed: int, size: int = 4, max_local_dim: int = 4) -> EnsembleSpec:
    """Haar-random detectors on a ``d_a x d_b`` space with ``2 <= d <= max_local_dim``
    and Dirichlet-distributed probabilities, all drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    dims = rng.integers(2, max_local_dim + 1, size=2)
    space = BipartiteSpace.ab(int(dims[0]), int(dims[1]))
    probs = rng.dirichlet(np.ones(size))
    detectors = tuple(random_pure_state(space, rng) for _ in range(size))
    return EnsembleSpec(tuple(probs), detectors)


def catalysis_transform_check(ens: EnsembleSpec | None = None, seed: int | None = None) -> bool:
    """Whether the ququad flagged superposition reaches the ensemble by LOCC,
    evaluated with and without an extra two-qubit maximally entangled pair on
    both sides.  The two answers must agree; their common value is returned.

    With ``ens`` omitted, a random ensemble is drawn from ``seed``.
    """
    if ens is None:
        if seed is None:
            raise BadEnsemble("give an ensemble or a seed to draw one")
        ens = random_detector_ensemble(seed)
    chis = ququad_set()
    if len(ens) != len(chis):
        raise BadEnsemble(f"the ququad set has {len(chis)} members, the ensemble {len(ens)}")
    psi = flagged_superposition(chis, ens)
    plain = ensemble_possible(psi, ens)
    catalyst = bell_state(0)
    assisted = ensemble_possible(psi.tensor(catalyst), ens.tensor(catalyst))
    if plain != assisted:
        raise CrossCheckFailed(f"without catalyst {plain}, with catalyst {assisted}")
    return plain


def ensemble_to_json(ens: EnsembleSpec) -> dict:
    from .jsonio import state_to_json

    return {"probabilities": list(ens.probabilities), "detectors": [state_to_json(d) for d in ens.detectors]}


def ensemble_from_json(data: Mapping) -> EnsembleSpec:
    from .jsonio import state_from_json

    detectors = tuple(state_from_json(d) for d in data["detectors"])
    if not all(isinstance(d, PureState) for d in detectors):
        raise BadEnsemble("detectors must be pure states")
    return EnsembleSpec(tuple(data["probabilities"]), detectors)


__all__ = [
    "EnsembleSpec",
    "majorizes",
    "nielsen_possible",
    "ensemble_possible",
    "flagged_superposition",
    "hssh_detect",
    "LowerBound",
    "three_bell_flagged_state",
    "three_bell_lower_bound",
    "random_detector_ensemble",
    "catalysis_transform_check",
    "ensemble_to_json",
    "ensemble_from_json",
]
