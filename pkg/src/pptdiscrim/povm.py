"""POVMs, their verification predicates and explicit PPT constructions.

The constructions all share one block layout: an effect on ``X1 Y1 X2 Y2``
is a 4 x 4 grid of operators on ``X1 Y1`` indexed by the computational
basis ``00, 01, 10, 11`` of the resource pair ``X2 Y2``.  Block ``(a, b)``
contributes ``block ⊗ |a><b|`` with ``X1 Y1`` as the leading factors, which
is the factor order produced by :func:`states.tensor_with_resource`.

Positivity of the partial transpose is invariant under local unitaries, so
every construction works directly with the projector of the given state.
Only its Schmidt coefficients enter the parameters; no change to Schmidt
form is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .errors import BadDimension, DimensionMismatch, NotAPovm, NotEntangled, PreconditionViolated
from .space import BipartiteSpace
from .states import (
    QUBITS,
    DiscriminationInstance,
    PureState,
    bell_state,
    complement_state,
    maximally_entangled,
    resource_state,
    schmidt_coefficients,
    tensor_with_resource,
)
from .symmetry import w_matrix

POVM_TOL = 1e-9
PERFECT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class Povm:
    """Effects on a common space.  Shapes are checked on construction;
    positivity and completeness are what :func:`verify_povm` decides."""

    effects: tuple[np.ndarray, ...]
    space: BipartiteSpace

    def __post_init__(self):
        n = self.space.dim
        effects = []
        for k, e in enumerate(self.effects):
            e = np.array(e, dtype=complex)
            if e.shape != (n, n):
                raise DimensionMismatch(f"effect {k} has shape {e.shape}, space dimension is {n}")
            e.setflags(write=False)
            effects.append(e)
        if not effects:
            raise NotAPovm("a POVM needs at least one effect")
        object.__setattr__(self, "effects", tuple(effects))

    def __len__(self):
        return len(self.effects)

    def to_json(self) -> dict:
        return {"space": self.space.to_json(), "effects": [linalg.matrix_to_json(e) for e in self.effects]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Povm":
        space = BipartiteSpace.from_json(data["space"])
        return cls(tuple(linalg.matrix_from_json(e) for e in data["effects"]), space)


@dataclass(frozen=True)
class PovmResiduals:
    """Worst-case deviations from the POVM contracts (all zero when exact)."""

    hermiticity: float
    completeness: float
    min_effect_eigenvalue: float
    min_transposed_eigenvalue: float


def residuals(p: Povm) -> PovmResiduals:
    n = p.space.dim
    herm = max(linalg.max_abs(e - linalg.dagger(e)) for e in p.effects)
    comp = linalg.max_abs(sum(p.effects) - np.eye(n))
    sym = [(e + linalg.dagger(e)) / 2 for e in p.effects]
    min_eig = min(float(np.linalg.eigvalsh(e)[0]) for e in sym)
    min_pt = min(float(np.linalg.eigvalsh(linalg.partial_transpose(e, p.space))[0]) for e in sym)
    return PovmResiduals(herm, comp, min_eig, min_pt)


def verify_povm(p: Povm, tol: float = POVM_TOL) -> bool:
    """Every effect Hermitian and PSD, and the effects sum to the identity."""
    for e in p.effects:
        if not linalg.is_hermitian(e) or not linalg.psd_check(e, tol):
            return False
    return linalg.max_abs(sum(p.effects) - np.eye(p.space.dim)) <= tol


def is_ppt_povm(p: Povm, tol: float = POVM_TOL) -> bool:
    """Every effect has a PSD partial transpose.  Raises ``NotAPovm`` when
    ``p`` is not a POVM in the first place."""
    if not verify_povm(p, tol):
        raise NotAPovm("effects are not PSD or do not sum to the identity")
    return all(linalg.psd_check(linalg.partial_transpose(e, p.space), tol) for e in p.effects)


def discrimination_matrix(p: Povm, instance: DiscriminationInstance) -> np.ndarray:
    """Real matrix of outcome probabilities ``tr(effect_k rho_j)``."""
    if instance.space.dim != p.space.dim:
        raise DimensionMismatch(f"POVM on dimension {p.space.dim}, states on {instance.space.dim}")
    return np.array([[float(np.real(np.trace(e @ s.matrix))) for s in instance.states] for e in p.effects])


def verify_perfect_discrimination(p: Povm, instance: DiscriminationInstance, tol: float = PERFECT_TOL) -> bool:
    if len(p) != len(instance):
        return False
    return linalg.max_abs(discrimination_matrix(p, instance) - np.eye(len(p))) <= tol


@dataclass(frozen=True, eq=False)
class ConstructionParams:
    """Named scalar parameters and labeled block operators of a construction."""

    scalars: Mapping[str, float] = field(default_factory=dict)
    blocks: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __getitem__(self, name: str) -> float:
        return self.scalars[name]


@dataclass(frozen=True, eq=False)
class Construction:
    """A POVM together with the resource and the instance it separates."""

    povm: Povm
    resource: PureState
    instance: DiscriminationInstance
    params: ConstructionParams

    @property
    def iota(self) -> float:
        return float(abs(self.resource.vector[0]) ** 2)


@dataclass(frozen=True)
class ConstructionCheck:
    is_povm: bool
    is_ppt: bool
    perfect: bool
    residuals: PovmResiduals
    discrimination_error: float

    @property
    def passed(self) -> bool:
        return self.is_povm and self.is_ppt and self.perfect


def check_construction(c: Construction, tol: float = POVM_TOL) -> ConstructionCheck:
    ok = verify_povm(c.povm, tol)
    ppt = ok and is_ppt_povm(c.povm, tol)
    err = linalg.max_abs(discrimination_matrix(c.povm, c.instance) - np.eye(len(c.povm)))
    return ConstructionCheck(ok, ppt, err <= PERFECT_TOL, residuals(c.povm), err)


def assemble_blocks(grid: Sequence[Sequence[np.ndarray | None]]) -> np.ndarray:
    """``sum_ab grid[a][b] ⊗ |a><b|`` over the resource basis 00, 01, 10, 11."""
    size = next(b.shape[0] for row in grid for b in row if b is not None)
    out = np.zeros((4 * size, 4 * size), dtype=complex)
    for a, row in enumerate(grid):
        for b, block in enumerate(row):
            if block is not None:
                unit = np.zeros((4, 4))
                unit[a, b] = 1.0
                out += np.kron(block, unit)
    return out


def _corner_effect(corner_00, corner_11, off, middle) -> np.ndarray:
    return assemble_blocks(
        [
            [corner_00, None, None, off],
            [None, middle, None, None],
            [None, None, middle, None],
            [off, None, None, corner_11],
        ]
    )


def three_bell_povm() -> Construction:
    """Three-outcome PPT POVM separating the Bell vectors 1, 2, 3 when each
    is paired with the resource ``sqrt(2/3)|00> + sqrt(1/3)|11>``."""
    bell = [bell_state(k).projector for k in range(4)]
    eye = np.eye(4)
    n00 = bell[0] / 3 + 2 * bell[1] / 3 + bell[2] / 6 + bell[3] / 6
    n01 = bell[0] / 3 + bell[1] / 6 + 5 * bell[2] / 12 + 5 * bell[3] / 12
    n11 = eye / 3
    off = np.sqrt(2) / 3 * bell[1] - np.sqrt(2) / 6 * (bell[2] + bell[3])
    first = assemble_blocks(
        [
            [n00, None, None, off],
            [None, n01, None, None],
            [None, None, n01, None],
            [off, None, None, n11],
        ]
    )
    w = np.kron(w_matrix(), np.eye(4))
    effects = (first, w @ first @ linalg.dagger(w), linalg.dagger(w) @ first @ w)
    alpha = resource_state(2.0 / 3.0)
    instance = tensor_with_resource(DiscriminationInstance(tuple(bell_state(k) for k in (1, 2, 3))), alpha)
    params = ConstructionParams({}, {"N00": n00, "N01": n01, "N10": n01, "N11": n11, "R": off})
    return Construction(Povm(effects, instance.space), alpha, instance, params)


def _leading_pair(psi: PureState) -> tuple[float, float]:
    lam = schmidt_coefficients(psi)
    second = float(lam[1]) if lam.size > 1 else 0.0
    return float(lam[0]), second


def _pure_vs_complement(psi: PureState, alpha: PureState) -> DiscriminationInstance:
    return tensor_with_resource(DiscriminationInstance((psi.density(), complement_state(psi))), alpha)


def thm15_povm(psi: PureState) -> Construction:
    """PPT POVM separating ``psi`` from its complement with a two-qubit
    maximally entangled resource."""
    lam0, lam1 = _leading_pair(psi)
    if lam1 <= 1e-10:
        raise NotEntangled("the state has Schmidt rank 1")
    r = np.sqrt(lam0 * lam1)
    p = r / (1 + r)
    q = 0.5 - p
    proj = psi.projector
    eye = np.eye(proj.shape[0])
    a = p * proj + q * eye
    b = (1 - p) * proj - q * eye
    first = _corner_effect(a, a, b, eye / 2)
    second = _corner_effect(eye - a, eye - a, -b, eye / 2)
    alpha = bell_state(0)
    instance = _pure_vs_complement(psi, alpha)
    params = ConstructionParams({"p": p, "q": q, "r": r}, {"A": a, "B": b})
    return Construction(Povm((first, second), instance.space), alpha, instance, params)


def corner_parameters(r: float, t: float) -> tuple[float, float]:
    """The ``(x, y)`` solving ``x r + y = r t`` and ``(x - y)(t + 1/t) = 1``."""
    denom = (r + 1) * (t * t + 1)
    return (r * t**3 + r * t + t) / denom, r * t**3 / denom


def _partial_resource_povm(psi: PureState, t: float, x: float, y: float, scalars: dict) -> Construction:
    proj = psi.projector
    eye = np.eye(proj.shape[0])
    b = x * proj - y * eye
    a = (1 - t * x) * proj + t * y * eye
    c = (1 - x / t) * proj + (y / t) * eye
    first = _corner_effect(a, c, b, eye / 2)
    second = _corner_effect(eye - a, eye - c, -b, eye / 2)
    iota = 1.0 / (t * t + 1)
    alpha = resource_state(iota)
    instance = _pure_vs_complement(psi, alpha)
    params = ConstructionParams({**scalars, "t": t, "x": x, "y": y, "iota": iota}, {"A": a, "B": b, "C": c})
    return Construction(Povm((first, second), instance.space), alpha, instance, params)


def thm16_povm(psi: PureState) -> Construction:
    """PPT POVM separating ``psi`` from its complement with a resource of
    weight ``iota < 1/2`` on ``|00>``.  Needs ``sqrt(lam0 lam1) < 1/2``."""
    lam0, lam1 = _leading_pair(psi)
    r = float(np.sqrt(lam0 * lam1))
    if lam1 <= 1e-10:
        raise PreconditionViolated("the state has Schmidt rank 1, so no resource is needed and r = 0")
    if r >= 0.5 - 1e-12:
        raise PreconditionViolated(f"r = sqrt(lam0 lam1) = {r:.12f} is not below 1/2")
    t = min(np.sqrt((1 + r) / r), 1 / (2 * r))
    x, y = corner_parameters(r, t)
    return _partial_resource_povm(psi, t, x, y, {"r": r})


def thm19_povm(d: int) -> Construction:
    """The partial-resource construction for the maximally entangled state
    of local dimension ``d``, with closed-form parameters."""
    if int(d) != d or d < 2:
        raise BadDimension(f"need an integer d >= 2, got {d!r}")
    d = int(d)
    if d >= 5:
        t = np.sqrt(d + 1)
        x = 2 * np.sqrt(d + 1) / (d + 2)
        y = np.sqrt(d + 1) / (d + 2)
    else:
        t = d / 2
        x = d * (d + 2) ** 2 / (2 * (d + 1) * (d * d + 4))
        y = d**3 / (2 * (d + 1) * (d * d + 4))
    return _partial_resource_povm(maximally_entangled(d), t, x, y, {"r": 1.0 / d, "d": float(d)})


def thm19_iota(d: int) -> float:
    if int(d) != d or d < 2:
        raise BadDimension(f"need an integer d >= 2, got {d!r}")
    return 1.0 / (d + 2) if d >= 5 else 4.0 / (d * d + 4)


__all__ = [
    "Povm",
    "PovmResiduals",
    "residuals",
    "verify_povm",
    "is_ppt_povm",
    "discrimination_matrix",
    "verify_perfect_discrimination",
    "ConstructionParams",
    "Construction",
    "ConstructionCheck",
    "check_construction",
    "assemble_blocks",
    "three_bell_povm",
    "thm15_povm",
    "corner_parameters",
    "thm16_povm",
    "thm19_povm",
    "thm19_iota",
]
