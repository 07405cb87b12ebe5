"""Decision procedures for distinguishability under PPT measurements.

Perfect discrimination of orthogonal states ``rho_1 .. rho_n`` with support
projectors ``P_k`` by a PPT POVM is possible exactly when the leftover
projector ``P_0 = I - sum_k P_k`` can be split into PSD pieces ``E_k`` with
every ``P_k + E_k`` PPT; the effects are then ``P_k + E_k``.  The search for
such a split is posed as the linear matrix inequality

    maximize t  subject to  E_k >= 0,  sum_k E_k = P_0,  (P_k + E_k)^Γ >= t I

and the sign of the optimum ``t*`` decides the question.

Each ``E_k`` lives on the range of ``P_0``, so it is parameterized as
``Q e_k Q^†`` with ``Q`` an orthonormal basis of that range and ``e_k`` a
free Hermitian matrix.  The last piece is eliminated through the sum
constraint, which leaves an LMI with no equality constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .errors import BadEffect, CrossCheckFailed, NonMonotone, TooLarge
from .povm import Povm, is_ppt_povm, verify_perfect_discrimination, verify_povm
from .sdp import OPTIMAL, LmiProblem, SolveOptions, hermitian_basis, solve_lmi
from .states import DensityOperator, DiscriminationInstance, PureState, schmidt_number

YES = "Yes"
NO = "No"
MARGINAL = "Marginal"
INDETERMINATE = "Indeterminate"
POSSIBLE = "Possible"
EXCLUDED = "Excluded"

DECISION_TOL = 1e-7
SUPPORT_CUTOFF = 1e-9
MAX_INSTANCE_DIM = 256
PROBE_POINTS = 8


@dataclass(frozen=True, eq=False)
class FeasibilityReport:
    """Outcome of the perfect-discrimination test.

    ``slack`` is the optimal ``t``.  ``upper_bound`` is the dual bound on
    ``t*`` that certifies a ``No``.  ``witness`` is a verified PPT POVM when
    one is available.
    """

    feasible: str
    slack: float
    upper_bound: float
    witness: Povm | None = None
    solver_status: str = OPTIMAL
    certificate: dict | None = None

    def to_json(self, include_witness: bool = False) -> dict:
        out = {
            "feasible": self.feasible,
            "slack": self.slack,
            "upper_bound": self.upper_bound,
            "solver_status": self.solver_status,
            "has_witness": self.witness is not None,
        }
        if include_witness and self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def _check_size(space_dim: int) -> None:
    if space_dim > MAX_INSTANCE_DIM:
        raise TooLarge(f"dimension {space_dim} exceeds {MAX_INSTANCE_DIM}")


def _lift(q: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """``Q B_j Q^†`` for every basis element ``B_j``."""
    return np.einsum("ai,nij,bj->nab", q, basis, np.conj(q))


def _is_real(*arrays) -> bool:
    return all(not np.iscomplexobj(a) or not np.any(np.abs(np.imag(a)) > 1e-14) for a in arrays)


def _witness_from_pieces(projectors, q, pieces, space) -> Povm | None:
    """Round solver output to an exact POVM (verification is the caller's job).

    The pieces are clipped to PSD and rescaled by ``S^{-1/2}`` on both sides,
    with ``S`` their sum, so they sum to the identity on the range of ``Q``.
    """
    pieces = [linalg.psd_projection((e + linalg.dagger(e)) / 2) for e in pieces]
    if q.shape[1]:
        total = sum(pieces)
        eig = np.linalg.eigh(total)
        if eig.eigenvalues[0] <= 0:
            return None
        root = (eig.eigenvectors / np.sqrt(eig.eigenvalues)) @ linalg.dagger(eig.eigenvectors)
        pieces = [root @ e @ root for e in pieces]
    effects = tuple(p + q @ e @ linalg.dagger(q) for p, e in zip(projectors, pieces))
    return Povm(effects, space)


def _classify(lower: float, upper: float) -> str:
    if lower > DECISION_TOL:
        return YES
    if upper < -DECISION_TOL:
        return NO
    return MARGINAL


def _resolve(verdict: str, slack: float, upper: float, witness: Povm | None, candidate: Povm | None,
             instance: DiscriminationInstance, status: str, certificate: dict) -> FeasibilityReport:
    """Settle a ``Marginal`` verdict with an explicit POVM when one verifies.

    Effects with a singular partial transpose (any rank-one product
    projector, say) force ``t* <= 0``, so every boundary or full-basis
    instance lands here.  A verified PPT POVM that discriminates perfectly
    proves feasibility outright; the caller's candidate is tried before the
    rounded solver output.  Verification uses tolerance 1e-9, far below the
    decision threshold, so an instance with ``t*`` clearly negative cannot
    pass.
    """
    if verdict == MARGINAL:
        for source, povm in (("candidate", candidate), ("solver", witness)):
            if povm is not None and _is_perfect_ppt(povm, instance):
                return FeasibilityReport(YES, slack, upper, povm, status, {**certificate, "resolved_by": source})
        witness = None
    return FeasibilityReport(verdict, slack, upper, witness if verdict == YES else None, status, certificate)


def _is_perfect_ppt(povm: Povm, instance: DiscriminationInstance) -> bool:
    return (
        povm.space.dim == instance.space.dim
        and verify_povm(povm)
        and is_ppt_povm(povm)
        and verify_perfect_discrimination(povm, instance)
    )


def perfect_ppt_feasibility(
    instance: DiscriminationInstance,
    candidate: Povm | None = None,
    opts: SolveOptions | None = None,
) -> FeasibilityReport:
    """Decide whether a PPT POVM discriminates ``instance`` perfectly.

    ``Yes`` when ``t* > 1e-7``, ``No`` when ``t* < -1e-7`` and ``Marginal``
    otherwise.  A ``Marginal`` verdict becomes ``Yes`` only through an
    explicit POVM that passes every verifier: the ``candidate`` (typically
    one of the constructions in :mod:`povm`) or the rounded solver output.
    Boundary cases are never settled by solver slack alone.
    """
    space = instance.space
    space.require_bipartite()
    dim = space.dim
    _check_size(dim)
    projectors = instance.support_projectors()
    n = len(projectors)
    leftover = np.eye(dim) - sum(projectors)
    q = linalg.range_basis((leftover + linalg.dagger(leftover)) / 2, SUPPORT_CUTOFF)
    rank = q.shape[1]
    eye_d = np.eye(dim)
    if rank:
        # the leftover is a projector; rebuild it from its range so that
        # rounding in the support projectors does not leak in
        leftover = q @ linalg.dagger(q)

    if rank == 0 or n == 1:
        # Nothing to split (or only one place to put it): the effects are
        # fixed, and t* is the smallest partial-transpose eigenvalue.
        effects = [p + (leftover if k == n - 1 else 0) for k, p in enumerate(projectors)]
        t_star = min(linalg.min_eigenvalue(linalg.partial_transpose(e, space)) for e in effects)
        povm = Povm(tuple(effects), space)
        witness = povm if _is_perfect_ppt(povm, instance) else None
        return _resolve(_classify(t_star, t_star), t_star, t_star, witness, candidate, instance, OPTIMAL, {"closed_form": True})

    real = _is_real(q, *projectors)
    if real:
        q = np.real(q)
        projectors = [np.real(p) for p in projectors]
        leftover = np.real(leftover)
    basis = hermitian_basis(rank, real=real)
    dof = basis.shape[0]
    lifted_pt = linalg.partial_transpose_stack(_lift(q, basis), space)
    nvars = (n - 1) * dof + 1
    t_index = nvars - 1
    dtype = float if real else complex

    blocks, constants, coefficients = [], [], []
    # e_k >= 0 for the free pieces
    for k in range(n - 1):
        coeff = np.zeros((nvars, rank, rank), dtype)
        coeff[k * dof : (k + 1) * dof] = basis
        blocks.append(rank)
        constants.append(None)
        coefficients.append(coeff)
    # the eliminated piece I - sum_k e_k >= 0
    coeff = np.zeros((nvars, rank, rank), dtype)
    for k in range(n - 1):
        coeff[k * dof : (k + 1) * dof] = -basis
    blocks.append(rank)
    constants.append(np.eye(rank))
    coefficients.append(coeff)
    # (P_k + Q e_k Q^†)^Γ - t I >= 0
    for k in range(n):
        coeff = np.zeros((nvars, dim, dim), dtype)
        if k < n - 1:
            coeff[k * dof : (k + 1) * dof] = lifted_pt
            base = projectors[k]
        else:
            for j in range(n - 1):
                coeff[j * dof : (j + 1) * dof] = -lifted_pt
            base = projectors[k] + leftover
        coeff[t_index] = -eye_d
        blocks.append(dim)
        constants.append(linalg.partial_transpose(base, space))
        coefficients.append(coeff)

    gain = np.zeros(nvars)
    gain[t_index] = 1.0
    lmi = LmiProblem(tuple(blocks), tuple(constants), tuple(coefficients), gain)
    sol = solve_lmi(lmi, opts)
    lower = float(sol.value)
    upper = float(-sol.sdp.objective)
    if sol.status != OPTIMAL:
        # without a certified optimum only a clear margin is trusted
        spread = max(abs(upper - lower), DECISION_TOL)
        verdict = _classify(lower - spread, upper + spread)
    else:
        verdict = _classify(lower, upper)

    witness = None
    if verdict != NO:
        z = sol.z
        pieces = [np.tensordot(z[k * dof : (k + 1) * dof], basis, axes=1) for k in range(n - 1)]
        pieces.append(np.eye(rank) - sum(pieces))
        witness = _witness_from_pieces(projectors, q, pieces, space)
        if witness is not None and not _is_perfect_ppt(witness, instance):
            witness = None
    certificate = {"primal_residual": sol.sdp.primal_residual, "gap": sol.sdp.gap, "iterations": sol.sdp.iterations}
    return _resolve(verdict, lower, upper, witness, candidate, instance, sol.status, certificate)


def _as_density(x) -> DensityOperator:
    return x.density() if isinstance(x, PureState) else x


def unambiguous_ppt_value(target, other, opts: SolveOptions | None = None) -> float:
    """Largest ``tr(E target)`` over PPT ``0 <= E <= I`` with ``tr(E other) = 0``.

    For PSD ``E`` the last condition means ``E`` lives on the kernel of
    ``other``, so ``E = Q e Q^†`` with ``Q`` a kernel basis, and ``E <= I``
    reduces to ``e <= I``.
    """
    target, other = _as_density(target), _as_density(other)
    if target.space.dim != other.space.dim:
        raise TooLarge("states must share a space") from None
    space = target.space
    space.require_bipartite()
    dim = space.dim
    _check_size(dim)
    q = linalg.kernel_basis(other.matrix, SUPPORT_CUTOFF)
    rank = q.shape[1]
    if rank == 0:
        return 0.0
    rho = np.asarray(target.matrix)
    real = _is_real(q, rho)
    if real:
        q, rho = np.real(q), np.real(rho)
    basis = hermitian_basis(rank, real=real)
    lifted = _lift(q, basis)
    gain = np.real(np.einsum("nab,ba->n", lifted, rho))
    lifted_pt = linalg.partial_transpose_stack(lifted, space)
    lmi = LmiProblem(
        (rank, rank, dim),
        (None, np.eye(rank), None),
        (basis, -basis, lifted_pt),
        gain,
    )
    return float(solve_lmi(lmi, opts).value)


def unambiguous_pair_ppt(rho1, rho2, opts: SolveOptions | None = None) -> bool:
    """Both states can be identified without error by one PPT POVM."""
    return (
        unambiguous_ppt_value(rho1, rho2, opts) > DECISION_TOL
        and unambiguous_ppt_value(rho2, rho1, opts) > DECISION_TOL
    )


@dataclass(frozen=True)
class ThresholdResult:
    """Boundary estimate from a bisection.

    ``has_boundary`` is false when every probe had the same outcome; then
    ``value`` is ``hi`` (always feasible) or ``lo`` (never feasible).
    """

    value: float
    has_boundary: bool
    bracket: tuple[float, float]
    probes: tuple[tuple[float, str], ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "has_boundary": self.has_boundary,
            "bracket": list(self.bracket),
            "probes": [{"parameter": x, "feasible": f} for x, f in self.probes],
        }


def cost_threshold_bisection(
    builder: Callable[[float], DiscriminationInstance],
    lo: float,
    hi: float,
    tol: float = 1e-4,
    decide: Callable[[DiscriminationInstance], FeasibilityReport] | None = None,
) -> ThresholdResult:
    """Locate the parameter where a family stops being PPT distinguishable.

    The family must be feasible below its boundary and infeasible above.
    Eight evenly spaced probes check this (``NonMonotone`` if the outcome
    flips more than once) and bracket the boundary, which bisection then
    narrows to a half-width of at most ``tol``.  A ``Marginal`` outcome
    counts as feasible: the boundary point belongs to the feasible side.
    """
    if tol < 1e-5:
        raise ValueError(f"tolerance {tol} is below the supported 1e-5")
    if hi < lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if lo == hi:
        return ThresholdResult(lo, False, (lo, hi))
    decide = decide or perfect_ppt_feasibility
    probes: list[tuple[float, str]] = []

    def feasible(x: float) -> bool:
        verdict = decide(builder(x)).feasible
        probes.append((float(x), verdict))
        return verdict != NO

    grid = np.linspace(lo, hi, PROBE_POINTS)
    flags = [feasible(x) for x in grid]
    flips = sum(a != b for a, b in zip(flags, flags[1:]))
    if flips > 1 or (flips == 1 and not flags[0]):
        raise NonMonotone(f"feasibility pattern {flags} on the probe grid is not feasible-then-infeasible")
    if flips == 0:
        value = float(hi if flags[0] else lo)
        return ThresholdResult(value, False, (float(lo), float(hi)), tuple(probes))
    cut = flags.index(False)
    a, b = float(grid[cut - 1]), float(grid[cut])
    while (b - a) / 2 > tol:
        mid = (a + b) / 2
        if feasible(mid):
            a = mid
        else:
            b = mid
    return ThresholdResult((a + b) / 2, True, (a, b), tuple(probes))


def is_separable_rank_bounded(rho) -> str:
    """Separability test valid when the rank is at most the larger local
    dimension: then PPT and separable coincide.  Otherwise ``Indeterminate``."""
    rho = _as_density(rho)
    space = rho.space
    space.require_bipartite()
    if linalg.rank(rho.matrix, SUPPORT_CUTOFF) > max(space.dim_a, space.dim_b):
        return INDETERMINATE
    return YES if linalg.psd_check(linalg.partial_transpose(rho.matrix, space), 1e-9) else NO


def complement_basis_predicate(psi: PureState) -> bool:
    """Whether the orthogonal complement of ``psi`` has a PPT-distinguishable
    orthonormal basis: exactly when the Schmidt number is at most 2."""
    return schmidt_number(psi) <= 2


def sep_unambiguous_schmidt_bound(psi: PureState, alpha: PureState) -> str:
    """``Excluded`` when the resource has a smaller Schmidt number than
    ``psi``: separable unambiguous discrimination of ``psi`` against its
    complement, assisted by ``alpha``, is then impossible.  ``Possible``
    asserts nothing beyond the bound being met."""
    return EXCLUDED if schmidt_number(alpha) < schmidt_number(psi) else POSSIBLE


def perfect_detection_check(effect, rho) -> bool:
    """Whether ``effect`` fires with certainty on ``rho``.

    Decided by ``tr(effect rho) >= 1 - 1e-9`` and cross-checked against the
    operator inequality ``effect >= P`` with ``P`` the support projector.
    """
    rho = _as_density(rho)
    e = np.asarray(effect, dtype=complex)
    if e.shape != rho.matrix.shape or not linalg.is_hermitian(e):
        raise BadEffect("effect must be Hermitian on the state's space")
    eig = linalg.eigvalsh(e)
    if eig[0] < -1e-9 or eig[-1] > 1 + 1e-9:
        raise BadEffect(f"effect spectrum [{eig[0]:.3e}, {eig[-1]:.3e}] leaves [0, 1]")
    by_trace = float(np.real(np.trace(e @ rho.matrix))) >= 1 - 1e-9
    by_operator = linalg.psd_check(e - rho.support_projector(), 1e-9)
    if by_trace != by_operator:
        raise CrossCheckFailed(f"trace test says {by_trace}, operator test says {by_operator}")
    return by_trace


__all__ = [
    "YES",
    "NO",
    "MARGINAL",
    "INDETERMINATE",
    "POSSIBLE",
    "EXCLUDED",
    "DECISION_TOL",
    "FeasibilityReport",
    "perfect_ppt_feasibility",
    "unambiguous_ppt_value",
    "unambiguous_pair_ppt",
    "ThresholdResult",
    "cost_threshold_bisection",
    "is_separable_rank_bounded",
    "complement_basis_predicate",
    "sep_unambiguous_schmidt_bound",
    "perfect_detection_check",
]
