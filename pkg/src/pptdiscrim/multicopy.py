"""Many-copy unambiguous discrimination of a maximally entangled state
against its complement, reduced to a linear program by twirling.

Write ``P1`` for the projector onto the maximally entangled state of local
dimension ``d`` and ``P2 = I - P1``.  Averaging a candidate effect over the
product of isotropic twirls on each copy keeps its two traces and its
positivity, and lands it in the span of the products ``⊗_i P_{s_i}`` with
``s in {1, 2}^m``.  On that span every question is diagonal:

* ``P1^Γ = SWAP/d`` has eigenvalues ``±1/d`` and ``P2^Γ = I - P1^Γ`` has
  ``1 ∓ 1/d`` on the same eigenspaces, so the partial transpose of
  ``sum_s c_s ⊗ P_{s_i}`` has eigenvalues ``sum_s c_s prod_i nu(s_i, v_i)``
  for sign patterns ``v in {+, -}^m``;
* the products are orthogonal projectors, so ``0 <= E <= I`` is
  ``0 <= c_s <= 1``;
* ``tr(P1 rho2) = 0`` and ``tr(P2 rho2) = 1``, so ``tr(E rho2^{⊗m}) = 0`` is
  ``c_(2..2) = 0``, while ``tr(E rho1^{⊗m})`` is ``c_(1..1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import BadDimension, BadIndex, BadIndexing, TooLarge
from .sdp import solve_lp

MAX_COPIES = 12
# Above this many copies the full 2^m program is replaced by its
# permutation-symmetric reduction (m + 1 variables).
FULL_LP_MAX_COPIES = 8
WITNESS_TOL = 1e-10


def _sign(v) -> int:
    if v in ("+", 1, +1.0):
        return 1
    if v in ("-", -1, -1.0):
        return -1
    raise BadIndex(f"sign must be '+' or '-', got {v!r}")


def gamma_eigenvalue(s: int, v, d: int) -> float:
    """Eigenvalue of ``P_s^Γ`` on the ``v`` eigenspace of the swap."""
    if s not in (1, 2):
        raise BadIndex(f"projector label must be 1 or 2, got {s!r}")
    sign = _sign(v)
    if d < 2:
        raise BadDimension(f"local dimension must be at least 2, got {d}")
    return sign / d if s == 1 else 1.0 - sign / d


def _factor_matrix(d: int) -> np.ndarray:
    # rows: sign +, -; columns: label 1, 2
    return np.array([[gamma_eigenvalue(s, v, d) for s in (1, 2)] for v in ("+", "-")])


@dataclass(frozen=True, eq=False)
class ReducedLp:
    """Twirl-reduced program for ``m`` copies at local dimension ``d``.

    Column ``j`` is the label pattern given by the binary digits of ``j``
    (0 for label 1, 1 for label 2, first copy most significant); row ``i``
    is the sign pattern given the same way (0 for ``+``).
    """

    d: int
    m: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise BadDimension(f"local dimension must be an integer >= 2, got {self.d!r}")
        if int(self.m) != self.m or self.m < 1:
            raise BadDimension(f"copy count must be a positive integer, got {self.m!r}")
        if self.m > MAX_COPIES:
            raise TooLarge(f"{self.m} copies give 2^{self.m} variables, above 2^{MAX_COPIES}")

    @property
    def size(self) -> int:
        return 2**self.m

    def spectrum_matrix(self) -> np.ndarray:
        """Rows map coefficients to partial-transpose eigenvalues."""
        out = np.ones((1, 1))
        base = _factor_matrix(self.d)
        for _ in range(self.m):
            out = np.kron(out, base)
        return out

    def labels(self) -> list[tuple[int, ...]]:
        return [tuple(1 + bit for bit in bits) for bits in product((0, 1), repeat=self.m)]

    def symmetric_spectrum_matrix(self) -> np.ndarray:
        """The program restricted to coefficients that depend only on how
        many copies carry label 2.

        Permuting copies maps feasible points to feasible points and fixes
        the objective, so averaging an optimum over all permutations gives a
        symmetric optimum.  Row ``j`` (``j`` minus signs) and column ``k``
        (``k`` labels equal to 2) hold the coefficient of ``x^k`` in
        ``(nu(1,+) + x nu(2,+))^(m-j) (nu(1,-) + x nu(2,-))^j``.
        """
        plus = np.array([gamma_eigenvalue(1, "+", self.d), gamma_eigenvalue(2, "+", self.d)])
        minus = np.array([gamma_eigenvalue(1, "-", self.d), gamma_eigenvalue(2, "-", self.d)])
        rows = []
        for j in range(self.m + 1):
            poly = np.ones(1)
            for _ in range(self.m - j):
                poly = np.convolve(poly, plus)
            for _ in range(j):
                poly = np.convolve(poly, minus)
            rows.append(poly)
        return np.array(rows)


def _solve_reduced(spectrum: np.ndarray) -> float:
    n = spectrum.shape[1]
    gain = np.zeros(n)
    gain[0] = 1.0
    upper = np.ones(n)
    upper[-1] = 0.0
    sol = solve_lp(gain, a_ub=-spectrum, b_ub=np.zeros(spectrum.shape[0]), upper=upper)
    if sol.status != "Optimal":
        raise ArithmeticError(f"reduced LP ended with status {sol.status}")
    return float(sol.objective)


def unambiguous_multicopy_value(d: int, m: int, symmetric: bool | None = None) -> float:
    """Best probability of recognising ``m`` copies of the maximally entangled
    state without ever firing on ``m`` copies of its complement, over PPT
    effects.

    ``symmetric`` picks the permutation-symmetric program; by default it is
    used only above ``FULL_LP_MAX_COPIES`` copies.
    """
    lp = ReducedLp(d, m)
    if symmetric is None:
        symmetric = lp.m > FULL_LP_MAX_COPIES
    return _solve_reduced(lp.symmetric_spectrum_matrix() if symmetric else lp.spectrum_matrix())


def lemma8_witness_check(d: int, m: int, coefficients) -> bool:
    """Whether ``A^{⊗m} + sum_T p_T T`` is PSD, with ``A = P1^Γ``,
    ``B = P2^Γ`` and ``T`` ranging over the mixed products of ``A`` and ``B``.

    ``coefficients`` is either a length ``2^m`` array in the column order
    of :class:`ReducedLp` or a mapping from label tuples to values.  It must
    be nonnegative with weight 1 on the all-ones label.  The pure ``B``
    product is not a mixed product: its weight is set to zero, exactly as
    the unambiguity condition ``tr(E rho2^{⊗m}) = 0`` forces.  The answer
    is expected to be ``False`` for every admissible input.
    """
    lp = ReducedLp(d, m)
    if isinstance(coefficients, dict):
        unknown = [k for k in coefficients if tuple(k) not in set(lp.labels())]
        if unknown:
            raise BadIndexing(f"labels {unknown[:3]} are not in {{1, 2}}^{m}")
        vec = np.array([float(coefficients.get(lbl, 0.0)) for lbl in lp.labels()])
    else:
        vec = np.asarray(coefficients, dtype=float).ravel()
        if vec.size != lp.size:
            raise BadIndexing(f"expected {lp.size} coefficients, got {vec.size}")
    if np.any(vec < 0):
        raise BadIndexing("coefficients must be nonnegative")
    if abs(vec[0] - 1.0) > 1e-12:
        raise BadIndexing(f"the all-ones label must carry weight 1, got {vec[0]}")
    vec = vec.copy()
    vec[-1] = 0.0
    return bool(np.all(lp.spectrum_matrix() @ vec >= -WITNESS_TOL))


__all__ = [
    "MAX_COPIES",
    "FULL_LP_MAX_COPIES",
    "gamma_eigenvalue",
    "ReducedLp",
    "unambiguous_multicopy_value",
    "lemma8_witness_check",
]
