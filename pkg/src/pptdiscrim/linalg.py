"""Dense complex matrix utilities.

Matrices are plain ``numpy.ndarray`` objects.  Norms written ``‖·‖∞`` in
the docstrings are the largest absolute entry.  Tolerances are relative to
``max(1, ‖·‖∞)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NonHermitian
from .space import ALICE, BipartiteSpace

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
# Above this size "auto" hands the problem to LAPACK (zheevd); Jacobi stays
# available through method="jacobi".
JACOBI_AUTO_MAX_DIM = 64


def max_abs(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def scale(m) -> float:
    return max(1.0, max_abs(m))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def is_hermitian(h, tol: float = HERMITIAN_TOL) -> bool:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        return False
    return max_abs(h - dagger(h)) <= tol * scale(h)


def _require_hermitian(h) -> np.ndarray:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NonHermitian(f"expected a square matrix, got shape {h.shape}")
    if not is_hermitian(h):
        raise NonHermitian(f"matrix deviates from its adjoint by {max_abs(h - dagger(h)):.3e}")
    return h


@dataclass(frozen=True)
class HermitianEig:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # Circle-method tournament: every pair (p, q) appears exactly once per
    # sweep and the pairs inside one round are disjoint.
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            a, b = players[k], players[m - 1 - k]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def _offdiag_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def hermitian_eigen(h, method: str = "auto") -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Each round applies a set of disjoint 2x2 unitary rotations at once.  A
    rotation for the pair (p, q) first removes the phase of ``a[p, q]`` and
    then applies the real symmetric Jacobi rotation, so complex input is
    handled natively.  Converged when the off-diagonal Frobenius norm falls
    below ``1e-12 * ‖h‖_F``; raises ``NoConvergence`` after 100 sweeps.

    Returns eigenvalues in ascending order with matching unitary columns.
    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    ``JACOBI_AUTO_MAX_DIM``).
    """
    h = _require_hermitian(h)
    n = h.shape[0]
    if method not in ("auto", "jacobi", "lapack"):
        raise ValueError(f"unknown eigensolver {method!r}")
    if method == "lapack" or (method == "auto" and n > JACOBI_AUTO_MAX_DIM):
        w, v = np.linalg.eigh((h + dagger(h)) / 2)
        return HermitianEig(w, v.astype(complex))
    a = np.array((h + dagger(h)) / 2, dtype=complex)
    v = np.eye(n, dtype=complex)
    fro = float(np.linalg.norm(a))
    target = JACOBI_TOL * fro
    if n > 1 and fro > 0:
        rounds = _round_robin(n)
        for sweep in range(JACOBI_MAX_SWEEPS + 1):
            if _offdiag_norm(a) <= target:
                break
            if sweep == JACOBI_MAX_SWEEPS:
                raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
            for p, q in rounds:
                _rotate(a, v, p, q)
    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return HermitianEig(w[order], v[:, order])


def _rotate(a: np.ndarray, v: np.ndarray, p: np.ndarray, q: np.ndarray) -> None:
    app = a[p, p].real
    aqq = a[q, q].real
    apq = a[p, q]
    mag = np.abs(apq)
    live = mag > 1e-300
    if not np.any(live):
        return
    p, q, app, aqq, apq, mag = p[live], q[live], app[live], aqq[live], apq[live], mag[live]
    phase = np.conj(apq) / mag  # e^{-i phi} with a[p, q] = |a[p, q]| e^{i phi}
    theta = (aqq - app) / (2.0 * mag)
    t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
    c = 1.0 / np.hypot(t, 1.0)
    s = t * c
    # G = diag(1, e^{-i phi}) @ [[c, s], [-s, c]]
    g00, g01 = c, s
    g10, g11 = -s * phase, c * phase

    ap, aq = a[:, p].copy(), a[:, q].copy()
    a[:, p] = ap * g00 + aq * g10
    a[:, q] = ap * g01 + aq * g11
    rp, rq = a[p, :].copy(), a[q, :].copy()
    a[p, :] = np.conj(g00)[:, None] * rp + np.conj(g10)[:, None] * rq
    a[q, :] = np.conj(g01)[:, None] * rp + np.conj(g11)[:, None] * rq
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    vp, vq = v[:, p].copy(), v[:, q].copy()
    v[:, p] = vp * g00 + vq * g10
    v[:, q] = vp * g01 + vq * g11


def eigvalsh(h) -> np.ndarray:
    return hermitian_eigen(h).eigenvalues


def _orthonormal_completion(u: np.ndarray, good: np.ndarray) -> np.ndarray:
    """Replace the columns of ``u`` not flagged ``good`` so all columns are orthonormal."""
    m, k = u.shape
    out = np.zeros((m, k), dtype=complex)
    basis: list[np.ndarray] = []

    def push(vec) -> bool:
        for _ in range(2):
            for b in basis:
                vec = vec - b * np.vdot(b, vec)
        nrm = np.linalg.norm(vec)
        if nrm < 1e-8:
            return False
        basis.append(vec / nrm)
        return True

    slots = []
    for j in range(k):
        if good[j] and push(u[:, j]):
            out[:, j] = basis[-1]
        else:
            slots.append(j)
    candidates = iter(np.eye(m, dtype=complex).T)
    for j in slots:
        while not push(next(candidates)):
            pass
        out[:, j] = basis[-1]
    return out


def svd(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``m = u @ diag(s) @ v^†`` built on :func:`hermitian_eigen`.

    Right singular vectors come from the eigenvectors of ``m^† m``; each
    singular value is recomputed as ``‖m v_i‖`` so that rank-deficient input
    reconstructs to rounding accuracy.  ``s`` is descending.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"svd needs a 2-d array, got shape {m.shape}")
    rows, cols = m.shape
    if rows < cols:
        u, s, v = svd(dagger(m))
        return v, s, u
    eig = hermitian_eigen(dagger(m) @ m)
    v = eig.eigenvectors[:, ::-1]
    mv = m @ v
    s = np.linalg.norm(mv, axis=0)
    order = np.argsort(-s, kind="stable")
    s, v, mv = s[order], v[:, order], mv[:, order]
    cutoff = 1e-13 * max(1.0, s[0] if s.size else 0.0)
    good = s > cutoff
    u = np.where(good, mv / np.where(good, s, 1.0), 0.0)
    u = _orthonormal_completion(u, good)
    return u, s, v


def kron(*ms) -> np.ndarray:
    if not ms:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, ms)


def _check_square(m, space: BipartiteSpace) -> np.ndarray:
    m = np.asarray(m)
    n = space.dim
    if m.shape != (n, n):
        raise DimensionMismatch(f"matrix of shape {m.shape} does not act on a space of dimension {n}")
    return m


def partial_transpose(m, space: BipartiteSpace) -> np.ndarray:
    """Transpose every Alice factor: ``(|ij><kl|)^Γ = |kj><il|``."""
    m = _check_square(m, space)
    dims = space.dims
    k = len(dims)
    t = m.reshape(dims + dims)
    axes = list(range(2 * k))
    for i in space.indices(ALICE):
        axes[i], axes[k + i] = axes[k + i], axes[i]
    return t.transpose(axes).reshape(m.shape)


def partial_transpose_stack(ms, space: BipartiteSpace) -> np.ndarray:
    """Partial transpose of each matrix in a stack of shape (count, n, n)."""
    ms = np.asarray(ms)
    n = space.dim
    if ms.shape[1:] != (n, n):
        raise DimensionMismatch(f"stack of shape {ms.shape} does not act on a space of dimension {n}")
    dims = space.dims
    k = len(dims)
    t = ms.reshape((ms.shape[0],) + dims + dims)
    axes = list(range(2 * k))
    for i in space.indices(ALICE):
        axes[i], axes[k + i] = axes[k + i], axes[i]
    return t.transpose([0] + [a + 1 for a in axes]).reshape(ms.shape)


def real_if_close(m, tol: float = 0.0):
    """Drop an imaginary part that is identically zero (or below ``tol``)."""
    m = np.asarray(m)
    if np.iscomplexobj(m) and np.all(np.abs(m.imag) <= tol):
        return m.real.copy()
    return m


def partial_trace(m, space: BipartiteSpace, keep: Iterable[int]) -> np.ndarray:
    """Trace out every factor whose index is not in ``keep``."""
    m = _check_square(m, space)
    keep = sorted(set(keep))
    dims = space.dims
    k = len(dims)
    if any(i < 0 or i >= k for i in keep):
        raise DimensionMismatch(f"keep={keep} out of range for {k} factors")
    t = m.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * k > len(letters) + 26:
        raise DimensionMismatch("too many factors")
    letters = letters + letters.upper()
    row = list(letters[:k])
    col = [row[i] if i not in keep else letters[k + i] for i in range(k)]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    expr = "".join(row) + "".join(col) + "->" + "".join(out)
    kept = int(np.prod([dims[i] for i in keep])) if keep else 1
    return np.einsum(expr, t).reshape(kept, kept)


def psd_check(h, tol: float = 1e-9) -> bool:
    """True iff the smallest eigenvalue is at least ``-tol * max(1, ‖h‖∞)``."""
    h = _require_hermitian(h)
    if h.size == 0:
        return True
    return bool(eigvalsh(h)[0] >= -tol * scale(h))


def min_eigenvalue(h) -> float:
    return float(eigvalsh(h)[0])


def support_projector(h, cutoff: float = 1e-9) -> np.ndarray:
    """Projector onto eigenvectors with eigenvalue above ``cutoff * max(1, ‖h‖∞)``."""
    eig = hermitian_eigen(h)
    cols = eig.eigenvectors[:, eig.eigenvalues > cutoff * scale(h)]
    return cols @ dagger(cols)


def kernel_basis(h, cutoff: float = 1e-9) -> np.ndarray:
    """Orthonormal columns spanning eigenvectors with |eigenvalue| <= cutoff (relative)."""
    eig = hermitian_eigen(h)
    return eig.eigenvectors[:, np.abs(eig.eigenvalues) <= cutoff * scale(h)]


def range_basis(h, cutoff: float = 1e-9) -> np.ndarray:
    eig = hermitian_eigen(h)
    return eig.eigenvectors[:, np.abs(eig.eigenvalues) > cutoff * scale(h)]


def rank(h, cutoff: float = 1e-9) -> int:
    return int(np.sum(np.abs(eigvalsh(h)) > cutoff * scale(h)))


def abs_matrix(h) -> np.ndarray:
    """``|h| = sqrt(h^† h)`` for Hermitian ``h``."""
    eig = hermitian_eigen(h)
    v = eig.eigenvectors
    return (v * np.abs(eig.eigenvalues)) @ dagger(v)


def psd_projection(h) -> np.ndarray:
    """Clip the negative eigenvalues of a Hermitian matrix."""
    eig = hermitian_eigen(h)
    v = eig.eigenvectors
    return (v * np.clip(eig.eigenvalues, 0.0, None)) @ dagger(v)


def projector(vec) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(vec, np.conj(vec))


def matrix_to_json(m) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def matrix_from_json(data: dict) -> np.ndarray:
    rows, cols = int(data["rows"]), int(data["cols"])
    re = np.asarray(data["re"], dtype=float)
    im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != (rows, cols) or im.shape != (rows, cols):
        raise DimensionMismatch(f"declared {rows}x{cols} but entries have shape {re.shape}/{im.shape}")
    return re + 1j * im
