"""Small dense semidefinite programs over Hermitian blocks, plus a dense
simplex for linear programs.

Problems are stated in maximisation form::

    maximize    sum_b tr(C_b X_b)
    subject to  sum_b tr(A_ib X_b) = b_i      for every constraint i
                X_b >= 0                       for every block b

and solved with a primal-dual interior point method on the homogeneous
self-dual embedding, using the HKM search direction and a Mehrotra
predictor-corrector step. Blocks are handled natively in complex
arithmetic, or in real arithmetic when every coefficient is real.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from . import linalg
from .errors import IllPosed, NonHermitian, TooLarge

log = logging.getLogger(__name__)

MAX_TOTAL_DIM = 600
OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
INDETERMINATE = "Indeterminate"

# acceptance thresholds on the reported (unscaled) solution
REPORT_TOL = 1e-7
INDETERMINATE_GAP = 1e-4
STEP_FRACTION = 0.95


@dataclass(frozen=True, eq=False)
class Constraint:
    """``sum_b tr(coefficients[b] @ X_b) = rhs``; ``None`` marks a zero block."""

    coefficients: tuple
    rhs: float


@dataclass(frozen=True, eq=False)
class SdpProblem:
    blocks: tuple[int, ...]
    objective: tuple
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        blocks = tuple(int(n) for n in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "objective", tuple(self._check_block(c, n) for c, n in zip(self.objective, blocks, strict=True)))
        cons = []
        for con in self.constraints:
            coeffs = tuple(self._check_block(a, n) for a, n in zip(con.coefficients, blocks, strict=True))
            cons.append(Constraint(coeffs, float(con.rhs)))
        object.__setattr__(self, "constraints", tuple(cons))

    @staticmethod
    def _check_block(a, n):
        if a is None:
            return None
        a = np.asarray(a)
        if a.shape != (n, n):
            raise ValueError(f"coefficient of shape {a.shape} for a block of size {n}")
        if not linalg.is_hermitian(a):
            raise NonHermitian("SDP coefficient matrices must be Hermitian")
        if np.iscomplexobj(a) and np.all(a.imag == 0):
            a = a.real
        return a

    @property
    def total_dim(self) -> int:
        return sum(self.blocks)

    @property
    def is_real(self) -> bool:
        mats = list(self.objective) + [a for con in self.constraints for a in con.coefficients]
        return all(a is None or not np.iscomplexobj(a) for a in mats)

    def to_json(self) -> dict:
        enc = lambda a: None if a is None else linalg.matrix_to_json(a)  # noqa: E731
        return {
            "blocks": list(self.blocks),
            "objective": [enc(c) for c in self.objective],
            "constraints": [{"coefficients": [enc(a) for a in con.coefficients], "rhs": con.rhs} for con in self.constraints],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SdpProblem":
        dec = lambda a: None if a is None else linalg.matrix_from_json(a)  # noqa: E731
        return cls(
            tuple(data["blocks"]),
            tuple(dec(c) for c in data["objective"]),
            tuple(Constraint(tuple(dec(a) for a in con["coefficients"]), con["rhs"]) for con in data["constraints"]),
        )


@dataclass(frozen=True, eq=False)
class SdpSolution:
    status: str
    primal: tuple
    dual_multipliers: np.ndarray
    objective: float
    gap: float
    dual_slack: tuple = ()
    dual_objective: float = float("nan")
    primal_residual: float = float("nan")
    dual_residual: float = float("nan")
    certificate: np.ndarray | None = None
    iterations: int = 0
    history: list = field(default_factory=list, repr=False)


@dataclass(frozen=True)
class SolveOptions:
    gap_tol: float = 1e-10
    max_iter: int = 200
    seed: int | None = None  # accepted for interface symmetry; the solver is deterministic
    infeasibility_tol: float = 1e-9
    check_weak_duality: bool = True


# ---------------------------------------------------------------------------
# compiled problem in minimisation form with normalised rows


class _Compiled:
    def __init__(self, p: SdpProblem):
        self.dtype = float if p.is_real else complex
        self.sizes = p.blocks
        m = len(p.constraints)
        self.m = m
        b = np.array([con.rhs for con in p.constraints], dtype=float)
        self.rhs = b.copy()
        # stacked coefficients per block, restricted to rows touching the block
        rows, stacks = [], []
        for j, n in enumerate(p.blocks):
            idx = [i for i, con in enumerate(p.constraints) if con.coefficients[j] is not None]
            rows.append(np.array(idx, dtype=int))
            stacks.append(
                np.array([p.constraints[i].coefficients[j] for i in idx], dtype=self.dtype).reshape(len(idx), n, n)
            )
        norms = np.zeros(m)
        for r, st in zip(rows, stacks):
            np.add.at(norms, r, np.sum(np.abs(st) ** 2, axis=(1, 2)))
        norms = np.sqrt(norms)
        if np.any(norms == 0):
            raise IllPosed("constraint with all-zero coefficients")
        self.row_scale = norms
        for j, (r, st) in enumerate(zip(rows, stacks)):
            stacks[j] = st / norms[r][:, None, None]
        self.rows = rows
        self.stacks = stacks
        self.flat = [st.reshape(len(r), -1).conj() for r, st in zip(rows, stacks)]
        b = b / norms
        c = [np.zeros((n, n), self.dtype) if cb is None else -np.asarray(cb, self.dtype) for cb, n in zip(p.objective, p.blocks)]
        self.b_scale = max(1.0, float(np.linalg.norm(b)))
        self.c_scale = max(1.0, float(np.sqrt(sum(np.sum(np.abs(cb) ** 2) for cb in c))))
        self.b = b / self.b_scale
        self.c = [cb / self.c_scale for cb in c]
        self._check_rank()

    def _check_rank(self):
        gram = np.zeros((self.m, self.m))
        for r, fl in zip(self.rows, self.flat):
            if len(r):
                gram[np.ix_(r, r)] += (fl @ fl.conj().T).real
        w = np.linalg.eigvalsh(gram)
        if w[0] < 1e-12 * max(1.0, w[-1]):
            raise IllPosed(f"constraint system is rank deficient (smallest Gram eigenvalue {w[0]:.2e})")
        self.gram = sla.cho_factor(gram, lower=True)

    def project_out(self, xs, err) -> list[np.ndarray]:
        """Least-norm correction so that A(X) moves by -err."""
        corr = self.adj(sla.cho_solve(self.gram, err))
        return [x - cx for x, cx in zip(xs, corr)]

    def op(self, xs) -> np.ndarray:
        """A(X): vector of constraint values."""
        out = np.zeros(self.m)
        for r, fl, x in zip(self.rows, self.flat, xs):
            if len(r):
                np.add.at(out, r, (fl @ x.reshape(-1)).real)
        return out

    def adj(self, y) -> list[np.ndarray]:
        """A^T(y) = sum_i y_i A_i per block."""
        out = []
        for r, st, n in zip(self.rows, self.stacks, self.sizes):
            if len(r):
                out.append(np.tensordot(y[r], st, axes=1))
            else:
                out.append(np.zeros((n, n), self.dtype))
        return out

    def schur(self, xs, sfacs) -> np.ndarray:
        """M_ij = sum_b Re tr(A_i X A_j S^-1)."""
        mat = np.zeros((self.m, self.m))
        for r, st, fl, x, sf, n in zip(self.rows, self.stacks, self.flat, xs, sfacs, self.sizes):
            if not len(r):
                continue
            g = _times_sinv(np.matmul(x, st).reshape(-1, n), sf).reshape(len(r), -1)
            mat[np.ix_(r, r)] += (fl @ g.T).real
        return mat


def _inner(a, b) -> float:
    return float(sum(np.vdot(x, y).real for x, y in zip(a, b)))


def _herm(a):
    return (a + a.conj().T) / 2


def _max_step(xs, dxs) -> float:
    """Largest alpha with X + alpha dX PSD for every block."""
    alpha = np.inf
    for x, dx in zip(xs, dxs):
        try:
            chol = np.linalg.cholesky(x)
        except np.linalg.LinAlgError:
            return 0.0  # rounding already pushed x onto the boundary
        tmp = sla.solve_triangular(chol, dx, lower=True)
        tmp = sla.solve_triangular(chol, tmp.conj().T, lower=True)
        lam = np.linalg.eigvalsh(_herm(tmp))[0]
        if lam < 0:
            alpha = min(alpha, -1.0 / lam)
    return alpha


def _scalar_step(v, dv) -> float:
    return -v / dv if dv < 0 else np.inf


def _times_sinv(z, sfac):
    """z @ S^-1 through the Cholesky factor of S (rows of z may be stacked)."""
    return sla.cho_solve(sfac, z.conj().T, check_finite=False).conj().T


def _factor(mat):
    try:
        return ("chol", sla.cho_factor(mat, lower=True, check_finite=False))
    except np.linalg.LinAlgError:
        return ("lu", sla.lu_factor(mat + 1e-14 * np.trace(mat) / len(mat) * np.eye(len(mat)), check_finite=False))


def _fsolve(fac, rhs):
    kind, f = fac
    return sla.cho_solve(f, rhs, check_finite=False) if kind == "chol" else sla.lu_solve(f, rhs, check_finite=False)


def solve(p: SdpProblem, opts: SolveOptions | None = None) -> SdpSolution:
    """Solve ``p``; see the module docstring for the problem form."""
    opts = opts or SolveOptions()
    if p.total_dim > MAX_TOTAL_DIM:
        raise TooLarge(f"total variable dimension {p.total_dim} exceeds {MAX_TOTAL_DIM}")
    if not p.constraints:
        raise ValueError("an SDP needs at least one constraint")
    comp = _Compiled(p)
    A, b, c = comp, comp.b, comp.c
    sizes = comp.sizes
    big_n = sum(sizes)
    dt = comp.dtype
    nb = max(1.0, float(np.linalg.norm(b)))
    nc = max(1.0, float(np.sqrt(_inner(c, c))))

    xs = [np.eye(n, dtype=dt) for n in sizes]
    ss = [np.eye(n, dtype=dt) for n in sizes]
    y = np.zeros(comp.m)
    tau = kappa = 1.0
    history = []
    status = INDETERMINATE
    cert = None
    stall = 0
    best = (np.inf, None)

    for it in range(opts.max_iter + 1):
        aty = A.adj(y)
        rp = b * tau - A.op(xs)
        rd = [cb * tau - a - s for cb, a, s in zip(c, aty, ss)]
        cx = _inner(c, xs)
        by = float(b @ y)
        rg = kappa + cx - by
        xs_dot = _inner(xs, ss)
        mu = (xs_dot + tau * kappa) / (big_n + 1)

        pobj, dobj = cx / tau, by / tau
        # per-constraint residual in the caller's units, relative to 1 + |rhs|
        pres = max(
            np.linalg.norm(rp) / tau / nb,
            float(np.max(np.abs(rp) * comp.row_scale * comp.b_scale / (1 + np.abs(comp.rhs)))) / tau,
        )
        dres = np.sqrt(_inner(rd, rd)) / tau / nc
        # relative gap measured in the caller's units so the reported gap meets the same bound
        obj_scale = comp.b_scale * comp.c_scale
        gap = abs(pobj - dobj) * obj_scale / (1 + obj_scale * (abs(pobj) + abs(dobj)))
        history.append({"iter": it, "pobj": pobj, "dobj": dobj, "pres": pres, "dres": dres, "gap": gap, "mu": mu, "tau": tau, "kappa": kappa})
        if opts.check_weak_duality:
            slack = (abs(_inner(rd, xs)) + abs(float(rp @ y))) / tau**2
            assert pobj - dobj >= -slack - 1e-9 * (1 + abs(pobj) + abs(dobj)), "weak duality violated"

        err = max(pres, dres, gap)
        if err < best[0]:
            best = (err, (xs, ss, y, tau, it))
            stall = 0
        elif tau < 1e-3 * kappa:
            # residuals cannot improve on an infeasible problem; a shrinking
            # tau/kappa ratio is progress toward a certificate instead
            stall = 0
        else:
            stall += 1
        if err <= opts.gap_tol:
            status = OPTIMAL
            break
        if by > 0:
            ray = [a + s for a, s in zip(aty, ss)]
            if np.sqrt(_inner(ray, ray)) / by <= opts.infeasibility_tol:
                status = INFEASIBLE
                cert = y / by
                break
        if cx < 0 and np.linalg.norm(A.op(xs)) / -cx <= opts.infeasibility_tol:
            # primal ray without a feasible point to anchor it: unbounded or infeasible dual
            status = INDETERMINATE
            break
        if it == opts.max_iter or stall >= 5:
            break

        try:
            d = _newton_step(A, b, c, xs, ss, tau, kappa, rp, rd, rg, mu, big_n)
            alpha = min(1.0, STEP_FRACTION * _step_to_boundary(xs, ss, tau, kappa, d))
        except (np.linalg.LinAlgError, FloatingPointError, ValueError):
            log.debug("linear algebra breakdown at iteration %d", it)
            break
        if alpha < 1e-10:
            break
        dxs, dy, dss, dtau, dkappa = d
        xs = [_herm(x + alpha * dx) for x, dx in zip(xs, dxs)]
        ss = [_herm(s + alpha * ds) for s, ds in zip(ss, dss)]
        y = y + alpha * dy
        tau += alpha * dtau
        kappa += alpha * dkappa
        # renormalise the homogeneous scale so tau and kappa stay moderate
        scale = max(tau, kappa, 1e-300)
        if scale > 1e6 or scale < 1e-6:
            xs = [x / scale for x in xs]
            ss = [s / scale for s in ss]
            y = y / scale
            tau /= scale
            kappa /= scale

    if status == INDETERMINATE and best[1] is not None:
        xs, ss, y, tau, _ = best[1]
    return _finish(p, comp, status, xs, ss, y, tau, cert, it, history)


def _step_to_boundary(xs, ss, tau, kappa, d) -> float:
    dxs, _, dss, dtau, dkappa = d
    return min(_max_step(xs, dxs), _max_step(ss, dss), _scalar_step(tau, dtau), _scalar_step(kappa, dkappa))


def _newton_step(A, b, c, xs, ss, tau, kappa, rp, rd, rg, mu, big_n):
    """Mehrotra predictor-corrector direction for the self-dual embedding."""
    sfacs = [sla.cho_factor(s, lower=True, check_finite=False) for s in ss]
    sinvs = [_times_sinv(np.eye(len(s), dtype=s.dtype), sf) for s, sf in zip(ss, sfacs)]
    fac = _factor(A.schur(xs, sfacs))
    xcs = [_times_sinv(x @ cb, sf) for x, cb, sf in zip(xs, c, sfacs)]
    u = A.op(xcs)
    vu = _fsolve(fac, u)
    vb = _fsolve(fac, b)
    v2 = vu + vb
    # (b-u)^T M^-1 (b+u) + <c, X c S^-1> written as a sum of nonnegative terms:
    # the second part is the D-norm of c after removing its component in range(A^T),
    # which avoids cancelling two quantities of order 1/mu near the optimum
    zs = [cb - a for cb, a in zip(c, A.adj(vu))]
    proj = max(0.0, _inner(zs, [_times_sinv(x @ z, sf) for x, z, sf in zip(xs, zs, sfacs)]))
    denom_base = max(0.0, float(b @ vb)) + proj
    xrds = [_times_sinv(x @ r, sf) for x, r, sf in zip(xs, rd, sfacs)]
    a_xrd = A.op(xrds)
    c_xrd = _inner(c, xrds)

    def bordered(r1, r2):
        v1 = _fsolve(fac, r1)
        dtau = (r2 - float((b - u) @ v1)) / (denom_base + kappa / tau)
        return v1 + v2 * dtau, dtau

    def recover(eta, rcs, rtk, dy, dtau):
        atdy = A.adj(dy)
        dss = [eta * r - a + cb * dtau for r, a, cb in zip(rd, atdy, c)]
        dxs = [_herm(rc - _times_sinv(x @ ds, sf)) for rc, x, ds, sf in zip(rcs, xs, dss, sfacs)]
        dkappa = (rtk - kappa * dtau) / tau
        return dxs, dy, dss, dtau, dkappa

    def direction(eta, rcs, rtk):
        r1 = eta * rp - A.op(rcs) + eta * a_xrd
        r2 = rtk / tau + eta * rg + _inner(c, rcs) - eta * c_xrd
        dy, dtau = bordered(r1, r2)
        d = recover(eta, rcs, rtk, dy, dtau)
        # one round of iterative refinement against the unreduced linearised equations
        dxs, _, _, _, dkappa = d
        e1 = A.op(dxs) - b * dtau - eta * rp
        e3 = dkappa + _inner(c, dxs) - float(b @ dy) + eta * rg
        ddy, ddtau = bordered(-e1, e3)
        return recover(eta, rcs, rtk, dy + ddy, dtau + ddtau)

    # predictor
    aff = direction(1.0, [-x for x in xs], -tau * kappa)
    a_aff = min(1.0, _step_to_boundary(xs, ss, tau, kappa, aff))
    dxa, _, dsa, dta, dka = aff
    mu_aff = (
        _inner([x + a_aff * d for x, d in zip(xs, dxa)], [s + a_aff * d for s, d in zip(ss, dsa)])
        + (tau + a_aff * dta) * (kappa + a_aff * dka)
    ) / (big_n + 1)
    sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3
    # corrector
    rcs = [_herm(sigma * mu * si - x - _times_sinv(dx @ ds, sf)) for si, sf, x, dx, ds in zip(sinvs, sfacs, xs, dxa, dsa)]
    rtk = sigma * mu - tau * kappa - dta * dka
    return direction(1.0 - sigma, rcs, rtk)


def _finish(p, comp, status, xs, ss, y, tau, cert, iters, history) -> SdpSolution:
    # undo scaling; internal y, s refer to c / c_scale and b / b_scale with rows divided by row_scale
    bs, cs = comp.b_scale, comp.c_scale
    prim = tuple(_herm(x) * bs / tau for x in xs)
    y_int = y * cs / tau / comp.row_scale
    slack = tuple(_herm(s) * cs / tau for s in ss)
    dual = -y_int  # multipliers of the maximisation form
    objective = float(sum(np.vdot(cb, x).real for cb, x in zip(p.objective, prim) if cb is not None))
    rhs = np.array([con.rhs for con in p.constraints])
    dual_obj = float(rhs @ dual)
    resid = np.array(
        [sum(np.vdot(a, x).real for a, x in zip(con.coefficients, prim) if a is not None) for con in p.constraints]
    )
    pres = float(np.max(np.abs(resid - rhs) / (1 + np.abs(rhs)))) if len(rhs) else 0.0
    dres_blocks = []
    for j, (cb, sl) in enumerate(zip(p.objective, slack)):
        acc = -(cb if cb is not None else 0) + 0 * sl
        for yi, con in zip(dual, p.constraints):
            if con.coefficients[j] is not None:
                acc = acc + yi * con.coefficients[j]
        dres_blocks.append(acc - sl)
    dres = max((linalg.max_abs(r) for r in dres_blocks), default=0.0)
    gap = abs(dual_obj - objective)
    certificate = None
    if status == INFEASIBLE:
        certificate = cert * cs / comp.row_scale
        certificate = certificate / float(rhs @ certificate)
    elif status == OPTIMAL or iters >= 0:
        ok = (
            pres <= REPORT_TOL
            and gap <= REPORT_TOL * (1 + abs(objective))
            and all(linalg.psd_check(x, 1e-8) for x in prim)
        )
        if status == OPTIMAL and not ok:
            status = INDETERMINATE
        elif status == INDETERMINATE and ok and dres <= REPORT_TOL * (1 + abs(objective)):
            status = OPTIMAL
    log.debug("sdp %s after %d iterations: obj %.10g gap %.2e", status, iters, objective, gap)
    return SdpSolution(
        status=status,
        primal=prim,
        dual_multipliers=dual,
        objective=objective,
        gap=gap,
        dual_slack=slack,
        dual_objective=dual_obj,
        primal_residual=pres,
        dual_residual=dres,
        certificate=certificate,
        iterations=iters,
        history=history,
    )


def verify_infeasibility_certificate(p: SdpProblem, y: np.ndarray, tol: float = 1e-8) -> bool:
    """Farkas check: sum_i y_i A_i is negative semidefinite on every block and b.y > 0."""
    rhs = np.array([con.rhs for con in p.constraints])
    if float(rhs @ y) <= 0:
        return False
    for j, n in enumerate(p.blocks):
        acc = np.zeros((n, n), dtype=complex)
        for yi, con in zip(y, p.constraints):
            if con.coefficients[j] is not None:
                acc += yi * con.coefficients[j]
        if linalg.eigvalsh(-_herm(acc))[0] < -tol * max(1.0, float(np.abs(y).max())):
            return False
    return True


# ---------------------------------------------------------------------------
# linear matrix inequalities


def hermitian_basis(n: int, real: bool = False) -> np.ndarray:
    """Orthonormal basis of n x n Hermitian (or real symmetric) matrices, stacked."""
    out = []
    dt = float if real else complex
    for p in range(n):
        e = np.zeros((n, n), dt)
        e[p, p] = 1
        out.append(e)
    for p in range(n):
        for q in range(p + 1, n):
            e = np.zeros((n, n), dt)
            e[p, q] = e[q, p] = 1 / np.sqrt(2)
            out.append(e)
            if not real:
                e = np.zeros((n, n), complex)
                e[p, q] = -1j / np.sqrt(2)
                e[q, p] = 1j / np.sqrt(2)
                out.append(e)
    return np.array(out, dtype=dt).reshape(len(out), n, n)


@dataclass(frozen=True, eq=False)
class LmiProblem:
    """maximize g.z  subject to  F0_b + sum_i z_i F_ib >= 0 on every block b.

    ``coefficients[b]`` is an array of shape (len(gain), n_b, n_b) or ``None``.
    """

    blocks: tuple[int, ...]
    constant: tuple
    coefficients: tuple
    gain: np.ndarray

    def to_sdp(self) -> SdpProblem:
        # LMI is the dual of: maximize <-F0, X> s.t. <F_i, X> = -g_i, X >= 0
        gain = np.asarray(self.gain, dtype=float)
        cons = []
        for i, gi in enumerate(gain):
            coeffs = tuple(None if f is None or not np.any(f[i]) else f[i] for f in self.coefficients)
            cons.append(Constraint(coeffs, -gi))
        objective = tuple(None if f0 is None else -np.asarray(f0) for f0 in self.constant)
        return SdpProblem(self.blocks, objective, tuple(cons))


@dataclass(frozen=True, eq=False)
class LmiSolution:
    status: str
    z: np.ndarray
    value: float
    sdp: SdpSolution

    def slack_blocks(self, lmi: LmiProblem) -> list[np.ndarray]:
        out = []
        for n, f0, f in zip(lmi.blocks, lmi.constant, lmi.coefficients):
            acc = np.zeros((n, n), dtype=complex) if f0 is None else np.asarray(f0, dtype=complex).copy()
            if f is not None:
                acc += np.tensordot(self.z, f, axes=1)
            out.append(acc)
        return out


def solve_lmi(lmi: LmiProblem, opts: SolveOptions | None = None) -> LmiSolution:
    sol = solve(lmi.to_sdp(), opts)
    z = sol.dual_multipliers
    return LmiSolution(sol.status, z, float(np.asarray(lmi.gain, dtype=float) @ z), sol)


# ---------------------------------------------------------------------------
# dense simplex


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: str  # Optimal | Infeasible | Unbounded
    x: np.ndarray
    objective: float
    pivots: int = 0


def _pivot(tab, row, col):
    tab[row] /= tab[row, col]
    col_vals = tab[:, col].copy()
    col_vals[row] = 0.0
    tab -= np.outer(col_vals, tab[row])


def _run_simplex(tab, basis, ncols, tol, max_pivots):
    """Maximise the objective stored in the last row (as negated reduced costs)."""
    pivots = 0
    while True:
        red = tab[-1, :ncols]
        enter = np.flatnonzero(red < -tol)
        if enter.size == 0:
            return "Optimal", pivots
        col = int(enter[0])  # Bland: lowest index
        colv = tab[:-1, col]
        pos = np.flatnonzero(colv > tol)
        if pos.size == 0:
            return "Unbounded", pivots
        ratios = tab[pos, -1] / colv[pos]
        best = ratios.min()
        cand = pos[ratios <= best + tol * max(1.0, abs(best))]
        row = int(cand[np.argmin(basis[cand])])  # Bland tie-break on basic variable index
        _pivot(tab, row, col)
        basis[row] = col
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("simplex pivot cap exceeded")


def solve_lp(
    c: Sequence[float],
    a_ub: np.ndarray | None = None,
    b_ub: Sequence[float] | None = None,
    a_eq: np.ndarray | None = None,
    b_eq: Sequence[float] | None = None,
    upper: Sequence[float] | None = None,
    tol: float = 1e-11,
    max_pivots: int = 200_000,
) -> LpSolution:
    """maximize c.x  s.t.  a_ub x <= b_ub, a_eq x = b_eq, 0 <= x (<= upper).

    Two-phase tableau simplex with Bland's rule, which cannot cycle.
    """
    c = np.asarray(c, dtype=float)
    n = c.size
    rows, rhs, kinds = [], [], []
    if a_ub is not None:
        for r, v in zip(np.atleast_2d(a_ub), b_ub):
            rows.append(np.asarray(r, float))
            rhs.append(float(v))
            kinds.append("ub")
    if upper is not None:
        for j, u in enumerate(upper):
            if np.isfinite(u):
                r = np.zeros(n)
                r[j] = 1.0
                rows.append(r)
                rhs.append(float(u))
                kinds.append("ub")
    if a_eq is not None:
        for r, v in zip(np.atleast_2d(a_eq), b_eq):
            rows.append(np.asarray(r, float))
            rhs.append(float(v))
            kinds.append("eq")
    m = len(rows)
    n_slack = kinds.count("ub")
    # columns: x | slacks | artificials | rhs
    art_rows = [i for i in range(m) if kinds[i] == "eq" or rhs[i] < 0]
    n_art = len(art_rows)
    ncols = n + n_slack + n_art
    tab = np.zeros((m + 1, ncols + 1))
    basis = np.zeros(m, dtype=int)
    s = 0
    art_of_row = {r: k for k, r in enumerate(art_rows)}
    for i in range(m):
        sign = -1.0 if rhs[i] < 0 else 1.0
        tab[i, :n] = sign * rows[i]
        tab[i, -1] = sign * rhs[i]
        if kinds[i] == "ub":
            tab[i, n + s] = sign
            if sign > 0:
                basis[i] = n + s
            s += 1
        if i in art_of_row:
            col = n + n_slack + art_of_row[i]
            tab[i, col] = 1.0
            basis[i] = col
    pivots = 0
    if n_art:
        # phase one: maximise -sum(artificials)
        tab[-1, n + n_slack : ncols] = 1.0
        for i in art_rows:
            tab[-1] -= tab[i]
        status, pv = _run_simplex(tab, basis, ncols, tol, max_pivots)
        pivots += pv
        if tab[-1, -1] < -1e-9 * max(1.0, np.abs(rhs).max()):
            return LpSolution("Infeasible", np.full(n, np.nan), float("nan"), pivots)
        # drive remaining artificials out of the basis
        for i in range(m):
            if basis[i] >= n + n_slack:
                nz = np.flatnonzero(np.abs(tab[i, : n + n_slack]) > 1e-9)
                if nz.size:
                    _pivot(tab, i, int(nz[0]))
                    basis[i] = int(nz[0])
        tab[:, n + n_slack : ncols] = 0.0
        keep = basis < n + n_slack
        tab = np.vstack([tab[:-1][keep], tab[-1:]])
        basis = basis[keep]
    tab[-1] = 0.0
    tab[-1, :n] = -c
    for i, j in enumerate(basis):
        if tab[-1, j] != 0:
            tab[-1] -= tab[-1, j] * tab[i]
    status, pv = _run_simplex(tab, basis, n + n_slack, tol, max_pivots)
    pivots += pv
    x = np.zeros(ncols)
    x[basis] = tab[:-1, -1]
    x = x[:n]
    if status == "Unbounded":
        return LpSolution(status, x, float("inf"), pivots)
    return LpSolution("Optimal", x, float(c @ x), pivots)


def is_diagonal(p: SdpProblem) -> bool:
    mats = list(p.objective) + [a for con in p.constraints for a in con.coefficients]
    return all(a is None or np.count_nonzero(a - np.diag(np.diag(a))) == 0 for a in mats)


def solve_diagonal_lp(p: SdpProblem) -> LpSolution:
    """Solve a problem whose coefficients are all diagonal as an LP on the diagonal entries."""
    if not is_diagonal(p):
        raise ValueError("problem has off-diagonal coefficients")
    diag = lambda a, n: np.zeros(n) if a is None else np.real(np.diag(a))  # noqa: E731
    c = np.concatenate([diag(cb, n) for cb, n in zip(p.objective, p.blocks)])
    a_eq = np.array([np.concatenate([diag(a, n) for a, n in zip(con.coefficients, p.blocks)]) for con in p.constraints])
    b_eq = np.array([con.rhs for con in p.constraints])
    return solve_lp(c, a_eq=a_eq, b_eq=b_eq)
