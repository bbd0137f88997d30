"""L1-regularized self-representation solver.

Solves, for a unit-norm target x and a dictionary A of unit-norm columns,

    min_c  ||c||_1 + (lam / 2) * ||x - A c||_2^2,       lam > 1,

by cyclic coordinate descent with soft thresholding.  Convergence is
certified: the returned coefficients satisfy the subgradient optimality
conditions within the requested tolerance and the duality gap at return is
below it as well.  Both quantities can be recomputed independently from the
returned code via :func:`kkt_violation` and :func:`duality_gap`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LassoProblem",
    "SparseCode",
    "NoConvergence",
    "solve_lasso",
    "solve_lasso_batch",
    "duality_gap",
    "kkt_violation",
]

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100_000

# coefficients below this magnitude are snapped to zero after convergence so
# sparsity patterns are stable
SNAP_EPS = 1e-12

_UNIT_TOL = 1e-10


class NoConvergence(RuntimeError):
    """Coordinate descent exhausted max_iter sweeps above tolerance."""

    def __init__(self, iterations: int, gap: float, target_index: int | None = None):
        self.iterations = iterations
        self.gap = gap
        self.target_index = target_index
        where = "" if target_index is None else f" (target {target_index})"
        super().__init__(
            f"no convergence after {iterations} sweeps{where}: duality gap {gap:.3e}"
        )


@dataclass(frozen=True)
class LassoProblem:
    """One self-representation subproblem.

    dictionary : (D, M) array of unit-norm columns (M may be 0).
    target     : (D,) unit-norm vector.
    lam        : regularization weight, must exceed 1.
    """

    dictionary: np.ndarray
    target: np.ndarray
    lam: float

    def __post_init__(self):
        a = np.asarray(self.dictionary, dtype=float)
        x = np.asarray(self.target, dtype=float).ravel()
        if a.ndim != 2 or a.shape[0] != x.shape[0]:
            raise ValueError("dictionary must be (D, M) with D matching the target")
        if not self.lam > 1:
            raise ValueError(f"lam must be > 1, got {self.lam}")
        if a.shape[1] and np.max(np.abs(np.linalg.norm(a, axis=0) - 1.0)) > _UNIT_TOL:
            raise ValueError("dictionary columns must have unit norm")
        if abs(np.linalg.norm(x) - 1.0) > _UNIT_TOL:
            raise ValueError("target must have unit norm")
        object.__setattr__(self, "dictionary", a)
        object.__setattr__(self, "target", x)


@dataclass(frozen=True)
class SparseCode:
    """Solver output: coefficients, residual x - A c, and objective value."""

    coeffs: np.ndarray
    residual: np.ndarray
    objective: float

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.coeffs)


def _soft(v: np.ndarray, thresh: float) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - thresh, 0.0)


def _certificates(corr, c, e2, lam):
    """Per-target KKT violation and duality gap from Gram-tracked quantities.

    corr = A^T e, c the coefficients, e2 = ||e||^2, all for the objective
    ||c||_1 + (lam/2)||e||^2.
    """
    alpha = 1.0 / lam
    nz = c != 0.0
    viol = np.where(
        nz, np.abs(corr - alpha * np.sign(c)), np.maximum(np.abs(corr) - alpha, 0.0)
    )
    kkt = viol.max(axis=0) if viol.shape[0] else np.zeros(viol.shape[1])

    l1 = np.abs(c).sum(axis=0)
    # e^T x = ||e||^2 + (A^T e)^T c
    ex = e2 + (corr * c).sum(axis=0)
    inf_norm = np.abs(corr).max(axis=0) if corr.shape[0] else np.zeros(corr.shape[1])
    scale = alpha / np.maximum(inf_norm, alpha)  # 1 when A^T e is dual feasible
    gap_std = 0.5 * e2 + alpha * l1 - scale * ex + 0.5 * scale**2 * e2
    gap = np.maximum(lam * gap_std, 0.0)
    return kkt, gap


def _exact_solve(G, h, alpha, c0):
    """Active-set finisher for one target, run on the support found by CD.

    Alternates exact solves of the sign-restricted stationarity system with
    sign-aware line searches (feature-sign style): a full step lands on the
    sign pattern's optimum, a crossing step zeroes a coefficient, and an
    infeasible sign pattern (support larger than the dictionary rank) is
    shrunk by sliding along the null direction of the restricted Gram
    matrix, which leaves the fit unchanged until a coefficient hits zero.
    Every step either reaches stationarity or shrinks the support, so no
    objective thresholds are needed; the caller certifies the result, so any
    early exit here is harmless.
    """
    M = h.size
    c = np.array(c0, dtype=float)
    support = [int(i) for i in np.flatnonzero(c)]
    theta = [float(np.sign(c[i])) for i in support]

    def fval(v):
        return 0.5 * v @ (G @ v) - h @ v + alpha * np.abs(v).sum()

    stationary = False
    for _ in range(8 * M + 64):
        if not support:
            corr = h - G @ c
            i = int(np.argmax(np.abs(corr)))
            if abs(corr[i]) <= alpha * (1.0 + 1e-12) + 1e-15:
                return c
            support.append(i)
            theta.append(float(np.sign(corr[i])))
            stationary = False
            continue
        S = np.array(support)
        th = np.array(theta)
        gss = G[np.ix_(S, S)]
        rhs = h[S] - alpha * th
        sol = np.linalg.lstsq(gss, rhs, rcond=None)[0]
        # iterative refinement: the restricted Gram can be ill-conditioned
        # and a single solve leaves a stationarity error of order cond * eps
        for _ in range(4):
            resid = gss @ sol - rhs
            if np.abs(resid).max() < 1e-15:
                break
            sol -= np.linalg.lstsq(gss, resid, rcond=None)[0]
        resid = gss @ sol - rhs

        if np.abs(resid).max() > 1e-11:
            # Sign pattern infeasible.  -resid spans the inconsistent null
            # component; moving along it leaves the fit unchanged, lowers the
            # linearized objective, and must drive some coefficient to zero.
            d = -resid
            cs = c[S]
            with np.errstate(divide="ignore", invalid="ignore"):
                tc = np.where(cs * d < 0, -cs / np.where(d != 0.0, d, 1.0), np.inf)
            tmin = tc.min()
            if not np.isfinite(tmin):
                return c
            c = c.copy()
            c[S] = cs + tmin * d
            c[S[np.isclose(tc, tmin)]] = 0.0
            c[np.abs(c) < 1e-15] = 0.0
            stationary = False
        elif not stationary:
            # consistent: move toward the exact solution, taking the best of
            # the sign crossings and the full step (all guaranteed descent
            # up to the first crossing; f decides among them)
            cs = c[S]
            delta = sol - cs
            with np.errstate(divide="ignore", invalid="ignore"):
                tc = np.where(cs * sol < 0, -cs / np.where(delta != 0.0, delta, 1.0), np.inf)
            steps = sorted({float(t) for t in tc if 0.0 < t < 1.0}) + [1.0]
            cands = []
            for t in steps:
                cand = c.copy()
                cand[S] = cs + t * delta
                cand[np.abs(cand) < 1e-15] = 0.0
                cands.append((fval(cand), len(cands), cand))
            _, pos, c = min(cands)
            stationary = steps[pos] == 1.0  # full step enforces stationarity
        else:
            # at this sign pattern's optimum: activate the worst inactive
            # coordinate or finish
            corr = h - G @ c
            mask = np.ones(M, dtype=bool)
            mask[S] = False
            if not mask.any():
                return c
            viol = np.abs(corr) * mask
            i = int(np.argmax(viol))
            if viol[i] <= alpha * (1.0 + 1e-12) + 1e-15:
                return c
            support.append(i)
            theta.append(float(np.sign(corr[i])))
            stationary = False
            continue
        support = [int(i) for i in np.flatnonzero(c)]
        theta = [float(np.sign(c[i])) for i in support]
    return c


def _cd_core(G, H, xnorm2, lam, tol, max_iter, warm=None):
    """Coordinate descent over possibly many targets sharing one dictionary.

    G      : (M, M) dictionary Gram matrix.
    H      : (M, T) dictionary-target inner products.
    xnorm2 : (T,) squared target norms.
    warm   : optional (M, T) starting coefficients.

    Cyclic soft-thresholding sweeps identify the support; periodically the
    stationarity system is solved exactly on each unconverged target's
    support and the candidate is accepted when the optimality certificates
    pass, which removes the slow tail of plain descent.  Targets are frozen
    individually once their duality gap and KKT violation drop below half
    the tolerance (margin for the exact recomputation done by callers).
    Returns (C, gap, kkt, sweeps, converged_mask).
    """
    M, T = H.shape
    alpha = 1.0 / lam
    kkt_tol = 0.5 * tol
    gap_tol = 0.75 * tol  # float noise on the gap grows with lam
    if warm is None:
        C = np.zeros((M, T))
        GC = np.zeros((M, T))
    else:
        C = np.array(warm, dtype=float)
        if C.shape != (M, T):
            raise ValueError("warm start has wrong shape")
        GC = G @ C
    diag = np.ascontiguousarray(np.diag(G))
    active = np.ones(T, dtype=bool)
    gap = np.zeros(T)
    kkt = np.zeros(T)
    sweeps = 0

    def certify(cols):
        corr = H[:, cols] - GC[:, cols]
        e2 = np.maximum(
            xnorm2[cols]
            - 2.0 * (C[:, cols] * H[:, cols]).sum(axis=0)
            + (C[:, cols] * GC[:, cols]).sum(axis=0),
            0.0,
        )
        return _certificates(corr, C[:, cols], e2, lam)

    for sweeps in range(max_iter + 1):
        cols = np.flatnonzero(active)
        k_act, g_act = certify(cols)
        done_now = (g_act <= gap_tol) & (k_act <= kkt_tol)
        if sweeps >= 1 and (sweeps - 1) % 3 == 0 and not done_now.all():
            # finish unconverged targets on their current supports
            for pos in np.flatnonzero(~done_now):
                t = cols[pos]
                old = C[:, t].copy()
                C[:, t] = _exact_solve(G, H[:, t], alpha, C[:, t])
                GC[:, t] = G @ C[:, t]
                k_one, g_one = certify(np.array([t]))
                if (g_one[0] <= gap_tol) and (k_one[0] <= kkt_tol):
                    k_act[pos], g_act[pos] = k_one[0], g_one[0]
                    done_now[pos] = True
                else:
                    C[:, t] = old
                    GC[:, t] = G @ old
        kkt[cols] = k_act
        gap[cols] = g_act
        active[cols[done_now]] = False
        if not active.any() or sweeps == max_iter:
            break
        for i in range(M):
            rho = H[i] - GC[i] + diag[i] * C[i]
            cnew = _soft(rho, alpha) / diag[i]
            delta = np.where(active, cnew - C[i], 0.0)
            if np.any(delta):
                C[i] += delta
                GC += np.outer(G[:, i], delta)
    return C, gap, kkt, sweeps, ~active


def _finalize(A, X, C, lam):
    """Snap tiny coefficients, recompute residuals and objectives exactly."""
    C = np.where(np.abs(C) < SNAP_EPS, 0.0, C)
    E = X - A @ C
    obj = np.abs(C).sum(axis=0) + 0.5 * lam * (E * E).sum(axis=0)
    return C, E, obj


def solve_lasso(
    problem: LassoProblem,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    warm_start: np.ndarray | None = None,
) -> SparseCode:
    """Solve one problem to certified optimality.

    Raises NoConvergence if max_iter coordinate sweeps do not reach the
    tolerance.  An empty dictionary returns the conventional value lam/2 with
    an empty coefficient vector.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A, x, lam = problem.dictionary, problem.target, problem.lam
    if A.shape[1] == 0:
        return SparseCode(np.zeros(0), x.copy(), 0.5 * lam)
    G = A.T @ A
    H = (A.T @ x)[:, None]
    xn2 = np.array([float(x @ x)])
    warm = None if warm_start is None else np.asarray(warm_start, dtype=float)[:, None]
    C, gap, _, sweeps, done = _cd_core(G, H, xn2, lam, tol, max_iter, warm)
    if not done[0]:
        raise NoConvergence(sweeps, float(gap[0]))
    C, E, obj = _finalize(A, x[:, None], C, lam)
    return SparseCode(C[:, 0], E[:, 0], float(obj[0]))


def solve_lasso_batch(
    dictionary,
    targets,
    lam: float,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    warm_start: np.ndarray | None = None,
) -> list[SparseCode]:
    """Solve one problem per target column over a shared dictionary.

    Results are identical to per-target :func:`solve_lasso` calls and keep
    the target order.  A NoConvergence failure carries the index of the
    offending target.  Accepts plain arrays or objects with a ``points``
    attribute (DataMatrix).
    """
    A = _as_points(dictionary)
    X = _as_points(targets)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not lam > 1:
        raise ValueError(f"lam must be > 1, got {lam}")
    if X.ndim == 1:
        X = X[:, None]
    T = X.shape[1]
    if A.shape[1] == 0:
        return [
            SparseCode(np.zeros(0), X[:, t].copy(), 0.5 * lam) for t in range(T)
        ]
    if np.max(np.abs(np.linalg.norm(A, axis=0) - 1.0)) > _UNIT_TOL:
        raise ValueError("dictionary columns must have unit norm")
    if np.max(np.abs(np.linalg.norm(X, axis=0) - 1.0)) > _UNIT_TOL:
        raise ValueError("targets must have unit norm")
    G = A.T @ A
    H = A.T @ X
    xn2 = (X * X).sum(axis=0)
    C, gap, _, sweeps, done = _cd_core(G, H, xn2, lam, tol, max_iter, warm_start)
    if not done.all():
        bad = int(np.flatnonzero(~done)[0])
        raise NoConvergence(sweeps, float(gap[bad]), target_index=bad)
    C, E, obj = _finalize(A, X, C, lam)
    return [SparseCode(C[:, t], E[:, t], float(obj[t])) for t in range(T)]


def _as_points(m) -> np.ndarray:
    pts = getattr(m, "points", m)
    return np.asarray(pts, dtype=float)


def kkt_violation(dictionary, target, lam: float, code: SparseCode) -> float:
    """Largest violation of the subgradient optimality conditions.

    For e = x - A c the conditions are |a_i . e| <= 1/lam where c_i = 0 and
    a_i . e = sign(c_i)/lam where c_i != 0.
    """
    A = _as_points(dictionary)
    if A.shape[1] == 0:
        return 0.0
    corr = (A.T @ code.residual)[:, None]
    kkt, _ = _certificates(corr, code.coeffs[:, None], np.zeros(1), lam)
    return float(kkt[0])


def duality_gap(dictionary, target, lam: float, code: SparseCode) -> float:
    """Duality gap of the code for its problem (nonnegative, 0 at optimum)."""
    A = _as_points(dictionary)
    x = np.asarray(target, dtype=float).ravel()
    if A.shape[1] == 0:
        return 0.0
    e = code.residual
    corr = (A.T @ e)[:, None]
    _, gap = _certificates(corr, code.coeffs[:, None], np.array([float(e @ e)]), lam)
    return float(gap[0])
