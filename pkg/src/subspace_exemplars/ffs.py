"""Farthest-first search exemplar selection.

Both selectors grow an exemplar set one point at a time, always adding the
currently worst-represented point (largest self-representation cost).
``ffs_naive`` reevaluates every point at every iteration; ``ffs_lazy``
exploits the monotonicity of the cost in the exemplar set, keeping the last
known cost of each point as an upper bound and rescanning points in
decreasing bound order until the bound of the next point cannot beat the
best exact value seen.  The two produce identical selections; the lazy
variant simply performs far fewer cost evaluations.

The first exemplar is a seeded uniform draw (overridable for reproducible
worked examples); all later choices break ties toward the lowest point
index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dataset import DataMatrix
from .lasso import DEFAULT_MAX_ITER, DEFAULT_TOL, NoConvergence, _cd_core
from .selfrep import cost_floor

__all__ = ["SelectionStep", "ExemplarSet", "ffs_naive", "ffs_lazy", "select_random"]


@dataclass(frozen=True)
class SelectionStep:
    """One selection: chosen index, its cost then, evaluations spent."""

    selected: int
    f_value: float
    evals: int


@dataclass(frozen=True)
class ExemplarSet:
    """Ordered selection result with its per-iteration trace."""

    indices: tuple[int, ...]
    k: int
    seed: int
    trace: tuple[SelectionStep, ...] = ()
    lam: float | None = None

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(set(idx)) != len(idx):
            raise ValueError("exemplar indices must be distinct")
        object.__setattr__(self, "indices", idx)

    @property
    def total_evals(self) -> int:
        return sum(step.evals for step in self.trace)

    def to_json(self) -> str:
        doc = {
            "indices": list(self.indices),
            "k": self.k,
            "lambda": self.lam,
            "seed": self.seed,
            "trace": [
                {"selected": s.selected, "f_value": s.f_value, "evals": s.evals}
                for s in self.trace
            ],
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExemplarSet":
        doc = json.loads(text)
        trace = tuple(
            SelectionStep(int(s["selected"]), float(s["f_value"]), int(s["evals"]))
            for s in doc.get("trace", [])
        )
        lam = doc.get("lambda")
        return cls(
            indices=tuple(int(i) for i in doc["indices"]),
            k=int(doc["k"]),
            seed=int(doc["seed"]),
            trace=trace,
            lam=None if lam is None else float(lam),
        )


def _check_args(data: DataMatrix, lam: float, k: int) -> None:
    if not 1 <= k <= data.count:
        raise ValueError(f"k={k} must be in [1, N={data.count}]")
    if not lam > 1:
        raise ValueError(f"lam must be > 1, got {lam}")


def _first_index(data: DataMatrix, seed: int, first_index: int | None) -> int:
    if first_index is not None:
        if not 0 <= first_index < data.count:
            raise ValueError("first_index out of range")
        return int(first_index)
    rng = np.random.default_rng(seed)
    return int(rng.integers(data.count))


class _CostEvaluator:
    """Shared solver state: data Gram matrix plus per-point warm starts."""

    def __init__(self, data: DataMatrix, lam: float, tol: float, max_iter: int):
        self.X = data.points
        self.N = data.count
        self.gram = self.X.T @ self.X
        self.xnorm2 = np.ascontiguousarray(np.diag(self.gram)).copy()
        self.lam = lam
        self.tol = tol
        self.max_iter = max_iter
        self.warm: list[np.ndarray | None] = [None] * self.N

    def _solve(self, sel: list[int], targets: np.ndarray, warm):
        G = self.gram[np.ix_(sel, sel)]
        H = self.gram[np.ix_(sel, targets)]
        xn2 = self.xnorm2[targets]
        C, gap, _, sweeps, done = _cd_core(
            G, H, xn2, self.lam, self.tol, self.max_iter, warm
        )
        if not done.all():
            bad = int(targets[np.flatnonzero(~done)[0]])
            raise NoConvergence(sweeps, float(gap[~done][0]), target_index=bad)
        GC = G @ C
        e2 = np.maximum(xn2 - 2.0 * (C * H).sum(axis=0) + (C * GC).sum(axis=0), 0.0)
        costs = np.abs(C).sum(axis=0) + 0.5 * self.lam * e2
        return C, costs

    def eval_all(self, sel: list[int]) -> np.ndarray:
        """Costs of every point over the current selection (N evaluations)."""
        targets = np.arange(self.N)
        warm = self._stacked_warm(sel, targets)
        C, costs = self._solve(sel, targets, warm)
        for t in range(self.N):
            self.warm[t] = C[:, t].copy()
        return costs

    def eval_one(self, sel: list[int], j: int) -> float:
        targets = np.array([j])
        warm = self._stacked_warm(sel, targets)
        C, costs = self._solve(sel, targets, warm)
        self.warm[j] = C[:, 0].copy()
        return float(costs[0])

    def _stacked_warm(self, sel: list[int], targets: np.ndarray):
        # The selection only ever grows, appending columns at the end, so an
        # older coefficient vector is reused by zero-padding.
        M = len(sel)
        warm = np.zeros((M, targets.size))
        any_set = False
        for col, t in enumerate(targets):
            w = self.warm[t]
            if w is not None:
                warm[: w.size, col] = w
                any_set = True
        return warm if any_set else None


def ffs_naive(
    data: DataMatrix,
    lam: float,
    k: int,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    first_index: int | None = None,
) -> ExemplarSet:
    """Reference selector: evaluate the cost of every point each iteration.

    Iteration i computes f(x_j, current set) for all N points and appends the
    maximizer (lowest index on ties).  Deterministic given the seed.
    """
    _check_args(data, lam, k)
    j0 = _first_index(data, seed, first_index)
    ev = _CostEvaluator(data, lam, tol, max_iter)
    selected = [j0]
    trace = [SelectionStep(j0, 0.5 * lam, 0)]
    for _ in range(k - 1):
        costs = ev.eval_all(selected)
        masked = costs.copy()
        masked[selected] = -np.inf
        j = int(np.argmax(masked))
        trace.append(SelectionStep(j, float(costs[j]), ev.N))
        selected.append(j)
    return ExemplarSet(tuple(selected), k, seed, tuple(trace), lam)


def ffs_lazy(
    data: DataMatrix,
    lam: float,
    k: int,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    first_index: int | None = None,
) -> ExemplarSet:
    """Bound-pruned selector; selects exactly the same indices as ffs_naive.

    Stale costs are valid upper bounds because the cost is non-increasing as
    the selection grows, so a scan in decreasing bound order can stop as soon
    as the best refreshed value reaches the next stale bound.
    """
    _check_args(data, lam, k)
    j0 = _first_index(data, seed, first_index)
    ev = _CostEvaluator(data, lam, tol, max_iter)
    selected = [j0]
    in_set = np.zeros(ev.N, dtype=bool)
    in_set[j0] = True
    floor = cost_floor(lam)

    bounds = ev.eval_all(selected)  # N initialization evaluations
    bounds[j0] = floor  # a member's cost stays at the floor (exact)
    trace = [SelectionStep(j0, 0.5 * lam, ev.N)]

    for _ in range(k - 1):
        # stable descending order: primary key -bound, secondary key index
        order = np.lexsort((np.arange(ev.N), -bounds))
        max_cost = -np.inf
        new_index = -1
        evals = 0
        for pos in range(ev.N):
            j = int(order[pos])
            if not in_set[j]:
                bounds[j] = ev.eval_one(selected, j)
                evals += 1
                if bounds[j] > max_cost:
                    max_cost = bounds[j]
                    new_index = j
            if pos == ev.N - 1 or max_cost >= bounds[order[pos + 1]]:
                break
        trace.append(SelectionStep(new_index, float(max_cost), evals))
        selected.append(new_index)
        in_set[new_index] = True
        bounds[new_index] = floor
    return ExemplarSet(tuple(selected), k, seed, tuple(trace), lam)


def select_random(data: DataMatrix, k: int, seed: int = 0) -> ExemplarSet:
    """k distinct indices drawn uniformly at random (baseline selector)."""
    if not 0 <= k <= data.count:
        raise ValueError(f"k={k} must be in [0, N={data.count}]")
    rng = np.random.default_rng(seed)
    idx = rng.choice(data.count, size=k, replace=False)
    return ExemplarSet(tuple(int(i) for i in idx), k, seed, ())
