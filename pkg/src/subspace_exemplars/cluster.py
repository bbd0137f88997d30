"""Exemplar-based subspace clustering.

Pipeline: select exemplars, code every point over them, normalize the
coefficient vectors, connect each point to its t nearest neighbors among the
normalized codes (positive inner product only), symmetrize, and spectrally
cluster the resulting graph.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import DataMatrix
from .ffs import ffs_lazy, ffs_naive, select_random
from .lasso import DEFAULT_MAX_ITER, DEFAULT_TOL, SparseCode, solve_lasso_batch

__all__ = [
    "AffinityGraph",
    "ClusterAssignment",
    "ZeroCode",
    "EmptyGraph",
    "build_knn_graph",
    "threshold_codes",
    "spectral_cluster",
    "esc_pipeline",
]

_ZERO_NORM = 1e-12

# relative floor for code coefficients entering the affinity graph
_REL_COEFF_FLOOR = 1e-2


class ZeroCode(ValueError):
    """A coefficient vector has (numerically) zero norm.

    Signals that the exemplar set cannot represent the point at this lambda.
    """

    def __init__(self, j: int):
        self.j = j
        super().__init__(f"code {j} has zero norm; the exemplars cannot represent it")


class EmptyGraph(ValueError):
    """The affinity matrix has no edges."""


@dataclass(frozen=True)
class AffinityGraph:
    """Symmetrized t-NN graph A = W + W^T over normalized codes.

    matrix    : (N, N) array with entries in {0, 1, 2} and zero diagonal.
    neighbors : per-row neighbor indices of the directed graph W.
    """

    matrix: np.ndarray
    neighbors: tuple[np.ndarray, ...]

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class ClusterAssignment:
    """Length-N labels in [0, n_clusters)."""

    labels: np.ndarray
    n_clusters: int

    def __post_init__(self):
        lab = np.array(self.labels, dtype=int)
        if lab.ndim != 1:
            raise ValueError("labels must be one-dimensional")
        if lab.size and (lab.min() < 0 or lab.max() >= self.n_clusters):
            raise ValueError("labels must lie in [0, n_clusters)")
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)


def _code_matrix(codes: Sequence[SparseCode] | np.ndarray) -> np.ndarray:
    if isinstance(codes, np.ndarray):
        c = np.asarray(codes, dtype=float)
    else:
        c = np.column_stack([np.asarray(s.coeffs, dtype=float) for s in codes])
    if c.ndim != 2:
        raise ValueError("codes must form an (M, N) matrix")
    return c


def threshold_codes(codes: Sequence[SparseCode] | np.ndarray,
                    rel_floor: float = _REL_COEFF_FLOOR) -> np.ndarray:
    """Zero every coefficient far below its code's peak magnitude.

    At finite lam an otherwise subspace-preserving code can carry tiny
    off-support activations; dropped before graph construction they cannot
    inject junk edges.  Returns an (M, N) array.
    """
    c = _code_matrix(codes)
    return np.where(np.abs(c) < rel_floor * np.abs(c).max(axis=0), 0.0, c)


def build_knn_graph(codes: Sequence[SparseCode] | np.ndarray, t: int) -> AffinityGraph:
    """Connect each code to the t others with the largest positive inner product.

    Codes are L2-normalized first; a zero-norm code raises ZeroCode.  Fewer
    than t neighbors are attached when fewer inner products are positive.
    Ties are broken toward the lower index, so construction is
    order-independent.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    C = _code_matrix(codes)
    norms = np.linalg.norm(C, axis=0)
    bad = np.flatnonzero(norms < _ZERO_NORM)
    if bad.size:
        raise ZeroCode(int(bad[0]))
    Ct = C / norms
    sims = Ct.T @ Ct
    n = sims.shape[0]
    W = np.zeros((n, n), dtype=float)
    neighbors = []
    idx = np.arange(n)
    for i in range(n):
        row = sims[i]
        # descending similarity, ascending index on ties, self excluded
        order = np.lexsort((idx, -row))
        order = order[order != i]
        keep = order[row[order] > 0.0][:t]
        W[i, keep] = 1.0
        neighbors.append(np.array(sorted(keep), dtype=int))
    A = W + W.T
    np.fill_diagonal(A, 0.0)
    return AffinityGraph(A, tuple(neighbors))


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[int(rng.integers(n))]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0:
            pick = int(rng.integers(n))
        else:
            pick = int(rng.choice(n, p=d2 / total))
        centers[c] = X[pick]
        d2 = np.minimum(d2, ((X - centers[c]) ** 2).sum(axis=1))
    return centers


def _lloyd(X: np.ndarray, centers: np.ndarray, max_iter: int, rtol: float):
    n, k = X.shape[0], centers.shape[0]
    prev_inertia = np.inf
    labels = np.zeros(n, dtype=int)
    for _ in range(max_iter):
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels = np.argmin(d2, axis=1)
        inertia = float(d2[np.arange(n), labels].sum())
        for c in range(k):
            mask = labels == c
            if mask.any():
                centers[c] = X[mask].mean(axis=0)
            else:
                # repopulate an empty cluster with the worst-fit point
                far = int(np.argmax(d2[np.arange(n), labels]))
                centers[c] = X[far]
        if prev_inertia - inertia <= rtol * max(abs(prev_inertia), 1e-300):
            break
        prev_inertia = inertia
    d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d2, axis=1)
    inertia = float(d2[np.arange(n), labels].sum())
    return labels, inertia


def _kmeans(X: np.ndarray, k: int, rng: np.random.Generator,
            restarts: int = 10, max_iter: int = 300, rtol: float = 1e-9):
    best_labels, best_inertia = None, np.inf
    for _ in range(restarts):
        centers = _kmeans_pp_init(X, k, rng)
        labels, inertia = _lloyd(X, centers.copy(), max_iter, rtol)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    return best_labels


def spectral_cluster(graph: AffinityGraph, n_clusters: int, seed: int = 0) -> ClusterAssignment:
    """Normalized spectral clustering of the affinity graph.

    Uses the symmetric normalized Laplacian, the eigenvectors of its
    n_clusters smallest eigenvalues, row normalization of the embedding, and
    seeded k-means (k-means++ init, 10 restarts, lowest inertia wins).
    Isolated vertices are given unit degree so the normalization stays
    finite; they are reported via a warning.
    """
    if n_clusters < 1:
        raise ValueError("n_clusters must be >= 1")
    A = np.asarray(graph.matrix, dtype=float)
    if not A.any():
        raise EmptyGraph("affinity matrix has no nonzero entries")
    n = A.shape[0]
    if n_clusters > n:
        raise ValueError("n_clusters cannot exceed the number of points")
    deg = A.sum(axis=1)
    isolated = deg <= 0
    if isolated.any():
        warnings.warn(f"{int(isolated.sum())} isolated vertices in affinity graph")
        deg = np.where(isolated, 1.0, deg)
    dmh = 1.0 / np.sqrt(deg)
    lap = np.eye(n) - dmh[:, None] * A * dmh[None, :]
    lap = 0.5 * (lap + lap.T)
    _, vecs = np.linalg.eigh(lap)
    emb = vecs[:, :n_clusters]
    rn = np.linalg.norm(emb, axis=1)
    emb = emb / np.where(rn > _ZERO_NORM, rn, 1.0)[:, None]
    rng = np.random.default_rng(seed)
    labels = _kmeans(emb, n_clusters, rng)
    return ClusterAssignment(labels, n_clusters)


def _connected_components(adj: np.ndarray) -> np.ndarray:
    n = adj.shape[0]
    comp = np.full(n, -1, dtype=int)
    cur = 0
    for start in range(n):
        if comp[start] >= 0:
            continue
        stack = [start]
        comp[start] = cur
        while stack:
            v = stack.pop()
            for w in np.flatnonzero(adj[v]):
                if comp[w] < 0:
                    comp[w] = cur
                    stack.append(int(w))
        cur += 1
    return comp


def _merge_components(
    code_sims: np.ndarray, data_sims: np.ndarray, comp: np.ndarray, n_clusters: int
) -> np.ndarray:
    """Group whole graph components into n_clusters by strongest code affinity.

    A graph with more components than clusters makes the spectral relaxation
    degenerate (the null space of the Laplacian no longer determines a
    grouping), so components are merged agglomeratively instead, using the
    strongest absolute inner product between their normalized codes (a
    single straddling code is enough evidence).  For subspace-preserving
    codes the cross-class similarity is exactly zero, so same-class
    components merge first; exact zero-code ties (disjoint supports) fall
    back to the strongest data inner product, scaled to stay below any real
    code link.
    """
    groups = [np.flatnonzero(comp == c) for c in range(comp.max() + 1)]

    def link(a, b):
        block = np.ix_(groups[a], groups[b])
        sim = float(code_sims[block].max())
        if sim <= 1e-9:
            sim = 1e-9 * float(data_sims[block].max())
        return sim

    while len(groups) > n_clusters:
        best = (-1.0, 1, 0)
        for a in range(1, len(groups)):
            for b in range(a):
                sim = link(a, b)
                if sim > best[0]:
                    best = (sim, a, b)
        _, a, b = best
        groups[b] = np.concatenate([groups[b], groups[a]])
        del groups[a]
    labels = np.zeros(comp.shape[0], dtype=int)
    for g, members in enumerate(groups):
        labels[members] = g
    return labels


def esc_pipeline(
    data: DataMatrix,
    lam: float,
    k: int,
    t: int,
    n_clusters: int,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    selection: str = "ffs",
    first_index: int | None = None,
    return_details: bool = False,
):
    """Full exemplar-based clustering.

    Returns the ClusterAssignment, or with ``return_details`` the triple
    (assignment, exemplars, codes).  ``selection`` is one of "ffs" (lazy
    search), "ffs-naive", or "random".  Points whose code is zero
    (unrepresentable at this lambda) are excluded from the graph, attached
    afterwards to the cluster of the exemplar with the largest absolute
    inner product, and reported via a warning.
    """
    rng = np.random.default_rng(seed)
    seed_sel = int(rng.integers(2**63))
    seed_spec = int(rng.integers(2**63))
    if selection == "ffs":
        exemplars = ffs_lazy(data, lam, k, seed_sel, tol, max_iter, first_index)
    elif selection == "ffs-naive":
        exemplars = ffs_naive(data, lam, k, seed_sel, tol, max_iter, first_index)
    elif selection == "random":
        exemplars = select_random(data, k, seed_sel)
    else:
        raise ValueError(f"unknown selection method {selection!r}")

    sel = list(exemplars.indices)
    A = data.points[:, sel]
    codes = solve_lasso_batch(A, data.points, lam, tol, max_iter)

    C = _code_matrix(codes)
    norms = np.linalg.norm(C, axis=0)
    zero = norms < _ZERO_NORM
    labels = np.empty(data.count, dtype=int)
    keep = np.flatnonzero(~zero)
    if not keep.size:
        raise ZeroCode(int(np.flatnonzero(zero)[0]))
    if zero.any():
        warnings.warn(
            f"{int(zero.sum())} points have zero codes at lam={lam}; "
            "attaching each to its most correlated exemplar's cluster"
        )
    C = threshold_codes(C)
    graph = build_knn_graph(C[:, keep], t)
    comp = _connected_components(graph.matrix > 0)
    if comp.max() + 1 > n_clusters:
        Ck = C[:, keep] / np.linalg.norm(C[:, keep], axis=0)
        Xk = data.points[:, keep]
        kept_labels = _merge_components(
            np.abs(Ck.T @ Ck), np.abs(Xk.T @ Xk), comp, n_clusters
        )
    else:
        kept_labels = spectral_cluster(graph, n_clusters, seed_spec).labels
    labels[keep] = kept_labels
    if zero.any():
        # nearest exemplar by |<x_j, x_e>|; exemplar codes are never zero
        sims = np.abs(A.T @ data.points[:, zero])
        nearest = np.asarray(sel)[np.argmax(sims, axis=0)]
        pos = {j: p for p, j in enumerate(keep)}
        for col, j in enumerate(np.flatnonzero(zero)):
            labels[j] = kept_labels[pos[int(nearest[col])]]
    assignment = ClusterAssignment(labels, n_clusters)
    if return_details:
        return assignment, exemplars, codes
    return assignment
