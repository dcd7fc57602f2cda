"""Graph primitives: acyclicity, moralization, CPDAG conversion, and metrics.

Adjacency convention throughout the package: row = parent, column = child,
so a nonzero entry ``a[i, j]`` encodes the directed edge ``i -> j``.

A CPDAG is represented as a d x d 0/1 integer matrix ``c`` with, per pair
(i, j): ``c[i, j] = 1, c[j, i] = 0`` meaning the directed edge i -> j,
``c[i, j] = c[j, i] = 1`` meaning an undirected edge, and both zero meaning
no edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


@dataclass
class EvalMetrics:
    """Structure-recovery metrics. ``shd_cpdag`` is None when not computed."""

    shd_cpdag: int | None
    skeleton_precision: float
    skeleton_recall: float


def check_adjacency(a, binary=False) -> np.ndarray:
    """Validate a square zero-diagonal adjacency matrix and return it as float."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got shape {a.shape}")
    if np.any(np.diagonal(a) != 0):
        raise ValueError("adjacency matrix must have a zero diagonal")
    if binary and not np.all((a == 0) | (a == 1)):
        raise ValueError("adjacency entries must be 0 or 1")
    return a


def support(w) -> np.ndarray:
    """Binary support of a weighted adjacency matrix."""
    return (np.asarray(w) != 0).astype(float)


def skeleton_of(w) -> np.ndarray:
    """Undirected support (symmetric 0/1 matrix) of an adjacency matrix."""
    adj = np.asarray(w) != 0
    return (adj | adj.T).astype(float)


def topological_order(a) -> list[int]:
    """Topological order of the nodes (Kahn). Raises ValueError on a cycle."""
    adj = np.asarray(a) != 0
    indeg = adj.sum(axis=0).astype(int)
    stack = [int(i) for i in np.flatnonzero(indeg == 0)]
    order = []
    while stack:
        i = stack.pop()
        order.append(i)
        for j in np.flatnonzero(adj[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                stack.append(int(j))
    if len(order) != adj.shape[0]:
        raise ValueError("graph contains a directed cycle")
    return order


def is_acyclic(a) -> bool:
    """True iff the directed graph encoded by ``a``'s support has no cycle."""
    try:
        topological_order(a)
    except ValueError:
        return False
    return True


def moralize(dag) -> np.ndarray:
    """Moral graph: drop directions and marry all parents of a common child."""
    dag = check_adjacency(dag)
    if not is_acyclic(dag):
        raise ValueError("moralize requires an acyclic input")
    adj = dag != 0
    out = (adj | adj.T).astype(float)
    for j in range(dag.shape[0]):
        parents = np.flatnonzero(adj[:, j])
        for x, y in itertools.combinations(parents, 2):
            out[x, y] = out[y, x] = 1.0
    np.fill_diagonal(out, 0.0)
    return out


def v_structures(dag) -> set[tuple[int, int, int]]:
    """Set of v-structures (x, z, y): x -> z <- y with x, y nonadjacent, x < y."""
    adj = np.asarray(dag) != 0
    und = adj | adj.T
    out = set()
    for z in range(adj.shape[0]):
        parents = np.flatnonzero(adj[:, z])
        for x, y in itertools.combinations(parents, 2):
            if not und[x, y]:
                out.add((int(x), z, int(y)))
    return out


def _apply_meek_rules(c: np.ndarray) -> None:
    """Close a PDAG matrix under Meek's orientation rules 1-4, in place.

    Adjacency never changes during closure, so ``adj`` is hoisted; all other
    premises are read from the live matrix.
    """
    adj = (c == 1) | (c.T == 1)

    def orientable(a: int, b: int) -> bool:
        # premises for orienting the undirected edge a - b as a -> b
        dir_into_a = (c[:, a] == 1) & (c[a, :] == 0)
        dir_into_b = (c[:, b] == 1) & (c[b, :] == 0)
        dir_out_a = (c[a, :] == 1) & (c[:, a] == 0)
        und_a = (c[a, :] == 1) & (c[:, a] == 1)
        # R1: k -> a with k, b nonadjacent
        if np.any(dir_into_a & ~adj[:, b]):
            return True
        # R2: a -> k -> b
        if np.any(dir_out_a & dir_into_b):
            return True
        # R3: a - k, a - l, k -> b, l -> b with k, l nonadjacent
        ks = np.flatnonzero(und_a & dir_into_b)
        for k, l in itertools.combinations(ks, 2):
            if not adj[k, l]:
                return True
        # R4: a - k, k -> l, l -> b with k, b nonadjacent and a, l adjacent
        for k in np.flatnonzero(und_a & ~adj[:, b]):
            dir_out_k = (c[k, :] == 1) & (c[:, k] == 0)
            if np.any(dir_out_k & dir_into_b & adj[a, :]):
                return True
        return False

    changed = True
    while changed:
        changed = False
        for a, b in zip(*np.nonzero(np.triu(c & c.T, 1))):
            for x, y in ((a, b), (b, a)):
                if c[x, y] and c[y, x] and orientable(x, y):
                    c[y, x] = 0
                    changed = True
                    break


def to_cpdag(dag) -> np.ndarray:
    """CPDAG of the Markov equivalence class of an acyclic graph.

    Keeps the skeleton, orients v-structures, and closes under Meek rules;
    every remaining edge is undirected.
    """
    dag = check_adjacency(dag)
    if not is_acyclic(dag):
        raise ValueError("to_cpdag requires an acyclic input")
    adj = dag != 0
    c = (adj | adj.T).astype(np.int64)
    for x, z, y in v_structures(dag):
        c[z, x] = 0
        c[z, y] = 0
    _apply_meek_rules(c)
    return c


def shd_cpdag(a, b) -> int:
    """Structural Hamming distance between two CPDAGs.

    Counts the unordered pairs whose edge marks (absent, i->j, j->i,
    undirected) differ; any difference costs 1.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("CPDAG dimension mismatch")
    neq = a != b
    return int(np.triu(neq | neq.T, 1).sum())


def skeleton_metrics(est, truth) -> EvalMetrics:
    """Precision/recall over undirected edges; empty denominators give 1.0."""
    est = np.asarray(est) != 0
    truth = np.asarray(truth) != 0
    if est.shape != truth.shape:
        raise ValueError("skeleton dimension mismatch")
    est = np.triu(est | est.T, 1)
    truth = np.triu(truth | truth.T, 1)
    n_est = int(est.sum())
    n_truth = int(truth.sum())
    n_both = int((est & truth).sum())
    precision = n_both / n_est if n_est else 1.0
    recall = n_both / n_truth if n_truth else 1.0
    return EvalMetrics(shd_cpdag=None, skeleton_precision=precision, skeleton_recall=recall)


def threshold_mask(probs, filt, cut=0.5) -> np.ndarray:
    """Binary adjacency: entry 1 iff (probs * filt) strictly exceeds ``cut``."""
    if not 0.0 < cut < 1.0:
        raise ValueError("cut must lie in (0, 1)")
    out = ((np.asarray(probs, dtype=float) * np.asarray(filt, dtype=float)) > cut).astype(float)
    np.fill_diagonal(out, 0.0)
    return out


def _transitive_closure(adj: np.ndarray) -> np.ndarray:
    reach = adj.copy()
    for k in range(adj.shape[0]):
        reach |= np.outer(reach[:, k], reach[k, :])
    return reach


def postprocess_to_dag(w) -> np.ndarray:
    """Zero the smallest-|weight| edge lying on a cycle until the graph is a DAG.

    Ties break toward the lexicographically smallest (row-major) entry.
    Acyclic input is returned unchanged (up to a copy).
    """
    w = np.array(w, dtype=float)
    while not is_acyclic(w):
        reach = _transitive_closure(w != 0)
        on_cycle = (w != 0) & reach.T  # edge (i, j) is on a cycle iff j reaches i
        cand = np.where(on_cycle, np.abs(w), np.inf)
        i, j = np.unravel_index(int(np.argmin(cand)), w.shape)
        w[i, j] = 0.0
    return w
