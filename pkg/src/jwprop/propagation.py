"""Prior assignment and synchronous one-step propagation kernels.

All steps are Jacobi-style: the next score vector is computed entirely from
the previous one, so a step is a data-parallel map over adjacency rows.
Single-threaded execution is bit-deterministic; the threaded path partitions
rows into contiguous blocks and produces the same per-row sums.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import InputError
from .graph import BIDIRECTIONAL, UNI_INCOMING, UNI_OUTGOING, EdgeWeights, Graph

RW_VARIANTS = ("rw-n", "rw-p", "rw-b")


@dataclass(frozen=True)
class LabelSet:
    """Training labels: disjoint sets of positive and negative node ids."""

    positives: frozenset[int]
    negatives: frozenset[int]

    def __post_init__(self):
        overlap = self.positives & self.negatives
        if overlap:
            raise InputError(f"labels overlap on nodes {sorted(overlap)[:5]}")
        if any(i < 0 for i in self.positives) or any(i < 0 for i in self.negatives):
            raise InputError("label node ids must be nonnegative")

    @classmethod
    def of(cls, positives, negatives) -> "LabelSet":
        return cls(frozenset(int(i) for i in positives),
                   frozenset(int(i) for i in negatives))

    def __len__(self) -> int:
        return len(self.positives) + len(self.negatives)

    def positive_array(self) -> np.ndarray:
        return np.fromiter(sorted(self.positives), dtype=np.int64,
                           count=len(self.positives))

    def negative_array(self) -> np.ndarray:
        return np.fromiter(sorted(self.negatives), dtype=np.int64,
                           count=len(self.negatives))

    def exclude(self, other: "LabelSet") -> "LabelSet":
        drop = other.positives | other.negatives
        return LabelSet(self.positives - drop, self.negatives - drop)

    def check_bounds(self, n: int):
        ids = self.positives | self.negatives
        if ids and max(ids) >= n:
            raise InputError(f"label node id {max(ids)} out of range for {n} nodes")


def assign_priors(labels: LabelSet, theta: float, n: int) -> np.ndarray:
    """Prior score vector: +theta on positives, -theta on negatives, 0 else."""
    if theta <= 0:
        raise InputError("theta must be positive")
    labels.check_bounds(n)
    q = np.zeros(n)
    q[labels.positive_array()] = theta
    q[labels.negative_array()] = -theta
    return q


def half_neg(p: np.ndarray) -> np.ndarray:
    """Zero out positive entries, keeping the negative part."""
    return np.minimum(p, 0.0)


def half_pos(p: np.ndarray) -> np.ndarray:
    """Zero out negative entries, keeping the positive part."""
    return np.maximum(p, 0.0)


def _check_vectors(g: Graph, w: EdgeWeights, *vecs):
    w.check(g)
    for v in vecs:
        if v.shape != (g.node_count,):
            raise InputError(
                f"score vector has length {v.shape[0]}, graph has {g.node_count} nodes"
            )


def _block_bounds(indptr: np.ndarray, threads: int) -> np.ndarray:
    nnz = int(indptr[-1])
    targets = np.linspace(0, nnz, threads + 1)
    bounds = np.searchsorted(indptr, targets, side="left").astype(np.int64)
    bounds[0] = 0
    bounds[-1] = len(indptr) - 1
    return np.unique(bounds)


def _matvec(indptr, indices, data, p, threads=1) -> np.ndarray:
    n_rows = len(indptr) - 1
    if threads <= 1 or n_rows < 2:
        m = sparse.csr_matrix((data, indices, indptr), shape=(n_rows, p.shape[0]),
                              copy=False)
        return m @ p

    # Row blocks: every row is still summed in its original entry order, so
    # the result matches the single-threaded product exactly.
    bounds = _block_bounds(indptr, threads)
    out = np.empty(n_rows)

    def work(i):
        lo, hi = int(bounds[i]), int(bounds[i + 1])
        a, b = int(indptr[lo]), int(indptr[hi])
        block = sparse.csr_matrix(
            (data[a:b], indices[a:b], indptr[lo:hi + 1] - a),
            shape=(hi - lo, p.shape[0]), copy=False)
        out[lo:hi] = block @ p

    with ThreadPoolExecutor(max_workers=len(bounds) - 1) as pool:
        list(pool.map(work, range(len(bounds) - 1)))
    return out


def lbp_step_undirected(g: Graph, w: EdgeWeights, q: np.ndarray, p: np.ndarray,
                        threads: int = 1) -> np.ndarray:
    """One additive propagation step q + W p on an undirected graph."""
    if g.directed:
        raise InputError("lbp_step_undirected expects an undirected graph")
    _check_vectors(g, w, q, p)
    data = w.values[g._entry_slot]
    return q + _matvec(g._indptr, g._indices, data, p, threads)


def lbp_step_directed(g: Graph, w: EdgeWeights, q: np.ndarray, p: np.ndarray,
                      threads: int = 1) -> np.ndarray:
    """One directed propagation step.

    A bidirectional neighbor contributes its full score, an incoming-only
    neighbor contributes only its negative part, and an outgoing-only
    neighbor only its positive part, each scaled by the pair's weight.
    """
    if not g.directed:
        raise InputError("lbp_step_directed expects a directed graph")
    _check_vectors(g, w, q, p)
    out = q.copy()
    parts = (
        (BIDIRECTIONAL, p),
        (UNI_INCOMING, half_neg(p)),
        (UNI_OUTGOING, half_pos(p)),
    )
    for cls, vec in parts:
        indptr, indices, slots = g._class_csr[cls]
        if slots.size == 0:
            continue
        out += _matvec(indptr, indices, w.values[slots], vec, threads)
    return out


def weighted_degrees(g: Graph, w: EdgeWeights) -> np.ndarray:
    """Per-node sum of |weight| over incident edges (undirected graphs)."""
    aw = np.abs(w.values)
    return np.bincount(g.slot_ends.ravel(), weights=np.repeat(aw, 2),
                       minlength=g.node_count)


def rw_step(g: Graph, w: EdgeWeights, q: np.ndarray, p: np.ndarray,
            variant: str, restart: float, norm: str = "receiver",
            threads: int = 1) -> np.ndarray:
    """One random-walk propagation step on an undirected graph.

    Each node collects degree-normalized score from its neighbors and mixes
    it with its prior via the restart probability.  The both-label variant
    ("rw-b") normalizes by the receiver's weighted degree by default; the
    single-label variants ("rw-n", "rw-p") normalize by the sender's.  Pass
    norm="sender" to force sender normalization for rw-b as well.  Learned
    weights may be negative, so degrees sum |w|; a node with zero weighted
    degree keeps restart * q.
    """
    if g.directed:
        raise InputError("random-walk propagation supports undirected graphs only")
    if variant not in RW_VARIANTS:
        raise InputError(f"unknown random-walk variant {variant!r}")
    if not 0.0 <= restart <= 1.0:
        raise InputError("restart probability must lie in [0, 1]")
    _check_vectors(g, w, q, p)
    d = weighted_degrees(g, w)
    inv = np.zeros_like(d)
    nz = d > 0
    inv[nz] = 1.0 / d[nz]
    data = w.values[g._entry_slot]
    sender = variant in ("rw-n", "rw-p") or norm == "sender"
    if sender:
        moved = _matvec(g._indptr, g._indices, data, p * inv, threads)
    else:
        moved = _matvec(g._indptr, g._indices, data, p, threads) * inv
    return (1.0 - restart) * moved + restart * q


def classify(p: np.ndarray) -> np.ndarray:
    """Predicted labels from posteriors: +1 where p > 0, else -1."""
    return np.where(p > 0, 1, -1).astype(np.int64)


# -- label files --------------------------------------------------------------


def read_labels(path) -> LabelSet:
    """Parse a "node_id<TAB>label" file with labels +1 / -1."""
    pos, neg = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) != 2:
                raise InputError(f"{path}:{lineno}: expected 'node<TAB>label'")
            try:
                node = int(parts[0])
                label = int(parts[1])
            except ValueError:
                raise InputError(f"{path}:{lineno}: ids and labels must be integers") from None
            if label == 1:
                pos.append(node)
            elif label == -1:
                neg.append(node)
            else:
                raise InputError(f"{path}:{lineno}: label must be +1 or -1, got {label}")
    return LabelSet.of(pos, neg)


def write_labels(labels: LabelSet, path):
    with open(path, "w", encoding="utf-8") as fh:
        for node in sorted(labels.positives):
            fh.write(f"{node}\t1\n")
        for node in sorted(labels.negatives):
            fh.write(f"{node}\t-1\n")
