"""Ranking evaluation (AUC) and score-file output."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .propagation import LabelSet, classify


@dataclass(frozen=True)
class AucReport:
    auc: float
    positive_count: int
    negative_count: int
    tie_pairs: int


def auc(scores: np.ndarray, truth: LabelSet) -> AucReport:
    """Probability that a random positive outranks a random negative, with
    half credit for ties.

    ``truth`` must cover test nodes only (exclude training nodes first);
    ``scores`` is indexed by node id.  Pair counts are exact integers from
    a sort-and-group pass, so the result matches brute-force pairwise
    counting bit for bit.
    """
    pos = truth.positive_array()
    neg = truth.negative_array()
    if pos.size == 0 or neg.size == 0:
        raise InputError("AUC needs at least one positive and one negative test node")
    s = np.concatenate([scores[pos], scores[neg]])
    is_pos = np.zeros(s.size, dtype=bool)
    is_pos[:pos.size] = True
    order = np.argsort(s, kind="stable")
    s = s[order]
    is_pos = is_pos[order]

    boundaries = np.flatnonzero(s[1:] != s[:-1]) + 1
    starts = np.concatenate([[0], boundaries])
    ends = np.concatenate([boundaries, [s.size]])
    pos_cum = np.concatenate([[0], np.cumsum(is_pos)])
    pos_in = pos_cum[ends] - pos_cum[starts]
    neg_in = (ends - starts) - pos_in
    neg_below = np.concatenate([[0], np.cumsum(neg_in)])[:-1]
    greater = int(np.sum(pos_in * neg_below))
    ties = int(np.sum(pos_in * neg_in))
    value = (greater + 0.5 * ties) / (pos.size * neg.size)
    return AucReport(auc=value, positive_count=int(pos.size),
                     negative_count=int(neg.size), tie_pairs=ties)


def rank_and_write(p: np.ndarray, remap: np.ndarray | None, path):
    """Write "node<TAB>posterior<TAB>predicted_label" rows sorted by
    descending posterior, ties broken by ascending node id.

    ``remap`` translates dense ids back to original ids when given.
    Posteriors are printed with full round-trip precision so re-reading and
    re-sorting reproduces the file.
    """
    ids = np.arange(p.shape[0], dtype=np.int64) if remap is None \
        else np.asarray(remap, dtype=np.int64)
    if ids.shape != p.shape:
        raise InputError("remap length does not match the score vector")
    pred = classify(p)
    order = np.lexsort((ids, -p))
    with open(path, "w", encoding="utf-8") as fh:
        for i in order:
            fh.write(f"{ids[i]}\t{float(p[i])!r}\t{pred[i]}\n")


def read_scores(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read a score file back as (ids, posteriors, predicted labels)."""
    ids, vals, preds = [], [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split("\t")
            if len(parts) != 3:
                raise InputError(f"{path}:{lineno}: expected 'node<TAB>score<TAB>label'")
            try:
                ids.append(int(parts[0]))
                vals.append(float(parts[1]))
                preds.append(int(parts[2]))
            except ValueError:
                raise InputError(f"{path}:{lineno}: malformed score row") from None
    return (np.asarray(ids, dtype=np.int64), np.asarray(vals),
            np.asarray(preds, dtype=np.int64))


def scores_vector(ids: np.ndarray, vals: np.ndarray, truth: LabelSet) -> np.ndarray:
    """Dense score vector covering the truth's node ids, for auc()."""
    needed = truth.positives | truth.negatives
    have = set(int(i) for i in ids)
    missing = needed - have
    if missing:
        raise InputError(f"score file is missing {len(missing)} labeled nodes "
                         f"(e.g. node {min(missing)})")
    size = max(max(needed), int(ids.max())) + 1
    out = np.zeros(size)
    out[ids] = vals
    return out
