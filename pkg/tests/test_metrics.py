import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jwprop import InputError, LabelSet, auc, rank_and_write, read_scores

from _oracles import brute_force_auc, brute_force_auc_counts


class TestAuc:
    def test_perfect_ranking(self):
        scores = np.array([0.9, 0.8, 0.1, 0.2])
        report = auc(scores, LabelSet.of([0, 1], [2, 3]))
        assert report.auc == 1.0
        assert report.tie_pairs == 0

    def test_all_tied_is_half(self):
        scores = np.full(6, 0.3)
        report = auc(scores, LabelSet.of([0, 1, 2], [3, 4, 5]))
        assert report.auc == 0.5
        assert report.tie_pairs == 9

    def test_mixed_example(self):
        scores = np.array([0.9, 0.2, 0.4, 0.6])
        report = auc(scores, LabelSet.of([0, 1], [2, 3]))
        assert report.auc == 0.5

    def test_one_class_rejected(self):
        with pytest.raises(InputError):
            auc(np.array([1.0, 2.0]), LabelSet.of([0, 1], []))

    def test_matches_brute_force_with_ties(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            k = int(rng.integers(2, 200))
            n_pos = int(rng.integers(1, k))
            scores = np.round(rng.uniform(0, 1, k), 1)  # force ties
            ids = rng.permutation(k)
            truth = LabelSet.of(ids[:n_pos], ids[n_pos:])
            report = auc(scores, truth)
            pos = scores[truth.positive_array()]
            neg = scores[truth.negative_array()]
            greater, ties = brute_force_auc_counts(pos, neg)
            assert report.tie_pairs == ties
            assert report.auc == brute_force_auc(pos, neg)

    @given(st.lists(st.integers(-1000, 1000), min_size=4, max_size=40,
                    unique=True))
    def test_invariant_under_monotone_transform(self, vals):
        # integer grid keeps the transform strictly increasing in float64
        scores = np.asarray(vals, dtype=float) / 100.0
        k = len(vals)
        truth = LabelSet.of(range(k // 2), range(k // 2, k))
        a = auc(scores, truth).auc
        b = auc(np.exp(scores * 0.5) + 3.0, truth).auc
        assert a == pytest.approx(b)

    def test_negate_scores_and_swap_labels(self):
        rng = np.random.default_rng(1)
        scores = rng.normal(size=30)
        truth = LabelSet.of(range(10), range(10, 30))
        swapped = LabelSet.of(range(10, 30), range(10))
        assert auc(scores, truth).auc == pytest.approx(auc(-scores, swapped).auc)


class TestRankAndWrite:
    def test_descending_order(self, tmp_path):
        f = tmp_path / "scores.tsv"
        rank_and_write(np.array([0.5, -0.5]), None, f)
        ids, vals, preds = read_scores(f)
        assert list(ids) == [0, 1]
        assert list(vals) == [0.5, -0.5]
        assert list(preds) == [1, -1]

    def test_ties_broken_by_ascending_id(self, tmp_path):
        f = tmp_path / "scores.tsv"
        rank_and_write(np.array([0.3, 0.7, 0.3]), None, f)
        ids, _, _ = read_scores(f)
        assert list(ids) == [1, 0, 2]

    def test_zero_scores_classified_negative(self, tmp_path):
        f = tmp_path / "scores.tsv"
        rank_and_write(np.array([0.0, 0.1]), None, f)
        ids, _, preds = read_scores(f)
        assert dict(zip(ids, preds)) == {1: 1, 0: -1}

    def test_remap_translates_ids(self, tmp_path):
        f = tmp_path / "scores.tsv"
        rank_and_write(np.array([0.9, 0.1]), np.array([41, 7]), f)
        ids, _, _ = read_scores(f)
        assert list(ids) == [41, 7]

    def test_rewrite_is_idempotent(self, tmp_path):
        rng = np.random.default_rng(2)
        p = np.round(rng.normal(size=50), 2)  # duplicated values likely
        f1 = tmp_path / "a.tsv"
        rank_and_write(p, None, f1)
        ids, vals, _ = read_scores(f1)
        # re-rank the parsed scores under their original ids
        dense = np.empty(50)
        dense[ids] = vals
        f2 = tmp_path / "b.tsv"
        rank_and_write(dense, None, f2)
        assert f1.read_text() == f2.read_text()
