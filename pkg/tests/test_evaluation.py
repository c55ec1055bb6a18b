import math

import numpy as np
import pytest

from tseqclust import ConfusionMatrix, cohen_kappa, confusion_and_kappa, histogram_export, merge_labels
from tseqclust.evaluation import AGREEMENT

from .conftest import SRCP


def labels_from_matrix(m):
    """Truth and prediction dicts realizing contingency table ``m``."""
    truth, pred, k = {}, {}, 0
    for i, row in enumerate(m):
        for j, n in enumerate(row):
            for _ in range(n):
                truth[f"s{k}"], pred[f"s{k}"] = f"t{i}", f"c{j}"
                k += 1
    return truth, pred


def test_kappa_raw():
    assert cohen_kappa([[15, 0], [0, 30]]) == 1.0
    assert cohen_kappa([[0, 15], [15, 15]]) == pytest.approx(-0.5)
    # textbook example: p_o = 0.7, p_c = 0.5
    assert cohen_kappa([[20, 5], [10, 15]]) == pytest.approx(0.4)


def test_kappa_degenerate():
    assert cohen_kappa([[10]]) == 1.0
    with pytest.raises(ValueError):
        cohen_kappa([[0, 0], [0, 0]])
    with pytest.raises(ValueError):
        cohen_kappa([[1, 2, 3]])


def test_perfect_under_relabeling():
    truth = {f"s{i}": i // 15 for i in range(45)}
    pred = {k: {0: "z", 1: "x", 2: "y"}[v] for k, v in truth.items()}
    cm, kappa = confusion_and_kappa(truth, pred)
    assert kappa == 1.0
    np.testing.assert_array_equal(cm.counts, np.diag([15, 15, 15]))
    assert cm.total == 45


def test_disagreement_table():
    # a class of 15 and a class of 30 (after merging) split 30/15 the wrong way
    truth, pred = labels_from_matrix([[0, 15], [15, 15]])
    cm, kappa = confusion_and_kappa(truth, pred)
    assert kappa == pytest.approx(-0.5)
    cm, kappa = confusion_and_kappa(truth, pred, matching=AGREEMENT)
    assert kappa == pytest.approx(0.4)


def test_total_agreement_table():
    truth, pred = labels_from_matrix([[15, 0], [0, 30]])
    assert confusion_and_kappa(truth, pred)[1] == 1.0


def test_more_clusters_than_classes():
    truth = {"a": 1, "b": 1, "c": 2}
    pred = {"a": 0, "b": 1, "c": 2}
    cm, kappa = confusion_and_kappa(truth, pred)
    assert cm.counts.shape == (3, 3) and cm.total == 3
    assert cm.classes[-1] is None
    assert -1 <= kappa <= 1


def test_id_mismatch():
    with pytest.raises(ValueError):
        confusion_and_kappa({"a": 1}, {"b": 1})


def test_merge():
    assert merge_labels({"a": 1, "b": 3, "c": 2}, {3: 1}) == {"a": 1, "b": 1, "c": 2}


class TestHistogram:
    def test_single(self, example_seqs):
        rows = histogram_export({0: example_seqs[:1][0:1]}, SRCP, 1.0)
        assert sum(r[3] for r in rows) == 3

    def test_same_bin(self):
        from tseqclust import TimedSequence

        s = TimedSequence.from_pairs("a", [("S", 0), ("S", 2.5)], SRCP)
        assert histogram_export({"c": [s]}, SRCP, 3) == [("c", "S", 0.0, 2)]

    def test_one_event(self):
        from tseqclust import TimedSequence

        s = TimedSequence.from_pairs("a", [("C", 4)], SRCP)
        assert histogram_export({0: [s]}, SRCP, 2) == [(0, "C", 4.0, 1)]

    def test_example_corpus(self, example_seqs):
        rows = histogram_export({s.id: [s] for s in example_seqs}, SRCP, 1)
        assert len(rows) == 12 and sum(r[3] for r in rows) == 12

    def test_anchor_and_partition(self, example_seqs):
        rows = histogram_export({0: example_seqs}, SRCP, 2)
        assert min(r[2] for r in rows) == 0.0
        assert sum(r[3] for r in rows) == sum(len(s) for s in example_seqs)

    @pytest.mark.parametrize("w", [0, -1, math.nan])
    def test_bad_width(self, example_seqs, w):
        with pytest.raises(ValueError):
            histogram_export({0: example_seqs}, SRCP, w)

    def test_empty(self):
        assert histogram_export({}, SRCP, 1) == []
