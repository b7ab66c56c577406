"""Tests for confusion matrices, class scores, QWK, KLD, AUC and reports."""

import csv
import json

import numpy as np
import pytest

from metrics import (
    ConfusionMatrix,
    DegenerateMarginalsError,
    EmptyMatrixError,
    LabelOutOfRangeError,
    SingleClassOnlyError,
    accuracy,
    binary_auc,
    confusion_matrix,
    evaluate_predictions,
    f1_score,
    format_report,
    kld,
    precision_recall_f1,
    qwk,
    roc_auc,
    roc_curve,
    roc_curves,
    write_confusion_csv,
    write_report_csv,
    write_report_json,
    write_roc_csv,
)
from nn import ShapeMismatchError

# (precision %, recall %, F1 %) per class of a published 14-class result
PUBLISHED_TABLE = [
    (99.44, 97.28, 98.35), (100.0, 98.37, 99.18), (96.81, 98.91, 97.85),
    (98.92, 100.0, 99.46), (96.57, 91.85, 94.15), (95.77, 98.37, 97.05),
    (95.21, 97.28, 96.24), (92.59, 95.11, 93.83), (98.34, 96.74, 97.53),
    (98.92, 100.0, 99.46), (100.0, 100.0, 100.0), (100.0, 98.91, 99.45),
    (92.35, 91.85, 92.10), (99.46, 99.46, 99.46),
]


def cm_of(counts):
    counts = np.asarray(counts, dtype=np.int64)
    return ConfusionMatrix(counts=counts, class_names=tuple(str(c) for c in range(len(counts))))


def qwk_oracle(counts):
    """Kappa from explicit loops over cells."""
    j = len(counts)
    n = sum(sum(row) for row in counts)
    rows = [sum(counts[a]) for a in range(j)]
    cols = [sum(counts[a][b] for a in range(j)) for b in range(j)]
    num = den = 0.0
    for a in range(j):
        for b in range(j):
            w = (a - b) ** 2
            num += w * counts[a][b]
            den += w * rows[a] * cols[b] / n
    return 1.0 - num / den


def random_probs(rng, n, j):
    logits = rng.normal(size=(n, j))
    e = np.exp(logits - logits.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)


class TestConfusionAndAccuracy:
    """Tests for confusion_matrix and accuracy."""

    def test_perfect_predictions_are_diagonal(self):
        """Test that correct predictions fill only the diagonal."""
        labels = [0, 1, 2, 2, 1]
        cm = confusion_matrix(labels, labels, 3)

        np.testing.assert_array_equal(cm.counts, np.diag([1, 2, 2]))
        assert cm.trace == cm.total == 5
        assert accuracy(cm) == 1.0

    def test_rows_are_truth(self):
        """Test that rows index the true class and columns the prediction."""
        cm = confusion_matrix([0, 0, 1], [1, 1, 1], 2)

        assert cm.counts.tolist() == [[0, 2], [0, 1]]
        assert cm.row_sums.tolist() == [2, 1]
        assert cm.col_sums.tolist() == [0, 3]

    def test_empty_input(self):
        """Test that no samples gives a zero matrix and undefined accuracy."""
        cm = confusion_matrix([], [], 4)

        assert cm.counts.shape == (4, 4)
        assert cm.total == 0
        with pytest.raises(EmptyMatrixError):
            accuracy(cm)

    def test_published_accuracy(self):
        """Test 66 errors out of 2576 is 97.44%."""
        counts = np.diag([184] * 14)
        counts[0, 0] -= 66
        counts[0, 1] += 66
        cm = cm_of(counts)

        assert cm.trace == 2510
        assert 100 * accuracy(cm) == pytest.approx(97.44, abs=0.005)

    def test_zero_diagonal(self):
        """Test that all-wrong predictions score 0."""
        assert accuracy(confusion_matrix([0, 1], [1, 0], 2)) == 0.0

    def test_label_out_of_range(self):
        """Test that labels beyond J raise LabelOutOfRangeError."""
        with pytest.raises(LabelOutOfRangeError):
            confusion_matrix([0, 3], [0, 0], 3)

    def test_length_mismatch(self):
        """Test that sequences of different length raise ValueError."""
        with pytest.raises(ValueError, match="differ in length"):
            confusion_matrix([0, 1], [0], 2)


class TestPrecisionRecallF1:
    """Tests for f1_score and precision_recall_f1."""

    def test_published_class_f1(self):
        """Test two published per-class F1 values from their P and R."""
        assert f1_score(96.57, 91.85) == pytest.approx(94.15, abs=0.005)
        assert f1_score(95.77, 98.37) == pytest.approx(97.05, abs=0.005)
        assert f1_score(100.0, 100.0) == 100.0

    def test_published_table_consistent(self):
        """Test every published row's F1 against its P and R, and the macro F1."""
        for p, r, f in PUBLISHED_TABLE:
            assert f1_score(p, r) == pytest.approx(f, abs=0.01)

        assert np.mean([f for _, _, f in PUBLISHED_TABLE]) == pytest.approx(97.44, abs=0.005)

    def test_f1_zero_when_both_zero(self):
        """Test the 0/0 convention."""
        assert f1_score(0.0, 0.0) == 0.0

    def test_single_class_perfect(self):
        """Test that a perfect one-class matrix scores 1 everywhere."""
        scores = precision_recall_f1(cm_of([[7]]))

        assert scores.macro.precision == scores.macro.recall == scores.macro.f1 == 1.0

    def test_per_class_values(self):
        """Test precision and recall on a small matrix."""
        scores = precision_recall_f1(cm_of([[50, 10], [5, 35]]))

        assert scores.per_class[0].precision == pytest.approx(50 / 55)
        assert scores.per_class[0].recall == pytest.approx(50 / 60)
        assert scores.per_class[1].precision == pytest.approx(35 / 45)
        assert scores.macro.recall == pytest.approx((50 / 60 + 35 / 40) / 2)

    def test_f1_between_precision_and_recall(self, rng):
        """Test min(P, R) <= F1 <= max(P, R) per class."""
        cm = cm_of(rng.integers(1, 30, size=(5, 5)))
        for s in precision_recall_f1(cm).per_class:
            assert min(s.precision, s.recall) - 1e-12 <= s.f1 <= max(s.precision, s.recall) + 1e-12

    def test_empty_column_flagged(self, caplog):
        """Test that a never-predicted class scores 0 and is flagged."""
        scores = precision_recall_f1(cm_of([[3, 0], [2, 0]]))

        assert scores.per_class[1].precision == 0.0
        assert scores.per_class[1].flagged
        assert scores.macro.flagged
        assert "prediction column" in caplog.text

    def test_weighted_recall_identity(self, rng):
        """Test accuracy equals support-weighted recall."""
        cm = cm_of(rng.integers(0, 40, size=(6, 6)) + np.eye(6, dtype=np.int64))
        recalls = [s.recall for s in precision_recall_f1(cm).per_class]

        assert accuracy(cm) == pytest.approx(float(np.dot(recalls, cm.row_sums / cm.total)), abs=1e-12)


class TestQWK:
    """Tests for quadratic weighted kappa."""

    def test_perfect_diagonal(self):
        """Test that a diagonal matrix scores exactly 1."""
        assert qwk(cm_of(np.diag([5, 3, 9, 1]))) == 1.0

    def test_two_class_oracle(self):
        """Test [[50, 10], [5, 35]] against the loop oracle and the closed form."""
        counts = [[50, 10], [5, 35]]

        assert qwk(cm_of(counts)) == pytest.approx(qwk_oracle(counts), abs=1e-12)
        assert qwk(cm_of(counts)) == pytest.approx(34 / 49, abs=1e-12)

    def test_random_matrices_match_oracle(self, rng):
        """Test agreement with the loop oracle on random 14-class matrices."""
        for _ in range(5):
            counts = rng.integers(0, 20, size=(14, 14)).tolist()
            assert qwk(cm_of(counts)) == pytest.approx(qwk_oracle(counts), abs=1e-12)

    def test_chance_agreement_is_zero(self):
        """Test that a matrix proportional to its expected counts scores 0."""
        rows, cols = np.array([20, 30, 50]), np.array([10, 40, 50])
        counts = np.outer(rows, cols) // 100

        assert qwk(cm_of(counts)) == pytest.approx(0.0, abs=1e-9)

    def test_reversal_invariance(self, rng):
        """Test that reversing class order on both axes keeps QWK."""
        counts = rng.integers(0, 15, size=(6, 6))

        assert qwk(cm_of(counts[::-1, ::-1])) == pytest.approx(qwk(cm_of(counts)), abs=1e-12)

    def test_degenerate_marginals(self):
        """Test that a single populated cell raises."""
        with pytest.raises(DegenerateMarginalsError):
            qwk(cm_of([[5, 0], [0, 0]]))

    def test_empty(self):
        """Test that an empty matrix raises EmptyMatrixError."""
        with pytest.raises(EmptyMatrixError):
            qwk(cm_of(np.zeros((3, 3))))


class TestKLD:
    """Tests for kld."""

    def test_identical_is_zero(self):
        """Test that pred = target gives 0."""
        target = np.eye(4)[[0, 3, 1]]

        assert kld(target, target) == 0.0

    def test_uniform_against_one_hot(self):
        """Test that a uniform prediction over 14 classes gives ln 14."""
        target = np.eye(14)[[2, 7, 13]]

        assert kld(np.full((3, 14), 1 / 14), target) == pytest.approx(np.log(14), abs=1e-9)

    def test_soft_targets_match_hand_sum(self, rng):
        """Test a random soft-target case against an explicit double loop."""
        pred, target = random_probs(rng, 6, 5), random_probs(rng, 6, 5)
        target[0] = [0.5, 0.5, 0.0, 0.0, 0.0]
        expected = 0.0
        for i in range(6):
            for j in range(5):
                if target[i, j] > 0:
                    expected += target[i, j] * np.log(target[i, j] / pred[i, j])
        expected /= 6

        assert kld(pred, target) == pytest.approx(expected, abs=1e-12)
        assert kld(pred, target) >= 0.0

    def test_shape_mismatch(self):
        """Test that different shapes raise ShapeMismatchError."""
        with pytest.raises(ShapeMismatchError):
            kld(np.full((2, 3), 1 / 3), np.eye(2))

    def test_unnormalized_rows(self):
        """Test that predictions must sum to 1."""
        with pytest.raises(ValueError, match="sum to 1"):
            kld(np.full((1, 3), 0.5), np.eye(3)[[0]])


class TestAUC:
    """Tests for binary_auc, roc_auc and roc_curve."""

    def test_hand_case(self):
        """Test pos {0.9, 0.4} vs neg {0.6, 0.1}: three of four pairs won."""
        assert binary_auc(np.array([0.9, 0.4, 0.6, 0.1]), np.array([1, 1, 0, 0])) == 0.75

    def test_ties_count_half(self):
        """Test that equal scores credit one half."""
        assert binary_auc(np.array([0.5, 0.5]), np.array([1, 0])) == 0.5

    def test_perfect_separation(self):
        """Test that separable scores give AUC 1 for every class."""
        labels = np.array([0, 0, 1, 1, 2, 2])
        result = roc_auc(np.eye(3)[labels] * 0.8 + 0.2 / 3 * (1 - np.eye(3)[labels]), labels)

        assert result.per_class == [1.0, 1.0, 1.0]
        assert result.macro == 1.0

    def test_random_scores_near_half(self):
        """Test that label-independent scores give AUC near 0.5."""
        gen = np.random.default_rng(2024)
        n_pos = n_neg = 2000
        scores = gen.random(n_pos + n_neg)
        positives = np.r_[np.ones(n_pos, bool), np.zeros(n_neg, bool)]
        sigma = np.sqrt((n_pos + n_neg + 1) / (12 * n_pos * n_neg))

        assert abs(binary_auc(scores, positives) - 0.5) < 3 * sigma

    def test_monotone_transform_invariance(self, rng):
        """Test that a strictly increasing transform leaves AUC unchanged."""
        scores = rng.random(50)
        positives = rng.random(50) < 0.4

        assert binary_auc(np.exp(3 * scores) - 7, positives) == binary_auc(scores, positives)

    def test_missing_class_skipped(self, caplog):
        """Test that a class with no positives is excluded from the macro."""
        labels = np.array([0, 1, 0, 1])
        scores = np.array([[0.7, 0.2, 0.1], [0.3, 0.6, 0.1], [0.6, 0.3, 0.1], [0.1, 0.8, 0.1]])
        result = roc_auc(scores, labels)

        assert result.per_class[2] is None
        assert result.skipped == [2]
        assert result.macro == pytest.approx(1.0)
        assert "Skipping AUC for class 2" in caplog.text

    def test_single_class_only(self):
        """Test that binary_auc needs both classes."""
        with pytest.raises(SingleClassOnlyError):
            binary_auc(np.array([0.1, 0.2]), np.array([1, 1]))

    def test_matches_pairwise_count(self, rng):
        """Test that AUC and the area under roc_curve equal the pair-counting definition."""
        labels = rng.integers(0, 3, size=60)
        scores = np.round(random_probs(rng, 60, 3), 2)  # rounding forces ties
        for c in range(3):
            curve = roc_curve(scores, labels, c)
            area = float(np.sum(np.diff(curve.fpr) * (curve.tpr[1:] + curve.tpr[:-1]) / 2))

            pos, neg = scores[labels == c, c], scores[labels != c, c]
            diff = pos[:, None] - neg[None, :]
            pairwise = (np.sum(diff > 0) + 0.5 * np.sum(diff == 0)) / diff.size

            assert binary_auc(scores[:, c], labels == c) == pytest.approx(pairwise, abs=1e-12)
            assert area == pytest.approx(pairwise, abs=1e-12)
            assert curve.fpr[0] == curve.tpr[0] == 0.0
            assert curve.fpr[-1] == curve.tpr[-1] == 1.0
            assert np.isinf(curve.thresholds[0])

    def test_roc_curves_skip_missing(self):
        """Test that roc_curves omits classes without positives."""
        scores = np.array([[0.9, 0.1], [0.2, 0.8]])

        assert [c.class_id for c in roc_curves(scores, np.array([0, 0]))] == []
        assert [c.class_id for c in roc_curves(scores, np.array([0, 1]))] == [0, 1]


class TestMetricsReport:
    """Tests for evaluate_predictions, formatting and writers."""

    def setup_method(self):
        """Set up test fixtures."""
        gen = np.random.default_rng(11)
        self.labels = np.repeat(np.arange(3), 10)
        probs = random_probs(gen, 30, 3)
        probs[np.arange(30), self.labels] += 1.0
        self.probs = probs / probs.sum(axis=1, keepdims=True)
        self.names = ["alpha", "beta", "gamma"]
        self.report = evaluate_predictions(self.probs, self.labels, self.names, epoch=4)

    def test_internal_identities(self):
        """Test that F1 is the harmonic mean of P and R per class."""
        for c in self.report.per_class:
            assert c.f1 == pytest.approx(f1_score(c.precision, c.recall), abs=1e-12)
            assert c.support == 10
        assert self.report.accuracy == pytest.approx(self.report.confusion.trace / 30)
        assert self.report.epoch == 4

    def test_f1_of_means(self):
        """Test the F1 of macro precision and recall."""
        m = self.report.macro
        assert self.report.f1_of_means == pytest.approx(f1_score(m["precision"], m["recall"]))

    def test_degenerate_qwk_is_none(self, caplog):
        """Test that a single-class evaluation reports QWK as n/a."""
        report = evaluate_predictions(np.array([[0.9, 0.1], [0.8, 0.2]]), [0, 0], ["a", "b"])

        assert report.qwk is None
        assert report.macro["auc"] is None
        assert "QWK undefined" in caplog.text
        assert "QWK: n/a" in format_report(report)

    def test_format_report(self):
        """Test the human-readable layout."""
        text = format_report(self.report, title="TEST REPORT")

        assert "TEST REPORT" in text
        assert "=" * 70 in text
        assert "Average" in text
        assert f"{100 * self.report.accuracy:.2f}%" in text
        for name in self.names:
            assert name in text

    def test_json_report(self, tmp_path):
        """Test the versioned JSON schema."""
        path = tmp_path / "out" / "report.json"
        self.report.extra = {"split": "test"}
        write_report_json(self.report, path)
        data = json.loads(path.read_text(encoding="utf-8"))

        assert data["version"] == 1
        assert data["split"] == "test"
        assert data["accuracy"] == self.report.accuracy
        assert [c["class"] for c in data["per_class"]] == self.names
        assert data["confusion"]["counts"] == self.report.confusion.counts.tolist()
        assert data["epoch"] == 4

    def test_csv_report(self, tmp_path):
        """Test one row per class plus the Average row at full precision."""
        path = tmp_path / "report.csv"
        write_report_csv(self.report, path)
        with open(path, encoding="utf-8", newline="") as f:
            rows = list(csv.reader(f))

        assert rows[0] == ["class", "precision", "recall", "f1", "auc", "support"]
        assert [r[0] for r in rows[1:]] == self.names + ["Average"]
        assert float(rows[1][3]) == self.report.per_class[0].f1
        assert rows[-1][5] == "30"

    def test_confusion_and_roc_csv(self, tmp_path):
        """Test the confusion and ROC CSV layouts."""
        write_confusion_csv(self.report.confusion, tmp_path / "cm.csv")
        write_roc_csv(roc_curves(self.probs, self.labels), self.names, tmp_path / "roc.csv")

        cm_lines = (tmp_path / "cm.csv").read_text(encoding="utf-8").splitlines()
        assert cm_lines[0] == "true\\predicted,alpha,beta,gamma"
        assert len(cm_lines) == 4
        roc_lines = (tmp_path / "roc.csv").read_text(encoding="utf-8").splitlines()
        assert roc_lines[0] == "class,fpr,tpr,threshold"
        assert roc_lines[1].startswith("alpha,0.0,0.0,inf")
