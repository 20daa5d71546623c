"""
Test the evaluation harness.
Purpose: Verify DTW against exhaustive path enumeration, MCD constants, detection metrics against a hand confusion matrix, and the 8:1:1 split.
"""
import math

import numpy as np
import pytest

from src.errors import DimensionError, EmptyInputError, ValidationError
from src.eval import (
    LabeledPredictions,
    corpus_prosody,
    dataset_split,
    detection_metrics,
    dtw_align,
    frame_distances,
    mcd,
    mcd_batch,
)
from src.prosody import FrameFeatures, ProsodyReport
from src.store import Label

S, N = Label.SARCASTIC, Label.NON_SARCASTIC


def _enumerate_costs(local):
    """Left-to-right summed cost of every monotonic path from (0, 0) to the far corner"""
    n, m = local.shape
    costs = []

    def walk(i, j, total):
        total = total + local[i, j]
        if (i, j) == (n - 1, m - 1):
            costs.append(total)
            return
        for di, dj in ((1, 1), (1, 0), (0, 1)):
            if i + di < n and j + dj < m:
                walk(i + di, j + dj, total)

    walk(0, 0, 0.0)
    return costs


def _path_is_valid(path, n, m):
    pairs = list(path)
    assert pairs[0] == (0, 0)
    assert pairs[-1] == (n - 1, m - 1)
    for (i0, j0), (i1, j1) in zip(pairs, pairs[1:]):
        assert (i1 - i0, j1 - j0) in {(1, 1), (1, 0), (0, 1)}
    return True


def test_dtw_identity_is_diagonal(rng):
    x = FrameFeatures(rng.normal(size=(5, 3)))
    path, cost = dtw_align(x, x)
    assert list(path) == [(i, i) for i in range(5)]
    assert cost == 0.0


def test_dtw_hand_example():
    path, cost = dtw_align(FrameFeatures([[0.0], [2.0]]), FrameFeatures([[0.0], [1.0], [2.0]]))
    assert cost == 1.0
    assert _path_is_valid(path, 2, 3)


def test_dtw_matches_exhaustive_enumeration():
    rng = np.random.default_rng(99)
    for _ in range(100):
        n, m = (int(v) for v in rng.integers(1, 7, size=2))
        d = int(rng.integers(1, 4))
        x = FrameFeatures(rng.normal(size=(n, d)))
        y = FrameFeatures(rng.normal(size=(m, d)))
        path, cost = dtw_align(x, y)
        assert _path_is_valid(path, n, m)
        assert cost == min(_enumerate_costs(frame_distances(x.values, y.values)))
        local = frame_distances(x.values, y.values)
        along = 0.0
        for i, j in path:
            along = along + local[i, j]
        assert along == cost


def test_dtw_equal_cost_prefers_diagonal_then_vertical():
    zeros2, zeros3 = FrameFeatures(np.zeros((2, 1))), FrameFeatures(np.zeros((3, 1)))
    path, cost = dtw_align(zeros2, zeros2)
    assert list(path) == [(0, 0), (1, 1)]
    assert cost == 0.0
    path, _ = dtw_align(zeros3, zeros2)
    assert list(path) == [(0, 0), (1, 0), (2, 1)]
    path, _ = dtw_align(zeros2, zeros3)
    assert list(path) == [(0, 0), (0, 1), (1, 2)]


def test_dtw_matches_enumeration_on_integer_grid():
    """Integer-valued frames produce many equal-cost paths"""
    rng = np.random.default_rng(5)
    for _ in range(60):
        n, m = (int(v) for v in rng.integers(1, 6, size=2))
        x = FrameFeatures(rng.integers(0, 3, size=(n, 1)).astype(float))
        y = FrameFeatures(rng.integers(0, 3, size=(m, 1)).astype(float))
        path, cost = dtw_align(x, y)
        assert _path_is_valid(path, n, m)
        assert cost == min(_enumerate_costs(frame_distances(x.values, y.values)))


@pytest.mark.timeout(30)
def test_dtw_long_sequences(rng):
    x = FrameFeatures(rng.normal(size=(400, 13)))
    y = FrameFeatures(rng.normal(size=(420, 13)))
    path, cost = dtw_align(x, y)
    assert _path_is_valid(path, 400, 420)
    local = frame_distances(x.values, y.values)
    i, j = path.indices()
    np.testing.assert_allclose(local[i, j].sum(), cost, rtol=1e-12)


def test_dtw_dimension_mismatch():
    with pytest.raises(DimensionError):
        dtw_align(FrameFeatures(np.ones((2, 3))), FrameFeatures(np.ones((2, 4))))


def test_mcd_identity_and_symmetry(rng):
    a = FrameFeatures(rng.normal(size=(7, 13)))
    b = FrameFeatures(rng.normal(size=(9, 13)))
    assert mcd(a, a) == 0.0
    assert abs(mcd(a, b) - mcd(b, a)) <= 1e-9
    assert mcd(a, b) > 0.0


def test_mcd_single_frame_constant():
    x = FrameFeatures([[5.0, 1.0, 0.0]])
    y = FrameFeatures([[-3.0, 0.0, 0.0]])
    assert mcd(x, y) == pytest.approx(6.1416, abs=1e-4)
    assert mcd(x, y, exclude_c0=False) == pytest.approx(10.0 / math.log(10.0) * math.sqrt(2.0 * 65.0))


def test_mcd_shifted_identical_content_is_zero(rng):
    base = rng.normal(size=(6, 5))
    shifted = np.vstack([base[:1], base])
    assert mcd(FrameFeatures(base), FrameFeatures(shifted)) == 0.0


def test_mcd_errors():
    with pytest.raises(DimensionError):
        mcd(FrameFeatures(np.ones((2, 3))), FrameFeatures(np.ones((2, 4))))
    with pytest.raises(DimensionError):
        mcd(FrameFeatures(np.ones((2, 1))), FrameFeatures(np.ones((2, 1))))
    with pytest.raises(EmptyInputError):
        mcd_batch([])


def test_mcd_batch_statistics(rng):
    a = FrameFeatures(rng.normal(size=(4, 6)))
    b = FrameFeatures(rng.normal(size=(5, 6)))
    mean, std, count = mcd_batch([(a, a), (a, b)])
    single = mcd(a, b)
    assert count == 2
    assert mean == pytest.approx(single / 2)
    assert std == pytest.approx(single / 2)


def _oracle_weighted(gold, pred):
    totals = {"precision": 0.0, "recall": 0.0, "f1": 0.0}
    for label in (S, N):
        tp = sum(1 for g, p in zip(gold, pred) if g == label and p == label)
        fp = sum(1 for g, p in zip(gold, pred) if g != label and p == label)
        fn = sum(1 for g, p in zip(gold, pred) if g == label and p != label)
        support = tp + fn
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        weight = support / len(gold)
        totals["precision"] += weight * precision
        totals["recall"] += weight * recall
        totals["f1"] += weight * f1
    return {k: 100.0 * v for k, v in totals.items()}


def test_detection_hand_examples():
    perfect = detection_metrics(LabeledPredictions(gold=[S, N, S], pred=[S, N, S]))
    assert (perfect.precision, perfect.recall, perfect.weighted_f1) == (100.0, 100.0, 100.0)

    report = detection_metrics(LabeledPredictions(gold=[S, S, N, N], pred=[S, N, N, N]))
    assert report.weighted_f1 == pytest.approx(73.33, abs=0.01)

    degenerate = detection_metrics(LabeledPredictions(gold=[S, N], pred=[S, S]))
    assert degenerate.weighted_f1 == pytest.approx(33.33, abs=0.01)


def test_detection_matches_confusion_matrix_oracle():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(1, 33))
        gold = [S if v else N for v in rng.integers(0, 2, size=n)]
        pred = [S if v else N for v in rng.integers(0, 2, size=n)]
        report = detection_metrics(LabeledPredictions(gold=gold, pred=pred))
        expected = _oracle_weighted(gold, pred)
        assert report.precision == pytest.approx(expected["precision"], abs=1e-9)
        assert report.recall == pytest.approx(expected["recall"], abs=1e-9)
        assert report.weighted_f1 == pytest.approx(expected["f1"], abs=1e-9)


def test_labeled_predictions_contract():
    with pytest.raises(EmptyInputError):
        LabeledPredictions(gold=[], pred=[])
    with pytest.raises(ValidationError):
        LabeledPredictions(gold=[S], pred=[S, N])
    with pytest.raises(ValidationError):
        LabeledPredictions(gold=["sarcastic"], pred=["ironic"])


@pytest.fixture
def corpus(make_record):
    records = []
    for i in range(1202):
        label = S if i % 2 == 0 else N
        records.append(make_record(f"utt{i:04d}", [1.0, float(i)], label=label))
    return records


def test_split_sizes_follow_eight_one_one(corpus):
    train, val, test = dataset_split(corpus, seed=42)
    assert (len(train), len(val), len(test)) == (962, 120, 120)
    for part, expected in ((train, 481), (val, 60), (test, 60)):
        assert sum(1 for r in part if r.label is S) == expected
        assert sum(1 for r in part if r.label is N) == expected


def test_split_is_a_deterministic_partition(corpus):
    first = dataset_split(corpus, seed=7)
    second = dataset_split(corpus, seed=7)
    assert [[r.id for r in part] for part in first] == [[r.id for r in part] for part in second]

    ids = [r.id for part in first for r in part]
    assert sorted(ids) == sorted(r.id for r in corpus)
    assert len(set(ids)) == len(ids)
    for part in first:
        positions = [int(r.id[3:]) for r in part]
        assert positions == sorted(positions)

    other = dataset_split(corpus, seed=8)
    assert [r.id for r in other[1]] != [r.id for r in first[1]]


def test_split_small_label_groups(make_record):
    records = [make_record(f"s{i}", [1.0, i], label=S) for i in range(9)]
    records += [make_record(f"n{i}", [2.0, i], label=N) for i in range(25)]
    train, val, test = dataset_split(records, seed=0)
    assert (len(train), len(val), len(test)) == (9 + 21, 2, 2)
    with pytest.raises(EmptyInputError):
        dataset_split([], seed=0)


def test_corpus_prosody_aggregates_utterance_means():
    reports = [
        ProsodyReport(pitch_mean=100.0, pitch_std=5.0, energy_mean=0.1, energy_std=0.0, voiced_count=3),
        ProsodyReport(pitch_mean=300.0, pitch_std=9.0, energy_mean=0.3, energy_std=0.0, voiced_count=4),
        ProsodyReport(energy_mean=0.2, energy_std=0.0, voiced_count=0),
    ]
    report = corpus_prosody(reports)
    assert (report.pitch.mean, report.pitch.std) == (200.0, 100.0)
    assert report.energy.mean == pytest.approx(0.2)
    assert report.mcd_db is None and report.detection is None

    single = corpus_prosody(reports[:1])
    assert (single.pitch.mean, single.pitch.std) == (100.0, 5.0)
