import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

import oracles
from conftest import perturb, permute_labels, random_blobs
from sharpgan_kit import Matching, aji, dq_sq_pq, iou_matrix, match_instances
from sharpgan_kit.errors import DimensionMismatch, ThresholdError
from sharpgan_kit.segeval import score


def shifted_squares():
    gt = np.zeros((4, 4), int)
    gt[0:2, 0:2] = 1
    pred = np.zeros((4, 4), int)
    pred[0:2, 1:3] = 1
    return gt, pred


def test_iou_examples():
    gt, pred = shifted_squares()
    assert iou_matrix(gt, pred) == {(1, 1): 2 / 6}
    assert iou_matrix(gt, gt) == {(1, 1): 1.0}
    other = np.zeros((4, 4), int)
    other[3, 3] = 1
    assert iou_matrix(gt, other) == {}
    with pytest.raises(DimensionMismatch):
        iou_matrix(gt, np.zeros((4, 5), int))


def test_iou_matches_bruteforce(rng):
    for _ in range(20):
        gt = random_blobs(rng)
        pred = perturb(rng, gt)
        table = iou_matrix(gt, pred)
        ref = oracles.iou_table(gt, pred)
        assert table.keys() == ref.keys()
        for k in ref:
            assert table[k] == pytest.approx(ref[k], abs=1e-15)


def test_matching_examples():
    gt = random_blobs(np.random.default_rng(1))
    k = gt.max()
    m = match_instances(gt, gt)
    assert len(m.pairs) == k and not m.unmatched_gt and not m.unmatched_pred
    assert all(iou == 1.0 for _, _, iou in m.pairs)
    gt2, pred2 = shifted_squares()
    m = match_instances(gt2, pred2)
    assert m.pairs == [] and m.unmatched_gt == [1] and m.unmatched_pred == [1]
    m = match_instances(gt, np.zeros_like(gt))
    assert m.pairs == [] and len(m.unmatched_gt) == k and m.unmatched_pred == []
    with pytest.raises(ThresholdError):
        match_instances(gt, gt, 0.4)


def test_dq_sq_pq_examples():
    gt = random_blobs(np.random.default_rng(2))
    assert dq_sq_pq(match_instances(gt, gt)) == (1.0, 1.0, 1.0)
    assert dq_sq_pq(match_instances(*shifted_squares())) == (0.0, 0.0, 0.0)
    m = Matching(pairs=[(1, 1, 0.8)], unmatched_gt=[], unmatched_pred=[2])
    dq, sq, pq = dq_sq_pq(m)
    assert dq == pytest.approx(2 / 3, abs=1e-12)
    assert sq == pytest.approx(0.8, abs=1e-12)
    assert pq == pytest.approx(8 / 15, abs=1e-12)


def test_dq_fixture_from_maps():
    gt = np.zeros((10, 10), int)
    gt[0:5, 0:4] = 1  # 20 px
    pred = np.zeros((10, 10), int)
    pred[0:4, 0:4] = 1  # 16 px inside gt: IoU 0.8
    pred[7:9, 7:9] = 2  # false positive
    dq, sq, pq = dq_sq_pq(match_instances(gt, pred))
    assert (dq, sq) == (pytest.approx(2 / 3, abs=1e-12), pytest.approx(0.8, abs=1e-12))
    assert pq == pytest.approx(8 / 15, abs=1e-12)


def test_aji_examples():
    gt = random_blobs(np.random.default_rng(3))
    assert aji(gt, gt) == 1.0
    assert aji(*shifted_squares()) == 2 / 6
    assert aji(gt, np.zeros_like(gt)) == 0.0
    assert aji(np.zeros((3, 3), int), np.zeros((3, 3), int)) == 1.0


def aji_reference(gt, pred):
    """Single-use greedy AJI over instances sorted by first raster pixel."""
    def order(m):
        flat = m.ravel()
        firsts = {}
        for idx, v in enumerate(flat.tolist()):
            if v and v not in firsts:
                firsts[v] = idx
        return sorted(firsts, key=firsts.get)

    used, c, u = set(), 0, 0
    for g in order(gt):
        gm = gt == g
        best, best_iou, best_iu = None, 0.0, None
        for p in order(pred):
            if p in used:
                continue
            pm = pred == p
            inter = int((gm & pm).sum())
            union = int((gm | pm).sum())
            if inter and inter / union > best_iou:
                best, best_iou, best_iu = p, inter / union, (inter, union)
        if best is None:
            u += int(gm.sum())
        else:
            c += best_iu[0]
            u += best_iu[1]
            used.add(best)
    for p in order(pred):
        if p not in used:
            u += int((pred == p).sum())
    return c / u if u else 1.0


def test_aji_matches_reference(rng):
    for _ in range(50):
        gt = random_blobs(rng)
        pred = perturb(rng, gt)
        assert aji(gt, pred) == aji_reference(gt, pred)


def test_aji_prediction_used_once():
    # one prediction covering two ground-truth nuclei can only be taken once
    gt = np.zeros((4, 8), int)
    gt[:, 0:4] = 1
    gt[:, 4:8] = 2
    pred = np.ones((4, 8), int)
    assert aji(gt, pred) == 16 / (32 + 16)


def test_scores_in_range_and_pq_product(rng):
    for _ in range(100):
        gt = random_blobs(rng)
        pred = perturb(rng, gt)
        s = score(gt, pred)
        for v in (s.dq, s.sq, s.pq, s.aji):
            assert 0.0 <= v <= 1.0
        assert s.pq == s.dq * s.sq


def test_label_permutation_invariance(rng):
    for _ in range(100):
        gt = random_blobs(rng)
        pred = perturb(rng, gt)
        s = score(gt, pred).as_dict()
        assert score(permute_labels(rng, gt), pred).as_dict() == s
        assert score(gt, permute_labels(rng, pred)).as_dict() == s


def test_aji_one_iff_identical_partition(rng):
    for _ in range(30):
        gt = random_blobs(rng)
        assert aji(gt, permute_labels(rng, gt)) == 1.0
        pred = perturb(rng, gt)
        same = np.array_equal(oracles.contour_map(gt) > 0, oracles.contour_map(pred) > 0) and \
            np.array_equal(gt > 0, pred > 0) and aji(gt, pred) == 1.0
        if aji(gt, pred) == 1.0:
            assert same


def test_matching_unique_vs_assignment(rng):
    for _ in range(100):
        gt = random_blobs(rng)
        pred = perturb(rng, gt)
        table = oracles.iou_table(gt, pred)
        g_ids = sorted({g for g, _ in table})
        p_ids = sorted({p for _, p in table})
        found = {(g, p) for g, p, _ in match_instances(gt, pred).pairs}
        if not table:
            assert not found
            continue
        w = np.zeros((len(g_ids), len(p_ids)))
        for (g, p), v in table.items():
            if v > 0.5:
                w[g_ids.index(g), p_ids.index(p)] = v
        r, c = linear_sum_assignment(w, maximize=True)
        best = {(g_ids[i], p_ids[j]) for i, j in zip(r, c) if w[i, j] > 0.5}
        assert found == best


def test_deleting_matched_prediction_never_raises_dq(rng):
    checked = 0
    for _ in range(200):
        gt = random_blobs(rng)
        pred = perturb(rng, gt)
        m = match_instances(gt, pred)
        if not m.pairs:
            continue
        _, p, _ = m.pairs[int(rng.integers(len(m.pairs)))]
        reduced = np.where(pred == p, 0, pred)
        assert dq_sq_pq(match_instances(gt, reduced))[0] <= dq_sq_pq(m)[0]
        checked += 1
    assert checked > 50


def test_deleting_a_poor_match_can_raise_aji():
    # AJI is not monotone under prediction deletion: dropping a badly
    # overlapping prediction removes its pixels from the union
    gt = np.zeros((1, 20), int)
    gt[0, 0:10] = 1
    pred = np.zeros((1, 20), int)
    pred[0, 4:14] = 1  # IoU 6/14 with gt
    pred[0, 0:4] = 2  # IoU 4/10
    before = aji(gt, pred)
    after = aji(gt, np.where(pred == 1, 0, pred))
    assert before == 6 / 18 and after == 4 / 10 and after > before


def test_empty_prediction_rows():
    gt = random_blobs(np.random.default_rng(4))
    s = score(gt, np.zeros_like(gt))
    assert s.dq == 0.0 and s.pq == 0.0 and s.aji == 0.0
