"""Instance segmentation scores: IoU-based matching, DQ / SQ / PQ and AJI."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import as_instance_map
from .errors import DimensionMismatch, ThresholdError


@dataclass(frozen=True)
class PairStats:
    """Pixel counts for every (gt, pred) label pair that overlaps."""

    gt_area: dict[int, int]
    pred_area: dict[int, int]
    intersection: dict[tuple[int, int], int]
    # raster index of each instance's first pixel; a label-free ordering key
    gt_first: dict[int, int] = field(default_factory=dict)
    pred_first: dict[int, int] = field(default_factory=dict)

    def iou(self, g: int, p: int) -> float:
        inter = self.intersection.get((g, p), 0)
        if inter == 0:
            return 0.0
        return inter / (self.gt_area[g] + self.pred_area[p] - inter)


@dataclass(frozen=True)
class Matching:
    pairs: list[tuple[int, int, float]]
    unmatched_gt: list[int]
    unmatched_pred: list[int]
    iou_threshold: float = 0.5


@dataclass(frozen=True)
class SegScores:
    dq: float
    sq: float
    pq: float
    aji: float
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"dq": self.dq, "sq": self.sq, "pq": self.pq, "aji": self.aji}


def _maps(gt, pred):
    gt = as_instance_map(gt, "gt")
    pred = as_instance_map(pred, "pred")
    if gt.shape != pred.shape:
        raise DimensionMismatch(f"gt {gt.shape} and pred {pred.shape} differ in shape")
    return gt, pred


def _instances(m: np.ndarray):
    flat = m.ravel()
    idx = np.flatnonzero(flat)
    lab, first, cnt = np.unique(flat[idx], return_index=True, return_counts=True)
    return lab, idx[first], cnt


def pair_stats(gt, pred) -> PairStats:
    gt, pred = _maps(gt, pred)
    g_lab, g_first, g_cnt = _instances(gt)
    p_lab, p_first, p_cnt = _instances(pred)
    both = (gt > 0) & (pred > 0)
    keys, counts = np.unique(
        np.stack((gt[both], pred[both]), axis=1).reshape(-1, 2), axis=0, return_counts=True
    )
    return PairStats(
        gt_area=dict(zip(g_lab.tolist(), g_cnt.tolist())),
        pred_area=dict(zip(p_lab.tolist(), p_cnt.tolist())),
        intersection={(int(g), int(p)): int(n) for (g, p), n in zip(keys, counts)},
        gt_first=dict(zip(g_lab.tolist(), g_first.tolist())),
        pred_first=dict(zip(p_lab.tolist(), p_first.tolist())),
    )


def iou_matrix(gt, pred) -> dict[tuple[int, int], float]:
    """Sparse IoU table over label pairs with a nonempty intersection."""
    st = pair_stats(gt, pred)
    return {(g, p): st.iou(g, p) for (g, p) in st.intersection}


def _match(st: PairStats, iou_threshold: float) -> Matching:
    if iou_threshold < 0.5:
        raise ThresholdError("IoU threshold below 0.5 loses the unique-matching guarantee")
    pairs = []
    for g, p in sorted(st.intersection):
        iou = st.iou(g, p)
        if iou > iou_threshold:
            pairs.append((g, p, iou))
    used_g = {g for g, _, _ in pairs}
    used_p = {p for _, p, _ in pairs}
    return Matching(
        pairs=pairs,
        unmatched_gt=sorted(set(st.gt_area) - used_g),
        unmatched_pred=sorted(set(st.pred_area) - used_p),
        iou_threshold=iou_threshold,
    )


def match_instances(gt, pred, iou_threshold: float = 0.5) -> Matching:
    """Pair every gt/pred instance whose IoU exceeds ``iou_threshold``.

    For thresholds >= 0.5 two instances of the same map cannot both exceed
    the threshold with a common partner, so the result is a valid one-to-one
    matching without any assignment step.
    """
    return _match(pair_stats(gt, pred), iou_threshold)


def dq_sq_pq(m: Matching) -> tuple[float, float, float]:
    tp = len(m.pairs)
    fp = len(m.unmatched_pred)
    fn = len(m.unmatched_gt)
    if tp + fp + fn == 0:
        # both maps empty: nothing to detect, nothing missed
        return 1.0, 1.0, 1.0
    dq = tp / (tp + 0.5 * fp + 0.5 * fn)
    # fsum is order independent, so relabeling cannot change the last bit
    sq = math.fsum(iou for _, _, iou in m.pairs) / tp if tp else 0.0
    return dq, sq, dq * sq


def _aji(st: PairStats) -> float:
    if not st.gt_area and not st.pred_area:
        return 1.0
    candidates: dict[int, list[tuple[int, int]]] = {}
    for (g, p), inter in st.intersection.items():
        candidates.setdefault(g, []).append((p, inter))

    used: set[int] = set()
    c = 0
    u = 0
    for g in sorted(st.gt_area, key=st.gt_first.__getitem__):
        best = None
        best_iou = 0.0
        for p, inter in sorted(candidates.get(g, ()), key=lambda t: st.pred_first[t[0]]):
            if p in used:
                continue
            iou = st.iou(g, p)
            if iou > best_iou:
                best, best_iou = p, iou
        if best is None:
            u += st.gt_area[g]
            continue
        inter = st.intersection[(g, best)]
        c += inter
        u += st.gt_area[g] + st.pred_area[best] - inter
        used.add(best)
    u += sum(n for p, n in st.pred_area.items() if p not in used)
    return c / u


def aji(gt, pred) -> float:
    """Aggregated Jaccard index.

    Ground-truth instances are visited in raster order of their first pixel;
    each takes the unused prediction with the highest IoU, ties going to the
    prediction that appears first in raster order. Predictions never taken
    add their full area to the union. Ordering by position rather than by
    label value keeps the score invariant under relabeling.
    """
    return _aji(pair_stats(gt, pred))


def score(gt, pred, iou_threshold: float = 0.5) -> SegScores:
    st = pair_stats(gt, pred)
    m = _match(st, iou_threshold)
    dq, sq, pq = dq_sq_pq(m)
    return SegScores(
        dq=dq,
        sq=sq,
        pq=pq,
        aji=_aji(st),
        extra={"tp": len(m.pairs), "fp": len(m.unmatched_pred), "fn": len(m.unmatched_gt)},
    )
