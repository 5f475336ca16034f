"""Probes for systematic failure modes in scored predictions.

Two specific pathologies get dedicated detectors, because both produce
boxes that look plausible in isolation:

* sign flips — the box is right except one or both coordinate axes had
  their signs negated, landing it in a mirror-image part of the world;
* coordinate copying — a geo-augmented reasoner that skipped reasoning
  and assembled its box straight from the min/max of the mention
  centers it was shown.

Plus bookkeeping tallies: parse-validity failures and whether covered
predictions skew toward over-coverage (recall > precision) or
over-tightness (precision > recall).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .geo import BoundingBox, GeoPoint, bbox_intersection
from .metrics import Prediction, area_precision, area_recall

# Edge tolerance for coordinate-copy detection. Tight enough that only a
# copied (or barely nudged) value matches; the loose pass catches the
# "rounded for simplicity" habit seen in real traces.
COPY_EPS_DEG = 0.01
COPY_EPS_LOOSE_DEG = 0.1


@dataclass
class ErrorReport:
    """Counts from one analysis pass. Every counter is ≤ n_scored."""

    n_scored: int = 0
    sign_flip_suspects: int = 0
    coord_copy_suspects: int = 0
    coord_copy_suspects_loose: int = 0
    invalid_parse: int = 0
    out_of_range_parse: int = 0
    precision_gt_recall: int = 0
    recall_gt_precision: int = 0

    def to_record(self) -> dict:
        return {
            "n_scored": self.n_scored,
            "sign_flip_suspects": self.sign_flip_suspects,
            "coord_copy_suspects": self.coord_copy_suspects,
            "coord_copy_suspects_loose": self.coord_copy_suspects_loose,
            "invalid_parse": self.invalid_parse,
            "out_of_range_parse": self.out_of_range_parse,
            "precision_gt_recall": self.precision_gt_recall,
            "recall_gt_precision": self.recall_gt_precision,
        }


def _negate_lons(box: BoundingBox) -> BoundingBox:
    return BoundingBox(-box.lon_max, box.lat_min, -box.lon_min, box.lat_max)


def _negate_lats(box: BoundingBox) -> BoundingBox:
    return BoundingBox(box.lon_min, -box.lat_max, box.lon_max, -box.lat_min)


def sign_flip_variants(box: BoundingBox) -> tuple[BoundingBox, BoundingBox, BoundingBox]:
    """The three nontrivial sign negations of a box.

    Negating an axis swaps its min/max, so the variants re-order bounds
    and stay valid boxes: (lons negated, lats negated, both negated).
    """
    lons = _negate_lons(box)
    lats = _negate_lats(box)
    both = _negate_lats(lons)
    return (lons, lats, both)


def _is_sign_flip_suspect(pred_box: BoundingBox, gold_box: BoundingBox) -> bool:
    if bbox_intersection(pred_box, gold_box) is not None:
        return False
    return any(
        bbox_intersection(variant, gold_box) is not None
        for variant in sign_flip_variants(pred_box)
    )


def _copied_edges(pred_box: BoundingBox, centers: list[GeoPoint], eps: float) -> int:
    lons = [c.lon for c in centers]
    lats = [c.lat for c in centers]
    edges = (
        (pred_box.lon_min, min(lons)),
        (pred_box.lon_max, max(lons)),
        (pred_box.lat_min, min(lats)),
        (pred_box.lat_max, max(lats)),
    )
    return sum(1 for edge, extreme in edges if abs(edge - extreme) <= eps)


def analyze_errors(
    predictions: Iterable[Prediction],
    golds: Mapping[str, BoundingBox],
) -> ErrorReport:
    """Scan scored predictions for systematic error signatures.

    Sign-flip probe: a covered box prediction with zero gold overlap is
    a suspect when any of its three sign-negation variants does overlap
    the gold box. Coordinate-copy probe: a prediction made with recalled
    mentions is a suspect when at least 3 of its 4 edges sit within
    ``COPY_EPS_DEG`` of the min/max over the recalled centers (the loose
    counter repeats the test at ``COPY_EPS_LOOSE_DEG``). Skew tallies
    compare per-record areal precision against recall.

    Counts are permutation-invariant; every prediction id must be in
    ``golds``.

    Raises:
        ValueError: prediction id missing from golds.
    """
    report = ErrorReport()
    for pred in predictions:
        if pred.record_id not in golds:
            raise ValueError(f"prediction for unknown record id {pred.record_id!r}")
        report.n_scored += 1

        if "invalid_order" in pred.flags or "invalid_range" in pred.flags:
            report.invalid_parse += 1
        if "invalid_range" in pred.flags:
            report.out_of_range_parse += 1

        gold = golds[pred.record_id]
        if pred.bbox is None or not isinstance(gold, BoundingBox):
            continue

        if _is_sign_flip_suspect(pred.bbox, gold):
            report.sign_flip_suspects += 1

        if pred.recalled:
            centers = [info.center for _, info in pred.recalled]
            if _copied_edges(pred.bbox, centers, COPY_EPS_DEG) >= 3:
                report.coord_copy_suspects += 1
            if _copied_edges(pred.bbox, centers, COPY_EPS_LOOSE_DEG) >= 3:
                report.coord_copy_suspects_loose += 1

        precision = area_precision(pred.bbox, gold)
        recall = area_recall(pred.bbox, gold)
        if precision > recall:
            report.precision_gt_recall += 1
        elif recall > precision:
            report.recall_gt_precision += 1
    return report
