"""Scoring of grounded predictions against gold geometry.

Three measurements, all defined on the sphere:

* coverage — share of records for which the system produced a usable
  geometry at all, as a percentage;
* distance error — great-circle distance between the predicted and gold
  centroids, averaged over covered records;
* areal precision/recall/F1 — how much of the predicted box is actually
  gold area, and how much of the gold box was captured, macro-averaged
  over covered box predictions, with F1 the harmonic mean of the means.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .geo import (
    BoundingBox,
    GeoInfo,
    GeoPoint,
    bbox_area_km2,
    bbox_centroid,
    bbox_intersection,
    haversine_km,
)


@dataclass(frozen=True)
class Prediction:
    """One system output for one record.

    At most one of ``bbox``/``point`` is set; a prediction with neither
    is uncovered (the system failed to produce usable geometry) and
    ``flags`` says why. ``recalled`` keeps the (name, GeoInfo) pairs the
    reasoner was shown, which error analysis needs later.
    """

    record_id: str
    approach: str
    model: str = ""
    bbox: BoundingBox | None = None
    point: GeoPoint | None = None
    raw_text: str = ""
    recalled: tuple[tuple[str, GeoInfo], ...] = ()
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.bbox is not None and self.point is not None:
            raise ValueError("prediction cannot carry both a bbox and a point")

    @property
    def covered(self) -> bool:
        return self.bbox is not None or self.point is not None


@dataclass
class MetricsReport:
    """Aggregate scores for one experiment run.

    Area metrics are None when no covered box predictions exist (e.g. a
    point-output approach); mean distance is None when nothing is covered.
    """

    label: str
    n_total: int
    n_covered: int
    coverage_pct: float
    mean_distance_km: float | None
    area_precision: float | None
    area_recall: float | None
    area_f1: float | None

    def to_record(self) -> dict:
        return {
            "label": self.label,
            "n_total": self.n_total,
            "n_covered": self.n_covered,
            "coverage_pct": self.coverage_pct,
            "mean_distance_km": self.mean_distance_km,
            "area_precision": self.area_precision,
            "area_recall": self.area_recall,
            "area_f1": self.area_f1,
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "MetricsReport":
        return cls(
            label=str(rec["label"]),
            n_total=int(rec["n_total"]),
            n_covered=int(rec["n_covered"]),
            coverage_pct=float(rec["coverage_pct"]),
            mean_distance_km=_opt_float(rec.get("mean_distance_km")),
            area_precision=_opt_float(rec.get("area_precision")),
            area_recall=_opt_float(rec.get("area_recall")),
            area_f1=_opt_float(rec.get("area_f1")),
        )


def _opt_float(v) -> float | None:
    return None if v is None else float(v)


def area_precision(pred: BoundingBox, gold: BoundingBox) -> float:
    """Fraction of the predicted box's area that overlaps the gold box.

    A degenerate prediction (zero area) has precision 0: it asserts
    nothing about area, so none of it is correct.
    """
    pred_area = bbox_area_km2(pred)
    if pred_area <= 0.0:
        return 0.0
    overlap = bbox_intersection(pred, gold)
    if overlap is None:
        return 0.0
    return bbox_area_km2(overlap) / pred_area


def area_recall(pred: BoundingBox, gold: BoundingBox) -> float:
    """Fraction of the gold box's area captured by the prediction.

    A degenerate gold box (zero area) cannot be ratioed; recall is 1.0
    when the prediction contains the gold centroid, else 0.0.
    """
    gold_area = bbox_area_km2(gold)
    if gold_area <= 0.0:
        return 1.0 if pred.contains(bbox_centroid(gold)) else 0.0
    overlap = bbox_intersection(pred, gold)
    if overlap is None:
        return 0.0
    return bbox_area_km2(overlap) / gold_area


def harmonic_f1(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision < 0.0 or recall < 0.0:
        raise ValueError("precision and recall must be non-negative")
    total = precision + recall
    if total == 0.0:
        return 0.0
    return 2.0 * precision * recall / total


def distance_error_km(prediction: Prediction, gold: BoundingBox | GeoPoint) -> float:
    """Great-circle distance between predicted and gold centers, in km.

    Boxes are reduced to their centroids on both sides; a point
    prediction or gold point is used as-is.

    Raises:
        ValueError: if the prediction is uncovered.
    """
    if prediction.bbox is not None:
        pred_center = bbox_centroid(prediction.bbox)
    elif prediction.point is not None:
        pred_center = prediction.point
    else:
        raise ValueError("distance is undefined for an uncovered prediction")
    gold_center = bbox_centroid(gold) if isinstance(gold, BoundingBox) else gold
    return haversine_km(pred_center, gold_center)


def aggregate(
    predictions: Iterable[Prediction],
    golds: Mapping[str, BoundingBox | GeoPoint],
    label: str = "",
) -> MetricsReport:
    """Score a set of predictions against gold geometry.

    Args:
        predictions: at most one per record id; every id must be a key
            of ``golds``. Records in ``golds`` with no prediction count
            as uncovered.
        golds: gold geometry per record id; the denominator of coverage.
        label: carried into the report verbatim (approach/model tag).

    Returns:
        MetricsReport. Coverage is 100 * covered / len(golds). Mean
        distance averages over covered predictions. Areal precision and
        recall are macro means of the per-record values over covered box
        predictions whose gold is a box; F1 is the harmonic mean of the
        two aggregate values, not the mean of per-record F1s.

    Raises:
        ValueError: on a prediction id missing from golds, or duplicated.
    """
    n_total = len(golds)
    seen: set[str] = set()
    n_covered = 0
    distances: list[float] = []
    precisions: list[float] = []
    recalls: list[float] = []
    for pred in predictions:
        if pred.record_id not in golds:
            raise ValueError(f"prediction for unknown record id {pred.record_id!r}")
        if pred.record_id in seen:
            raise ValueError(f"duplicate prediction for record id {pred.record_id!r}")
        seen.add(pred.record_id)
        if not pred.covered:
            continue
        n_covered += 1
        gold = golds[pred.record_id]
        distances.append(distance_error_km(pred, gold))
        if pred.bbox is not None and isinstance(gold, BoundingBox):
            precisions.append(area_precision(pred.bbox, gold))
            recalls.append(area_recall(pred.bbox, gold))

    coverage_pct = 100.0 * n_covered / n_total if n_total else 0.0
    mean_distance = sum(distances) / len(distances) if distances else None
    if precisions:
        p = sum(precisions) / len(precisions)
        r = sum(recalls) / len(recalls)
        f1 = harmonic_f1(p, r)
    else:
        p = r = f1 = None
    return MetricsReport(
        label=label,
        n_total=n_total,
        n_covered=n_covered,
        coverage_pct=coverage_pct,
        mean_distance_km=mean_distance,
        area_precision=p,
        area_recall=r,
        area_f1=f1,
    )
