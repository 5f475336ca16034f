"""Experiment pipeline: recall geography, reason to a box, score it.

Every approach is the same two-stage shape with different stages filled
in. The recaller maps mentioned names to geography (gold annotations, a
gazetteer table, a remote geocoder, or a first LLM call); the reasoner
is an LLM that turns the description plus recalled geography into one
bounding box (or, for knowledge baselines, maps a bare name straight to
geometry).
"""

from __future__ import annotations

import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .dataset import LocationRecord, golds_by_id
from .gazetteer import GazetteerStore, GeocoderClient, oracle_lookup, remote_geocode
from .geo import GeoInfo
from .metrics import MetricsReport, Prediction, aggregate
from .netutil import EmptyResponseError, ProtocolError, TransportError
from .prompts import PromptKind
from .reasoner import ChatClient, build_prompt, extract_prediction

logger = logging.getLogger(__name__)


class Approach(enum.Enum):
    """The seven ways to ground a record.

    Knowledge baselines skip the description and ask about the gold name
    directly; the rest read the description, differing only in where the
    recalled mention geography comes from (none, gold annotations, a
    gazetteer store, a remote geocoder, or a second LLM).
    """

    KNOWLEDGE_POINT = "knowledge-point"
    KNOWLEDGE_BOX = "knowledge-box"
    REASONING_ORACLE = "reasoning-oracle"
    DIRECT = "direct"
    GEOAUG_ORACLE = "geoaug-oracle"
    GEOAUG_REMOTE = "geoaug-remote"
    END_TO_END = "end-to-end"

    @property
    def output_kind(self) -> str:
        """"point" or "box" — what geometry the approach predicts."""
        return "point" if self is Approach.KNOWLEDGE_POINT else "box"

    @property
    def required_deps(self) -> tuple[str, ...]:
        """Names of RunDeps fields this approach cannot run without."""
        if self is Approach.GEOAUG_ORACLE:
            return ("chat", "store")
        if self is Approach.GEOAUG_REMOTE:
            return ("chat", "geocoder")
        return ("chat",)


@dataclass(frozen=True)
class ExperimentConfig:
    """What to run: approach, reasoner model, optional separate recaller model."""

    approach: Approach
    model: str
    recaller_model: str | None = None
    few_shot: bool = True

    @property
    def label(self) -> str:
        return f"{self.approach.value}/{self.model}"


@dataclass
class RunDeps:
    """External services a run may touch. Only ``chat`` is universal."""

    chat: ChatClient
    store: GazetteerStore | None = None
    geocoder: GeocoderClient | None = None


def _failure_flag(exc: Exception) -> str:
    if isinstance(exc, EmptyResponseError):
        return "empty_response"
    if isinstance(exc, TransportError):
        return "transport_error"
    return "protocol_error"


def _recall(
    config: ExperimentConfig, record: LocationRecord, deps: RunDeps
) -> tuple[list[tuple[str, GeoInfo]], tuple[str, ...]]:
    """Gather (name, GeoInfo) pairs for the record's mentions.

    Returns the recalled pairs plus any flags describing recall losses.
    """
    approach = config.approach
    recalled: list[tuple[str, GeoInfo]] = []
    flags: list[str] = []

    if approach is Approach.REASONING_ORACLE:
        recalled = [(m.name, m.gold) for m in record.mentions if m.gold is not None]

    elif approach is Approach.GEOAUG_ORACLE:
        for mention in record.mentions:
            info = oracle_lookup(deps.store, mention.name) if deps.store else None
            if info is None:
                info = mention.gold
            if info is None:
                flags.append(f"recall_miss:{mention.name}")
                continue
            recalled.append((mention.name, info))

    elif approach is Approach.GEOAUG_REMOTE:
        for mention in record.mentions:
            info = remote_geocode(deps.geocoder, mention.name)
            if info is None:
                flags.append(f"recall_miss:{mention.name}")
                continue
            recalled.append((mention.name, info))

    elif approach is Approach.END_TO_END:
        request = build_prompt(
            PromptKind.MENTION_RECALLER,
            model=config.recaller_model or config.model,
            description=record.description,
            few_shot=config.few_shot,
        )
        text = deps.chat.complete(request)
        for mention in extract_prediction(PromptKind.MENTION_RECALLER, text).mentions:
            if not mention.valid:
                flags.append(f"invalid_mention:{mention.name}")
                continue
            recalled.append((mention.name, GeoInfo(name=mention.name, center=mention.center)))

    else:  # pragma: no cover - guarded by run_record dispatch
        raise ValueError(f"{approach} is not a recall approach")
    return recalled, tuple(flags)


def run_record(config: ExperimentConfig, record: LocationRecord, deps: RunDeps) -> Prediction:
    """Ground one record with one approach.

    Recall losses never abort the record: a geo-augmented prompt with
    zero recalled mentions is still sent (flagged "degraded") rather
    than silently substituting a different approach, and unparseable
    reasoner output comes back as an uncovered prediction with parse
    flags. Transport and protocol failures do raise; run_experiment
    converts those to uncovered predictions.
    """
    approach = config.approach
    tag = approach.value

    if approach in (Approach.KNOWLEDGE_POINT, Approach.KNOWLEDGE_BOX):
        if record.gold_name is None:
            return Prediction(
                record_id=record.record_id, approach=tag, model=config.model,
                flags=("no_gold_name",),
            )
        kind = (
            PromptKind.KNOWLEDGE_POINT
            if approach is Approach.KNOWLEDGE_POINT
            else PromptKind.KNOWLEDGE_BOX
        )
        request = build_prompt(
            kind,
            model=config.model,
            location_name=record.gold_name,
            country=record.gold_country,
            few_shot=config.few_shot,
        )
        text = deps.chat.complete(request)
        extraction = extract_prediction(kind, text)
        return Prediction(
            record_id=record.record_id, approach=tag, model=config.model,
            bbox=extraction.bbox, point=extraction.point,
            raw_text=text, flags=extraction.flags,
        )

    if approach is Approach.DIRECT:
        request = build_prompt(
            PromptKind.DIRECT_BOX,
            model=config.model,
            description=record.description,
            few_shot=config.few_shot,
        )
        text = deps.chat.complete(request)
        extraction = extract_prediction(PromptKind.DIRECT_BOX, text)
        return Prediction(
            record_id=record.record_id, approach=tag, model=config.model,
            bbox=extraction.bbox, raw_text=text, flags=extraction.flags,
        )

    recalled, recall_flags = _recall(config, record, deps)
    if not recalled:
        recall_flags = recall_flags + ("degraded",)
    request = build_prompt(
        PromptKind.GEO_AUGMENTED_BOX,
        model=config.model,
        description=record.description,
        recalled=recalled,
        few_shot=config.few_shot,
        allow_empty_mentions=True,
    )
    text = deps.chat.complete(request)
    extraction = extract_prediction(PromptKind.GEO_AUGMENTED_BOX, text)
    return Prediction(
        record_id=record.record_id, approach=tag, model=config.model,
        bbox=extraction.bbox, raw_text=text,
        recalled=tuple(recalled), flags=recall_flags + extraction.flags,
    )


def run_experiment(
    config: ExperimentConfig,
    records: Sequence[LocationRecord],
    deps: RunDeps,
    parallelism: int = 1,
) -> tuple[list[Prediction], MetricsReport]:
    """Run one approach over a record set and score it.

    Records are processed with bounded parallelism; the output order
    matches the input order regardless of degree. A record whose
    processing raises a transport/protocol error becomes an uncovered
    prediction with the failure flagged — one dead record must not kill
    a thousand-record run.

    Raises:
        ValueError: missing dependencies for the approach, or
            parallelism < 1.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    for dep_name in config.approach.required_deps:
        if getattr(deps, dep_name) is None:
            raise ValueError(f"{config.approach.value} requires deps.{dep_name}")

    def grounded(record: LocationRecord) -> Prediction:
        try:
            return run_record(config, record, deps)
        except (TransportError, ProtocolError) as exc:
            logger.warning("record %s failed: %s", record.record_id, exc)
            return Prediction(
                record_id=record.record_id,
                approach=config.approach.value,
                model=config.model,
                flags=(_failure_flag(exc),),
            )

    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        predictions = list(pool.map(grounded, records))

    report = aggregate(predictions, golds_by_id(records), label=config.label)
    return predictions, report
