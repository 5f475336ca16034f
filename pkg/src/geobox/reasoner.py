"""Chat-based reasoning over location descriptions.

This module owns the LLM protocol end to end: building chat requests
from records and recalled geography, talking to a chat-completions
endpoint (cached, retried), and digging structured geometry back out of
free-form responses.
"""

from __future__ import annotations

import collections
import hashlib
import json
import os
import re
from dataclasses import dataclass
from typing import Sequence

import requests

from .geo import BoundingBox, GeoInfo, GeoPoint, format_coord
from .netutil import EmptyResponseError, JsonlCache, ProtocolError, RateLimiter, request_json
from .parsing import parse_bbox, parse_point
from .prompts import NAME_INPUT_KINDS, PromptKind, system_text

# Decoding settings are part of the protocol: deterministic, bounded output.
TEMPERATURE = 0.0
MAX_TOKENS = 1024


class DegradedInputError(ValueError):
    """A prompt that needs recalled mentions was built with none."""


@dataclass(frozen=True)
class ChatRequest:
    """One fully rendered chat call: stable bytes in, cacheable text out."""

    model: str
    system: str
    user: str
    temperature: float = TEMPERATURE
    max_tokens: int = MAX_TOKENS


@dataclass(frozen=True)
class RecalledMention:
    """One location the recaller emitted, values kept raw.

    ``lon``/``lat`` are stored unvalidated because recallers do emit
    impossible coordinates and those must survive for error analysis;
    ``valid`` says whether they are in range, and ``center`` is only
    constructible when they are.
    """

    name: str
    lon: float
    lat: float

    @property
    def valid(self) -> bool:
        return -180.0 <= self.lon <= 180.0 and -90.0 <= self.lat <= 90.0

    @property
    def center(self) -> GeoPoint:
        if not self.valid:
            raise ValueError(f"mention {self.name!r} has out-of-range coordinates")
        return GeoPoint(lat=self.lat, lon=self.lon)


def mention_sentence(name: str, lon: float, lat: float) -> str:
    """Render one recalled mention as prompt text.

    The sentence pattern is fixed protocol; coordinates are printed at
    full precision (canonical rendering, minimum three decimals).
    """
    return (
        f"{name} has a longitude of {format_coord(lon)} "
        f"and latitude of {format_coord(lat)}."
    )


def cache_key(model: str, system: str, user: str) -> str:
    """Stable cache key for a chat call: SHA-256 over the identifying triple."""
    blob = json.dumps([model, system, user], ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def build_prompt(
    kind: PromptKind,
    *,
    model: str,
    description: str | None = None,
    location_name: str | None = None,
    country: str | None = None,
    recalled: Sequence[tuple[str, GeoInfo]] = (),
    few_shot: bool = True,
    allow_empty_mentions: bool = False,
) -> ChatRequest:
    """Render a chat request for one record.

    The user message is always ``Input: <payload>\\nOutput:``. Knowledge
    kinds take a name payload (``<name>, in <country>.``, or ``<name>.``
    without a country). Description kinds append a space after the
    description — followed by one recalled-mention sentence per entry
    for the geo-augmented kind, in order of first appearance of the name
    in the description (names not found keep their given order, after
    the found ones).

    Args:
        allow_empty_mentions: a geo-augmented prompt with zero recalled
            mentions is degraded; callers must opt in explicitly.

    Raises:
        ValueError: missing description/name for the kind, or recalled
            mentions passed to a kind that cannot carry them.
        DegradedInputError: geo-augmented kind with zero mentions and
            no explicit opt-in.
    """
    if recalled and kind is not PromptKind.GEO_AUGMENTED_BOX:
        raise ValueError(f"{kind.value} prompts cannot carry recalled mentions")

    if kind in NAME_INPUT_KINDS:
        if location_name is None:
            raise ValueError(f"{kind.value} requires location_name")
        payload = f"{location_name}, in {country}." if country else f"{location_name}."
        user = f"Input: {payload}\nOutput:"
        return ChatRequest(model=model, system=system_text(kind, few_shot), user=user)

    if description is None:
        raise ValueError(f"{kind.value} requires description")

    if kind is PromptKind.GEO_AUGMENTED_BOX:
        if not recalled and not allow_empty_mentions:
            raise DegradedInputError("geo-augmented prompt built with zero recalled mentions")
        ordered = _order_by_appearance(description, recalled)
        sentences = " ".join(
            mention_sentence(name, info.center.lon, info.center.lat) for name, info in ordered
        )
        user = f"Input: {description} {sentences}\nOutput:"
    else:
        # Direct and recaller templates keep the separator space after
        # the description; it is part of the frozen template bytes.
        user = f"Input: {description} \nOutput:"
    return ChatRequest(model=model, system=system_text(kind, few_shot), user=user)


def _order_by_appearance(
    description: str, recalled: Sequence[tuple[str, GeoInfo]]
) -> list[tuple[str, GeoInfo]]:
    def sort_key(item: tuple[int, tuple[str, GeoInfo]]) -> tuple[int, int]:
        index, (name, _) = item
        pos = description.find(name)
        return (pos if pos >= 0 else len(description) + 1, index)

    return [pair for _, pair in sorted(enumerate(recalled), key=sort_key)]


# --- response extraction -------------------------------------------------

# "<Name> has a longitude of <lon> and latitude of <lat>" with the name
# reaching back to the previous sentence/clause boundary. Names holding
# internal punctuation (e.g. "St. Petersburg") split at the dot; that is
# the cost of boundary detection over unstructured output.
_NUM = r"[-+]?\d+(?:\.\d+)?"
_MENTION_RE = re.compile(
    rf"([^.!?:;\n]+?)\s+has a longitude of\s+({_NUM})\s+and latitude of\s+({_NUM})"
)


def extract_mentions(text: str) -> list[RecalledMention]:
    """Pull recalled-mention sentences out of recaller output.

    Out-of-range coordinates are kept (``valid=False``); cleaning is
    limited to trimming whitespace and markdown emphasis around names.
    """
    mentions = []
    for match in _MENTION_RE.finditer(text):
        name = match.group(1).strip().strip("*`_").strip()
        if not name:
            continue
        mentions.append(
            RecalledMention(name=name, lon=float(match.group(2)), lat=float(match.group(3)))
        )
    return mentions


@dataclass(frozen=True)
class Extraction:
    """Structured content recovered from one model response."""

    bbox: BoundingBox | None = None
    point: GeoPoint | None = None
    mentions: tuple[RecalledMention, ...] = ()
    flags: tuple[str, ...] = ()


def extract_prediction(kind: PromptKind, text: str) -> Extraction:
    """Interpret a model response according to the prompt kind.

    Point kinds parse a ``(lat, lon)`` tuple, box kinds a 4-tuple, the
    recaller kind mention sentences. Parse failures come back as flags
    ("no_parse", "invalid_order", "invalid_range"), never exceptions.
    """
    if kind is PromptKind.MENTION_RECALLER:
        return Extraction(mentions=tuple(extract_mentions(text)))
    if kind is PromptKind.KNOWLEDGE_POINT:
        parsed = parse_point(text)
        if parsed.ok:
            return Extraction(point=parsed.point)
        if parsed.found:
            return Extraction(flags=tuple(f"invalid_{e}" for e in parsed.errors))
        return Extraction(flags=("no_parse",))
    parsed_box = parse_bbox(text)
    if parsed_box.ok:
        return Extraction(bbox=parsed_box.box)
    if parsed_box.found:
        return Extraction(flags=tuple(f"invalid_{e}" for e in parsed_box.errors))
    return Extraction(flags=("no_parse",))


class ChatClient:
    """Client for a chat-completions HTTP endpoint.

    POSTs ``{model, messages, temperature, max_tokens}`` to
    ``<base>/chat/completions`` and reads
    ``choices[0].message.content``. Completions are cached by
    (model, system, user) hash in an append-only JSONL file, written
    before the content is returned, so an interrupted run never repays
    for answers it already received.
    """

    def __init__(
        self,
        base_url: str | None = None,
        api_key: str | None = None,
        *,
        timeout_s: float = 120.0,
        max_retries: int = 3,
        backoff_s: float = 0.5,
        rate_per_sec: float | None = None,
        cache_path: str | os.PathLike | None = None,
        session: requests.Session | None = None,
    ) -> None:
        base = base_url if base_url is not None else os.environ.get("LLM_API_BASE")
        if not base:
            raise ValueError("no chat endpoint: pass base_url or set LLM_API_BASE")
        self._url = base.rstrip("/") + "/chat/completions"
        self._api_key = api_key if api_key is not None else os.environ.get("LLM_API_KEY")
        self._timeout_s = timeout_s
        self._max_retries = max_retries
        self._backoff_s = backoff_s
        self._limiter = RateLimiter(rate_per_sec) if rate_per_sec else None
        self._cache = JsonlCache(cache_path)
        self._session = session if session is not None else requests.Session()
        self.stats: collections.Counter[str] = collections.Counter()

    def complete(self, request: ChatRequest) -> str:
        """Run one chat call, returning the completion text.

        Raises:
            TransportError: endpoint unreachable/failing after retries.
            ProtocolError: response body not in the expected shape.
            EmptyResponseError: the model returned no content.
        """
        key = cache_key(request.model, request.system, request.user)
        cached = self._cache.get(key)
        if cached is not None:
            self.stats["cache_hits"] += 1
            return cached
        headers = {}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        body = {
            "model": request.model,
            "messages": [
                {"role": "system", "content": request.system},
                {"role": "user", "content": request.user},
            ],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        data, retries = request_json(
            self._session,
            "POST",
            self._url,
            json_body=body,
            headers=headers,
            timeout=self._timeout_s,
            max_retries=self._max_retries,
            backoff_s=self._backoff_s,
            limiter=self._limiter,
        )
        self.stats["requests"] += 1
        self.stats["retries"] += retries
        try:
            content = data["choices"][0]["message"]["content"]
        except (TypeError, KeyError, IndexError) as exc:
            raise ProtocolError(f"malformed completion response: {str(data)[:200]}") from exc
        if not isinstance(content, str) or not content.strip():
            raise EmptyResponseError("completion arrived with no content")
        self._cache.put(key, content)
        return content
