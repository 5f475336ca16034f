"""Shared plumbing for the HTTP clients: errors, caching, rate limiting.

Both remote services (geocoder, chat completions) get the same treatment:
a persistent append-only JSONL cache keyed by request identity, a token
rate limiter, and bounded retries with exponential backoff on transient
failures. Kept service-agnostic so the two clients stay thin.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from typing import Any, Callable

import requests

logger = logging.getLogger(__name__)

# HTTP statuses worth retrying: throttling and server-side failures.
RETRYABLE_STATUSES = frozenset({429, 500, 502, 503, 504})


class TransportError(RuntimeError):
    """The service could not be reached, or kept failing past all retries."""


class ProtocolError(RuntimeError):
    """The service answered, but not in the shape the client understands."""


class EmptyResponseError(ProtocolError):
    """A completion arrived with no usable content."""


class RateLimiter:
    """Serializes callers to at most ``rate_per_sec`` acquisitions per second.

    Thread-safe. The first acquisition is immediate; thereafter
    acquisitions are spaced ``1/rate_per_sec`` apart, so N calls take at
    least (N-1)/rate seconds of wall clock.
    """

    def __init__(self, rate_per_sec: float) -> None:
        if rate_per_sec <= 0:
            raise ValueError("rate_per_sec must be positive")
        self._interval = 1.0 / rate_per_sec
        self._lock = threading.Lock()
        self._next_at = 0.0

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = time.monotonic()
                if now >= self._next_at:
                    self._next_at = max(now, self._next_at) + self._interval
                    return
                wait = self._next_at - now
            time.sleep(wait)


class JsonlCache:
    """Append-only key/value cache persisted as JSONL.

    One ``{"key": ..., "value": ...}`` object per line. Loading skips
    corrupt lines with a warning instead of failing: a torn final line
    from a killed process must not poison the rest of the cache. With
    ``path=None`` the cache is memory-only.

    Writes go to disk before the value is returned to the caller, so a
    crash after a successful remote call never loses the response.
    Thread-safe.
    """

    def __init__(self, path: str | os.PathLike | None = None) -> None:
        self._path = os.fspath(path) if path is not None else None
        self._lock = threading.Lock()
        self._data: dict[str, Any] = {}
        if self._path is not None and os.path.exists(self._path):
            self._load()

    def _load(self) -> None:
        assert self._path is not None
        skipped = 0
        with open(self._path, "r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    key = obj["key"]
                    value = obj["value"]
                except (json.JSONDecodeError, KeyError, TypeError):
                    skipped += 1
                    logger.warning("skipping corrupt cache line %d in %s", line_no, self._path)
                    continue
                # Last write wins, matching append order.
                self._data[key] = value
        if skipped:
            logger.warning("cache %s: %d corrupt line(s) ignored", self._path, skipped)

    def __len__(self) -> int:
        with self._lock:
            return len(self._data)

    def __contains__(self, key: str) -> bool:
        with self._lock:
            return key in self._data

    def get(self, key: str) -> Any | None:
        with self._lock:
            return self._data.get(key)

    def put(self, key: str, value: Any) -> None:
        with self._lock:
            if self._path is not None:
                os.makedirs(os.path.dirname(os.path.abspath(self._path)), exist_ok=True)
                with open(self._path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps({"key": key, "value": value}, ensure_ascii=False))
                    fh.write("\n")
                    fh.flush()
                    os.fsync(fh.fileno())
            self._data[key] = value


def request_json(
    session: requests.Session,
    method: str,
    url: str,
    *,
    params: dict | None = None,
    json_body: dict | None = None,
    headers: dict | None = None,
    timeout: float = 30.0,
    max_retries: int = 3,
    backoff_s: float = 0.5,
    limiter: RateLimiter | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> tuple[Any, int]:
    """Issue an HTTP request, retrying transient failures, and decode JSON.

    Retries on connect/read errors, HTTP 429 and 5xx, with exponential
    backoff (backoff_s * 2**attempt). Other HTTP errors fail immediately
    as ProtocolError: resending an ill-formed request cannot help. The
    rate limiter, when given, gates every attempt including retries.

    Args:
        sleep: injection point so tests do not wait out real backoffs.

    Returns:
        (decoded JSON body, number of retries performed).

    Raises:
        TransportError: network failure or retryable status after
            ``max_retries`` retries.
        ProtocolError: non-retryable HTTP error or a non-JSON body.
    """
    last_failure = ""
    for attempt in range(max_retries + 1):
        if attempt > 0:
            sleep(backoff_s * (2.0 ** (attempt - 1)))
        if limiter is not None:
            limiter.acquire()
        try:
            resp = session.request(
                method, url, params=params, json=json_body, headers=headers, timeout=timeout
            )
        except requests.RequestException as exc:
            last_failure = f"{type(exc).__name__}: {exc}"
            logger.warning("request to %s failed (%s), attempt %d", url, last_failure, attempt + 1)
            continue
        if resp.status_code in RETRYABLE_STATUSES:
            last_failure = f"HTTP {resp.status_code}"
            logger.warning("%s from %s, attempt %d", last_failure, url, attempt + 1)
            continue
        if resp.status_code >= 400:
            raise ProtocolError(f"HTTP {resp.status_code} from {url}: {resp.text[:200]}")
        try:
            return resp.json(), attempt
        except ValueError as exc:
            raise ProtocolError(f"non-JSON response from {url}: {exc}") from exc
    raise TransportError(
        f"{url} still failing after {max_retries} retries (last: {last_failure})"
    )


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write a file via a temp sibling + rename, so readers never see a torn file."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)
