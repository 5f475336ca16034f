"""Recallers that map a location name to geographic information.

Two implementations of the same job:

* ``GazetteerStore`` — an in-memory table loaded from JSONL, for oracle
  and offline setups. Lookup is by normalized name; no I/O after load.
* ``GeocoderClient`` — a remote geocoding service speaking the common
  ``status``/``results``/``geometry`` response shape, with caching, rate
  limiting, and retries.

Both return ``GeoInfo`` (center always, bbox when the source has one).
"""

from __future__ import annotations

import collections
import json
import logging
import os
from typing import Iterable, Iterator

import requests

from .geo import BoundingBox, GeoInfo, GeoPoint
from .netutil import JsonlCache, ProtocolError, RateLimiter, request_json

logger = logging.getLogger(__name__)


def normalize_name(name: str) -> str:
    """Normalize a location name for keying: trim, collapse whitespace, casefold."""
    return " ".join(name.split()).casefold()


def geoinfo_to_obj(info: GeoInfo) -> dict:
    obj: dict = {"name": info.name, "lat": info.center.lat, "lon": info.center.lon}
    if info.country is not None:
        obj["country"] = info.country
    if info.bbox is not None:
        obj["bbox"] = list(info.bbox.as_tuple())
    if info.source_id is not None:
        obj["id"] = info.source_id
    return obj


def geoinfo_from_obj(obj: dict) -> GeoInfo:
    bbox = None
    if obj.get("bbox") is not None:
        vals = obj["bbox"]
        if len(vals) != 4:
            raise ValueError(f"bbox must have 4 values, got {len(vals)}")
        bbox = BoundingBox(*(float(v) for v in vals))
    return GeoInfo(
        name=str(obj["name"]),
        center=GeoPoint(lat=float(obj["lat"]), lon=float(obj["lon"])),
        country=str(obj["country"]) if obj.get("country") is not None else None,
        bbox=bbox,
        source_id=str(obj["id"]) if obj.get("id") is not None else None,
    )


class GazetteerStore:
    """In-memory name -> GeoInfo table with normalized-name lookup.

    Duplicate names are kept in insertion order; an optional country
    qualifier at lookup time prefers the matching entry, falling back to
    the first inserted one.
    """

    def __init__(self, infos: Iterable[GeoInfo] = ()) -> None:
        self._by_name: dict[str, list[GeoInfo]] = collections.defaultdict(list)
        self._count = 0
        for info in infos:
            self.add(info)

    def add(self, info: GeoInfo) -> None:
        self._by_name[normalize_name(info.name)].append(info)
        self._count += 1

    def __len__(self) -> int:
        return self._count

    def __iter__(self) -> Iterator[GeoInfo]:
        for entries in self._by_name.values():
            yield from entries

    def lookup(self, name: str, country: str | None = None) -> GeoInfo | None:
        """Find an entry by normalized name.

        Args:
            name: location name; whitespace and case are ignored.
            country: when given, an entry whose country matches
                (case-insensitively) is preferred.

        Returns:
            The best entry, or None when the name is unknown.
        """
        entries = self._by_name.get(normalize_name(name))
        if not entries:
            return None
        if country is not None:
            wanted = country.casefold()
            for entry in entries:
                if entry.country is not None and entry.country.casefold() == wanted:
                    return entry
        return entries[0]

    @classmethod
    def load(cls, path: str | os.PathLike) -> "GazetteerStore":
        """Load a store from JSONL, one entry per line.

        Lines that fail to parse or validate are skipped with a warning;
        a gazetteer with a few bad rows is still a usable gazetteer.
        """
        store = cls()
        skipped = 0
        with open(path, "r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    store.add(geoinfo_from_obj(json.loads(line)))
                except (ValueError, KeyError, TypeError) as exc:
                    skipped += 1
                    logger.warning("gazetteer %s line %d skipped: %s", path, line_no, exc)
        if skipped:
            logger.warning("gazetteer %s: %d line(s) skipped", path, skipped)
        return store

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for info in self:
                fh.write(json.dumps(geoinfo_to_obj(info), ensure_ascii=False))
                fh.write("\n")


def oracle_lookup(store: GazetteerStore, name: str, country: str | None = None) -> GeoInfo | None:
    """Pure table lookup by normalized name; never performs I/O."""
    return store.lookup(name, country)


class GeocoderClient:
    """Client for a geocoding HTTP service.

    The service contract: GET with an ``address`` query parameter (plus
    ``key`` when an API key is configured), answering JSON with a
    ``status`` of ``"OK"`` or ``"ZERO_RESULTS"`` and a ``results`` array
    whose first element carries ``geometry.location`` (center) and
    optionally ``geometry.viewport`` (southwest/northeast corners).

    Responses are cached by (endpoint, normalized query) in an
    append-only JSONL file, so reruns are free and offline. Requests are
    rate-limited and retried on 429/5xx with exponential backoff.
    ``stats`` counts requests, retries, and cache hits.
    """

    def __init__(
        self,
        endpoint: str,
        api_key: str | None = None,
        *,
        rate_per_sec: float = 10.0,
        timeout_s: float = 30.0,
        max_retries: int = 3,
        backoff_s: float = 0.5,
        cache_path: str | os.PathLike | None = None,
        session: requests.Session | None = None,
    ) -> None:
        self._endpoint = endpoint
        self._api_key = api_key if api_key is not None else os.environ.get("GEOCODER_API_KEY")
        self._limiter = RateLimiter(rate_per_sec)
        self._timeout_s = timeout_s
        self._max_retries = max_retries
        self._backoff_s = backoff_s
        self._cache = JsonlCache(cache_path)
        self._session = session if session is not None else requests.Session()
        self.stats: collections.Counter[str] = collections.Counter()

    def _cache_key(self, query: str) -> str:
        return json.dumps([self._endpoint, normalize_name(query)], separators=(",", ":"))

    def geocode(self, name: str) -> GeoInfo | None:
        """Resolve a location name to GeoInfo, or None when unknown.

        A cache hit short-circuits the network entirely; negative
        results (ZERO_RESULTS) are cached too.

        Raises:
            TransportError: endpoint unreachable or failing after retries.
            ProtocolError: response is not the shape described above.
        """
        key = self._cache_key(name)
        data = self._cache.get(key)
        if data is not None:
            self.stats["cache_hits"] += 1
        else:
            params = {"address": name}
            if self._api_key:
                params["key"] = self._api_key
            data, retries = request_json(
                self._session,
                "GET",
                self._endpoint,
                params=params,
                timeout=self._timeout_s,
                max_retries=self._max_retries,
                backoff_s=self._backoff_s,
                limiter=self._limiter,
            )
            self.stats["requests"] += 1
            self.stats["retries"] += retries
            # Validate before caching; a malformed body must not poison reruns.
            self._parse_response(name, data)
            self._cache.put(key, data)
        return self._parse_response(name, data)

    def _parse_response(self, query: str, data) -> GeoInfo | None:
        try:
            status = data["status"]
        except (TypeError, KeyError):
            raise ProtocolError(f"geocoder response missing status: {str(data)[:200]}")
        if status == "ZERO_RESULTS":
            return None
        if status != "OK":
            raise ProtocolError(f"geocoder status {status!r} for {query!r}")
        try:
            first = data["results"][0]
            loc = first["geometry"]["location"]
            center = GeoPoint(lat=float(loc["lat"]), lon=float(loc["lng"]))
            bbox = None
            viewport = first.get("geometry", {}).get("viewport")
            if viewport:
                sw, ne = viewport["southwest"], viewport["northeast"]
                try:
                    bbox = BoundingBox(
                        lon_min=float(sw["lng"]),
                        lat_min=float(sw["lat"]),
                        lon_max=float(ne["lng"]),
                        lat_max=float(ne["lat"]),
                    )
                except ValueError:
                    # e.g. a viewport wrapping the antimeridian; keep center.
                    logger.warning("unusable viewport for %r, keeping center only", query)
                    bbox = None
            return GeoInfo(
                name=str(first.get("formatted_address") or query),
                center=center,
                bbox=bbox,
                source_id=str(first["place_id"]) if first.get("place_id") else None,
            )
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProtocolError(f"malformed geocoder result for {query!r}: {exc}") from exc


def remote_geocode(client: GeocoderClient, name: str) -> GeoInfo | None:
    """Resolve one name through the remote geocoder (cache-aware)."""
    return client.geocode(name)
