"""Core geographic types and spherical geometry.

Everything downstream (metrics, parsing, the pipeline) builds on the two
value types defined here: a ``GeoPoint`` in degrees and an axis-aligned
``BoundingBox`` in degrees. All areas and distances are computed on a
sphere of radius ``EARTH_RADIUS_KM``; there is no planar approximation
anywhere in the package.

Boxes never wrap the antimeridian: ``lon_min <= lon_max`` is a hard
constraint, so a box spanning 180E/180W cannot be represented and is
rejected at construction time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# IUGG mean earth radius.
EARTH_RADIUS_KM = 6371.0088


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class GeoPoint:
    """A point on the sphere: latitude and longitude in decimal degrees.

    Raises:
        ValueError: if latitude is outside [-90, 90], longitude outside
            [-180, 180], or either value is non-finite.
    """

    lat: float
    lon: float

    def __post_init__(self) -> None:
        _check_finite("lat", self.lat)
        _check_finite("lon", self.lon)
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range [-90, 90]: {self.lat!r}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range [-180, 180]: {self.lon!r}")


@dataclass(frozen=True)
class BoundingBox:
    """An axis-aligned box: (lon_min, lat_min, lon_max, lat_max) in degrees.

    Degenerate boxes (zero width and/or height) are valid values; they
    have zero area. Boxes that would wrap the antimeridian
    (lon_min > lon_max) are invalid.

    Raises:
        ValueError: on out-of-range coordinates, non-finite values,
            lon_min > lon_max, or lat_min > lat_max.
    """

    lon_min: float
    lat_min: float
    lon_max: float
    lat_max: float

    def __post_init__(self) -> None:
        for name in ("lon_min", "lat_min", "lon_max", "lat_max"):
            _check_finite(name, getattr(self, name))
        if not (-180.0 <= self.lon_min <= 180.0 and -180.0 <= self.lon_max <= 180.0):
            raise ValueError(
                f"longitude out of range [-180, 180]: ({self.lon_min!r}, {self.lon_max!r})"
            )
        if not (-90.0 <= self.lat_min <= 90.0 and -90.0 <= self.lat_max <= 90.0):
            raise ValueError(
                f"latitude out of range [-90, 90]: ({self.lat_min!r}, {self.lat_max!r})"
            )
        if self.lon_min > self.lon_max:
            raise ValueError(
                f"lon_min > lon_max ({self.lon_min!r} > {self.lon_max!r}); "
                "antimeridian-wrapping boxes are not representable"
            )
        if self.lat_min > self.lat_max:
            raise ValueError(f"lat_min > lat_max ({self.lat_min!r} > {self.lat_max!r})")

    def contains(self, point: GeoPoint) -> bool:
        """Whether the point lies inside the box, edges inclusive."""
        return (
            self.lon_min <= point.lon <= self.lon_max
            and self.lat_min <= point.lat <= self.lat_max
        )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.lon_min, self.lat_min, self.lon_max, self.lat_max)


@dataclass(frozen=True)
class GeoInfo:
    """What a recaller knows about one named location.

    ``center`` is always present; ``bbox`` and ``country`` are optional
    because many sources only provide a point. ``source_id`` carries an
    opaque upstream identifier (gazetteer row id, geocoder place id).
    """

    name: str
    center: GeoPoint
    country: str | None = None
    bbox: BoundingBox | None = None
    source_id: str | None = None


def haversine_km(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points, in kilometers.

    Uses the haversine formula on a sphere of radius ``EARTH_RADIUS_KM``.
    Symmetric, zero for identical points, and stable for antipodal pairs.
    """
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    # Rounding can push h a hair past 1 for antipodal points.
    h = min(1.0, max(0.0, h))
    return 2.0 * EARTH_RADIUS_KM * math.atan2(math.sqrt(h), math.sqrt(1.0 - h))


def bbox_centroid(box: BoundingBox) -> GeoPoint:
    """Arithmetic midpoint of the box edges, in degrees.

    This is the plain coordinate midpoint, not the spherical center of
    mass; the two differ at high latitudes but the midpoint is what the
    rest of the package (and its expected values) are defined against.
    """
    return GeoPoint(
        lat=(box.lat_min + box.lat_max) / 2.0,
        lon=(box.lon_min + box.lon_max) / 2.0,
    )


def bbox_area_km2(box: BoundingBox) -> float:
    """Surface area of the box on the sphere, in km^2.

    The box is a spherical zone slice, so the area is
    R^2 * (lon_max - lon_min in radians) * (sin lat_max - sin lat_min).
    Degenerate boxes have zero area.
    """
    dlam = math.radians(box.lon_max - box.lon_min)
    band = math.sin(math.radians(box.lat_max)) - math.sin(math.radians(box.lat_min))
    return EARTH_RADIUS_KM * EARTH_RADIUS_KM * dlam * band


def bbox_intersection(a: BoundingBox, b: BoundingBox) -> BoundingBox | None:
    """Overlap of two boxes, or None when they do not overlap.

    Touching edges or corners count as no overlap: the intersection must
    have strictly positive width and height. Commutative, and idempotent
    for boxes with positive area.
    """
    lon_lo = max(a.lon_min, b.lon_min)
    lon_hi = min(a.lon_max, b.lon_max)
    lat_lo = max(a.lat_min, b.lat_min)
    lat_hi = min(a.lat_max, b.lat_max)
    if lon_lo >= lon_hi or lat_lo >= lat_hi:
        return None
    return BoundingBox(lon_lo, lat_lo, lon_hi, lat_hi)


# --- canonical coordinate rendering -------------------------------------
#
# The textual protocol between the pipeline and a language model needs a
# single canonical way to print a coordinate: shortest representation
# that round-trips the float, padded to at least three decimal places,
# always positional (no exponent).


def format_coord(value: float) -> str:
    """Render one coordinate for prompt/output text.

    Shortest round-tripping decimal form, padded with zeros to a minimum
    of three decimal places. Falls back to fixed 9-decimal notation for
    magnitudes where repr() would switch to scientific notation.
    """
    _check_finite("coordinate", value)
    text = repr(float(value))
    if "e" in text or "E" in text:
        text = f"{value:.9f}"
    if "." not in text:
        text += "."
    whole, frac = text.split(".", 1)
    if len(frac) < 3:
        frac = frac.ljust(3, "0")
    return f"{whole}.{frac}"


def format_point(point: GeoPoint) -> str:
    """Canonical text form of a point: ``(lat, lon)``."""
    return f"({format_coord(point.lat)}, {format_coord(point.lon)})"


def format_bbox(box: BoundingBox) -> str:
    """Canonical text form of a box: ``(lon_min, lat_min, lon_max, lat_max)``."""
    parts = ", ".join(format_coord(v) for v in box.as_tuple())
    return f"({parts})"
