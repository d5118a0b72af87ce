"""NMEA 0183 sentence emission and parsing (GGA and RMC).

Coordinates use the ddmm.mmmm convention; every emitted sentence carries
the XOR checksum and CR LF terminator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ChecksumMismatch(ValueError):
    pass

class MalformedField(ValueError):
    pass

class IllegalCharacter(ValueError):
    pass


def nmea_checksum(body: str) -> str:
    """Two uppercase hex digits: XOR over the characters between $ and *."""
    if "$" in body or "*" in body:
        raise IllegalCharacter("body must not contain '$' or '*'")
    acc = 0
    for ch in body.encode("ascii"):
        acc ^= ch
    return f"{acc:02X}"


def make_sentence(body: str) -> str:
    return f"${body}*{nmea_checksum(body)}\r\n"


def _split_checked(sentence: str) -> list[str]:
    line = sentence.strip()
    if not line.startswith("$") or "*" not in line:
        raise MalformedField("sentence must look like $...*hh")
    body, _, tail = line[1:].partition("*")
    if len(tail) != 2:
        raise MalformedField("checksum must be two hex digits")
    if nmea_checksum(body) != tail.upper():
        raise ChecksumMismatch(f"checksum {tail} does not match body")
    return body.split(",")


def _format_angle(value: float, degree_digits: int) -> str:
    total_minutes = round(abs(value) * 60 * 10000)
    degrees, frac = divmod(total_minutes, 60 * 10000)
    return f"{degrees:0{degree_digits}d}{frac / 10000:07.4f}"


def _parse_angle(text: str, hemi: str, positive: str, negative: str) -> float:
    if hemi not in (positive, negative):
        raise MalformedField(f"hemisphere {hemi!r}")
    try:
        dot = text.index(".")
    except ValueError:
        raise MalformedField(f"angle {text!r} lacks minutes") from None
    try:
        degrees = int(text[:dot - 2])
        minutes = float(text[dot - 2:])
    except ValueError:
        raise MalformedField(f"angle {text!r}") from None
    value = degrees + minutes / 60.0
    return -value if hemi == negative else value


def _utc_fields(utc_seconds: float) -> tuple[str, str]:
    day_seconds = utc_seconds % 86400
    hh = int(day_seconds // 3600)
    mm = int(day_seconds % 3600 // 60)
    ss = day_seconds % 60
    time_str = f"{hh:02d}{mm:02d}{ss:05.2f}"
    days = int(utc_seconds // 86400)
    # civil date from days since 1970-01-01 (proleptic Gregorian)
    era_day = days + 719468
    era = era_day // 146097
    doe = era_day - era * 146097
    yoe = (doe - doe // 1460 + doe // 36524 - doe // 146096) // 365
    year = yoe + era * 400
    doy = doe - (365 * yoe + yoe // 4 - yoe // 100)
    mp = (5 * doy + 2) // 153
    day = doy - (153 * mp + 2) // 5 + 1
    month = mp + 3 if mp < 10 else mp - 9
    year = year + (1 if month <= 2 else 0)
    return time_str, f"{day:02d}{month:02d}{year % 100:02d}"


def emit_gga(lat: float, lon: float, utc_seconds: float, sat_count: int,
             altitude_m: float = 0.0, hdop: float = 0.9) -> str:
    if not -90 <= lat <= 90 or not -180 <= lon <= 180:
        raise ValueError("lat/lon out of range")
    time_str, _ = _utc_fields(utc_seconds)
    body = ",".join([
        "GPGGA", time_str,
        _format_angle(lat, 2), "N" if lat >= 0 else "S",
        _format_angle(lon, 3), "E" if lon >= 0 else "W",
        "1", f"{sat_count:02d}", f"{hdop:.1f}",
        f"{altitude_m:.1f}", "M", "0.0", "M", "", "",
    ])
    return make_sentence(body)


def emit_rmc(lat: float, lon: float, utc_seconds: float,
             speed_mps: float = 0.0, course_deg: float = 0.0) -> str:
    if not -90 <= lat <= 90 or not -180 <= lon <= 180:
        raise ValueError("lat/lon out of range")
    time_str, date_str = _utc_fields(utc_seconds)
    knots = speed_mps * 3600.0 / 1852.0
    body = ",".join([
        "GPRMC", time_str, "A",
        _format_angle(lat, 2), "N" if lat >= 0 else "S",
        _format_angle(lon, 3), "E" if lon >= 0 else "W",
        f"{knots:.2f}", f"{course_deg % 360:.1f}", date_str, "", "", "A",
    ])
    return make_sentence(body)


@dataclass(frozen=True)
class GgaFix:
    lat: float
    lon: float
    altitude_m: float
    sat_count: int
    utc_seconds_of_day: float


def parse_gga(sentence: str) -> GgaFix:
    fields = _split_checked(sentence)
    if fields[0] != "GPGGA" or len(fields) < 15:
        raise MalformedField("not a GGA sentence")
    try:
        t = fields[1]
        utc = int(t[0:2]) * 3600 + int(t[2:4]) * 60 + float(t[4:])
        lat = _parse_angle(fields[2], fields[3], "N", "S")
        lon = _parse_angle(fields[4], fields[5], "E", "W")
        sats = int(fields[7])
        alt = float(fields[9])
    except (ValueError, IndexError) as exc:
        raise MalformedField(str(exc)) from None
    return GgaFix(lat, lon, alt, sats, utc)


@dataclass(frozen=True)
class RmcFix:
    lat: float
    lon: float
    speed_mps: float
    course_deg: float
    utc_seconds_of_day: float


def parse_rmc(sentence: str) -> RmcFix:
    fields = _split_checked(sentence)
    if fields[0] != "GPRMC" or len(fields) < 12:
        raise MalformedField("not an RMC sentence")
    try:
        t = fields[1]
        utc = int(t[0:2]) * 3600 + int(t[2:4]) * 60 + float(t[4:])
        lat = _parse_angle(fields[3], fields[4], "N", "S")
        lon = _parse_angle(fields[5], fields[6], "E", "W")
        speed = float(fields[7]) * 1852.0 / 3600.0
        course = float(fields[8])
    except (ValueError, IndexError) as exc:
        raise MalformedField(str(exc)) from None
    return RmcFix(lat, lon, speed, course, utc)


EARTH_RADIUS_M = 6_371_000.0


@dataclass(frozen=True)
class SceneAnchor:
    """Equirectangular mapping between local scene meters and lat/lon."""

    lat: float
    lon: float

    def to_latlon(self, x_m: float, y_m: float) -> tuple[float, float]:
        lat = self.lat + math.degrees(y_m / EARTH_RADIUS_M)
        lon = self.lon + math.degrees(x_m / (EARTH_RADIUS_M * math.cos(math.radians(self.lat))))
        return lat, lon

    def to_scene(self, lat: float, lon: float) -> tuple[float, float]:
        y = math.radians(lat - self.lat) * EARTH_RADIUS_M
        x = math.radians(lon - self.lon) * EARTH_RADIUS_M * math.cos(math.radians(self.lat))
        return x, y
