"""Load-cell chain model: bridge strain to 24-bit ADC counts to grams.

Mirrors the HX711-style signal path: a Wheatstone bridge produces counts
linear in the applied load, the converter clamps at its 24-bit rails, and
a calibration (tare offset + sensitivity) maps counts back to grams.
"""

from __future__ import annotations

import enum
import random
import statistics
from dataclasses import dataclass, replace

RAW_MAX = 2**23 - 1
RAW_MIN = -(2**23)

NOISE_COUNTS = 2  # uniform +/- jitter applied by simulate_bridge
WEIGHT_THRESHOLD_GRAMS = 5000
MIN_TARE_SAMPLES = 8


class SaturatedReading(ValueError):
    """Sample sits at an ADC rail; the true weight is unknown."""

class InsufficientSamples(ValueError):
    pass


class ChannelGain(enum.Enum):
    A128 = 128
    A64 = 64
    B32 = 32


@dataclass(frozen=True)
class Hx711Sample:
    raw: int
    channel_gain: ChannelGain = ChannelGain.A128

    def __post_init__(self):
        if not RAW_MIN <= self.raw <= RAW_MAX:
            raise ValueError(f"raw {self.raw} outside signed 24-bit range")

    @property
    def saturated(self) -> bool:
        return self.raw in (RAW_MIN, RAW_MAX)


@dataclass(frozen=True)
class Calibration:
    offset_counts: int = 0
    scale_counts_per_gram: float = 420.0

    def __post_init__(self):
        if not (self.scale_counts_per_gram > 0 and self.scale_counts_per_gram != float("inf")):
            raise ValueError("scale must be positive and finite")


@dataclass
class PayloadPolicy:
    threshold_grams: int = WEIGHT_THRESHOLD_GRAMS
    warn_state: bool = False


class Decision(enum.Enum):
    ACCEPT = "accept"
    REJECT_THRESHOLD = "reject_threshold"


def simulate_bridge(load_grams: float, cal: Calibration,
                    noise_seed: int | None = None,
                    rng: random.Random | None = None) -> Hx711Sample:
    """Counts the converter would report for a given load.

    Noise is a uniform integer in [-NOISE_COUNTS, +NOISE_COUNTS]; pass a
    seed (or an externally owned rng) for reproducible jitter, or neither
    for a noise-free reading.
    """
    if load_grams < 0:
        raise ValueError("load cannot be negative")
    counts = cal.offset_counts + cal.scale_counts_per_gram * load_grams
    if rng is None and noise_seed is not None:
        rng = random.Random(noise_seed)
    if rng is not None:
        counts += rng.randint(-NOISE_COUNTS, NOISE_COUNTS)
    raw = max(RAW_MIN, min(RAW_MAX, round(counts)))
    return Hx711Sample(raw=raw)


def raw_to_grams(sample: Hx711Sample, cal: Calibration) -> float:
    if sample.saturated:
        raise SaturatedReading(f"raw {sample.raw} at converter rail")
    return (sample.raw - cal.offset_counts) / cal.scale_counts_per_gram


def tare(samples, cal: Calibration) -> Calibration:
    """New calibration with the offset re-zeroed to the sample median."""
    raws = [s.raw for s in samples]
    if len(raws) < MIN_TARE_SAMPLES:
        raise InsufficientSamples(f"need >= {MIN_TARE_SAMPLES} samples, got {len(raws)}")
    offset = round(statistics.median(raws))
    return replace(cal, offset_counts=offset)


def accept_book(current_total_grams: float, book_grams: float,
                policy: PayloadPolicy) -> Decision:
    """Threshold gate: equal to the limit still fits, above it warns."""
    if current_total_grams < 0 or book_grams < 0:
        raise ValueError("weights cannot be negative")
    if current_total_grams + book_grams <= policy.threshold_grams:
        return Decision.ACCEPT
    policy.warn_state = True
    return Decision.REJECT_THRESHOLD
