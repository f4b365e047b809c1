"""Simulated power side channel.

Clocking a sequential circuit draws an average supply current that grows
with the number of state-register flip-flops that toggle.  This module
models that leakage analytically: a calibration table maps average-current
bands to register Hamming distances, a noise model perturbs what the
"measurement" reports, and ``infer_hd`` turns a current reading back into a
distance estimate with a one-band uncertainty window.

Two hard properties hold under every noise model: a zero-distance clock
(self-loop) always lands in the zero band, and a nonzero distance never
reads back as zero.  Everything downstream leans on both.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

NOISE_KINDS = ("exact", "table3", "gaussian")

# Error distribution of the banded readout measured against ground truth:
# probability that the inferred band is off by 0 / +1 / -1.
BAND_ERROR_P0 = 0.852
BAND_ERROR_PLUS1 = 0.120
BAND_ERROR_MINUS1 = 0.028


@dataclass(frozen=True)
class NoiseModel:
    """How synthesized current readings deviate from the clean band value."""

    kind: str
    sigma: float = 10.0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}; expected one of {NOISE_KINDS}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")

    @classmethod
    def exact(cls) -> "NoiseModel":
        return cls(kind="exact")

    @classmethod
    def table3(cls) -> "NoiseModel":
        return cls(kind="table3")

    @classmethod
    def gaussian(cls, sigma: float = 10.0) -> "NoiseModel":
        return cls(kind="gaussian", sigma=sigma)


@dataclass(frozen=True)
class InferredHd:
    """A banded distance estimate: the center band plus a +/-1 window.

    ``lo``/``hi`` bound the actual distance given the one-band error budget;
    ``hi`` still needs clamping to the register width by the constraint
    builder.  A zero center is exact — self-loops are always identified.
    """

    center: int
    exact: bool
    lo: int
    hi: int


@dataclass(frozen=True)
class CalibrationTable:
    """Average-current bands ``[lo, hi) -> distance center``.

    Bands must start at 0, be contiguous, end in an unbounded band, and
    carry consecutive centers 0, 1, 2, ...  Synthesis emits a band's
    midpoint; distances beyond the top band extrapolate by the width of the
    last finite band.
    """

    bands: tuple[tuple[float, float, int], ...]

    def __post_init__(self):
        if len(self.bands) < 2:
            raise ValueError("calibration table needs at least two bands")
        if self.bands[0][0] != 0:
            raise ValueError("first band must start at 0")
        if not math.isinf(self.bands[-1][1]):
            raise ValueError("last band must be unbounded")
        for k, (lo, hi, center) in enumerate(self.bands):
            if not lo < hi:
                raise ValueError(f"band {k} is empty: [{lo}, {hi})")
            if center != k:
                raise ValueError(f"band {k} must carry center {k}, got {center}")
            if k + 1 < len(self.bands) and hi != self.bands[k + 1][0]:
                raise ValueError(f"bands {k} and {k + 1} are not contiguous")

    @classmethod
    def default(cls) -> "CalibrationTable":
        return cls(
            bands=(
                (0.0, 40.0, 0),
                (40.0, 95.0, 1),
                (95.0, 140.0, 2),
                (140.0, 170.0, 3),
                (170.0, 205.0, 4),
                (205.0, 230.0, 5),
                (230.0, math.inf, 6),
            )
        )

    @classmethod
    def from_text(cls, text: str) -> "CalibrationTable":
        """Parse ``lo hi center`` triples, one band per line, '#' comments."""
        bands = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'lo hi center', got {line!r}")
            try:
                lo = float(parts[0])
                hi = float(parts[1])
                center = int(parts[2])
            except ValueError:
                raise ValueError(f"line {lineno}: bad band numbers in {line!r}") from None
            bands.append((lo, hi, center))
        if not bands:
            raise ValueError("calibration text contains no bands")
        return cls(bands=tuple(sorted(bands)))

    @classmethod
    def load(cls, path) -> "CalibrationTable":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    @property
    def top_center(self) -> int:
        return self.bands[-1][2]

    def band_center(self, current: float) -> int:
        """The band a current reading falls into."""
        if current < 0 or math.isnan(current):
            raise ValueError(f"current must be >= 0, got {current}")
        for lo, hi, center in self.bands:
            if lo <= current < hi:
                return center
        raise AssertionError("bands cover [0, inf)")  # unreachable by construction

    def midpoint(self, hd: int) -> float:
        """Clean synthesis anchor for a distance: band midpoint, extrapolated
        past the top band by the last finite band's width."""
        if hd < 0:
            raise ValueError(f"hd must be >= 0, got {hd}")
        if hd < self.top_center:
            lo, hi, _ = self.bands[hd]
            return (lo + hi) / 2.0
        top_lo = self.bands[-1][0]
        step = self.bands[-2][1] - self.bands[-2][0]
        return top_lo + step * (hd - self.top_center)


DEFAULT_TABLE = CalibrationTable.default()


def sample_error(hd: int, model: NoiseModel, rng: random.Random,
                 table: CalibrationTable = DEFAULT_TABLE) -> int:
    """Banded-readout error for one clocking at actual distance ``hd``.

    Zero distance is reported exactly under every model, and a nonzero
    distance never collapses to zero (the reported band is floored at 1).
    """
    if hd < 0:
        raise ValueError(f"hd must be >= 0, got {hd}")
    if hd == 0 or model.kind == "exact":
        return 0
    if model.kind == "table3":
        u = rng.random()
        if u < BAND_ERROR_P0:
            err = 0
        elif u < BAND_ERROR_P0 + BAND_ERROR_PLUS1:
            err = 1
        else:
            err = -1
        return max(1, hd + err) - hd
    return table.band_center(synthesize_current(hd, model, rng, table)) - hd


def synthesize_current(hd: int, model: NoiseModel, rng: random.Random,
                       table: CalibrationTable = DEFAULT_TABLE) -> float:
    """Average supply current for one clocking at actual distance ``hd``.

    ``exact`` emits the band midpoint; ``table3`` shifts the band first and
    emits the shifted band's midpoint; ``gaussian`` adds N(0, sigma) to the
    midpoint, truncated at 0.  Gaussian samples are additionally kept on the
    right side of the zero band's upper edge so the two channel properties
    hold: hd 0 stays inside the zero band, nonzero hd stays out of it.
    """
    if hd < 0:
        raise ValueError(f"hd must be >= 0, got {hd}")
    if model.kind == "exact":
        return table.midpoint(hd)
    if model.kind == "table3":
        return table.midpoint(hd + sample_error(hd, model, rng, table))
    value = table.midpoint(hd) + rng.gauss(0.0, model.sigma)
    zero_edge = table.bands[0][1]
    if hd == 0:
        return min(max(value, 0.0), math.nextafter(zero_edge, 0.0))
    return max(value, zero_edge)


def infer_hd(current: float, table: CalibrationTable = DEFAULT_TABLE) -> InferredHd:
    """Turn a current reading into a banded distance estimate."""
    center = table.band_center(current)
    if center == 0:
        return InferredHd(center=0, exact=True, lo=0, hi=0)
    return InferredHd(center=center, exact=False, lo=max(1, center - 1), hi=center + 1)


def pearson(xs, ys) -> float:
    """Pearson correlation coefficient of two equal-length sequences."""
    xs = list(xs)
    ys = list(ys)
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 2:
        raise ValueError("need at least two samples")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    syy = math.fsum((y - my) ** 2 for y in ys)
    if sxx == 0 or syy == 0:
        raise ValueError("correlation undefined for constant sequence")
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / math.sqrt(sxx * syy)
