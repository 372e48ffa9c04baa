"""Circular local binary patterns over the enhanced spectrogram.

Each interior cell gets a P-bit code: bit p is set when the value sampled at
angle 2*pi*p/P (counter-clockwise from the +time axis) and distance R exceeds
the center strictly. Off-grid sample points use bilinear interpolation. Codes
with at most two circular bit transitions ("uniform") keep individual histogram
bins; all the rest share a single bin. Features are per-region histograms of
the code image, concatenated row-major over a regions_t x regions_f grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError
from .spectrogram import Spectrogram

_SNAP = 1e-8   # sample offsets this close to a grid point are treated as on-grid


@dataclass(frozen=True)
class LBPConfig:
    points: int = 8
    radius: float = 1.0
    uniform: bool = True
    regions_t: int = 2
    regions_f: int = 2
    normalize_histograms: bool = True

    def __post_init__(self) -> None:
        if self.points < 4:
            raise ConfigError("need at least 4 sampling points")
        if self.radius < 1.0:
            raise ConfigError("radius must be at least 1")
        if self.regions_t < 1 or self.regions_f < 1:
            raise ConfigError("region grid must be at least 1x1")

    @property
    def border(self) -> int:
        return int(math.ceil(self.radius))


def _sample_offsets(points: int, radius: float) -> list[tuple[float, float]]:
    offsets = []
    for p in range(points):
        angle = 2.0 * math.pi * p / points
        dt = radius * math.cos(angle)
        di = radius * math.sin(angle)
        if abs(dt - round(dt)) < _SNAP:
            dt = float(round(dt))
        if abs(di - round(di)) < _SNAP:
            di = float(round(di))
        offsets.append((dt, di))
    return offsets


def _bilinear(values: np.ndarray, x: float, y: float) -> float:
    x0, y0 = math.floor(x), math.floor(y)
    fx, fy = x - x0, y - y0
    if fx == 0.0 and fy == 0.0:
        return float(values[x0, y0])
    x1 = min(x0 + 1, values.shape[0] - 1)
    y1 = min(y0 + 1, values.shape[1] - 1)
    return float((1 - fx) * (1 - fy) * values[x0, y0]
                 + (1 - fx) * fy * values[x0, y1]
                 + fx * (1 - fy) * values[x1, y0]
                 + fx * fy * values[x1, y1])


def lbp_label(values: np.ndarray, x: int, y: int, cfg: LBPConfig = LBPConfig()) -> int:
    """Raw code of the cell at (x, y); reference per-cell implementation."""
    values = np.asarray(values, dtype=np.float64)
    b = cfg.border
    if not (b <= x < values.shape[0] - b and b <= y < values.shape[1] - b):
        raise ConfigError(f"cell ({x}, {y}) too close to the border for radius {cfg.radius}")
    center = values[x, y]
    code = 0
    for p, (dt, di) in enumerate(_sample_offsets(cfg.points, cfg.radius)):
        if _bilinear(values, x + dt, y + di) > center:
            code |= 1 << p
    return code


def transition_count(code: int, points: int) -> int:
    """Number of 0/1 changes around the circular bit sequence (wrap included)."""
    if not 0 <= code < (1 << points):
        raise ConfigError(f"code {code} out of range for {points} bits")
    count = 0
    for p in range(points):
        bit = (code >> p) & 1
        nxt = (code >> ((p + 1) % points)) & 1
        count += bit != nxt
    return count


@dataclass(frozen=True)
class UniformTable:
    """Mapping from raw codes to compact bins: one bin per uniform code,
    ordered by code value, plus a final shared bin for everything else."""

    table: np.ndarray
    bin_count: int
    points: int


def build_u2_table(points: int) -> UniformTable:
    if points < 4:
        raise ConfigError("need at least 4 sampling points")
    n = 1 << points
    table = np.empty(n, dtype=np.int64)
    next_bin = 0
    for code in range(n):
        if transition_count(code, points) <= 2:
            table[code] = next_bin
            next_bin += 1
        else:
            table[code] = -1
    table[table == -1] = next_bin
    return UniformTable(table=table, bin_count=next_bin + 1, points=points)


@dataclass
class LBPImage:
    """Code matrix over the interior cells (border of width ceil(R) excluded)."""

    labels: np.ndarray
    n_bins: int
    points: int
    mapped: bool          # True when u2-reduced, False for raw codes

    @property
    def uniform_bin_count(self) -> int:
        if not self.mapped:
            raise ConfigError("raw code image has no uniform bins")
        return self.n_bins - 1


def lbp_image(spec: Spectrogram, cfg: LBPConfig = LBPConfig()) -> LBPImage:
    """Label every interior cell; vectorized equivalent of lbp_label per cell."""
    values = spec.values
    b = cfg.border
    n_t, n_i = values.shape
    h, w = n_t - 2 * b, n_i - 2 * b
    if h <= 0 or w <= 0:
        raise DataError(f"spectrogram {values.shape} too small for radius {cfg.radius}")
    center = values[b:b + h, b:b + w]
    codes = np.zeros((h, w), dtype=np.int64)
    for p, (dt, di) in enumerate(_sample_offsets(cfg.points, cfg.radius)):
        x0, y0 = math.floor(dt), math.floor(di)
        fx, fy = dt - x0, di - y0

        def plane(sx: int, sy: int) -> np.ndarray:
            return values[b + sx:b + sx + h, b + sy:b + sy + w]

        if fx == 0.0 and fy == 0.0:
            sampled = plane(x0, y0)
        else:
            sampled = ((1 - fx) * (1 - fy) * plane(x0, y0)
                       + (1 - fx) * fy * plane(x0, y0 + 1)
                       + fx * (1 - fy) * plane(x0 + 1, y0)
                       + fx * fy * plane(x0 + 1, y0 + 1))
        codes |= (sampled > center).astype(np.int64) << p

    if cfg.uniform:
        u2 = build_u2_table(cfg.points)
        return LBPImage(u2.table[codes], u2.bin_count, cfg.points, mapped=True)
    return LBPImage(codes, 1 << cfg.points, cfg.points, mapped=False)


@dataclass
class LBPFeature:
    """Concatenated per-region histograms, regions ordered row-major in (t, f)."""

    vector: np.ndarray
    bins_per_region: int
    regions_t: int
    regions_f: int


def regional_histograms(lbl: LBPImage, cfg: LBPConfig = LBPConfig()) -> LBPFeature:
    """Split the code image into regions_t x regions_f rectangles (remainder
    cells go to the last region along each axis) and histogram each region."""
    h, w = lbl.labels.shape
    if cfg.regions_t > h or cfg.regions_f > w:
        raise ConfigError(
            f"{cfg.regions_t}x{cfg.regions_f} regions do not fit a {h}x{w} code image"
        )
    step_t = h // cfg.regions_t
    step_f = w // cfg.regions_f
    chunks = []
    for rt in range(cfg.regions_t):
        t0 = rt * step_t
        t1 = (rt + 1) * step_t if rt < cfg.regions_t - 1 else h
        for rf in range(cfg.regions_f):
            f0 = rf * step_f
            f1 = (rf + 1) * step_f if rf < cfg.regions_f - 1 else w
            region = lbl.labels[t0:t1, f0:f1]
            hist = np.bincount(region.ravel(), minlength=lbl.n_bins).astype(np.float64)
            if cfg.normalize_histograms and region.size > 0:
                hist /= region.size
            chunks.append(hist)
    return LBPFeature(np.concatenate(chunks), lbl.n_bins, cfg.regions_t, cfg.regions_f)


def uniform_fraction(lbl: LBPImage) -> float:
    """Fraction of cells whose code is uniform (<= 2 circular transitions)."""
    if lbl.mapped:
        return float(np.mean(lbl.labels < lbl.uniform_bin_count))
    u2 = build_u2_table(lbl.points)
    mapped = u2.table[lbl.labels]
    return float(np.mean(mapped < u2.bin_count - 1))
