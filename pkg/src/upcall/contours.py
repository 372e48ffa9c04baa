"""Contour branch: binarize the enhanced spectrogram, find 8-connected objects,
trace their exterior boundaries, filter/merge them, and reduce the chosen
candidate to a 7-component geometric feature vector.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError
from .spectrogram import Spectrogram

# Moore neighborhood in clockwise order, (dt, di) with t = frame row, i = bin
# column: N, NE, E, SE, S, SW, W, NW. "North" is toward smaller t.
_CLOCKWISE = ((-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1))
_CW_INDEX = {d: k for k, d in enumerate(_CLOCKWISE)}

NO_UPCALL = "no_upcall"
SINGLE_CANDIDATE = "single_candidate"
MERGED_CANDIDATE = "merged_candidate"


@dataclass
class BinaryImage:
    """Boolean mask aligned to a spectrogram, with its axis calibration."""

    bits: np.ndarray
    bin_freqs_hz: np.ndarray
    hop_s: float

    def __post_init__(self) -> None:
        self.bits = np.asarray(self.bits, dtype=bool)
        if self.bits.ndim != 2:
            raise DataError("binary image must be 2-D")
        if self.bits.shape[1] != len(self.bin_freqs_hz):
            raise DataError("bin axis does not match bits")


@dataclass
class Blob:
    """A connected set of on-pixels and its measured geometry.

    `label_components` fills only pixels/bbox/area; `measure_blob` completes the
    rest. Merged blobs may hold several formerly separate components, in which
    case `boundary` concatenates the component tours and `perimeter_px` adds up.
    """

    pixels: frozenset
    bbox: tuple[int, int, int, int]          # (t_min, t_max, i_min, i_max)
    area_px: int
    boundary: list[tuple[int, int]] | None = None
    perimeter_px: float | None = None
    min_freq_hz: float | None = None
    max_freq_hz: float | None = None
    height_hz: float | None = None
    width_s: float | None = None
    orientation_deg: float | None = None

    @property
    def measured(self) -> bool:
        return self.perimeter_px is not None


def binarize(spec: Spectrogram, threshold: float) -> BinaryImage:
    """bit = (cell > threshold)."""
    return BinaryImage(spec.values > threshold, spec.bin_freqs_hz.copy(),
                       spec.params.hop_s)


def _bbox(pixels) -> tuple[int, int, int, int]:
    ts = [p[0] for p in pixels]
    bs = [p[1] for p in pixels]
    return (min(ts), max(ts), min(bs), max(bs))


def label_components(img: BinaryImage) -> list[Blob]:
    """Partition on-pixels into maximal 8-connected components.

    Returned blobs carry pixels, bbox and area only, ordered by (t_min, i_min).
    """
    bits = img.bits
    n_t, n_i = bits.shape
    seen = np.zeros_like(bits, dtype=bool)
    blobs = []
    for t0, i0 in zip(*np.nonzero(bits)):
        if seen[t0, i0]:
            continue
        queue = deque([(int(t0), int(i0))])
        seen[t0, i0] = True
        comp = []
        while queue:
            t, i = queue.popleft()
            comp.append((t, i))
            for dt, di in _CLOCKWISE:
                nt, ni = t + dt, i + di
                if 0 <= nt < n_t and 0 <= ni < n_i and bits[nt, ni] and not seen[nt, ni]:
                    seen[nt, ni] = True
                    queue.append((nt, ni))
        blobs.append(Blob(pixels=frozenset(comp), bbox=_bbox(comp), area_px=len(comp)))
    blobs.sort(key=lambda b: (b.bbox[0], b.bbox[2]))
    return blobs


def _trace(member, start) -> tuple[list[tuple[int, int]], int]:
    """Clockwise exterior boundary walk from the topmost-then-leftmost pixel.

    `member(cell)` tests blob membership. Follows the Moore neighborhood; the
    backtrack cell is the background cell examined just before each boundary
    pixel. Terminates when the start pixel is re-entered from its original
    entry direction, or (for shapes a single pixel wide, where that re-entry
    never happens) when the first move repeats, which closes the same tour.
    Returns (tour, unit steps in the closed tour).
    """
    t0, i0 = start
    c0 = (t0, i0 - 1)              # virtual west backtrack of the scan start
    tour = [start]
    p, c = start, c0
    steps = 0
    first_state = None
    limit = 8 * 1_000_000

    while True:
        # scan the 8 neighbors of p clockwise, starting at the backtrack cell
        k0 = _CW_INDEX[(c[0] - p[0], c[1] - p[1])]
        nxt = None
        prev_bg = c
        for k in range(1, 9):
            cand = (p[0] + _CLOCKWISE[(k0 + k) % 8][0],
                    p[1] + _CLOCKWISE[(k0 + k) % 8][1])
            if member(cand):
                nxt = cand
                break
            prev_bg = cand
        if nxt is None:            # isolated pixel: zero-step tour
            return tour, 0
        if nxt == start and prev_bg == c0:
            steps += 1
            return tour, steps
        if first_state is not None and (nxt, prev_bg) == first_state:
            tour.pop()             # previous move already closed into start
            return tour, steps
        steps += 1
        tour.append(nxt)
        if first_state is None:
            first_state = (nxt, prev_bg)
        p, c = nxt, prev_bg
        if steps > limit:
            raise RuntimeError("boundary trace failed to close")


def trace_boundary(img: BinaryImage, blob: Blob) -> list[tuple[int, int]]:
    """Ordered exterior boundary of one connected blob (see _trace)."""
    if not blob.pixels:
        raise DataError("cannot trace an empty blob")
    pixels = blob.pixels
    start = min(pixels)
    tour, _ = _trace(pixels.__contains__, start)
    return tour


def _orientation_deg(pixels) -> float:
    """Principal-axis angle from second central moments, in pixel coordinates.

    0 deg = along the time axis, +45 deg = rising diagonal; range (-90, 90].
    A single pixel has no axis and maps to 0.
    """
    ts = np.array([p[0] for p in pixels], dtype=np.float64)
    bs = np.array([p[1] for p in pixels], dtype=np.float64)
    mu20 = np.mean((ts - ts.mean()) ** 2)
    mu02 = np.mean((bs - bs.mean()) ** 2)
    mu11 = np.mean((ts - ts.mean()) * (bs - bs.mean()))
    if mu20 == 0.0 and mu02 == 0.0 and mu11 == 0.0:
        return 0.0
    return math.degrees(0.5 * math.atan2(2.0 * mu11, mu20 - mu02))


def _measure(pixels, bin_freqs_hz, hop_s) -> Blob:
    """Measure a pixel set that may contain several disconnected parts."""
    t_min, t_max, i_min, i_max = _bbox(pixels)
    # connected parts within the set (already maximal for label_components output)
    remaining = set(pixels)
    boundary: list[tuple[int, int]] = []
    perimeter = 0.0
    parts = []
    while remaining:
        seed = min(remaining)
        queue = deque([seed])
        comp = {seed}
        remaining.discard(seed)
        while queue:
            t, i = queue.popleft()
            for dt, di in _CLOCKWISE:
                cand = (t + dt, i + di)
                if cand in remaining:
                    remaining.discard(cand)
                    comp.add(cand)
                    queue.append(cand)
        parts.append(comp)
    parts.sort(key=lambda comp: min(comp))
    for comp in parts:
        tour, steps = _trace(comp.__contains__, min(comp))
        boundary.extend(tour)
        perimeter += steps
    return Blob(
        pixels=frozenset(pixels),
        bbox=(t_min, t_max, i_min, i_max),
        area_px=len(pixels),
        boundary=boundary,
        perimeter_px=perimeter,
        min_freq_hz=float(bin_freqs_hz[i_min]),
        max_freq_hz=float(bin_freqs_hz[i_max]),
        height_hz=float(bin_freqs_hz[i_max] - bin_freqs_hz[i_min]),
        width_s=(t_max - t_min + 1) * hop_s,
        orientation_deg=_orientation_deg(pixels),
    )


def measure_blob(img: BinaryImage, blob: Blob) -> Blob:
    """Complete a labeled blob with boundary, perimeter and calibrated geometry."""
    return _measure(blob.pixels, img.bin_freqs_hz, img.hop_s)


@dataclass(frozen=True)
class MergePolicy:
    min_width_s: float = 0.3
    max_width_s: float = 2.0
    min_height_hz: float = 40.0
    max_height_hz: float = 300.0
    max_time_gap_s: float = 0.2
    max_freq_gap_hz: float = 30.0

    def __post_init__(self) -> None:
        if not (self.min_width_s < self.max_width_s
                and self.min_height_hz < self.max_height_hz):
            raise ConfigError("size minima must be below maxima")
        if self.max_time_gap_s < 0 or self.max_freq_gap_hz < 0:
            raise ConfigError("gaps must be non-negative")


def filter_blobs(blobs: list[Blob], policy: MergePolicy) -> list[Blob]:
    """Keep blobs whose width and height fall inside the policy bounds."""
    kept = []
    for b in blobs:
        if not b.measured:
            raise DataError("filter_blobs needs measured blobs")
        if (policy.min_width_s <= b.width_s <= policy.max_width_s
                and policy.min_height_hz <= b.height_hz <= policy.max_height_hz):
            kept.append(b)
    return kept


def _gaps(a: Blob, b: Blob) -> tuple[float, float]:
    """Bounding-box gaps as nearest-edge distances in seconds/Hz (bin-center
    coordinates); overlapping extents count as zero gap."""
    at0, at1, ai0, ai1 = a.bbox
    bt0, bt1, bi0, bi1 = b.bbox
    hop_s = a.width_s / (at1 - at0 + 1)
    if bt0 > at1:
        time_gap_s = (bt0 - at1) * hop_s
    elif at0 > bt1:
        time_gap_s = (at0 - bt1) * hop_s
    else:
        time_gap_s = 0.0
    if bi0 > ai1:
        freq_gap_hz = b.min_freq_hz - a.max_freq_hz
    elif ai0 > bi1:
        freq_gap_hz = a.min_freq_hz - b.max_freq_hz
    else:
        freq_gap_hz = 0.0
    return time_gap_s, freq_gap_hz


def merge_blobs(blobs: list[Blob], policy: MergePolicy) -> list[Blob]:
    """Transitively merge blobs whose bbox gaps fit the policy.

    A merged blob is the pixel union; its boundary list concatenates the parts'
    tours (parts were never 8-adjacent) and its other properties are recomputed.
    """
    n = len(blobs)
    if n <= 1:
        return list(blobs)
    for b in blobs:
        if not b.measured:
            raise DataError("merge_blobs needs measured blobs")
    parent = list(range(n))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for a in range(n):
        for b in range(a + 1, n):
            t_gap, f_gap = _gaps(blobs[a], blobs[b])
            if t_gap <= policy.max_time_gap_s and f_gap <= policy.max_freq_gap_hz:
                parent[find(a)] = find(b)

    groups: dict[int, list[Blob]] = {}
    for k in range(n):
        groups.setdefault(find(k), []).append(blobs[k])
    hop_s = blobs[0].width_s / (blobs[0].bbox[1] - blobs[0].bbox[0] + 1)

    merged = []
    for group in groups.values():
        if len(group) == 1:
            merged.append(group[0])
            continue
        pixels = frozenset().union(*(g.pixels for g in group))
        group_sorted = sorted(group, key=lambda g: (g.bbox[0], g.bbox[2]))
        t_min = min(g.bbox[0] for g in group)
        t_max = max(g.bbox[1] for g in group)
        i_min = min(g.bbox[2] for g in group)
        i_max = max(g.bbox[3] for g in group)
        boundary = []
        for g in group_sorted:
            boundary.extend(g.boundary or [])
        min_f = min(g.min_freq_hz for g in group)
        max_f = max(g.max_freq_hz for g in group)
        merged.append(Blob(
            pixels=pixels,
            bbox=(t_min, t_max, i_min, i_max),
            area_px=len(pixels),
            boundary=boundary,
            perimeter_px=sum(g.perimeter_px for g in group),
            min_freq_hz=min_f,
            max_freq_hz=max_f,
            height_hz=max_f - min_f,
            width_s=(t_max - t_min + 1) * hop_s,
            orientation_deg=_orientation_deg(pixels),
        ))
    merged.sort(key=lambda b: (b.bbox[0], b.bbox[2]))
    return merged


@dataclass(frozen=True)
class TFP2:
    """The 7 contour features, in their fixed output order."""

    min_freq_hz: float
    max_freq_hz: float
    freq_band_hz: float
    perimeter_px: float
    area_px: float
    orientation_deg: float
    duration_s: float

    def vector(self) -> np.ndarray:
        return np.array([self.min_freq_hz, self.max_freq_hz, self.freq_band_hz,
                         self.perimeter_px, self.area_px, self.orientation_deg,
                         self.duration_s], dtype=np.float64)


TFP2_NAMES = ("min_freq_hz", "max_freq_hz", "freq_band_hz", "perimeter_px",
              "area_px", "orientation_deg", "duration_s")


def extract_tfp2(blob: Blob) -> TFP2:
    if not blob.measured:
        raise DataError("extract_tfp2 needs a measured blob")
    return TFP2(blob.min_freq_hz, blob.max_freq_hz, blob.height_hz,
                float(blob.perimeter_px), float(blob.area_px),
                blob.orientation_deg, blob.width_s)


@dataclass(frozen=True)
class CandidateOutcome:
    kind: str                      # NO_UPCALL | SINGLE_CANDIDATE | MERGED_CANDIDATE
    candidate: Blob | None

    def __post_init__(self) -> None:
        if (self.kind == NO_UPCALL) != (self.candidate is None):
            raise ConfigError("candidate must be present iff an object was found")


def detect_candidate(spec: Spectrogram, threshold: float,
                     policy: MergePolicy = MergePolicy()) -> CandidateOutcome:
    """Run binarize -> label -> filter -> merge and apply the three-case rule:
    no surviving object -> no_upcall; exactly one object found -> it is the
    candidate; two or more -> merge what fits and keep the largest by area.
    """
    img = binarize(spec, threshold)
    blobs = [measure_blob(img, b) for b in label_components(img)]
    blobs = filter_blobs(blobs, policy)
    if not blobs:
        return CandidateOutcome(NO_UPCALL, None)
    if len(blobs) == 1:
        return CandidateOutcome(SINGLE_CANDIDATE, blobs[0])
    merged = merge_blobs(blobs, policy)
    best = max(merged, key=lambda b: b.area_px)
    return CandidateOutcome(MERGED_CANDIDATE, best)
