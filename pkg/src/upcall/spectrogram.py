"""Short-time spectral analysis plus the per-band enhancement steps.

The enhancement chain is: z-score each frequency band over time (flattens
long-lasting narrowband interference, emphasizes brief events), then hard-limit
the result between a floor and a ceiling to suppress background and outliers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError

LOG_EPS = 1e-12     # added to magnitudes before the dB conversion
SIGMA_EPS = 1e-12   # bands with time-std below this are treated as constant

WINDOWS = ("hann", "rectangular")


@dataclass(frozen=True)
class SpectrogramParams:
    fft_size: int = 256
    hop_samples: int = 51
    window: str = "hann"
    sample_rate_hz: int = 2000

    def __post_init__(self) -> None:
        if self.fft_size <= 0 or self.hop_samples <= 0:
            raise ConfigError("fft_size and hop_samples must be positive")
        if self.hop_samples > self.fft_size:
            raise ConfigError("hop_samples must not exceed fft_size")
        if self.window not in WINDOWS:
            raise ConfigError(f"window must be one of {WINDOWS}")

    @property
    def freq_resolution_hz(self) -> float:
        return self.sample_rate_hz / self.fft_size

    @property
    def hop_s(self) -> float:
        return self.hop_samples / self.sample_rate_hz


@dataclass
class Spectrogram:
    """Real matrix indexed [frame, bin] with explicit axis calibration.

    After `stft` the cells are log magnitudes in dB; after `normalize` they are
    dimensionless z-units. `bin_freqs_hz` survives band cropping, so bin k of a
    cropped spectrogram still knows its true center frequency.
    """

    values: np.ndarray
    bin_freqs_hz: np.ndarray
    params: SpectrogramParams = field(default_factory=SpectrogramParams)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        self.bin_freqs_hz = np.asarray(self.bin_freqs_hz, dtype=np.float64)
        if self.values.ndim != 2:
            raise DataError("spectrogram values must be 2-D [frame, bin]")
        if self.values.shape[1] != self.bin_freqs_hz.size:
            raise DataError("bin axis does not match values")
        if not np.all(np.isfinite(self.values)):
            raise DataError("spectrogram contains non-finite values")

    @property
    def n_frames(self) -> int:
        return self.values.shape[0]

    @property
    def n_bins(self) -> int:
        return self.values.shape[1]

    def frame_time_s(self, t: int) -> float:
        return t * self.params.hop_s

    @property
    def frame_times_s(self) -> np.ndarray:
        return np.arange(self.n_frames) * self.params.hop_s


def stft(audio, params: SpectrogramParams | None = None) -> Spectrogram:
    """Windowed FFT magnitudes in dB; one frame per full window.

    Cell value = 20*log10(|X_k| + eps) for bins 0..fft_size/2.
    """
    if params is None:
        params = SpectrogramParams(sample_rate_hz=audio.sample_rate_hz)
    if params.sample_rate_hz != audio.sample_rate_hz:
        raise ConfigError("params.sample_rate_hz does not match the audio")
    x = audio.samples
    n, hop = params.fft_size, params.hop_samples
    if len(x) < n:
        raise DataError(f"audio shorter than one window ({len(x)} < {n} samples)")
    win = np.hanning(n) if params.window == "hann" else np.ones(n)
    starts = np.arange(0, len(x) - n + 1, hop)
    frames = np.stack([x[s:s + n] * win for s in starts])
    mags = np.abs(np.fft.rfft(frames, axis=1))
    values = 20.0 * np.log10(mags + LOG_EPS)
    freqs = np.arange(n // 2 + 1) * params.freq_resolution_hz
    return Spectrogram(values, freqs, params)


def normalize(spec: Spectrogram) -> Spectrogram:
    """Z-score each frequency band over time (population std).

    Bands whose std falls below SIGMA_EPS map to all zeros.
    """
    if spec.n_frames < 2:
        raise DataError("normalization needs at least 2 frames")
    mu = spec.values.mean(axis=0)
    sigma = spec.values.std(axis=0)
    out = np.zeros_like(spec.values)
    ok = sigma >= SIGMA_EPS
    out[:, ok] = (spec.values[:, ok] - mu[ok]) / sigma[ok]
    return Spectrogram(out, spec.bin_freqs_hz.copy(), spec.params)


@dataclass(frozen=True)
class EqualizationBounds:
    floor: float = 0.5
    ceiling: float = 3.0

    def __post_init__(self) -> None:
        if not self.floor < self.ceiling:
            raise ConfigError("floor must be below ceiling")


def equalize(spec: Spectrogram, bounds: EqualizationBounds) -> Spectrogram:
    """Hard-limit every cell into [floor, ceiling]."""
    out = np.clip(spec.values, bounds.floor, bounds.ceiling)
    return Spectrogram(out, spec.bin_freqs_hz.copy(), spec.params)


def bandpass_crop(spec: Spectrogram, lo_hz: float, hi_hz: float) -> Spectrogram:
    """Keep bins whose center frequency lies in [lo_hz, hi_hz]; calibration kept."""
    nyquist = spec.params.sample_rate_hz / 2.0
    if not (0.0 <= lo_hz < hi_hz <= nyquist):
        raise ConfigError(f"invalid band [{lo_hz}, {hi_hz}] for Nyquist {nyquist}")
    mask = (spec.bin_freqs_hz >= lo_hz) & (spec.bin_freqs_hz <= hi_hz)
    if not mask.any():
        raise ConfigError(f"no spectrogram bins inside [{lo_hz}, {hi_hz}] Hz")
    return Spectrogram(spec.values[:, mask], spec.bin_freqs_hz[mask], spec.params)


def dump_csv(spec: Spectrogram, path: str | Path) -> None:
    """Debug dump: one header row of bin center frequencies, one row per frame."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([repr(float(f)) for f in spec.bin_freqs_hz])
        for row in spec.values:
            writer.writerow([repr(float(v)) for v in row])
