"""Audio ingest, segmentation, and seeded synthesis of labeled desk-scale signals.

Real detector input is mono 16-bit PCM at 2 kHz. The synthesizer produces
segments of four kinds (right-whale-like upsweeps, steeper humpback-like
confounders, constant tones, plain ambient noise) so the full pipeline can be
exercised and evaluated without field recordings.
"""

from __future__ import annotations

import csv
import math
import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError

PIPELINE_RATE_HZ = 2000
CALL_BAND_HZ = (50.0, 350.0)    # detection band; also the band SNR is defined over
CORE_BAND_HZ = (80.0, 320.0)    # band where nearly all upcall energy sits

LABEL_UPCALL = "upcall"
LABEL_NONUPCALL = "non-upcall"

KIND_UPCALL = "upcall"
KIND_HUMPBACK = "humpback_confounder"
KIND_TONAL = "tonal_noise"
KIND_AMBIENT = "ambient_noise"
SYNTH_KINDS = (KIND_UPCALL, KIND_HUMPBACK, KIND_TONAL, KIND_AMBIENT)

DEFAULT_SEGMENT_S = 3.0   # working segment length; tunable, not a measured value
NOISE_SIGMA = 0.03        # white-noise amplitude floor used by the synthesizer


@dataclass
class AudioSegment:
    """A mono audio snippet with optional ground-truth label."""

    samples: np.ndarray
    sample_rate_hz: int
    label: str | None = None

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1 or self.samples.size == 0:
            raise DataError("samples must be a non-empty 1-D sequence")
        if self.sample_rate_hz <= 0:
            raise ConfigError("sample_rate_hz must be positive")
        if np.max(np.abs(self.samples)) > 1.0 + 1e-12:
            raise DataError("samples must lie in [-1, 1]")
        if self.label is not None and self.label not in (LABEL_UPCALL, LABEL_NONUPCALL):
            raise ConfigError(f"unknown label {self.label!r}")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate_hz


def read_wav(path: str | Path, expected_rate_hz: int | None = PIPELINE_RATE_HZ) -> AudioSegment:
    """Read a mono 16-bit PCM WAV file; int samples are scaled by 1/32768.

    Refuses multi-channel or non-16-bit files, and (by default) any rate other
    than 2 kHz: the pipeline does not resample.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    try:
        with wave.open(str(path), "rb") as wf:
            n_channels = wf.getnchannels()
            sampwidth = wf.getsampwidth()
            rate = wf.getframerate()
            n_frames = wf.getnframes()
            raw = wf.readframes(n_frames)
    except wave.Error as exc:
        raise DataError(f"not a readable PCM WAV file: {path} ({exc})") from exc
    if n_channels != 1:
        raise DataError(f"{path}: expected mono audio, got {n_channels} channels")
    if sampwidth != 2:
        raise DataError(f"{path}: expected 16-bit PCM, got {8 * sampwidth}-bit")
    if expected_rate_hz is not None and rate != expected_rate_hz:
        raise DataError(
            f"{path}: sample rate {rate} Hz not supported; expected {expected_rate_hz} Hz "
            "(resampling is out of scope)"
        )
    ints = np.frombuffer(raw, dtype="<i2")
    return AudioSegment(samples=ints.astype(np.float64) / 32768.0, sample_rate_hz=rate)


def write_wav(path: str | Path, audio: AudioSegment) -> None:
    """Write mono 16-bit little-endian PCM (RIFF)."""
    ints = np.clip(np.rint(audio.samples * 32768.0), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(audio.sample_rate_hz)
        wf.writeframes(ints.tobytes())


def segment(audio: AudioSegment, window_s: float, hop_s: float) -> list[AudioSegment]:
    """Cut consecutive windows starting at multiples of hop_s; a trailing partial
    window is dropped. Shorter-than-window audio yields an empty list."""
    if window_s <= 0 or hop_s <= 0:
        raise ConfigError("window_s and hop_s must be positive")
    win = int(round(window_s * audio.sample_rate_hz))
    hop = int(round(hop_s * audio.sample_rate_hz))
    if win <= 0 or hop <= 0:
        raise ConfigError("window/hop too short for the sample rate")
    out = []
    start = 0
    while start + win <= len(audio.samples):
        out.append(AudioSegment(audio.samples[start:start + win],
                                audio.sample_rate_hz, audio.label))
        start += hop
    return out


@dataclass(frozen=True)
class SynthSpec:
    """Full recipe for one synthetic segment; the seed fixes every sample."""

    kind: str
    f_start_hz: float
    f_end_hz: float
    duration_s: float
    snr_db: float
    seed: int

    def validate(self) -> None:
        if self.kind not in SYNTH_KINDS:
            raise ConfigError(f"unknown synth kind {self.kind!r}")
        if self.kind == KIND_UPCALL:
            if not (CALL_BAND_HZ[0] <= self.f_start_hz < self.f_end_hz <= CALL_BAND_HZ[1]):
                raise ConfigError(
                    f"upcall sweep must rise within {CALL_BAND_HZ[0]:.0f}-{CALL_BAND_HZ[1]:.0f} Hz, "
                    f"got {self.f_start_hz}-{self.f_end_hz}"
                )
            if not (0.5 <= self.duration_s <= 1.5):
                raise ConfigError(f"upcall duration must be 0.5-1.5 s, got {self.duration_s}")
        elif self.kind == KIND_HUMPBACK:
            if not (0 < self.f_start_hz < self.f_end_hz):
                raise ConfigError("confounder sweep must rise")
            if CORE_BAND_HZ[0] <= self.f_start_hz and self.f_end_hz <= CORE_BAND_HZ[1]:
                raise ConfigError(
                    "confounder sweep must extend outside "
                    f"{CORE_BAND_HZ[0]:.0f}-{CORE_BAND_HZ[1]:.0f} Hz"
                )
            if self.duration_s <= 0:
                raise ConfigError("duration_s must be positive")
        elif self.kind == KIND_TONAL:
            if not (0 < self.f_start_hz < PIPELINE_RATE_HZ / 2):
                raise ConfigError("tone frequency must lie below Nyquist")

    @property
    def label(self) -> str:
        return LABEL_UPCALL if self.kind == KIND_UPCALL else LABEL_NONUPCALL


def call_extent_s(spec: SynthSpec, segment_s: float = DEFAULT_SEGMENT_S) -> tuple[float, float]:
    """Time extent of the deterministic component (centered in the segment)."""
    if spec.kind == KIND_AMBIENT:
        raise ConfigError("ambient noise has no call extent")
    if spec.kind == KIND_TONAL:
        return (0.0, segment_s)
    t0 = max(0.0, (segment_s - spec.duration_s) / 2.0)
    return (t0, min(segment_s, t0 + spec.duration_s))


def _sweep(f0: float, f1: float, duration_s: float, rate_hz: int) -> np.ndarray:
    """Unit-amplitude linear sweep with raised-cosine onset/offset ramps."""
    n = int(round(duration_s * rate_hz))
    t = np.arange(n) / rate_hz
    phase = 2.0 * math.pi * (f0 * t + (f1 - f0) / (2.0 * duration_s) * t * t)
    x = np.sin(phase)
    ramp = min(int(round(0.1 * n)), n // 2)
    if ramp > 0:
        edge = 0.5 * (1.0 - np.cos(np.pi * np.arange(ramp) / ramp))
        x[:ramp] *= edge
        x[-ramp:] *= edge[::-1]
    return x


def synth_parts(spec: SynthSpec, segment_s: float = DEFAULT_SEGMENT_S) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic (signal, noise) pair for a spec, before summing/clipping.

    The signal is scaled so its mean power over its own extent equals
    snr_db relative to the noise power inside the 50-350 Hz detection band.
    """
    spec.validate()
    rate = PIPELINE_RATE_HZ
    n = int(round(segment_s * rate))
    rng = np.random.default_rng(spec.seed)
    noise = rng.normal(0.0, NOISE_SIGMA, n)

    signal = np.zeros(n)
    if spec.kind != KIND_AMBIENT:
        if spec.kind == KIND_TONAL:
            t = np.arange(n) / rate
            comp = np.sin(2.0 * math.pi * spec.f_start_hz * t)
            lo = 0
        else:
            comp = _sweep(spec.f_start_hz, spec.f_end_hz, spec.duration_s, rate)
            if len(comp) > n:
                comp = comp[:n]
            lo = (n - len(comp)) // 2
        band_frac = (CALL_BAND_HZ[1] - CALL_BAND_HZ[0]) / (rate / 2.0)
        noise_band_power = NOISE_SIGMA ** 2 * band_frac
        target = noise_band_power * 10.0 ** (spec.snr_db / 10.0)
        comp = comp * math.sqrt(target / max(np.mean(comp ** 2), 1e-30))
        signal[lo:lo + len(comp)] = comp

    peak = np.max(np.abs(signal + noise))
    if peak > 0.999:
        # common rescale preserves the signal/noise ratio and every test statistic
        signal *= 0.999 / peak
        noise *= 0.999 / peak
    return signal, noise


def synth_segment(spec: SynthSpec, segment_s: float = DEFAULT_SEGMENT_S) -> AudioSegment:
    """Render a spec to a labeled segment. Pure function of (spec, segment_s)."""
    signal, noise = synth_parts(spec, segment_s)
    return AudioSegment(signal + noise, PIPELINE_RATE_HZ, label=spec.label)


# --- synthetic corpus -------------------------------------------------------

MANIFEST_NAME = "manifest.csv"
MANIFEST_COLUMNS = ("file", "class", "f_start_hz", "f_end_hz", "duration_s", "snr_db", "seed")


@dataclass(frozen=True)
class CorpusItem:
    """One manifest row: a WAV file plus its class and synthesis parameters."""

    file: str
    kind: str
    f_start_hz: float = 0.0
    f_end_hz: float = 0.0
    duration_s: float = 0.0
    snr_db: float = 0.0
    seed: int = 0

    @property
    def label(self) -> str | None:
        if not self.kind:
            return None
        return LABEL_UPCALL if self.kind == KIND_UPCALL else LABEL_NONUPCALL

    def to_spec(self) -> SynthSpec:
        return SynthSpec(self.kind, self.f_start_hz, self.f_end_hz,
                         self.duration_s, self.snr_db, self.seed)


def sample_corpus_specs(n_upcalls: int, n_confounders: int, n_tonal: int,
                        n_ambient: int, master_seed: int,
                        snr_db_range: tuple[float, float] = (5.0, 15.0)) -> list[SynthSpec]:
    """Draw a reproducible mixed corpus. Per-segment seeds derive from the master seed."""
    rng = np.random.default_rng(master_seed)
    lo, hi = snr_db_range
    specs: list[SynthSpec] = []

    def sub_seed() -> int:
        return int(rng.integers(0, 2 ** 31 - 1))

    for _ in range(n_upcalls):
        f0 = rng.uniform(60.0, 140.0)
        f1 = min(f0 + rng.uniform(80.0, 180.0), CALL_BAND_HZ[1])
        specs.append(SynthSpec(KIND_UPCALL, f0, f1, rng.uniform(0.6, 1.4),
                               rng.uniform(lo, hi), sub_seed()))
    for _ in range(n_confounders):
        # steeper, briefer upsweep reaching above the 320 Hz core band
        f0 = rng.uniform(150.0, 260.0)
        f1 = f0 + rng.uniform(180.0, 350.0)
        specs.append(SynthSpec(KIND_HUMPBACK, f0, f1, rng.uniform(0.25, 0.5),
                               rng.uniform(lo, hi), sub_seed()))
    for _ in range(n_tonal):
        specs.append(SynthSpec(KIND_TONAL, rng.uniform(60.0, 340.0), 0.0, 0.0,
                               rng.uniform(lo, hi), sub_seed()))
    for _ in range(n_ambient):
        specs.append(SynthSpec(KIND_AMBIENT, 0.0, 0.0, 0.0, 0.0, sub_seed()))
    return specs


def write_corpus(out_dir: str | Path, specs: list[SynthSpec],
                 segment_s: float = DEFAULT_SEGMENT_S) -> list[CorpusItem]:
    """Render specs to WAV files plus a manifest CSV in out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    items = []
    for k, spec in enumerate(specs):
        name = f"seg_{k:05d}.wav"
        write_wav(out_dir / name, synth_segment(spec, segment_s))
        items.append(CorpusItem(name, spec.kind, spec.f_start_hz, spec.f_end_hz,
                                spec.duration_s, spec.snr_db, spec.seed))
    write_manifest(out_dir / MANIFEST_NAME, items)
    return items


def write_manifest(path: str | Path, items: list[CorpusItem]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_COLUMNS)
        for it in items:
            writer.writerow([it.file, it.kind, repr(float(it.f_start_hz)),
                             repr(float(it.f_end_hz)), repr(float(it.duration_s)),
                             repr(float(it.snr_db)), int(it.seed)])


def read_manifest(path: str | Path) -> list[CorpusItem]:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no manifest at {path}")
    items = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(MANIFEST_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise DataError(f"manifest {path} lacks columns: {sorted(missing)}")
        for row in reader:
            items.append(CorpusItem(row["file"], row["class"],
                                    float(row["f_start_hz"] or 0.0),
                                    float(row["f_end_hz"] or 0.0),
                                    float(row["duration_s"] or 0.0),
                                    float(row["snr_db"] or 0.0),
                                    int(row["seed"] or 0)))
    return items
