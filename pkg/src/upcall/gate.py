"""First-stage energy gate: drop segments with no persistent in-band excess.

Operates on the raw (un-normalized) dB spectrogram; per-band z-scoring would
flatten exactly the energy contrast this stage relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .spectrogram import Spectrogram


@dataclass(frozen=True)
class GateConfig:
    band_lo_hz: float = 50.0
    band_hi_hz: float = 350.0
    threshold_db: float = 6.0
    min_active_frames: int = 4

    def __post_init__(self) -> None:
        if not self.band_lo_hz < self.band_hi_hz:
            raise ConfigError("band_lo_hz must be below band_hi_hz")
        if self.threshold_db <= 0:
            raise ConfigError("threshold_db must be positive")
        if self.min_active_frames < 1:
            raise ConfigError("min_active_frames must be at least 1")


@dataclass(frozen=True)
class GateDecision:
    passed: bool
    score_db: float   # peak per-frame excess over the noise floor


def stage1_gate(spec: Spectrogram, cfg: GateConfig = GateConfig()) -> GateDecision:
    """Pass iff enough frames carry in-band energy well above the noise floor.

    Per frame: mean linear power over the in-band bins, in dB. The noise floor
    is the median of those per-frame energies, so a segment-long tone raises
    the floor along with every frame and is rejected. Adding a constant to all
    dB cells leaves the decision unchanged.
    """
    mask = (spec.bin_freqs_hz >= cfg.band_lo_hz) & (spec.bin_freqs_hz <= cfg.band_hi_hz)
    if not mask.any():
        raise ConfigError(
            f"gate band [{cfg.band_lo_hz}, {cfg.band_hi_hz}] Hz outside the spectrogram"
        )
    linear_power = 10.0 ** (spec.values[:, mask] / 10.0)
    frame_db = 10.0 * np.log10(linear_power.mean(axis=1))
    floor = float(np.median(frame_db))
    excess = frame_db - floor
    score = float(excess.max())
    active = int(np.count_nonzero(excess > cfg.threshold_db))
    return GateDecision(passed=active >= cfg.min_active_frames, score_db=score)
