import numpy as np
import pytest

from upcall.audio import AudioSegment, SynthSpec, synth_segment
from upcall.errors import ConfigError
from upcall.gate import GateConfig, stage1_gate
from upcall.spectrogram import Spectrogram, SpectrogramParams, stft

from conftest import ambient_spec, upcall_spec

FS = 2000


def test_all_zero_segment_fails():
    sg = stft(AudioSegment(np.zeros(3 * FS), FS))
    decision = stage1_gate(sg)
    assert not decision.passed
    assert decision.score_db == pytest.approx(0.0)


def test_upcalls_pass_at_10db():
    for seed in range(20):
        sg = stft(synth_segment(upcall_spec(seed, snr_db=10.0)))
        assert stage1_gate(sg).passed


def test_ambient_rejected():
    rejected = sum(not stage1_gate(stft(synth_segment(ambient_spec(s)))).passed
                   for s in range(100))
    assert rejected >= 95


def test_segment_long_tone_rejected():
    for seed in range(10):
        spec = SynthSpec("tonal_noise", 150.0, 0.0, 0.0, 12.0, seed)
        assert not stage1_gate(stft(synth_segment(spec))).passed


def test_raising_threshold_never_flips_reject_to_pass():
    rng = np.random.default_rng(0)
    for _ in range(20):
        sg = Spectrogram(rng.normal(-40, 8, (60, 129)),
                         np.arange(129) * 7.8125, SpectrogramParams())
        previous = None
        for thr in (2.0, 4.0, 6.0, 9.0, 14.0):
            passed = stage1_gate(sg, GateConfig(threshold_db=thr)).passed
            if previous is not None:
                assert previous or not passed  # reject stays rejected
            previous = passed


def test_constant_db_shift_leaves_decision_unchanged():
    sg = stft(synth_segment(upcall_spec(3)))
    shifted = Spectrogram(sg.values + 17.0, sg.bin_freqs_hz, sg.params)
    a = stage1_gate(sg)
    b = stage1_gate(shifted)
    assert a.passed == b.passed
    assert a.score_db == pytest.approx(b.score_db)


def test_band_outside_spectrogram_errors():
    sg = stft(AudioSegment(np.zeros(FS), FS))
    with pytest.raises(ConfigError):
        stage1_gate(sg, GateConfig(band_lo_hz=1500.0, band_hi_hz=1800.0))


def test_config_validation():
    with pytest.raises(ConfigError):
        GateConfig(band_lo_hz=400.0, band_hi_hz=100.0)
    with pytest.raises(ConfigError):
        GateConfig(threshold_db=0.0)
