import math

import numpy as np
import pytest

from upcall.audio import AudioSegment
from upcall.errors import ConfigError, DataError
from upcall.spectrogram import (EqualizationBounds, Spectrogram,
                                SpectrogramParams, bandpass_crop, dump_csv,
                                equalize, normalize, stft)

FS = 2000


def _tone(freq, seconds=2.0, amp=0.5):
    t = np.arange(int(seconds * FS)) / FS
    return AudioSegment(amp * np.sin(2 * np.pi * freq * t), FS)


def _random_spec(seed, frames=40, bins=20):
    rng = np.random.default_rng(seed)
    return Spectrogram(rng.normal(0, 2, (frames, bins)),
                       np.arange(bins) * 7.8125, SpectrogramParams())


class TestStft:
    def test_bin_spacing(self):
        params = SpectrogramParams()
        assert params.freq_resolution_hz == 7.8125
        sg = stft(_tone(250.0), params)
        assert np.allclose(np.diff(sg.bin_freqs_hz), 7.8125)

    def test_pure_tone_argmax_matches_naive_dft(self):
        audio = _tone(250.0)
        params = SpectrogramParams(window="rectangular")
        # oracle: direct DFT of the first frame, term by term
        frame = audio.samples[:256]
        mags = []
        for k in range(129):
            acc = 0.0 + 0.0j
            for n, x in enumerate(frame):
                acc += x * np.exp(-2j * np.pi * k * n / 256)
            mags.append(abs(acc))
        expected_bin = int(np.argmax(mags))
        assert expected_bin == 32  # 250 Hz / 7.8125 Hz

        sg = stft(audio, params)
        assert np.all(np.argmax(sg.values, axis=1) == expected_bin)

    def test_all_zero_audio_sits_at_eps_floor(self):
        sg = stft(AudioSegment(np.zeros(FS), FS))
        assert np.all(sg.values == 20.0 * math.log10(1e-12))

    def test_frame_count_one_per_full_window(self):
        sg = stft(AudioSegment(np.zeros(256 + 51 * 9), FS))
        assert sg.n_frames == 10

    def test_too_short_errors(self):
        with pytest.raises(DataError):
            stft(AudioSegment(np.zeros(100), FS))

    def test_param_validation(self):
        with pytest.raises(ConfigError):
            SpectrogramParams(hop_samples=512)
        with pytest.raises(ConfigError):
            SpectrogramParams(window="hamming")

    def test_energy_grows_linearly_with_frame_count(self):
        rng = np.random.default_rng(5)
        audio = AudioSegment(np.clip(rng.normal(0, 0.2, 40 * FS), -1, 1), FS)
        sg = stft(audio)
        power = (10.0 ** (sg.values / 10.0)).sum(axis=1)
        half = power[: sg.n_frames // 2].sum()
        ratio = half / power.sum()
        assert abs(ratio - 0.5) < 0.05


class TestNormalize:
    def test_two_frame_band(self):
        sg = Spectrogram(np.array([[0.0], [10.0]]), np.array([0.0]), SpectrogramParams())
        out = normalize(sg)
        assert np.allclose(out.values[:, 0], [-1.0, 1.0])  # mean 5, population std 5

    def test_constant_band_maps_to_zero(self):
        sg = Spectrogram(np.full((8, 3), 4.2), np.arange(3.0), SpectrogramParams())
        assert np.all(normalize(sg).values == 0.0)

    def test_moments(self):
        out = normalize(_random_spec(0))
        assert np.all(np.abs(out.values.mean(axis=0)) < 1e-9)
        assert np.all(np.abs(out.values.std(axis=0) - 1.0) < 1e-9)

    def test_needs_two_frames(self):
        sg = Spectrogram(np.zeros((1, 4)), np.arange(4.0), SpectrogramParams())
        with pytest.raises(DataError):
            normalize(sg)

    def test_commutes_with_frame_permutation(self):
        sg = _random_spec(1)
        rng = np.random.default_rng(2)
        perm = rng.permutation(sg.n_frames)
        bounds = EqualizationBounds(-0.5, 1.5)
        direct = equalize(normalize(sg), bounds).values[perm]
        permuted = equalize(normalize(Spectrogram(sg.values[perm],
                                                  sg.bin_freqs_hz,
                                                  sg.params)), bounds).values
        assert np.allclose(direct, permuted)


class TestEqualize:
    def test_clamps(self):
        sg = Spectrogram(np.array([[5.0, -3.0, 0.5]]), np.arange(3.0), SpectrogramParams())
        out = equalize(sg, EqualizationBounds(-1.0, 2.0))
        assert out.values.tolist() == [[2.0, -1.0, 0.5]]

    def test_idempotent(self):
        bounds = EqualizationBounds(-0.7, 0.9)
        once = equalize(_random_spec(3), bounds)
        twice = equalize(once, bounds)
        assert np.array_equal(once.values, twice.values)

    def test_bounds_validation(self):
        with pytest.raises(ConfigError):
            EqualizationBounds(2.0, 2.0)


class TestBandpassCrop:
    def test_default_band_bins(self):
        sg = stft(_tone(100.0))
        out = bandpass_crop(sg, 80.0, 320.0)
        # retained bin centers: 11 * 7.8125 .. 40 * 7.8125
        assert out.n_bins == 30
        assert out.bin_freqs_hz[0] == 85.9375
        assert out.bin_freqs_hz[-1] == 312.5

    def test_full_range_identity(self):
        sg = stft(_tone(100.0))
        out = bandpass_crop(sg, 0.0, FS / 2)
        assert np.array_equal(out.values, sg.values)

    def test_inverted_range_errors(self):
        sg = stft(_tone(100.0))
        with pytest.raises(ConfigError):
            bandpass_crop(sg, 320.0, 80.0)

    def test_double_crop_is_single_crop(self):
        sg = stft(_tone(100.0))
        once = bandpass_crop(sg, 80.0, 320.0)
        twice = bandpass_crop(once, 80.0, 320.0)
        assert np.array_equal(once.values, twice.values)
        assert np.array_equal(once.bin_freqs_hz, twice.bin_freqs_hz)


def test_dump_csv_round_trips_header(tmp_path):
    sg = _random_spec(4, frames=3, bins=4)
    path = tmp_path / "spec.csv"
    dump_csv(sg, path)
    lines = path.read_text().strip().splitlines()
    header = [float(v) for v in lines[0].split(",")]
    assert header == sg.bin_freqs_hz.tolist()
    assert len(lines) == 1 + sg.n_frames
