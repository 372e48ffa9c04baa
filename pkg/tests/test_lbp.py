import math

import numpy as np
import pytest

from upcall.errors import ConfigError, DataError
from upcall.lbp import (LBPConfig, build_u2_table, lbp_image, lbp_label,
                        regional_histograms, transition_count, uniform_fraction)
from upcall.spectrogram import Spectrogram, SpectrogramParams, bandpass_crop
from upcall.audio import synth_segment

from conftest import enhance, upcall_spec


def _spec(values):
    values = np.asarray(values, dtype=np.float64)
    return Spectrogram(values, np.arange(values.shape[1], dtype=float),
                       SpectrogramParams())


def _oracle_label(values, x, y, points=8, radius=1.0):
    """Independent per-bit sampler sharing only the declared conventions:
    bit p at angle 2*pi*p/points CCW from the +time axis, strict >."""
    code = 0
    for p in range(points):
        angle = 2.0 * math.pi * p / points
        sx = x + radius * math.cos(angle)
        sy = y + radius * math.sin(angle)
        if abs(sx - round(sx)) < 1e-8:
            sx = round(sx)
        if abs(sy - round(sy)) < 1e-8:
            sy = round(sy)
        x0, y0 = math.floor(sx), math.floor(sy)
        fx, fy = sx - x0, sy - y0
        v = ((1 - fx) * (1 - fy) * values[x0, y0]
             + (1 - fx) * fy * values[x0, min(y0 + 1, values.shape[1] - 1)]
             + fx * (1 - fy) * values[min(x0 + 1, values.shape[0] - 1), y0]
             + fx * fy * values[min(x0 + 1, values.shape[0] - 1),
                                min(y0 + 1, values.shape[1] - 1)])
        if v > values[x, y]:
            code |= 1 << p
    return code


class TestLbpLabel:
    def test_constant_patch_is_zero(self):
        values = np.full((3, 3), 7.0)
        assert lbp_label(values, 1, 1) == 0

    def test_all_neighbors_larger_sets_every_bit(self):
        values = np.full((3, 3), 6.0)
        values[1, 1] = 5.0
        assert lbp_label(values, 1, 1) == 255

    def test_matches_per_bit_oracle_on_crafted_patches(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            values = rng.integers(0, 9, (5, 5)).astype(float)
            for x in (1, 2, 3):
                for y in (1, 2, 3):
                    assert lbp_label(values, x, y) == _oracle_label(values, x, y)

    def test_border_cell_rejected(self):
        with pytest.raises(ConfigError):
            lbp_label(np.zeros((4, 4)), 0, 2)

    def test_larger_radius_offsets(self):
        values = np.zeros((7, 7))
        values[5, 3] = 1.0   # two steps along +time from the center
        assert lbp_label(values, 3, 3, LBPConfig(radius=2.0)) & 1 == 1


class TestTransitionCount:
    def test_known_two_transition_code(self):
        assert transition_count(0b11100011, 8) == 2
        assert transition_count(0b00000110, 8) == 2

    def test_constant_codes(self):
        assert transition_count(0, 8) == 0
        assert transition_count(255, 8) == 0

    def test_alternating_code(self):
        assert transition_count(0b01010101, 8) == 8

    def test_rotation_invariant(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            code = int(rng.integers(0, 256))
            rot = ((code << 1) | (code >> 7)) & 0xFF
            assert transition_count(code, 8) == transition_count(rot, 8)


class TestU2Table:
    @pytest.mark.parametrize("points,expected", [(4, 15), (8, 59), (16, 243)])
    def test_bin_counts(self, points, expected):
        assert build_u2_table(points).bin_count == expected

    def test_p4_by_enumeration(self):
        uniform = [c for c in range(16) if transition_count(c, 4) <= 2]
        assert len(uniform) == 14
        assert build_u2_table(4).bin_count == 14 + 1

    def test_collapses_exactly_the_nonuniform_codes(self):
        u2 = build_u2_table(8)
        shared = u2.bin_count - 1
        for code in range(256):
            if transition_count(code, 8) <= 2:
                assert u2.table[code] < shared
            else:
                assert u2.table[code] == shared

    def test_surjective_and_bijective_on_uniform(self):
        u2 = build_u2_table(8)
        assert set(u2.table.tolist()) == set(range(u2.bin_count))
        uniform_bins = u2.table[u2.table < u2.bin_count - 1]
        assert len(set(uniform_bins.tolist())) == len(uniform_bins)


class TestLbpImage:
    def test_constant_image_all_zero_codes(self):
        img = lbp_image(_spec(np.full((10, 10), 2.0)), LBPConfig(uniform=False))
        assert np.all(img.labels == 0)
        assert img.labels.shape == (8, 8)

    def test_matches_per_cell_label(self):
        rng = np.random.default_rng(2)
        values = rng.normal(0, 1, (12, 9))
        cfg = LBPConfig(uniform=False)
        img = lbp_image(_spec(values), cfg)
        for x in range(1, 11):
            for y in range(1, 8):
                assert img.labels[x - 1, y - 1] == lbp_label(values, x, y, cfg)

    def test_u2_mapping_applied(self):
        rng = np.random.default_rng(3)
        values = rng.normal(0, 1, (12, 9))
        raw = lbp_image(_spec(values), LBPConfig(uniform=False))
        mapped = lbp_image(_spec(values), LBPConfig(uniform=True))
        u2 = build_u2_table(8)
        assert np.array_equal(mapped.labels, u2.table[raw.labels])

    def test_too_small_errors(self):
        with pytest.raises(DataError):
            lbp_image(_spec(np.zeros((2, 10))))

    def test_synthetic_upcalls_mostly_uniform(self):
        for seed in range(5):
            crop = bandpass_crop(enhance(synth_segment(upcall_spec(seed))), 80.0, 320.0)
            assert uniform_fraction(lbp_image(crop)) >= 0.85

    def test_labels_survive_monotone_intensity_transform(self):
        rng = np.random.default_rng(4)
        values = rng.normal(0, 1, (15, 12))
        warped = np.exp(0.7 * values) + 3.0
        a = lbp_image(_spec(values))
        b = lbp_image(_spec(warped))
        assert np.array_equal(a.labels, b.labels)


class TestRegionalHistograms:
    def test_unnormalized_mass_equals_pixel_count(self):
        rng = np.random.default_rng(5)
        img = lbp_image(_spec(rng.normal(0, 1, (20, 14))))
        cfg = LBPConfig(normalize_histograms=False)
        feats = regional_histograms(img, cfg)
        assert feats.vector.sum() == img.labels.size

    def test_default_vector_length(self):
        rng = np.random.default_rng(6)
        img = lbp_image(_spec(rng.normal(0, 1, (20, 14))))
        feats = regional_histograms(img, LBPConfig())
        assert feats.vector.shape == (4 * 59,)
        assert feats.bins_per_region == 59

    def test_raw_vector_length_is_regions_times_2_pow_p(self):
        rng = np.random.default_rng(7)
        cfg = LBPConfig(uniform=False, regions_t=3, regions_f=2)
        img = lbp_image(_spec(rng.normal(0, 1, (20, 14))), cfg)
        feats = regional_histograms(img, cfg)
        assert feats.vector.shape == (6 * 256,)

    def test_normalized_regions_sum_to_one(self):
        rng = np.random.default_rng(8)
        img = lbp_image(_spec(rng.normal(0, 1, (21, 15))))
        feats = regional_histograms(img, LBPConfig())
        per_region = feats.vector.reshape(4, 59).sum(axis=1)
        assert np.allclose(per_region, 1.0, atol=1e-9)

    def test_constant_image_single_region_mass_at_code_zero(self):
        cfg = LBPConfig(regions_t=1, regions_f=1)
        img = lbp_image(_spec(np.full((9, 9), 1.0)), cfg)
        feats = regional_histograms(img, cfg)
        assert feats.vector[0] == 1.0
        assert feats.vector[1:].sum() == 0.0

    def test_remainder_cells_go_to_last_region(self):
        rng = np.random.default_rng(9)
        img = lbp_image(_spec(rng.normal(0, 1, (13, 11))), LBPConfig())
        cfg = LBPConfig(normalize_histograms=False)
        feats = regional_histograms(img, cfg)
        sums = feats.vector.reshape(4, 59).sum(axis=1)
        # 11x9 interior: rows split 5/6, cols split 4/5
        assert sums.tolist() == [5 * 4, 5 * 5, 6 * 4, 6 * 5]

    def test_more_regions_than_cells_errors(self):
        img = lbp_image(_spec(np.zeros((5, 5))))
        with pytest.raises(ConfigError):
            regional_histograms(img, LBPConfig(regions_t=10, regions_f=10))


def test_config_validation():
    with pytest.raises(ConfigError):
        LBPConfig(points=2)
    with pytest.raises(ConfigError):
        LBPConfig(radius=0.5)
