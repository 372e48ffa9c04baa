import numpy as np
import pytest

from upcall.audio import SynthSpec, sample_corpus_specs, synth_segment, write_corpus
from upcall.spectrogram import EqualizationBounds, bandpass_crop, equalize, normalize, stft


def enhance(audio, bounds=None):
    """Default preprocessing used across tests: dB stft -> z-score -> clamp."""
    return equalize(normalize(stft(audio)), bounds or EqualizationBounds())


def upcall_spec(seed, snr_db=10.0, f0=100.0, f1=250.0, duration_s=1.0):
    return SynthSpec("upcall", f0, f1, duration_s, snr_db, seed)


def ambient_spec(seed):
    return SynthSpec("ambient_noise", 0.0, 0.0, 0.0, 0.0, seed)


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    """Mixed labeled corpus used by the pipeline tests: 10 upcalls,
    6 confounders, 4 tones, 10 ambient segments."""
    root = tmp_path_factory.mktemp("corpus")
    specs = sample_corpus_specs(10, 6, 4, 10, master_seed=1234,
                                snr_db_range=(8.0, 14.0))
    write_corpus(root, specs)
    return root


@pytest.fixture(scope="session")
def noise_corpus(tmp_path_factory):
    """Corpus of 20 ambient-noise segments (all labeled non-upcall)."""
    root = tmp_path_factory.mktemp("noise_corpus")
    specs = sample_corpus_specs(0, 0, 0, 20, master_seed=99)
    write_corpus(root, specs)
    return root
