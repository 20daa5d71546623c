"""
Shared test fixtures.
Purpose: Put the project root on sys.path and provide seeded generators, records and WAV writers.
"""
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.io import wavfile

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.store import Label, UtteranceRecord


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def make_record():
    def _make(record_id, embedding, label=Label.SARCASTIC, **kwargs):
        return UtteranceRecord(id=record_id, label=label, embedding=np.asarray(embedding), **kwargs)

    return _make


@pytest.fixture
def write_wav(tmp_path):
    """Write int16 (or any dtype) sample data to a WAV file and return its path"""

    def _write(name, data, sample_rate=16000):
        path = tmp_path / name
        wavfile.write(str(path), sample_rate, np.asarray(data))
        return path

    return _write


@pytest.fixture
def make_sine():
    def _sine(freq, seconds=0.5, sample_rate=16000, amplitude=0.5):
        t = np.arange(int(seconds * sample_rate)) / sample_rate
        return amplitude * np.sin(2.0 * np.pi * freq * t)

    return _sine
