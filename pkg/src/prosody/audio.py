"""
WAV input for prosody analysis.
Purpose: Decode 16-bit PCM mono RIFF files into normalized waveforms.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from numpy.typing import NDArray
from scipy.io import wavfile
import structlog

from src.errors import (
    EmptyInputError,
    FormatError,
    IoError,
    UnsupportedChannelsError,
    UnsupportedFormatError,
    ValidationError,
)

logger = structlog.get_logger()

PCM16_SCALE = 32768.0


@dataclass(frozen=True, eq=False)
class Waveform:
    """Mono signal with samples in [-1, 1]"""

    sample_rate: int
    samples: NDArray[np.float64]

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise UnsupportedChannelsError("waveform must be mono (1-D)")
        if samples.shape[0] == 0:
            raise EmptyInputError("waveform has no samples")
        if int(self.sample_rate) <= 0:
            raise ValidationError(f"sample rate must be positive, got {self.sample_rate}")
        if not np.all(np.isfinite(samples)) or np.max(np.abs(samples)) > 1.0:
            raise ValidationError("waveform samples must be finite and within [-1, 1]")
        object.__setattr__(self, "sample_rate", int(self.sample_rate))
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return int(self.samples.shape[0])

    def scaled(self, gain: float) -> "Waveform":
        return Waveform(self.sample_rate, self.samples * gain)


def read_wav(path: Union[str, Path]) -> Waveform:
    """
    Read a 16-bit PCM mono WAV file.
    Purpose: Map integer sample s to s/32768; refuse every other channel layout or bit depth.
    """
    try:
        sample_rate, data = wavfile.read(str(path))
    except OSError as e:
        raise IoError(f"cannot read wav {path}: {e}") from e
    except (ValueError, EOFError) as e:
        raise FormatError(f"malformed wav header in {path}: {e}") from e

    if data.ndim == 2:
        if data.shape[1] != 1:
            raise UnsupportedChannelsError(f"{path} has {data.shape[1]} channels, expected mono")
        data = data[:, 0]
    if data.dtype != np.int16:
        raise UnsupportedFormatError(f"{path} is {data.dtype}, only 16-bit PCM is supported")

    waveform = Waveform(sample_rate, data.astype(np.float64) / PCM16_SCALE)
    logger.debug("wav_read", path=str(path), sample_rate=sample_rate, samples=len(waveform))
    return waveform
