from src.prosody.audio import Waveform, read_wav
from src.prosody.features import (
    FrameFeatures,
    FrameSpec,
    ProsodyEmbedding,
    frame_energy,
    mel_cepstra,
    pool_frames,
    read_frame_features,
    write_frame_features,
)
from src.prosody.pitch import F0Track, estimate_f0
from src.prosody.stats import ProsodyReport, prosody_stats

__all__ = [
    "F0Track",
    "FrameFeatures",
    "FrameSpec",
    "ProsodyEmbedding",
    "ProsodyReport",
    "Waveform",
    "estimate_f0",
    "frame_energy",
    "mel_cepstra",
    "pool_frames",
    "prosody_stats",
    "read_frame_features",
    "read_wav",
    "write_frame_features",
]
