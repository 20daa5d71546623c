"""
Evaluation report schema.
Purpose: Structured metric report with mcd_db, pitch, energy and detection sections, plus corpus-level prosody aggregation.
"""
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel

from src.errors import EmptyInputError
from src.eval.detection import MetricsReport
from src.prosody.stats import ProsodyReport


class MeanStd(BaseModel):
    mean: float
    std: float


class McdSection(MeanStd):
    count: int


class EvalReport(BaseModel):
    mcd_db: Optional[McdSection] = None
    pitch: Optional[MeanStd] = None
    energy: Optional[MeanStd] = None
    detection: Optional[MetricsReport] = None


def _mean_std(values: Sequence[float]) -> MeanStd:
    arr = np.asarray(values, dtype=np.float64)
    return MeanStd(mean=float(arr.mean()), std=float(arr.std()))


def prosody_section(report: ProsodyReport) -> EvalReport:
    """Single utterance: frame-level mean and std as computed by prosody_stats"""
    pitch = None
    if report.pitch_mean is not None:
        pitch = MeanStd(mean=report.pitch_mean, std=report.pitch_std)
    return EvalReport(
        pitch=pitch,
        energy=MeanStd(mean=report.energy_mean, std=report.energy_std),
    )


def corpus_prosody(reports: Sequence[ProsodyReport]) -> EvalReport:
    """
    Aggregate many utterances.
    Purpose: Mean and population std across utterances of their per-utterance means.
    Utterances without voiced frames contribute to energy only.
    """
    if not reports:
        raise EmptyInputError("no prosody reports to aggregate")
    if len(reports) == 1:
        return prosody_section(reports[0])

    pitch_means = [r.pitch_mean for r in reports if r.pitch_mean is not None]
    return EvalReport(
        pitch=_mean_std(pitch_means) if pitch_means else None,
        energy=_mean_std([r.energy_mean for r in reports]),
    )
