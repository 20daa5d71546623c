"""
Sarcasm detection scoring.
Purpose: Support-weighted precision, recall and F1 over the two labels, reported in percent.
"""
from dataclasses import dataclass
from typing import Sequence, Tuple

from pydantic import BaseModel, Field
from sklearn.metrics import precision_recall_fscore_support

from src.errors import EmptyInputError, ValidationError
from src.store.models import Label

CLASS_ORDER = [Label.SARCASTIC.value, Label.NON_SARCASTIC.value]


def _as_labels(values: Sequence, name: str) -> Tuple[Label, ...]:
    try:
        return tuple(Label(v) for v in values)
    except ValueError as e:
        raise ValidationError(f"{name}: {e}") from e


@dataclass(frozen=True)
class LabeledPredictions:
    gold: Tuple[Label, ...]
    pred: Tuple[Label, ...]

    def __post_init__(self):
        gold = _as_labels(self.gold, "gold")
        pred = _as_labels(self.pred, "pred")
        if not gold:
            raise EmptyInputError("no labels to score")
        if len(gold) != len(pred):
            raise ValidationError(f"{len(gold)} gold labels but {len(pred)} predictions")
        object.__setattr__(self, "gold", gold)
        object.__setattr__(self, "pred", pred)


class MetricsReport(BaseModel):
    precision: float = Field(ge=0.0, le=100.0)
    recall: float = Field(ge=0.0, le=100.0)
    weighted_f1: float = Field(ge=0.0, le=100.0)


def detection_metrics(lp: LabeledPredictions) -> MetricsReport:
    """Zero-denominator precision or recall counts as 0"""
    precision, recall, f1, _ = precision_recall_fscore_support(
        [g.value for g in lp.gold],
        [p.value for p in lp.pred],
        labels=CLASS_ORDER,
        average="weighted",
        zero_division=0,
    )
    return MetricsReport(
        precision=float(precision) * 100.0,
        recall=float(recall) * 100.0,
        weighted_f1=float(f1) * 100.0,
    )
