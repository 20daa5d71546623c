from src.eval.detection import LabeledPredictions, MetricsReport, detection_metrics
from src.eval.dtw import AlignmentPath, dtw_align, frame_distances
from src.eval.mcd import mcd, mcd_batch
from src.eval.report import EvalReport, McdSection, MeanStd, corpus_prosody, prosody_section
from src.eval.split import SPLIT_NAMES, dataset_split

__all__ = [
    "AlignmentPath",
    "EvalReport",
    "LabeledPredictions",
    "McdSection",
    "MeanStd",
    "MetricsReport",
    "SPLIT_NAMES",
    "corpus_prosody",
    "dataset_split",
    "detection_metrics",
    "dtw_align",
    "frame_distances",
    "mcd",
    "mcd_batch",
    "prosody_section",
]
