from src.fusion.attention import (
    FusionInputs,
    FusionOutput,
    PhonemeEmbedding,
    cross_attention_forward,
    fusion_forward,
    lora_forward,
    prosody_condition,
)
from src.fusion.backward import FusionGradients, fusion_backward
from src.fusion.gradcheck import GradCheckReport, gradient_check
from src.fusion.params import (
    FusionDims,
    FusionParams,
    LoraAdapter,
    init_adapter,
    init_params,
    load_params,
    save_params,
)
from src.fusion.training import ToyExample, make_toy_regression, train, train_step_toy

__all__ = [
    "FusionDims",
    "FusionGradients",
    "FusionInputs",
    "FusionOutput",
    "FusionParams",
    "GradCheckReport",
    "LoraAdapter",
    "PhonemeEmbedding",
    "ToyExample",
    "cross_attention_forward",
    "fusion_backward",
    "fusion_forward",
    "gradient_check",
    "init_adapter",
    "init_params",
    "load_params",
    "lora_forward",
    "make_toy_regression",
    "prosody_condition",
    "save_params",
    "train",
    "train_step_toy",
]
