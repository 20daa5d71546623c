"""
Toy-scale training of the conditioning core.
Purpose: Plain gradient descent on mean-squared error to a target Z, updating W_q, W_k, W_v, W_w, A and B while W_base stays frozen.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel
import structlog

from src.errors import DimensionError, ParameterError
from src.fusion.attention import FusionInputs, PhonemeEmbedding, fusion_forward
from src.fusion.backward import fusion_backward
from src.fusion.params import FusionDims, FusionParams, LoraAdapter, init_adapter, init_params
from src.numerics import Matrix, as_matrix

logger = structlog.get_logger()


@dataclass(frozen=True, eq=False)
class ToyExample:
    inputs: FusionInputs
    target: Matrix

    def __post_init__(self):
        object.__setattr__(self, "target", as_matrix(self.target, name="target"))


class TrainingSummary(BaseModel):
    steps: int
    learning_rate: float
    initial_loss: float
    final_loss: float
    losses: List[float]


def batch_loss(
    params: FusionParams, adapter: Optional[LoraAdapter], batch: Sequence[ToyExample]
) -> float:
    """Mean over examples of the mean-squared error between Z and its target"""
    total = 0.0
    for example in batch:
        Z = fusion_forward(example.inputs, params, adapter).Z
        if Z.shape != example.target.shape:
            raise DimensionError(f"target shape {example.target.shape} does not match Z {Z.shape}")
        total += float(np.mean((Z - example.target) ** 2))
    return total / len(batch)


def train_step_toy(
    params: FusionParams,
    adapter: Optional[LoraAdapter],
    batch: Sequence[ToyExample],
    learning_rate: float,
) -> Tuple[FusionParams, Optional[LoraAdapter], float]:
    """
    One gradient-descent step.
    Purpose: Returns the updated parameters and the loss measured before the update.
    """
    if not learning_rate > 0:
        raise ParameterError(f"learning rate must be positive, got {learning_rate}")
    if not batch:
        raise ParameterError("training batch is empty")

    names = ("W_q", "W_k", "W_v", "W_w")
    accum = {name: np.zeros_like(getattr(params, name)) for name in names}
    grad_A = np.zeros_like(adapter.A) if adapter is not None else None
    grad_B = np.zeros_like(adapter.B) if adapter is not None else None

    loss = 0.0
    for example in batch:
        Z = fusion_forward(example.inputs, params, adapter).Z
        if Z.shape != example.target.shape:
            raise DimensionError(f"target shape {example.target.shape} does not match Z {Z.shape}")
        residual = Z - example.target
        loss += float(np.mean(residual**2))
        upstream = 2.0 * residual / (residual.size * len(batch))
        grads = fusion_backward(example.inputs, params, upstream, adapter)
        for name in names:
            accum[name] += getattr(grads, name)
        if adapter is not None:
            grad_A += grads.A
            grad_B += grads.B

    new_params = params.updated(
        **{name: getattr(params, name) - learning_rate * accum[name] for name in names}
    )
    new_adapter = adapter
    if adapter is not None:
        new_adapter = adapter.updated(
            A=adapter.A - learning_rate * grad_A,
            B=adapter.B - learning_rate * grad_B,
        )
    return new_params, new_adapter, loss / len(batch)


def train(
    params: FusionParams,
    adapter: Optional[LoraAdapter],
    batch: Sequence[ToyExample],
    learning_rate: float,
    steps: int,
) -> Tuple[FusionParams, Optional[LoraAdapter], TrainingSummary]:
    """Run `steps` updates; the summary's losses hold the pre-update loss of each step plus the final loss"""
    losses = []
    for step in range(steps):
        params, adapter, loss = train_step_toy(params, adapter, batch, learning_rate)
        losses.append(loss)
        if step % 100 == 0:
            logger.debug("train_step", step=step, loss=loss)
    final = batch_loss(params, adapter, batch)
    losses.append(final)
    summary = TrainingSummary(
        steps=steps,
        learning_rate=learning_rate,
        initial_loss=losses[0],
        final_loss=final,
        losses=losses,
    )
    logger.info("training_completed", steps=steps, initial_loss=losses[0], final_loss=final)
    return params, adapter, summary


def make_toy_regression(
    seed: int,
    dims: FusionDims = FusionDims(),
    t_p: int = 4,
    t_t: int = 5,
    d_in: int = 8,
    rank: int = 2,
    alpha: float = 4.0,
    n_exemplars: int = 2,
) -> Tuple[FusionParams, LoraAdapter, List[ToyExample]]:
    """
    Seeded toy regression problem.
    Purpose: The target is the initial model's Z under a shifted W_w, so a reachable optimum exists.
    """
    rng = np.random.default_rng(seed)
    params = init_params(dims, seed=seed)
    adapter = init_adapter(d_in, dims.d_t, rank, alpha, seed=seed + 1)

    inputs = FusionInputs(
        e_p=PhonemeEmbedding(rng.uniform(-1.0, 1.0, size=(t_p, dims.d_p))),
        semantic=rng.uniform(-1.0, 1.0, size=(t_t, d_in)),
        exemplars=tuple(rng.uniform(-3.0, 3.0, size=(n_exemplars, dims.d_w))),
    )
    reference = params.updated(W_w=params.W_w + rng.uniform(-1.0, 1.0, size=params.W_w.shape))
    target = fusion_forward(inputs, reference, adapter).Z
    return params, adapter, [ToyExample(inputs=inputs, target=target)]
