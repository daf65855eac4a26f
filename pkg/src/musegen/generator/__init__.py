from .config import (
    GRADIENT_CLIP,
    GeneratorConfig,
    REFERENCE_HEADS,
    REFERENCE_HIDDEN,
    REFERENCE_LAYERS,
    REFERENCE_LEARNING_RATE,
)
from .model import (
    ContextOverflow,
    EmptyBatch,
    GeneratorModel,
    build_generator,
    events_to_tensor,
    pad_batch,
    predict_next,
    tensor_to_events,
)
from .sampler import Sampler, sample
from .training import train_generator, train_step
from . import synthetic

__all__ = [
    "GRADIENT_CLIP",
    "GeneratorConfig",
    "REFERENCE_HEADS",
    "REFERENCE_HIDDEN",
    "REFERENCE_LAYERS",
    "REFERENCE_LEARNING_RATE",
    "ContextOverflow",
    "EmptyBatch",
    "GeneratorModel",
    "build_generator",
    "events_to_tensor",
    "pad_batch",
    "predict_next",
    "tensor_to_events",
    "Sampler",
    "sample",
    "train_generator",
    "train_step",
    "synthetic",
]
