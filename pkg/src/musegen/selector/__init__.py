from .config import (
    REFERENCE_HEADS,
    REFERENCE_HIDDEN,
    REFERENCE_LAYERS,
    REFERENCE_LEARNING_RATE,
    SelectorConfig,
)
from .model import (
    EmptySequence,
    InvalidSequence,
    SelectorModel,
    SelectorOutput,
    build_selector,
    score,
    score_batch,
    select_best,
)
from .training import MissingLabels, multitask_loss, train_multitask

__all__ = [
    "REFERENCE_HEADS",
    "REFERENCE_HIDDEN",
    "REFERENCE_LAYERS",
    "REFERENCE_LEARNING_RATE",
    "SelectorConfig",
    "EmptySequence",
    "InvalidSequence",
    "SelectorModel",
    "SelectorOutput",
    "build_selector",
    "score",
    "score_batch",
    "select_best",
    "MissingLabels",
    "multitask_loss",
    "train_multitask",
]
