"""Multi-task training: summed cross-entropy over the enabled heads."""

from __future__ import annotations

import random

import torch
from torch import nn
from torch.nn import functional as F

from ..generator.model import events_to_tensor, pad_batch
from .model import HEAD_SIZES, SelectorModel, _pad_row

LABEL_COLUMNS = {"quality": 1, "emotion": 2, "genre": 3}


class MissingLabels(ValueError):
    pass


def _check_labels(dataset, head_mask) -> None:
    for head in head_mask:
        if head not in HEAD_SIZES:
            raise ValueError(f"unknown head {head!r}")
        column = LABEL_COLUMNS[head]
        if any(item[column] is None for item in dataset):
            raise MissingLabels(f"head {head!r} enabled but labels are missing")


def multitask_loss(model: SelectorModel, batch, head_mask) -> torch.Tensor:
    tensors = [
        events_to_tensor(item[0])[: model.config.context_length] for item in batch
    ]
    tokens, valid = pad_batch(tensors, _pad_row(model.vocab))
    logits = model.head_logits(tokens, valid)
    loss = torch.zeros((), dtype=logits["quality"].dtype)
    for head in sorted(head_mask):
        target = torch.tensor(
            [item[LABEL_COLUMNS[head]] for item in batch], dtype=torch.long
        )
        loss = loss + F.cross_entropy(logits[head], target)
    return loss


def train_multitask(
    model: SelectorModel,
    dataset,
    head_mask=("quality", "emotion", "genre"),
    steps: int = 200,
    batch_size: int = 16,
    seed: int = 0,
    learning_rate: float | None = None,
) -> list[float]:
    """Train the enabled heads; disabled heads receive no gradient.

    ``dataset`` rows are (sequence, quality, emotion index, genre index);
    label columns for disabled heads may be None.
    """
    head_mask = frozenset(head_mask)
    if not head_mask:
        raise ValueError("head_mask must enable at least one head")
    if not dataset:
        raise MissingLabels("empty dataset")
    _check_labels(dataset, head_mask)
    torch.manual_seed(seed)
    rng = random.Random(seed)
    optimizer = torch.optim.Adam(
        model.parameters(), lr=learning_rate or model.config.learning_rate
    )
    model.train()
    losses = []
    for _ in range(steps):
        batch = [dataset[rng.randrange(len(dataset))] for _ in range(batch_size)]
        loss = multitask_loss(model, batch, head_mask)
        optimizer.zero_grad()
        loss.backward()
        nn.utils.clip_grad_norm_(model.parameters(), 0.5)
        optimizer.step()
        losses.append(float(loss.detach()))
    return losses
