"""Training loop: Adam, gradient-norm clipping, plateau LR halving."""

from __future__ import annotations

import random

import torch
from torch import nn

from ..tokens.events import EventSequence
from .model import EmptyBatch, GeneratorModel, events_to_tensor, pad_batch

PLATEAU_PATIENCE = 50
PLATEAU_DELTA = 1e-4


def train_step(model: GeneratorModel, batch: list[EventSequence], optimizer=None) -> float:
    """One optimization step on a batch of sequences; returns the loss.

    Without an optimizer this only evaluates the loss (no grads kept).
    """
    if not batch:
        raise EmptyBatch("train_step needs at least one sequence")
    tensors = [
        events_to_tensor(s)[: model.config.context_length] for s in batch
    ]
    tokens, valid = pad_batch(tensors, model.pad_row)
    if optimizer is None:
        model.eval()
        with torch.no_grad():
            return float(model.sequence_loss(tokens, valid))
    model.train()
    loss = model.sequence_loss(tokens, valid)
    optimizer.zero_grad()
    loss.backward()
    nn.utils.clip_grad_norm_(model.parameters(), model.config.grad_clip)
    optimizer.step()
    return float(loss.detach())


def train_generator(
    model: GeneratorModel,
    corpus: list[EventSequence],
    steps: int,
    batch_size: int = 16,
    seed: int = 0,
    learning_rate: float | None = None,
) -> list[float]:
    """Train on random batches from the corpus; returns the loss curve.

    The learning rate halves after PLATEAU_PATIENCE steps without a loss
    improvement of at least PLATEAU_DELTA.
    """
    if not corpus:
        raise EmptyBatch("empty corpus")
    torch.manual_seed(seed)
    rng = random.Random(seed)
    optimizer = torch.optim.Adam(
        model.parameters(), lr=learning_rate or model.config.learning_rate
    )
    losses: list[float] = []
    best = float("inf")
    stale = 0
    for _ in range(steps):
        batch = [corpus[rng.randrange(len(corpus))] for _ in range(batch_size)]
        losses.append(train_step(model, batch, optimizer))
        if losses[-1] < best - PLATEAU_DELTA:
            best = losses[-1]
            stale = 0
        else:
            stale += 1
            if stale >= PLATEAU_PATIENCE:
                for group in optimizer.param_groups:
                    group["lr"] /= 2.0
                stale = 0
    return losses
