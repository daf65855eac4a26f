"""Sequence scoring: quality / emotion / genre heads over a pooled encoding.

The whole sequence is encoded bidirectionally (no causal mask), averaged
over valid time steps (padding masked out of both attention and the mean),
and pushed through three linear heads. Quality is binary: index 1 means
the piece meets the human-level bar.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn
from torch.nn import functional as F

from ..nn.embedding import CompoundEmbedding
from ..tokens.events import EventSequence, sequence_violations
from ..tokens.vocab import VocabSpec
from .config import SelectorConfig
from ..generator.model import events_to_tensor, pad_batch

HEAD_SIZES = {"quality": 2, "emotion": 11, "genre": 6}


class EmptySequence(ValueError):
    pass


class InvalidSequence(ValueError):
    pass


@dataclass(frozen=True)
class SelectorOutput:
    prob_quality: tuple[float, ...]
    prob_emotion: tuple[float, ...]
    prob_genre: tuple[float, ...]

    @property
    def quality_score(self) -> float:
        return self.prob_quality[1]


class SelectorModel(nn.Module):
    def __init__(self, config: SelectorConfig, vocab: VocabSpec):
        super().__init__()
        self.config = config
        self.vocab = vocab
        self.embedding = CompoundEmbedding(vocab, config.d_model, config.context_length)
        layer = nn.TransformerEncoderLayer(
            d_model=config.d_model,
            nhead=config.n_heads,
            dim_feedforward=config.ffn_mult * config.d_model,
            dropout=config.dropout,
            batch_first=True,
            norm_first=True,
        )
        self.encoder = nn.TransformerEncoder(
            layer, config.n_layers, enable_nested_tensor=False
        )
        self.heads = nn.ModuleDict(
            {name: nn.Linear(config.d_model, size) for name, size in HEAD_SIZES.items()}
        )

    def pooled(self, tokens: torch.Tensor, valid: torch.Tensor) -> torch.Tensor:
        """Masked temporal mean of the encoded sequence, [B, d_model]."""
        x = self.embedding(tokens)
        out = self.encoder(x, src_key_padding_mask=~valid)
        weights = valid.to(out.dtype).unsqueeze(-1)
        return (out * weights).sum(dim=1) / weights.sum(dim=1).clamp(min=1.0)

    def head_logits(self, tokens: torch.Tensor, valid: torch.Tensor) -> dict:
        pooled = self.pooled(tokens, valid)
        return {name: head(pooled) for name, head in self.heads.items()}


def build_selector(config: SelectorConfig) -> SelectorModel:
    torch.manual_seed(config.seed)
    vocab = VocabSpec.default(config.width_factor)
    return SelectorModel(config, vocab)


def _check_sequence(model: SelectorModel, seq: EventSequence) -> None:
    if len(seq) == 0:
        raise EmptySequence("cannot score an empty sequence")
    problems = sequence_violations(seq, model.vocab)
    if problems:
        raise InvalidSequence("; ".join(problems[:3]))


def score_batch(model: SelectorModel, seqs: list[EventSequence]) -> list[SelectorOutput]:
    """Score sequences; padding never leaks into the pooled features."""
    for seq in seqs:
        _check_sequence(model, seq)
    model.eval()
    with torch.no_grad():
        tensors = [
            events_to_tensor(s)[: model.config.context_length] for s in seqs
        ]
        tokens, valid = pad_batch(tensors, _pad_row(model.vocab))
        logits = model.head_logits(tokens, valid)
        probs = {name: F.softmax(t, dim=-1) for name, t in logits.items()}
    return [
        SelectorOutput(
            prob_quality=tuple(float(v) for v in probs["quality"][i]),
            prob_emotion=tuple(float(v) for v in probs["emotion"][i]),
            prob_genre=tuple(float(v) for v in probs["genre"][i]),
        )
        for i in range(len(seqs))
    ]


def _pad_row(vocab: VocabSpec) -> torch.Tensor:
    from ..tokens.events import Family

    row = [int(Family.EOS)] + [vocab[a.name].ignore for a in vocab.attributes[1:]]
    return torch.tensor(row, dtype=torch.long)


def score(model: SelectorModel, seq: EventSequence) -> SelectorOutput:
    return score_batch(model, [seq])[0]


def select_best(
    model: SelectorModel, batch: list[EventSequence], threshold: float | None = None
) -> int | None:
    """Index of the highest-quality sequence above the threshold, else None."""
    if not batch:
        raise ValueError("select_best needs a non-empty batch")
    theta = model.config.threshold if threshold is None else threshold
    outputs = score_batch(model, batch)
    best_index = None
    best_score = theta
    for i, out in enumerate(outputs):
        if out.quality_score > best_score:
            best_index = i
            best_score = out.quality_score
    return best_index
