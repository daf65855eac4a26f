"""Autoregressive compound-event model with family-first prediction.

A causal self-attention encoder produces a hidden state per step; a family
head predicts the next event's family, and each of the 11 attribute heads
reads the hidden state concatenated with the embedding of that (predicted
or teacher-forced) family. Cross-entropy is summed over attributes with
IGNORE targets masked out of the loss.
"""

from __future__ import annotations

import torch
from torch import nn
from torch.nn import functional as F

from ..nn.embedding import CompoundEmbedding
from ..tokens.events import EventSequence, Family, event_from_indices
from ..tokens.vocab import ATTRIBUTE_NAMES, VocabSpec
from .config import GeneratorConfig


class ContextOverflow(ValueError):
    pass


class EmptyBatch(ValueError):
    pass


def events_to_tensor(seq: EventSequence) -> torch.Tensor:
    return torch.tensor([ev.indices() for ev in seq.events], dtype=torch.long)


def tensor_to_events(tokens: torch.Tensor, vocab: VocabSpec) -> EventSequence:
    events = tuple(event_from_indices([int(v) for v in row], vocab) for row in tokens)
    return EventSequence(events, {})


def pad_batch(tensors: list[torch.Tensor], pad_row: torch.Tensor):
    """Stack variable-length [T,12] tensors; returns (tokens, length mask)."""
    longest = max(t.shape[0] for t in tensors)
    batch = pad_row.repeat(len(tensors), longest, 1)
    mask = torch.zeros(len(tensors), longest, dtype=torch.bool)
    for i, t in enumerate(tensors):
        batch[i, : t.shape[0]] = t
        mask[i, : t.shape[0]] = True
    return batch, mask


class GeneratorModel(nn.Module):
    def __init__(self, config: GeneratorConfig, vocab: VocabSpec):
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
        self.family_head = nn.Linear(config.d_model, vocab["family"].full_size)
        head_in = config.d_model + self.embedding.family_width
        self.attribute_heads = nn.ModuleDict(
            {
                name: nn.Linear(head_in, vocab[name].full_size)
                for name in ATTRIBUTE_NAMES[1:]
            }
        )

    @property
    def pad_row(self) -> torch.Tensor:
        """Padding event: EOS family, all attributes IGNORE."""
        row = [int(Family.EOS)] + [
            self.vocab[name].ignore for name in ATTRIBUTE_NAMES[1:]
        ]
        return torch.tensor(row, dtype=torch.long)

    def hidden(self, tokens: torch.Tensor) -> torch.Tensor:
        """Causal encoding of [B, T, 12] token indices -> [B, T, d]."""
        if tokens.shape[1] > self.config.context_length:
            raise ContextOverflow(
                f"sequence length {tokens.shape[1]} exceeds context "
                f"{self.config.context_length}"
            )
        x = self.embedding(tokens)
        causal = nn.Transformer.generate_square_subsequent_mask(
            tokens.shape[1], dtype=x.dtype
        )
        return self.encoder(x, mask=causal, is_causal=True)

    def family_logits(self, hidden: torch.Tensor) -> torch.Tensor:
        return self.family_head(hidden)

    def attribute_logits(self, hidden: torch.Tensor, family_idx: torch.Tensor) -> dict:
        """Per-attribute logits given the next event's family indices."""
        fam = self.embedding.family_embedding(family_idx)
        x = torch.cat([hidden, fam], dim=-1)
        return {name: head(x) for name, head in self.attribute_heads.items()}

    def sequence_loss(self, tokens: torch.Tensor, valid: torch.Tensor) -> torch.Tensor:
        """Next-event loss over a padded batch.

        ``tokens``: [B, T, 12]; ``valid``: [B, T] bool marking real events.
        Targets are the events at t+1; attribute targets equal to IGNORE do
        not contribute. Each attribute's cross-entropy is averaged over its
        contributing positions, then the 12 terms are summed (unweighted).
        """
        if tokens.numel() == 0:
            raise EmptyBatch("empty training batch")
        inputs, targets = tokens[:, :-1], tokens[:, 1:]
        target_valid = valid[:, 1:] & valid[:, :-1]
        h = self.hidden(inputs)

        loss = _masked_ce(self.family_logits(h), targets[..., 0], target_valid)
        attr_logits = self.attribute_logits(h, targets[..., 0])
        for j, name in enumerate(ATTRIBUTE_NAMES[1:], start=1):
            target = targets[..., j]
            mask = target_valid & (target != self.vocab[name].ignore)
            loss = loss + _masked_ce(attr_logits[name], target, mask)
        return loss


def _masked_ce(logits: torch.Tensor, target: torch.Tensor, mask: torch.Tensor):
    """Mean cross-entropy over masked positions (0 when none contribute)."""
    if not bool(mask.any()):
        return logits.sum() * 0.0
    flat_logits = logits[mask]
    flat_target = target[mask]
    return F.cross_entropy(flat_logits, flat_target, reduction="mean")


def build_generator(config: GeneratorConfig) -> GeneratorModel:
    """Seeded construction so identical configs give identical weights."""
    torch.manual_seed(config.seed)
    vocab = VocabSpec.default(config.width_factor)
    return GeneratorModel(config, vocab)


def predict_next(model: GeneratorModel, prefix: EventSequence, family: Family | None = None):
    """Distributions over the next event's attributes.

    Returns (family distribution, {attribute: distribution}) where the
    attribute heads are conditioned on ``family`` when given, otherwise on
    the argmax of the family distribution.
    """
    if len(prefix) > model.config.context_length:
        raise ContextOverflow(
            f"prefix length {len(prefix)} exceeds context "
            f"{model.config.context_length}"
        )
    if len(prefix) == 0:
        raise ValueError("prefix must contain at least one event")
    model.eval()
    with torch.no_grad():
        tokens = events_to_tensor(prefix).unsqueeze(0)
        h = model.hidden(tokens)[:, -1]
        family_dist = F.softmax(model.family_logits(h), dim=-1)[0]
        chosen = int(family_dist.argmax()) if family is None else int(family)
        attr_logits = model.attribute_logits(
            h, torch.tensor([chosen], dtype=torch.long)
        )
        attr_dists = {
            name: F.softmax(logits, dim=-1)[0] for name, logits in attr_logits.items()
        }
    return family_dist, attr_dists
