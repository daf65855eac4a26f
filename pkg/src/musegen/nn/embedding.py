"""Compound-event embedding shared by the generative and scoring models.

Each of the 12 attribute indices passes through its own embedding table
(IGNORE and CONTI entries are ordinary learned rows); the dense vectors are
concatenated, sinusoidal positional encoding is added to the concatenation,
and a linear projection maps the result to the model width.
"""

from __future__ import annotations

import math

import torch
from torch import nn

from ..tokens.vocab import VocabSpec


def sinusoidal_positions(length: int, width: int) -> torch.Tensor:
    """Standard sine/cosine positional table, shape [length, width]."""
    position = torch.arange(length, dtype=torch.float32).unsqueeze(1)
    half = (width + 1) // 2
    div = torch.exp(
        torch.arange(half, dtype=torch.float32) * (-math.log(10000.0) / max(1, half))
    )
    table = torch.zeros(length, width)
    table[:, 0::2] = torch.sin(position * div[: (width + 1) // 2])
    table[:, 1::2] = torch.cos(position * div[: width // 2])
    return table


class CompoundEmbedding(nn.Module):
    def __init__(self, vocab: VocabSpec, d_model: int, max_len: int):
        super().__init__()
        self.vocab = vocab
        self.tables = nn.ModuleList(
            nn.Embedding(a.full_size, a.embed_width) for a in vocab.attributes
        )
        concat_width = sum(a.embed_width for a in vocab.attributes)
        self.proj = nn.Linear(concat_width, d_model)
        self.register_buffer(
            "positions", sinusoidal_positions(max_len, concat_width), persistent=False
        )

    @property
    def family_width(self) -> int:
        return self.vocab.attributes[0].embed_width

    def family_embedding(self, family_idx: torch.Tensor) -> torch.Tensor:
        return self.tables[0](family_idx)

    def forward(self, tokens: torch.Tensor) -> torch.Tensor:
        """tokens: int tensor [batch, time, 12] -> [batch, time, d_model]."""
        parts = [table(tokens[..., j]) for j, table in enumerate(self.tables)]
        concat = torch.cat(parts, dim=-1)
        concat = concat + self.positions[: concat.shape[-2]].to(concat.dtype)
        return self.proj(concat)
