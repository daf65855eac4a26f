"""Selector configuration; reference scale recorded, desk scale default."""

from __future__ import annotations

from dataclasses import asdict, dataclass

REFERENCE_LAYERS = 3
REFERENCE_HEADS = 8
REFERENCE_HIDDEN = 512
REFERENCE_LEARNING_RATE = 1e-5


@dataclass(frozen=True)
class SelectorConfig:
    n_layers: int = 2
    n_heads: int = 4
    d_model: int = 64
    ffn_mult: int = 4
    context_length: int = 512
    dropout: float = 0.0
    width_factor: float = 0.0625
    learning_rate: float = 1e-3
    threshold: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.n_layers, self.n_heads, self.d_model, self.context_length) <= 0:
            raise ValueError("model dimensions must be positive")
        if self.d_model % self.n_heads:
            raise ValueError("d_model must be divisible by n_heads")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "SelectorConfig":
        return cls(**doc)
