"""Generator configuration.

The full-scale reference configuration is recorded as constants; tests
and the bundled training commands run the desk-scale defaults.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

REFERENCE_LAYERS = 30
REFERENCE_HEADS = 16
REFERENCE_HIDDEN = 1024
REFERENCE_LEARNING_RATE = 3e-5
GRADIENT_CLIP = 0.5


@dataclass(frozen=True)
class GeneratorConfig:
    n_layers: int = 2
    n_heads: int = 4
    d_model: int = 128
    ffn_mult: int = 4
    context_length: int = 512
    dropout: float = 0.0
    width_factor: float = 0.0625  # scales the per-attribute embedding widths
    learning_rate: float = 1e-3
    grad_clip: float = GRADIENT_CLIP
    temperature: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.n_layers, self.n_heads, self.d_model, self.context_length) <= 0:
            raise ValueError("model dimensions must be positive")
        if self.d_model % self.n_heads:
            raise ValueError("d_model must be divisible by n_heads")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "GeneratorConfig":
        return cls(**doc)
