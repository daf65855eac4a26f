from .embedding import CompoundEmbedding, sinusoidal_positions
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint

__all__ = [
    "CompoundEmbedding",
    "sinusoidal_positions",
    "CheckpointError",
    "load_checkpoint",
    "save_checkpoint",
]
