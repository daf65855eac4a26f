from .model import (
    InstrumentClass,
    MalformedFile,
    Note,
    Score,
    TICKS_PER_QUARTER,
    TICKS_PER_STEP,
    STEPS_PER_BAR,
    TICKS_PER_BAR,
)
from .instruments import group_instruments, class_program
from .quantize import (
    TEMPO_BINS,
    VELOCITY_BINS,
    quantize_score,
    snap_tempo,
    snap_velocity,
)
from .smf import parse_midi, serialize_midi

__all__ = [
    "InstrumentClass",
    "MalformedFile",
    "Note",
    "Score",
    "TICKS_PER_QUARTER",
    "TICKS_PER_STEP",
    "STEPS_PER_BAR",
    "TICKS_PER_BAR",
    "group_instruments",
    "class_program",
    "TEMPO_BINS",
    "VELOCITY_BINS",
    "quantize_score",
    "snap_tempo",
    "snap_velocity",
    "parse_midi",
    "serialize_midi",
]
