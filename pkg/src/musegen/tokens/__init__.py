from .vocab import (
    AttributeSpec,
    ATTRIBUTE_NAMES,
    BAR_MARK,
    DEFAULT_VOCAB,
    VocabSpec,
)
from .events import (
    CompoundEvent,
    EventSequence,
    FAMILY_MASK,
    Family,
    blank_event,
    event_from_indices,
    event_violations,
    sequence_violations,
)
from .chords import NO_CHORD, chord_index, chord_name, detect_chord
from .codec import (
    BEAT_POSITIONS,
    MalformedSequence,
    UnencodableScore,
    compute_density,
    compute_strength,
    decode,
    encode,
)
from .io import from_binary, from_jsonl, to_binary, to_jsonl

__all__ = [
    "AttributeSpec",
    "ATTRIBUTE_NAMES",
    "BAR_MARK",
    "DEFAULT_VOCAB",
    "VocabSpec",
    "CompoundEvent",
    "EventSequence",
    "FAMILY_MASK",
    "Family",
    "blank_event",
    "event_from_indices",
    "event_violations",
    "sequence_violations",
    "NO_CHORD",
    "chord_index",
    "chord_name",
    "detect_chord",
    "BEAT_POSITIONS",
    "MalformedSequence",
    "UnencodableScore",
    "compute_density",
    "compute_strength",
    "decode",
    "encode",
    "from_binary",
    "from_jsonl",
    "to_binary",
    "to_jsonl",
]
