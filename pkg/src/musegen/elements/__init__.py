from .types import (
    ACTIVATION,
    BarElement,
    BeatElement,
    EmotionElement,
    GenreElement,
    MODALITIES,
    NoteElement,
    ProjectionElements,
    RhythmElement,
    validate,
)
from .io import (
    ELEMENTS_SCHEMA,
    SCHEMA_VERSION,
    dump_elements,
    elements_from_dict,
    elements_to_dict,
    load_elements,
)

__all__ = [
    "ACTIVATION",
    "BarElement",
    "BeatElement",
    "EmotionElement",
    "GenreElement",
    "MODALITIES",
    "NoteElement",
    "ProjectionElements",
    "RhythmElement",
    "validate",
    "ELEMENTS_SCHEMA",
    "SCHEMA_VERSION",
    "dump_elements",
    "elements_from_dict",
    "elements_to_dict",
    "load_elements",
]
