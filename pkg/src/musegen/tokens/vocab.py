"""Per-attribute vocabularies for the compound-event representation.

Each event carries 12 attributes (family first). Attribute index spaces put
real values at the front and special entries at the back: an optional CONTI
(continuation) entry, then an optional IGNORE entry marking the attribute
inactive for the event. Base sizes sum to 672 with 13 special entries.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..labels import N_EMOTIONS, N_GENRES

N_INSTRUMENT_CLASSES = 17
N_TEMPO_BINS = 65
N_POSITIONS = 32          # 32nd-note grid positions inside a bar
BAR_MARK = N_POSITIONS    # the extra position/bar symbol
N_CHORDS = 133
N_PITCHES = 256           # 128 melodic + 128 percussion pseudo-pitches
N_DURATIONS = 32          # 1..32 grid steps
N_VELOCITY_BINS = 44
N_FAMILIES = 5
N_DENSITY_BINS = 33       # onset counts 0..32
N_STRENGTH_BINS = 37      # onset counts 0..36

EXPECTED_BASE_TOTAL = 672
EXPECTED_SPECIAL_TOTAL = 13


@dataclass(frozen=True)
class AttributeSpec:
    """One attribute's vocabulary layout and embedding width."""

    name: str
    base_size: int
    has_conti: bool
    has_ignore: bool
    embed_width: int

    @property
    def full_size(self) -> int:
        return self.base_size + self.has_conti + self.has_ignore

    @property
    def conti(self) -> int:
        if not self.has_conti:
            raise ValueError(f"{self.name} has no CONTI entry")
        return self.base_size

    @property
    def ignore(self) -> int:
        if not self.has_ignore:
            raise ValueError(f"{self.name} has no IGNORE entry")
        return self.base_size + self.has_conti

    def in_range(self, index: int) -> bool:
        return 0 <= index < self.full_size


# (name, base size, conti, ignore, embedding width at full scale)
_LAYOUT = (
    ("family", N_FAMILIES, False, False, 64),
    ("emotion", N_EMOTIONS, False, True, 64),
    ("genre", N_GENRES, False, True, 64),
    ("bar_beat", N_POSITIONS + 1, False, True, 256),
    ("tempo", N_TEMPO_BINS, True, True, 256),
    ("chord", N_CHORDS, True, True, 256),
    ("density", N_DENSITY_BINS, False, True, 128),
    ("strength", N_STRENGTH_BINS, False, True, 128),
    ("program", N_INSTRUMENT_CLASSES, False, True, 64),
    ("pitch", N_PITCHES, False, True, 1024),
    ("duration", N_DURATIONS, False, True, 512),
    ("velocity", N_VELOCITY_BINS, False, True, 512),
)

ATTRIBUTE_NAMES = tuple(name for name, *_ in _LAYOUT)


@dataclass(frozen=True)
class VocabSpec:
    """The full 12-attribute vocabulary with embedding widths."""

    attributes: tuple[AttributeSpec, ...]

    def __post_init__(self) -> None:
        base = sum(a.base_size for a in self.attributes)
        special = sum(a.has_conti + a.has_ignore for a in self.attributes)
        if base != EXPECTED_BASE_TOTAL:
            raise ValueError(f"base vocabulary totals {base}, expected {EXPECTED_BASE_TOTAL}")
        if special != EXPECTED_SPECIAL_TOTAL:
            raise ValueError(
                f"special entries total {special}, expected {EXPECTED_SPECIAL_TOTAL}"
            )
        if any(a.embed_width <= 0 for a in self.attributes):
            raise ValueError("embedding widths must be positive")

    @classmethod
    def default(cls, width_factor: float = 1.0) -> "VocabSpec":
        """Reference vocabulary; widths scale by ``width_factor`` (min 4)."""
        return cls(
            attributes=tuple(
                AttributeSpec(name, size, conti, ignore, max(4, round(width * width_factor)))
                for name, size, conti, ignore, width in _LAYOUT
            )
        )

    def __getitem__(self, name: str) -> AttributeSpec:
        for a in self.attributes:
            if a.name == name:
                return a
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def total_base(self) -> int:
        return sum(a.base_size for a in self.attributes)

    def total_special(self) -> int:
        return sum(a.has_conti + a.has_ignore for a in self.attributes)


DEFAULT_VOCAB = VocabSpec.default()
