"""Control elements: the shared target space all prompt modalities map into.

Elements carry physical units (seconds, bpm); conversion to vocabulary
indices happens only when they condition generation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..labels import EMOTIONS, GENRES

MODALITIES = ("video", "image", "text", "tag", "humming")

# modality -> element names that must be active
ACTIVATION: dict[str, tuple[frozenset[str], ...]] = {
    "video": (frozenset({"emotion", "rhythm"}),),
    "image": (frozenset({"emotion"}),),
    "text": (frozenset({"emotion"}),),
    "tag": (frozenset({"emotion"}), frozenset({"genre"})),
    "humming": (frozenset({"rhythm", "notes"}),),
}


@dataclass(frozen=True)
class EmotionElement:
    """One-hot over the 11 emotion classes, stored as the class name."""

    label: str

    def __post_init__(self) -> None:
        if self.label not in EMOTIONS:
            raise ValueError(f"unknown emotion: {self.label!r}")

    @property
    def index(self) -> int:
        return EMOTIONS.index(self.label)

    def one_hot(self) -> list[int]:
        return [1 if i == self.index else 0 for i in range(len(EMOTIONS))]


@dataclass(frozen=True)
class GenreElement:
    label: str

    def __post_init__(self) -> None:
        if self.label not in GENRES:
            raise ValueError(f"unknown genre: {self.label!r}")

    @property
    def index(self) -> int:
        return GENRES.index(self.label)

    def one_hot(self) -> list[int]:
        return [1 if i == self.index else 0 for i in range(len(GENRES))]


@dataclass(frozen=True)
class BarElement:
    start_s: float
    density: int  # 0..32

    def __post_init__(self) -> None:
        if not 0 <= self.density <= 32:
            raise ValueError(f"density bin out of range: {self.density}")


@dataclass(frozen=True)
class BeatElement:
    start_s: float
    tempo_bpm: float
    strength: int  # 0..36

    def __post_init__(self) -> None:
        if not 32 <= self.tempo_bpm <= 224:
            raise ValueError(f"tempo out of range: {self.tempo_bpm}")
        if not 0 <= self.strength <= 36:
            raise ValueError(f"strength bin out of range: {self.strength}")


@dataclass(frozen=True)
class RhythmElement:
    """Per-bar density and per-beat tempo/strength over the piece span."""

    bars: tuple[BarElement, ...]
    beats: tuple[BeatElement, ...]
    beats_per_bar: int = 4

    def __post_init__(self) -> None:
        if not self.bars:
            raise ValueError("rhythm element needs at least one bar")
        if len(self.beats) != len(self.bars) * self.beats_per_bar:
            raise ValueError(
                f"{len(self.bars)} bars x {self.beats_per_bar} beats/bar "
                f"!= {len(self.beats)} beats"
            )
        for seq in (self.bars, self.beats):
            starts = [e.start_s for e in seq]
            if any(b <= a for a, b in zip(starts, starts[1:])):
                raise ValueError("element start times must be strictly increasing")


@dataclass(frozen=True)
class NoteElement:
    """A prompt note in vocabulary units: pitch, grid steps, raw velocity."""

    pitch: int
    duration_steps: int
    velocity: int

    def __post_init__(self) -> None:
        if not 0 <= self.pitch <= 255:
            raise ValueError(f"pitch out of range: {self.pitch}")
        if not 1 <= self.duration_steps <= 32:
            raise ValueError(f"duration out of range: {self.duration_steps}")
        if not 1 <= self.velocity <= 127:
            raise ValueError(f"velocity out of range: {self.velocity}")


@dataclass(frozen=True)
class ProjectionElements:
    """The activated element subset produced by parsing one prompt."""

    source_modality: str
    emotion: EmotionElement | None = None
    genre: GenreElement | None = None
    rhythm: RhythmElement | None = None
    notes: tuple[NoteElement, ...] | None = None
    emotion_per_bar: tuple[EmotionElement, ...] | None = None

    def active(self) -> frozenset[str]:
        names = []
        if self.emotion is not None:
            names.append("emotion")
        if self.genre is not None:
            names.append("genre")
        if self.rhythm is not None:
            names.append("rhythm")
        if self.notes is not None:
            names.append("notes")
        return frozenset(names)


def validate(elements: ProjectionElements) -> list[str]:
    """Check the modality/element activation pattern; returns violations."""
    problems = []
    modality = elements.source_modality
    if modality not in MODALITIES:
        return [f"unknown modality: {modality!r}"]
    if not elements.active():
        problems.append("no elements active")
        return problems
    allowed = ACTIVATION[modality]
    if elements.active() not in allowed:
        want = " or ".join("{" + ", ".join(sorted(a)) + "}" for a in allowed)
        extra = elements.active() - frozenset().union(*allowed)
        for name in sorted(extra):
            problems.append(f"{name} not derivable from {modality}")
        problems.append(
            f"{modality} must activate exactly {want}, got "
            "{" + ", ".join(sorted(elements.active())) + "}"
        )
    if elements.emotion_per_bar is not None and elements.rhythm is None:
        problems.append("bar-level emotions require a rhythm element")
    return problems
