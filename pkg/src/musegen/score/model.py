"""Core score data model: notes, instrument classes, tempo-mapped tracks."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

# Canonical resolution: a 32nd-note grid at 480 ticks per quarter.
TICKS_PER_QUARTER = 480
TICKS_PER_STEP = TICKS_PER_QUARTER // 8  # one 32nd-note step
STEPS_PER_BAR = 32  # 4/4 only
TICKS_PER_BAR = TICKS_PER_STEP * STEPS_PER_BAR


class MalformedFile(ValueError):
    """Raised when MIDI bytes do not form a well-formed SMF file."""


class InstrumentClass(IntEnum):
    """The 17 instrument categories tracks are grouped into."""

    PIANO = 0
    XYLOPHONE = 1
    ORGAN = 2
    GUITAR = 3
    BASS = 4
    VIOLIN = 5
    HARP = 6
    STRING = 7
    TRUMPET = 8
    TUBA = 9
    SAX = 10
    FLUTE = 11
    LEAD = 12
    PAD = 13
    PIPA = 14
    GUZHENG = 15
    DRUM = 16


@dataclass(frozen=True, order=True)
class Note:
    """A single note: onset/offset in ticks, MIDI pitch, velocity.

    For drum tracks ``pitch`` is the percussion key rather than a pitch.
    """

    onset_tick: int
    pitch: int
    offset_tick: int
    velocity: int

    def __post_init__(self) -> None:
        if not 0 <= self.pitch <= 127:
            raise ValueError(f"pitch out of range: {self.pitch}")
        if not 1 <= self.velocity <= 127:
            raise ValueError(f"velocity out of range: {self.velocity}")
        if self.onset_tick < 0 or self.offset_tick <= self.onset_tick:
            raise ValueError(
                f"bad note span: [{self.onset_tick}, {self.offset_tick})"
            )

    @property
    def duration(self) -> int:
        return self.offset_tick - self.onset_tick


@dataclass(frozen=True)
class Score:
    """Instrument-grouped, tempo-mapped note list.

    ``tracks`` holds one entry per instrument class present; ``tempo_map``
    is a sorted (tick, bpm) list. BPM values may be fractional until the
    score is quantized.
    """

    tracks: tuple[tuple[InstrumentClass, tuple[Note, ...]], ...] = ()
    tempo_map: tuple[tuple[int, float], ...] = ((0, 120.0),)
    time_signature: tuple[int, int] = (4, 4)
    ticks_per_quarter: int = TICKS_PER_QUARTER

    def __post_init__(self) -> None:
        if self.ticks_per_quarter <= 0:
            raise ValueError("ticks_per_quarter must be positive")
        if not self.tempo_map:
            raise ValueError("tempo_map must not be empty")
        last = -1
        for tick, bpm in self.tempo_map:
            if tick < last:
                raise ValueError("tempo_map not sorted by tick")
            if bpm <= 0:
                raise ValueError(f"non-positive bpm: {bpm}")
            last = tick
        for cls, _notes in self.tracks:
            if not isinstance(cls, InstrumentClass):
                raise ValueError(f"not an instrument class: {cls!r}")

    @property
    def notes(self) -> list[tuple[InstrumentClass, Note]]:
        """All (class, note) pairs, in track order."""
        return [(cls, n) for cls, ns in self.tracks for n in ns]

    def n_notes(self) -> int:
        return sum(len(ns) for _, ns in self.tracks)

    def end_tick(self) -> int:
        """Largest note offset, 0 for an empty score."""
        return max((n.offset_tick for _, ns in self.tracks for n in ns), default=0)

    def duration_seconds(self) -> float:
        """Wall-clock length implied by the tempo map up to the last offset."""
        end = self.end_tick()
        if end == 0:
            return 0.0
        total = 0.0
        tmap = list(self.tempo_map)
        for i, (tick, bpm) in enumerate(tmap):
            seg_start = max(tick, 0)
            seg_end = tmap[i + 1][0] if i + 1 < len(tmap) else end
            seg_end = min(seg_end, end)
            if seg_end > seg_start:
                quarters = (seg_end - seg_start) / self.ticks_per_quarter
                total += quarters * 60.0 / bpm
        return total


def make_score(
    tracks,
    tempo_map=((0, 120.0),),
    time_signature=(4, 4),
    ticks_per_quarter=TICKS_PER_QUARTER,
) -> Score:
    """Build a Score from nested lists, coercing to the frozen tuple form."""
    frozen_tracks = tuple(
        (InstrumentClass(cls), tuple(notes)) for cls, notes in tracks
    )
    return Score(
        tracks=frozen_tracks,
        tempo_map=tuple((int(t), float(b)) for t, b in tempo_map),
        time_signature=(int(time_signature[0]), int(time_signature[1])),
        ticks_per_quarter=int(ticks_per_quarter),
    )
