"""Encode quantized scores to compound-event sequences and back.

Per bar the encoder emits: a Tag event (emotion/genre), a bar event with
the bar's note density, then grid positions in order. The four main beats
are always present and carry tempo (explicit at tempo-map entries, CONTI
otherwise), chord (explicit at half-bar starts, CONTI otherwise) and beat
strength; other positions appear only when notes start there. Each group
of same-class notes at a position is preceded by its Instrument event.
Percussion pitches are offset by 128 into the pseudo-pitch range. Notes
longer than 32 grid steps are split into touching grid-max segments; the
decoder merges touching same-pitch notes back.
"""

from __future__ import annotations

from ..labels import EMOTIONS, GENRES
from ..score.model import (
    InstrumentClass,
    Note,
    Score,
    TICKS_PER_BAR,
    TICKS_PER_QUARTER,
    TICKS_PER_STEP,
)
from ..score.quantize import (
    DEFAULT_TEMPO_BPM,
    TEMPO_BINS,
    VELOCITY_BINS,
    _merge_notes,
)
from .chords import detect_chord
from .events import (
    CompoundEvent,
    EventSequence,
    Family,
    blank_event,
    sequence_violations,
)
from .vocab import BAR_MARK, DEFAULT_VOCAB, N_DURATIONS, VocabSpec

BEAT_POSITIONS = (0, 8, 16, 24)  # main beats on the 32-step grid
STEPS_PER_BEAT = 8
HALF_BAR_POSITIONS = (0, 16)


class UnencodableScore(ValueError):
    """Raised when a score cannot be expressed in the representation."""


class MalformedSequence(ValueError):
    """Raised when an event sequence violates grammar, masks or ranges."""


def compute_density(bar_onset_steps) -> int:
    """Density bin for a bar: note-onset count clamped to [0, 32]."""
    return min(32, len(list(bar_onset_steps)))


def compute_strength(onset_steps, position_step: int) -> int:
    """Strength bin for a grid position: onsets there, clamped to [0, 36]."""
    return min(36, sum(1 for s in onset_steps if s == position_step))


def _label_index(value, names, attr, vocab):
    if value is None:
        return vocab[attr].ignore
    if isinstance(value, str):
        return names.index(value)
    index = int(value)
    if not 0 <= index < len(names):
        raise ValueError(f"{attr} index {index} out of range")
    return index


def _check_quantized(score: Score) -> None:
    if score.time_signature != (4, 4):
        raise UnencodableScore(
            f"only 4/4 scores are encodable, got {score.time_signature}"
        )
    if score.ticks_per_quarter != TICKS_PER_QUARTER:
        raise UnencodableScore("score must be quantized (canonical resolution)")
    for cls, notes in score.tracks:
        for n in notes:
            if n.onset_tick % TICKS_PER_STEP or n.offset_tick % TICKS_PER_STEP:
                raise UnencodableScore("note ticks are off the 32nd-note grid")
            if n.velocity not in VELOCITY_BINS:
                raise UnencodableScore(f"velocity {n.velocity} not in bin set")
    for tick, bpm in score.tempo_map:
        if tick % TICKS_PER_QUARTER or bpm not in TEMPO_BINS:
            raise UnencodableScore("tempo map not on quantized beat grid")


def encode(
    score: Score,
    emotion=None,
    genre=None,
    vocab: VocabSpec = DEFAULT_VOCAB,
) -> EventSequence:
    """Encode a quantized score with optional emotion/genre labels."""
    _check_quantized(score)
    emotion_idx = _label_index(emotion, EMOTIONS, "emotion", vocab)
    genre_idx = _label_index(genre, GENRES, "genre", vocab)
    conti_tempo = vocab["tempo"].conti
    conti_chord = vocab["chord"].conti

    def tag_event() -> CompoundEvent:
        return blank_event(Family.TAG, vocab, emotion=emotion_idx, genre=genre_idx)

    metadata = {
        "emotion": EMOTIONS[emotion_idx] if emotion_idx < len(EMOTIONS) else None,
        "genre": GENRES[genre_idx] if genre_idx < len(GENRES) else None,
    }

    events: list[CompoundEvent] = []
    if score.n_notes() == 0:
        events.append(tag_event())
        events.append(blank_event(Family.EOS, vocab))
        return EventSequence(tuple(events), metadata)

    # (onset step, class, pitch index, duration index, velocity index)
    segments: list[tuple[int, InstrumentClass, int, int, int]] = []
    onset_steps: list[int] = []
    for cls, notes in score.tracks:
        for n in notes:
            start = n.onset_tick // TICKS_PER_STEP
            onset_steps.append(start)
            total = (n.offset_tick - n.onset_tick) // TICKS_PER_STEP
            pitch_idx = n.pitch + 128 if cls == InstrumentClass.DRUM else n.pitch
            vel_idx = VELOCITY_BINS.index(n.velocity)
            pos = start
            while total > 0:
                span = min(total, N_DURATIONS)
                segments.append((pos, cls, pitch_idx, span - 1, vel_idx))
                pos += span
                total -= span

    n_bars = max(s[0] for s in segments) // 32 + 1
    tempo_at = {
        tick // TICKS_PER_STEP: TEMPO_BINS.index(int(bpm))
        for tick, bpm in score.tempo_map
    }

    by_position: dict[int, dict[InstrumentClass, list[tuple[int, int, int]]]] = {}
    for pos, cls, pitch_idx, dur_idx, vel_idx in segments:
        by_position.setdefault(pos, {}).setdefault(cls, []).append(
            (pitch_idx, dur_idx, vel_idx)
        )

    for bar in range(n_bars):
        bar_step = bar * 32
        bar_onsets = [s for s in onset_steps if bar_step <= s < bar_step + 32]
        events.append(tag_event())
        events.append(
            blank_event(
                Family.RHYTHM, vocab,
                bar_beat=BAR_MARK,
                density=compute_density(bar_onsets),
            )
        )

        positions = sorted(
            {bar_step + p for p in BEAT_POSITIONS}
            | {p for p in by_position if bar_step <= p < bar_step + 32}
        )
        for step in positions:
            in_bar = step - bar_step
            if in_bar in BEAT_POSITIONS:
                tempo_idx = tempo_at.get(step, conti_tempo)
                if in_bar in HALF_BAR_POSITIONS:
                    chord_idx = _half_bar_chord(score, bar_step + in_bar)
                else:
                    chord_idx = conti_chord
            else:
                tempo_idx, chord_idx = conti_tempo, conti_chord
            events.append(
                blank_event(
                    Family.RHYTHM, vocab,
                    bar_beat=in_bar,
                    tempo=tempo_idx,
                    chord=chord_idx,
                    strength=compute_strength(onset_steps, step),
                )
            )
            for cls in sorted(by_position.get(step, {})):
                events.append(blank_event(Family.INSTRUMENT, vocab, program=int(cls)))
                for pitch_idx, dur_idx, vel_idx in sorted(by_position[step][cls]):
                    events.append(
                        blank_event(
                            Family.NOTE, vocab,
                            pitch=pitch_idx, duration=dur_idx, velocity=vel_idx,
                        )
                    )

    events.append(blank_event(Family.EOS, vocab))
    return EventSequence(tuple(events), metadata)


def _half_bar_chord(score: Score, start_step: int) -> int:
    """Chord token for the half bar beginning at ``start_step``."""
    start = start_step * TICKS_PER_STEP
    end = start + 16 * TICKS_PER_STEP
    sounding: set[int] = set()
    for cls, notes in score.tracks:
        if cls == InstrumentClass.DRUM:
            continue
        for n in notes:
            if n.onset_tick < end and n.offset_tick > start:
                sounding.add(n.pitch % 12)
    return detect_chord(sounding)


def decode(seq: EventSequence, vocab: VocabSpec = DEFAULT_VOCAB):
    """Decode a sequence into (Score, emotion label, genre label).

    The result is in canonical quantized form. Raises MalformedSequence if
    the sequence violates the grammar, family masks or vocabulary ranges.
    """
    problems = sequence_violations(seq, vocab)
    if problems:
        raise MalformedSequence("; ".join(problems[:5]))

    ignore_emotion = vocab["emotion"].ignore
    ignore_genre = vocab["genre"].ignore
    conti_tempo, ignore_tempo = vocab["tempo"].conti, vocab["tempo"].ignore

    emotion = genre = None
    first_tag = next(e for e in seq.events if e.family == Family.TAG)
    if first_tag.emotion != ignore_emotion:
        emotion = EMOTIONS[first_tag.emotion]
    if first_tag.genre != ignore_genre:
        genre = GENRES[first_tag.genre]

    notes: dict[InstrumentClass, list[Note]] = {}
    tempo_entries: dict[int, float] = {}
    bar = -1
    position = 0
    instrument: InstrumentClass | None = None

    for i, ev in enumerate(seq.events):
        if ev.family == Family.RHYTHM:
            if ev.is_bar():
                bar += 1
                position = 0
                instrument = None
            else:
                position = ev.bar_beat
                if ev.tempo not in (conti_tempo, ignore_tempo):
                    tick = (bar * 32 + position) * TICKS_PER_STEP
                    tempo_entries[tick] = float(TEMPO_BINS[ev.tempo])
        elif ev.family == Family.INSTRUMENT:
            instrument = InstrumentClass(ev.program)
        elif ev.family == Family.NOTE:
            if bar < 0 or instrument is None:
                raise MalformedSequence(f"event {i}: Note outside any bar")
            is_drum = instrument == InstrumentClass.DRUM
            if is_drum != (ev.pitch >= 128):
                raise MalformedSequence(
                    f"event {i}: pitch index {ev.pitch} inconsistent with "
                    f"instrument {instrument.name}"
                )
            onset = (bar * 32 + position) * TICKS_PER_STEP
            offset = onset + (ev.duration + 1) * TICKS_PER_STEP
            pitch = ev.pitch - 128 if is_drum else ev.pitch
            notes.setdefault(instrument, []).append(
                Note(onset, pitch, offset, VELOCITY_BINS[ev.velocity])
            )

    tracks = tuple(
        (cls, tuple(_merge_notes(notes[cls]))) for cls in sorted(notes) if notes[cls]
    )
    tempo_entries.setdefault(0, DEFAULT_TEMPO_BPM)
    entries: list[tuple[int, float]] = []
    for tick in sorted(tempo_entries):
        if not entries or entries[-1][1] != tempo_entries[tick]:
            entries.append((tick, tempo_entries[tick]))
    tempo_map = tuple(entries)

    score = Score(
        tracks=tracks,
        tempo_map=tempo_map,
        time_signature=(4, 4),
        ticks_per_quarter=TICKS_PER_QUARTER,
    )
    return score, emotion, genre
