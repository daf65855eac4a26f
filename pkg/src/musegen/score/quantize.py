"""Grid quantization and score canonicalization.

``quantize_score`` is the normal form every other module assumes:

* ticks rescaled to the canonical 480-per-quarter resolution and snapped
  to the 32nd-note grid (zero-length notes extended by one step),
* velocities clamped and snapped to the 44-value bin set {40, 42, .., 126},
* tempos clamped and snapped to the 65-value bin set {32, 35, .., 224},
  with change points snapped to quarter-note ticks,
* one track per instrument class, classes ascending, notes sorted,
* overlapping or touching same-pitch notes within a class merged
  (earliest onset, latest offset, velocity of the earliest note).

The function is idempotent; its output is the codec's ground truth.
"""

from __future__ import annotations

from .model import (
    InstrumentClass,
    Note,
    Score,
    TICKS_PER_BAR,
    TICKS_PER_QUARTER,
    TICKS_PER_STEP,
)

TEMPO_BINS: tuple[int, ...] = tuple(range(32, 225, 3))  # 65 values
VELOCITY_BINS: tuple[int, ...] = tuple(range(40, 127, 2))  # 44 values

DEFAULT_TEMPO_BPM = float(min(TEMPO_BINS, key=lambda b: abs(b - 120)))  # 119


def _snap_to_bins(value: float, bins: tuple[int, ...]) -> int:
    """Clamp to the bin range, then pick the nearest bin (ties downward)."""
    v = min(max(value, bins[0]), bins[-1])
    return min(bins, key=lambda b: (abs(b - v), b))


def snap_tempo(bpm: float) -> int:
    return _snap_to_bins(bpm, TEMPO_BINS)


def snap_velocity(velocity: int) -> int:
    return _snap_to_bins(velocity, VELOCITY_BINS)


def tempo_bin_index(bpm: float) -> int:
    return TEMPO_BINS.index(snap_tempo(bpm))


def velocity_bin_index(velocity: int) -> int:
    return VELOCITY_BINS.index(snap_velocity(velocity))


def _snap_tick(tick: float, grid: int) -> int:
    return int(round(tick / grid)) * grid


def _merge_notes(notes: list[Note]) -> list[Note]:
    """Merge same-pitch notes that overlap or touch; earliest velocity wins."""
    by_pitch: dict[int, list[Note]] = {}
    for n in notes:
        by_pitch.setdefault(n.pitch, []).append(n)
    merged: list[Note] = []
    for pitch, group in by_pitch.items():
        group.sort(key=lambda n: (n.onset_tick, n.offset_tick))
        current = group[0]
        for n in group[1:]:
            if n.onset_tick <= current.offset_tick:
                if n.offset_tick > current.offset_tick:
                    current = Note(
                        current.onset_tick, pitch, n.offset_tick, current.velocity
                    )
            else:
                merged.append(current)
                current = n
        merged.append(current)
    merged.sort()
    return merged


def quantize_score(score: Score) -> Score:
    """Return the canonical quantized form of ``score`` (see module doc)."""
    scale = TICKS_PER_QUARTER / score.ticks_per_quarter

    by_class: dict[InstrumentClass, list[Note]] = {}
    for cls, notes in score.tracks:
        bucket = by_class.setdefault(cls, [])
        for n in notes:
            onset = _snap_tick(n.onset_tick * scale, TICKS_PER_STEP)
            offset = _snap_tick(n.offset_tick * scale, TICKS_PER_STEP)
            if offset <= onset:
                offset = onset + TICKS_PER_STEP
            bucket.append(Note(onset, n.pitch, offset, snap_velocity(n.velocity)))

    tracks = tuple(
        (cls, tuple(_merge_notes(by_class[cls])))
        for cls in sorted(by_class)
        if by_class[cls]
    )

    end_tick = max(
        (n.offset_tick for _, ns in tracks for n in ns), default=0
    )
    last_onset = max((n.onset_tick for _, ns in tracks for n in ns), default=0)
    if end_tick == 0:
        tempo_map: tuple[tuple[int, float], ...] = ((0, DEFAULT_TEMPO_BPM),)
    else:
        span_end = (last_onset // TICKS_PER_BAR + 1) * TICKS_PER_BAR
        snapped: dict[int, float] = {}
        for tick, bpm in score.tempo_map:
            t = max(0, _snap_tick(tick * scale, TICKS_PER_QUARTER))
            if t < span_end:
                snapped[t] = float(snap_tempo(bpm))  # last event at a tick wins
        if 0 not in snapped:
            snapped[0] = DEFAULT_TEMPO_BPM
        entries: list[tuple[int, float]] = []
        for t in sorted(snapped):
            if not entries or entries[-1][1] != snapped[t]:
                entries.append((t, snapped[t]))
        tempo_map = tuple(entries)

    return Score(
        tracks=tracks,
        tempo_map=tempo_map,
        time_signature=score.time_signature,
        ticks_per_quarter=TICKS_PER_QUARTER,
    )
