"""Closed-form mappings from prompt features to control elements.

Image/text emotion scoring reduces to an argmax (softmax preserves order,
ties break toward the lowest class index). Video prompts set the tempo from
the scene-transition rate through a saturating curve, derive the bar count
from duration and tempo, average per-frame emotion scores bar by bar, and
place per-bar flow / per-beat saliency on corpus percentile tables to get
density and strength bins. Humming prompts are standardized (per-beat tempo
from inter-beat intervals, notes snapped to the local 32nd grid) and handed
over as note and rhythm elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..labels import EMOTIONS, GENRES
from ..score.quantize import snap_tempo
from ..tokens.codec import compute_density, compute_strength
from .features import PromptFeatures
from .percentiles import PercentileTables, default_tables
from ..elements.types import (
    BarElement,
    BeatElement,
    EmotionElement,
    GenreElement,
    NoteElement,
    ProjectionElements,
    RhythmElement,
)

TEMPO_BASE_BPM = 60.0   # tempo curve floor
TEMPO_RANGE_BPM = 70.0  # tempo curve span; ceiling approaches 130 bpm
IMAGE_WEIGHT_CLASSIFIER = 1.0
IMAGE_WEIGHT_ZEROSHOT = 2.0
BEATS_PER_BAR = 4
FRAMES_PER_BAR = 8
STEPS_PER_BEAT = 8


class DimensionMismatch(ValueError):
    pass


class UnknownTag(ValueError):
    pass


class NonPositiveDuration(ValueError):
    pass


class EmptyVideo(ValueError):
    pass


class TooFewBeats(ValueError):
    pass


def _check_scores(vec, name: str) -> np.ndarray:
    arr = np.asarray(vec, dtype=float)
    if arr.shape != (len(EMOTIONS),):
        raise DimensionMismatch(
            f"{name} must have {len(EMOTIONS)} entries, got shape {arr.shape}"
        )
    return arr


def fuse_image_scores(
    classifier_scores,
    zeroshot_scores,
    weight_classifier: float = IMAGE_WEIGHT_CLASSIFIER,
    weight_zeroshot: float = IMAGE_WEIGHT_ZEROSHOT,
) -> EmotionElement:
    """Weighted fusion of two emotion score vectors; argmax wins."""
    a = _check_scores(classifier_scores, "classifier_scores")
    b = _check_scores(zeroshot_scores, "zeroshot_scores")
    combined = weight_classifier * a + weight_zeroshot * b
    return EmotionElement(EMOTIONS[int(np.argmax(combined))])


def text_emotion(similarities) -> EmotionElement:
    """Dominant emotion from embedding similarities.

    Softmax normalization is monotone, so the argmax of the raw
    similarities is already the argmax of the normalized scores.
    """
    sims = _check_scores(similarities, "similarities")
    if not np.all(np.isfinite(sims)):
        raise ValueError("similarities must be finite")
    return EmotionElement(EMOTIONS[int(np.argmax(sims))])


def tag_to_element(tag: str) -> ProjectionElements:
    """Identity embedding of an emotion or genre tag."""
    if tag in EMOTIONS:
        return ProjectionElements(source_modality="tag", emotion=EmotionElement(tag))
    if tag in GENRES:
        return ProjectionElements(source_modality="tag", genre=GenreElement(tag))
    raise UnknownTag(f"tag {tag!r} is neither an emotion nor a genre")


def video_tempo(n_scene: int, t_video_s: float) -> float:
    """Raw music tempo from the scene transition rate, in [60, 130) bpm.

    Binning to the tempo vocabulary happens downstream, at conditioning
    time; the raw value also feeds the bar-count computation.
    """
    if t_video_s <= 0:
        raise NonPositiveDuration(f"video duration must be positive: {t_video_s}")
    if n_scene < 0:
        raise ValueError("scene count cannot be negative")
    rate = n_scene / t_video_s
    tempo = TEMPO_BASE_BPM + TEMPO_RANGE_BPM * math.tanh(rate)
    # tanh saturates to 1.0 in floats; keep the mathematical open bound
    return min(tempo, math.nextafter(TEMPO_BASE_BPM + TEMPO_RANGE_BPM, 0.0))


def video_bar_count(t_video_s: float, bpm: float, n_bpb: int = BEATS_PER_BAR) -> int:
    """Bars needed to cover the video, rounded up (never zero)."""
    if t_video_s <= 0 or bpm <= 0 or n_bpb <= 0:
        raise NonPositiveDuration("duration, tempo and beats/bar must be positive")
    return max(1, math.ceil(t_video_s * bpm / (60.0 * n_bpb)))


def video_emotion(frame_scores, n_ipb: int = FRAMES_PER_BAR):
    """Global and per-bar dominant emotions from per-frame score vectors.

    Frames are grouped ``n_ipb`` per bar; a short final bar is padded by
    repeating its last frame.
    """
    frames = [_check_scores(f, "frame score") for f in frame_scores]
    if not frames:
        raise EmptyVideo("no frame scores")
    n_bars = math.ceil(len(frames) / n_ipb)
    bar_scores = []
    for i in range(n_bars):
        chunk = frames[i * n_ipb : (i + 1) * n_ipb]
        while len(chunk) < n_ipb:
            chunk.append(chunk[-1])
        bar_scores.append(np.mean(chunk, axis=0))
    video_score = np.mean(bar_scores, axis=0)
    per_bar = [EmotionElement(EMOTIONS[int(np.argmax(s))]) for s in bar_scores]
    return EmotionElement(EMOTIONS[int(np.argmax(video_score))]), per_bar


def video_rhythm(
    flow_per_frame,
    beat_saliency,
    bpm: float,
    t_video_s: float,
    tables: PercentileTables,
    n_bpb: int = BEATS_PER_BAR,
) -> RhythmElement:
    """Rhythm element from motion features.

    Bars partition [0, T) evenly; per-bar mean flow maps through the flow
    percentile table onto density bins 0..32 and per-beat saliency through
    the saliency table onto strength bins 0..36. Every beat carries the
    (raw) video tempo.
    """
    if t_video_s <= 0:
        raise NonPositiveDuration("video duration must be positive")
    flow = [float(v) for v in flow_per_frame]
    saliency = [float(v) for v in beat_saliency]
    n_bar = video_bar_count(t_video_s, bpm, n_bpb)
    if len(saliency) != n_bar * n_bpb:
        raise DimensionMismatch(
            f"expected {n_bar * n_bpb} beat saliency values, got {len(saliency)}"
        )

    bars = []
    beats = []
    for i in range(n_bar):
        bar_start = t_video_s * i / n_bar
        bar_end = t_video_s * (i + 1) / n_bar
        in_bar = [
            f for t, f in enumerate(flow)
            if bar_start <= t * t_video_s / len(flow) < bar_end
        ]
        mean_flow = sum(in_bar) / len(in_bar) if in_bar else 0.0
        bars.append(BarElement(bar_start, tables.flow.to_bin(mean_flow, 32)))
        for j in range(n_bpb):
            beats.append(
                BeatElement(
                    bar_start + t_video_s * j / (n_bar * n_bpb),
                    bpm,
                    tables.saliency.to_bin(saliency[i * n_bpb + j], 36),
                )
            )
    return RhythmElement(tuple(bars), tuple(beats), n_bpb)


def video_to_elements(
    payload: dict, tables: PercentileTables | None = None
) -> ProjectionElements:
    """Full video mapping: emotion (global + per bar) and rhythm."""
    tables = tables or default_tables()
    bpm = video_tempo(payload["n_scenes"], payload["duration_s"])
    emotion, per_bar = video_emotion(payload["frame_emotion_scores"])
    rhythm = video_rhythm(
        payload["flow_per_frame"],
        payload["beat_saliency"],
        bpm,
        payload["duration_s"],
        tables,
    )
    n_bar = len(rhythm.bars)
    per_bar = (per_bar + [per_bar[-1]] * n_bar)[:n_bar]  # align to bar count
    return ProjectionElements(
        source_modality="video",
        emotion=emotion,
        rhythm=rhythm,
        emotion_per_bar=tuple(per_bar),
    )


@dataclass(frozen=True)
class StdNote:
    """A humming note snapped to the beat-local 32nd-note grid."""

    onset_s: float
    offset_s: float
    onset_step: int
    offset_step: int
    pitch: int
    velocity: int


@dataclass(frozen=True)
class StdSequence:
    """Standardized humming: snapped notes, per-beat tempo, fixed beat length."""

    notes: tuple[StdNote, ...]
    beats: tuple[tuple[float, int], ...]  # (time_s, tempo bpm snapped)
    t_beat: float


def standardize_humming(raw_notes, raw_beats) -> StdSequence:
    """Beat processing and note quantization for a transcribed humming.

    Each beat's tempo comes from the interval to the previous beat (the
    first beat inherits the second's); note boundaries snap to the nearest
    32nd-note position of their local beat grid. ``t_beat`` is the mean
    inter-beat interval. Idempotent on already-standardized input.
    """
    beats = [float(b) for b in raw_beats]
    if len(beats) < 2:
        raise TooFewBeats("need at least two beat times")
    if any(b2 <= b1 for b1, b2 in zip(beats, beats[1:])):
        raise ValueError("beat times must be strictly increasing")

    intervals = [b2 - b1 for b1, b2 in zip(beats, beats[1:])]
    tempos = [snap_tempo(60.0 / ivl) for ivl in intervals]
    tempos = [tempos[0]] + tempos  # first beat inherits the second's tempo
    t_beat = sum(intervals) / len(intervals)

    def locate(t: float) -> tuple[int, float]:
        """Beat index whose grid governs time t, and that grid's step."""
        k = 0
        while k + 1 < len(beats) and beats[k + 1] <= t:
            k += 1
        ivl = intervals[min(k, len(intervals) - 1)]
        return k, ivl / STEPS_PER_BEAT

    def to_step(t: float) -> tuple[int, float]:
        k, step = locate(t)
        offset = round((t - beats[k]) / step)
        return k * STEPS_PER_BEAT + offset, beats[k] + offset * step

    notes = []
    for onset_s, offset_s, pitch, velocity in raw_notes:
        on_step, on_snapped = to_step(float(onset_s))
        off_step, off_snapped = to_step(float(offset_s))
        if off_step <= on_step:
            off_step = on_step + 1
            _, grid = locate(float(onset_s))
            off_snapped = on_snapped + grid
        notes.append(
            StdNote(on_snapped, off_snapped, on_step, off_step, int(pitch), int(velocity))
        )
    notes.sort(key=lambda n: (n.onset_step, n.pitch))
    return StdSequence(
        notes=tuple(notes),
        beats=tuple((b, t) for b, t in zip(beats, tempos)),
        t_beat=t_beat,
    )


def humming_to_elements(std: StdSequence, n_bpb: int = BEATS_PER_BAR) -> ProjectionElements:
    """Note and rhythm elements from a standardized humming sequence."""
    onset_steps = [n.onset_step for n in std.notes]
    last_step = max((n.offset_step for n in std.notes), default=0)
    n_beats = max(len(std.beats), math.ceil(last_step / STEPS_PER_BEAT))
    n_bar = max(1, math.ceil(n_beats / n_bpb))

    steps_per_bar = n_bpb * STEPS_PER_BEAT
    bars = []
    beats = []
    for i in range(n_bar):
        bar_start = std.t_beat * n_bpb * i
        bar_onsets = [
            s for s in onset_steps if i * steps_per_bar <= s < (i + 1) * steps_per_bar
        ]
        bars.append(BarElement(bar_start, compute_density(bar_onsets)))
        for j in range(n_bpb):
            beat_idx = min(i * n_bpb + j, len(std.beats) - 1)
            beats.append(
                BeatElement(
                    bar_start + std.t_beat * j,
                    float(std.beats[beat_idx][1]),
                    compute_strength(onset_steps, (i * n_bpb + j) * STEPS_PER_BEAT),
                )
            )
    notes = tuple(
        NoteElement(
            n.pitch,
            min(32, n.offset_step - n.onset_step),
            n.velocity,
        )
        for n in std.notes
    )
    return ProjectionElements(
        source_modality="humming",
        rhythm=RhythmElement(tuple(bars), tuple(beats), n_bpb),
        notes=notes,
    )


def parse_features(
    features: PromptFeatures, tables: PercentileTables | None = None
) -> ProjectionElements:
    """Dispatch a feature document to its modality mapping."""
    payload = features.payload
    if features.modality == "image":
        return ProjectionElements(
            source_modality="image",
            emotion=fuse_image_scores(
                payload["classifier_scores"], payload["zeroshot_scores"]
            ),
        )
    if features.modality == "text":
        return ProjectionElements(
            source_modality="text",
            emotion=text_emotion(payload["similarities"]),
        )
    if features.modality == "tag":
        return tag_to_element(payload["tag"])
    if features.modality == "video":
        return video_to_elements(payload, tables)
    if features.modality == "humming":
        std = standardize_humming(
            [
                (n["onset_s"], n["offset_s"], n["pitch"], n["velocity"])
                for n in payload["notes"]
            ],
            payload["beats"],
        )
        return humming_to_elements(std)
    raise ValueError(f"unknown modality {features.modality!r}")
