"""Prompt-feature mappings: formula oracles and element construction."""

import math

import numpy as np
import pytest

from musegen.labels import EMOTIONS
from musegen.prompts import (
    DimensionMismatch,
    NonPositiveDuration,
    PercentileTable,
    PercentileTables,
    PromptFeatures,
    TooFewBeats,
    UnknownTag,
    fuse_image_scores,
    humming_to_elements,
    parse_features,
    standardize_humming,
    tag_to_element,
    text_emotion,
    video_bar_count,
    video_emotion,
    video_rhythm,
    video_tempo,
)
from musegen.score.quantize import snap_tempo


def one_hot(label, value=1.0):
    v = [0.0] * len(EMOTIONS)
    v[EMOTIONS.index(label)] = value
    return v


# --- image fusion ------------------------------------------------------------

def test_fuse_agreement():
    assert fuse_image_scores(one_hot("happy"), one_hot("happy")).label == "happy"


def test_fuse_weighted_disagreement():
    # classifier leans sad (0.6 vs 0.4), zero-shot leans happy (0.3 vs 0.7);
    # with weights (1, 2): sad = 0.6+0.6 = 1.2 < happy = 0.4+1.4 = 1.8
    a = [0.0] * 11
    b = [0.0] * 11
    a[EMOTIONS.index("sad")], a[EMOTIONS.index("happy")] = 0.6, 0.4
    b[EMOTIONS.index("sad")], b[EMOTIONS.index("happy")] = 0.3, 0.7
    assert fuse_image_scores(a, b, 1.0, 2.0).label == "happy"
    assert fuse_image_scores(a, b, 1.0, 0.0).label == "sad"  # degenerate weight


def test_fuse_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        fuse_image_scores([0.1] * 10, [0.1] * 11)


def test_fuse_invariant_under_common_weight_scale():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a, b = rng.random(11), rng.random(11)
        base = fuse_image_scores(a, b, 1.0, 2.0).label
        assert fuse_image_scores(a, b, 3.5, 7.0).label == base
        assert fuse_image_scores(a, b, 0.01, 0.02).label == base


# --- text --------------------------------------------------------------------

def test_text_monotone_argmax():
    sims = list(range(11))
    assert text_emotion(sims).label == EMOTIONS[-1]


def test_text_tie_breaks_low_index():
    assert text_emotion([0.5] * 11).label == EMOTIONS[0]


def test_text_shift_invariance():
    sims = [0.3, 1.2, -0.5, 0.9, 0.0, 2.0, 1.1, 0.2, 0.8, -1.0, 0.4]
    shifted = [s + 7.5 for s in sims]
    assert text_emotion(sims).label == text_emotion(shifted).label


# --- tags ----------------------------------------------------------------------

def test_tag_identity():
    pe = tag_to_element("sad")
    assert pe.emotion and pe.emotion.label == "sad" and pe.genre is None
    pg = tag_to_element("jazz")
    assert pg.genre and pg.genre.label == "jazz" and pg.emotion is None
    with pytest.raises(UnknownTag):
        tag_to_element("polka")


# --- video tempo / bars -----------------------------------------------------------

def test_video_tempo_zero_scenes_is_exactly_60():
    assert video_tempo(0, 30.0) == 60.0


def test_video_tempo_formula():
    # 60 cuts over 60 s -> rate 1 -> 60 + 70*tanh(1) = 113.3116no bin
    raw = video_tempo(60, 60.0)
    assert raw == pytest.approx(60 + 70 * math.tanh(1.0), abs=1e-12)
    assert snap_tempo(raw) == 113


def test_video_tempo_monotone_below_130():
    previous = -1.0
    for n in [0, 1, 2, 5, 10, 100, 10**6]:
        t = video_tempo(n, 10.0)
        assert t >= previous
        assert t < 130.0
        previous = t


def test_video_tempo_rejects_bad_duration():
    with pytest.raises(NonPositiveDuration):
        video_tempo(3, 0.0)


def test_video_bar_count():
    assert video_bar_count(60.0, 120.0, 4) == 30
    assert video_bar_count(1.0, 60.0, 4) == 1  # ceiling of 0.25


# --- video emotion -----------------------------------------------------------------

def test_video_emotion_constant():
    frames = [one_hot("exciting")] * 16
    overall, per_bar = video_emotion(frames, n_ipb=8)
    assert overall.label == "exciting"
    assert [e.label for e in per_bar] == ["exciting", "exciting"]


def test_video_emotion_mean_of_means_tie():
    frames = [one_hot("sad")] * 8 + [one_hot("happy")] * 8
    overall, per_bar = video_emotion(frames, n_ipb=8)
    # equal means; ties break to the lower class index (happy before sad)
    assert overall.label == "happy"
    assert [e.label for e in per_bar] == ["sad", "happy"]


def test_video_emotion_single_frame_bars():
    frames = [one_hot("warm"), one_hot("quiet")]
    overall, per_bar = video_emotion(frames, n_ipb=1)
    assert [e.label for e in per_bar] == ["warm", "quiet"]


# --- video rhythm -------------------------------------------------------------------

def tables_1_to_100():
    return PercentileTables(
        flow=PercentileTable.from_values(range(1, 101)),
        saliency=PercentileTable.from_values(range(1, 101)),
    )


def test_video_rhythm_grid():
    # 60 bpm over 8 s -> 2 bars: bar starts {0, 4}; beats at seconds 0..7
    t = tables_1_to_100()
    bpm = 60.0
    assert video_bar_count(8.0, bpm) == 2
    rhythm = video_rhythm([0.0] * 16, [50.0] * 8, bpm, 8.0, t)
    assert [b.start_s for b in rhythm.bars] == [0.0, 4.0]
    assert [round(b.start_s, 6) for b in rhythm.beats] == [0, 1, 2, 3, 4, 5, 6, 7]
    assert all(b.tempo_bpm == bpm for b in rhythm.beats)


def test_video_rhythm_density_extremes():
    t = tables_1_to_100()
    zero = video_rhythm([0.0] * 16, [200.0] * 8, 60.0, 8.0, t)
    assert all(b.density == 0 for b in zero.bars)  # below the whole table
    top = video_rhythm([100.0] * 16, [0.5] * 8, 60.0, 8.0, t)
    assert all(b.density == 32 for b in top.bars)  # at the table maximum
    assert all(b.strength == 0 for b in top.beats)


def test_video_rhythm_percentile_oracle():
    t = tables_1_to_100()
    # flow constant 50 -> rank 0.5 -> floor(0.5*32) = 16
    r = video_rhythm([50.0] * 16, [25.0] * 8, 60.0, 8.0, t)
    assert all(b.density == 16 for b in r.bars)
    # saliency 25 -> rank 0.25 -> floor(0.25*36) = 9
    assert all(b.strength == 9 for b in r.beats)


# --- humming -------------------------------------------------------------------------

def test_standardize_even_beats_tempo_120():
    beats = [0.0, 0.5, 1.0, 1.5, 2.0]
    std = standardize_humming([], beats)
    # raw tempo 60/0.5 = 120 bpm; the representation bins tempo in steps
    # of 3 from 32, so the stored value is the nearest bin, 119
    assert all(t == snap_tempo(120.0) == 119 for _, t in std.beats)
    assert std.t_beat == pytest.approx(0.5)


def test_standardize_tempo_snaps_to_bin():
    beats = [0.0, 0.6, 1.2]
    std = standardize_humming([], beats)
    # 60/0.6 = 100 bpm -> nearest bin 101
    assert all(t == 101 for _, t in std.beats)


def test_standardize_first_beat_inherits_second():
    beats = [0.0, 0.5, 1.25]  # intervals 0.5 (120) and 0.75 (80)
    std = standardize_humming([], beats)
    assert [t for _, t in std.beats] == [119, 119, 80]


def test_standardize_snaps_notes_to_local_grid():
    beats = [0.0, 0.5, 1.0]
    std = standardize_humming([(0.07, 0.55, 60, 100)], beats)
    (note,) = std.notes
    assert note.onset_s == pytest.approx(0.0625)  # grid step 0.5/8
    assert note.onset_step == 1
    assert note.offset_step == 9  # 0.55 -> 0.5625 -> step 9


def test_standardize_too_few_beats():
    with pytest.raises(TooFewBeats):
        standardize_humming([], [0.0])


def test_standardize_idempotent():
    beats = [0.0, 0.45, 1.0, 1.6]
    raw = [(0.02, 0.6, 62, 90), (0.7, 1.4, 64, 80), (1.41, 2.2, 65, 70)]
    std1 = standardize_humming(raw, beats)
    again = standardize_humming(
        [(n.onset_s, n.offset_s, n.pitch, n.velocity) for n in std1.notes], beats
    )
    assert [(n.onset_step, n.offset_step) for n in again.notes] == [
        (n.onset_step, n.offset_step) for n in std1.notes
    ]


def test_humming_elements_empty_notes():
    std = standardize_humming([], [0.0, 0.5, 1.0])
    pe = humming_to_elements(std)
    assert pe.notes == ()
    assert len(pe.rhythm.bars) == 1
    assert pe.rhythm.bars[0].density == 0


def test_humming_elements_four_quarters():
    beats = [0.0, 0.5, 1.0, 1.5, 2.0]
    raw = [(0.0, 0.5, 60, 100), (0.5, 1.0, 62, 100),
           (1.0, 1.5, 64, 100), (1.5, 2.0, 65, 100)]
    std = standardize_humming(raw, beats)
    pe = humming_to_elements(std)
    # 5 beats -> 2 bars; first bar holds all four onsets
    assert [b.density for b in pe.rhythm.bars] == [4, 0]
    assert [b.strength for b in pe.rhythm.beats][:4] == [1, 1, 1, 1]
    assert [b.start_s for b in pe.rhythm.bars] == [0.0, 4 * std.t_beat]
    assert [n.duration_steps for n in pe.notes] == [8, 8, 8, 8]


# --- feature document dispatch ---------------------------------------------------------

def test_parse_features_image_document():
    doc = {
        "schema_version": 1,
        "modality": "image",
        "image": {
            "classifier_scores": one_hot("warm"),
            "zeroshot_scores": one_hot("warm"),
        },
    }
    pe = parse_features(PromptFeatures.from_dict(doc))
    assert pe.emotion.label == "warm"
    assert pe.source_modality == "image"


def test_parse_features_rejects_bad_schema():
    with pytest.raises(Exception):
        PromptFeatures.from_dict({"schema_version": 1, "modality": "image"})
