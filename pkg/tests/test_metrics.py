"""Objective metrics vs. independent naive re-implementations."""

import math

import pytest

from musegen.score import InstrumentClass, Note, quantize_score
from musegen.score.model import make_score
from musegen.metrics import NoMelodicNotes, TooFewBars, ebr, gs, pce

from .scoregen import random_score


# --- naive oracles (independent of the implementations under test) -----------

def naive_pce(score):
    hist = {}
    for cls, notes in score.tracks:
        if cls == InstrumentClass.DRUM:
            continue
        for n in notes:
            hist[n.pitch % 12] = hist.get(n.pitch % 12, 0) + 1
    total = sum(hist.values())
    if total == 0:
        raise ValueError("no melodic notes")
    # ascending pitch-class order: the pinned summation convention
    return -sum(
        (hist[pc] / total) * math.log2(hist[pc] / total) for pc in sorted(hist)
    )


def naive_gs(score):
    onsets = [n.onset_tick for _, ns in score.tracks for n in ns]
    bar_ids = sorted({t // 1920 for t in onsets})
    patterns = []
    for b in bar_ids:
        row = [False] * 32
        for t in onsets:
            if t // 1920 == b:
                row[(t % 1920) // 60] = True
        patterns.append(row)
    if len(patterns) < 2:
        raise ValueError("too few bars")
    sims = []
    for i in range(len(patterns)):
        for j in range(i + 1, len(patterns)):
            distance = sum(1 for a, b_ in zip(patterns[i], patterns[j]) if a != b_)
            sims.append(1 - distance / 32)
    return sum(sims) / len(sims)


def naive_ebr(score, n_beats=None):
    onsets = [n.onset_tick for _, ns in score.tracks for n in ns]
    end = max((n.offset_tick for _, ns in score.tracks for n in ns), default=0)
    if n_beats is None:
        n_beats = (end + 479) // 480
    empty = 0
    for b in range(n_beats):
        if not any(b * 480 <= t < (b + 1) * 480 for t in onsets):
            empty += 1
    return empty / n_beats


# --- worked examples -----------------------------------------------------------

def piano(notes):
    return quantize_score(make_score([(InstrumentClass.PIANO, notes)]))


def test_pce_degenerate_single_class():
    s = piano([Note(i * 480, 60 + 12 * (i % 3), i * 480 + 240, 100) for i in range(6)])
    assert pce(s) == 0.0  # all pitch-class C


def test_pce_uniform_is_log2_12():
    s = piano([Note(i * 60, 60 + i, i * 60 + 60, 100) for i in range(12)])
    assert pce(s) == pytest.approx(math.log2(12), abs=1e-12)


def test_pce_requires_melodic_notes():
    drums = quantize_score(
        make_score([(InstrumentClass.DRUM, [Note(0, 36, 60, 100)])])
    )
    with pytest.raises(NoMelodicNotes):
        pce(drums)


def test_gs_identical_bars():
    notes = [Note(b * 1920 + p * 480, 60, b * 1920 + p * 480 + 120, 100)
             for b in range(3) for p in range(4)]
    assert gs(piano(notes)) == 1.0


def test_gs_complementary_patterns():
    bar0 = [Note(s * 60, 60, s * 60 + 30, 100) for s in range(0, 32, 2)]
    bar1 = [Note(1920 + s * 60, 60, 1920 + s * 60 + 30, 100) for s in range(1, 32, 2)]
    assert gs(piano(bar0 + bar1)) == 0.0


def test_gs_differs_in_8_of_32():
    # slots 0..7 in bar 0, slots 4..11 in bar 1 -> patterns differ in 8 slots
    bar0 = [Note(s * 60, 60 + s, s * 60 + 60, 100) for s in range(8)]
    bar1 = [Note(1920 + s * 60, 60 + s, 1920 + s * 60 + 60, 100) for s in range(4, 12)]
    assert gs(piano(bar0 + bar1)) == pytest.approx(0.75)


def test_gs_too_few_bars():
    with pytest.raises(TooFewBars):
        gs(piano([Note(0, 60, 120, 100)]))


def test_ebr_every_beat_occupied():
    s = piano([Note(b * 480, 60, b * 480 + 240, 100) for b in range(4)])
    assert ebr(s) == 0.0


def test_ebr_empty_score_four_beats():
    s = quantize_score(make_score([]))
    assert ebr(s, n_beats=4) == 1.0


def test_ebr_three_of_four():
    s = piano([Note(b * 480, 60, b * 480 + 240, 100) for b in (0, 1, 3)])
    assert ebr(s) == pytest.approx(0.25)


# --- invariances ------------------------------------------------------------------

def test_pce_octave_invariant_gs_ebr_transposition_invariant():
    base = quantize_score(random_score(1234, messy=False))
    if base.n_notes() == 0:
        base = piano([Note(0, 60, 240, 100), Note(1920, 61, 2000, 100)])

    def transpose(score, semitones):
        tracks = [
            (cls, [Note(n.onset_tick, min(127, max(0, n.pitch + semitones)),
                        n.offset_tick, n.velocity) for n in ns])
            for cls, ns in score.tracks
        ]
        return make_score(tracks, tempo_map=score.tempo_map)

    up_octave = transpose(base, 12)
    up_fifth = transpose(base, 7)
    try:
        assert pce(up_octave) == pytest.approx(pce(base), abs=1e-12)
    except NoMelodicNotes:
        pass
    for metric in (gs, ebr):
        try:
            assert metric(up_fifth) == pytest.approx(metric(base), abs=1e-12)
        except (TooFewBars, ValueError):
            pass


def test_metrics_invariant_under_track_order():
    a = [Note(0, 60, 240, 100), Note(480, 64, 720, 100)]
    b = [Note(1920, 40, 2160, 100), Note(2400, 45, 2640, 100)]
    s1 = quantize_score(make_score([(InstrumentClass.PIANO, a), (InstrumentClass.BASS, b)]))
    s2 = quantize_score(make_score([(InstrumentClass.BASS, b), (InstrumentClass.PIANO, a)]))
    assert pce(s1) == pce(s2)
    assert gs(s1) == gs(s2)
    assert ebr(s1) == ebr(s2)


# --- brute-force equivalence --------------------------------------------------------

def test_brute_force_equivalence_on_random_scores():
    checked = {"pce": 0, "gs": 0, "ebr": 0}
    for seed in range(300):
        s = quantize_score(random_score(seed, max_bars=4))
        try:
            assert pce(s) == pytest.approx(naive_pce(s), abs=0)
            checked["pce"] += 1
        except (NoMelodicNotes, ValueError):
            pass
        try:
            assert gs(s) == pytest.approx(naive_gs(s), abs=0)
            checked["gs"] += 1
        except (TooFewBars, ValueError):
            pass
        if s.end_tick() > 0:
            assert ebr(s) == pytest.approx(naive_ebr(s), abs=0)
            checked["ebr"] += 1
    assert all(v > 100 for v in checked.values()), checked
