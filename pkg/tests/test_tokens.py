"""Compound-event representation: vocabulary, grammar, codec round trip."""

import pytest
from hypothesis import given, settings, strategies as st

from musegen.labels import EMOTIONS, GENRES
from musegen.score import InstrumentClass, Note, quantize_score
from musegen.score.model import make_score
from musegen.tokens import (
    BAR_MARK,
    DEFAULT_VOCAB,
    Family,
    MalformedSequence,
    UnencodableScore,
    blank_event,
    compute_density,
    compute_strength,
    decode,
    detect_chord,
    encode,
    event_violations,
    from_binary,
    from_jsonl,
    sequence_violations,
    to_binary,
    to_jsonl,
)
from musegen.tokens.chords import NO_CHORD, chord_index
from musegen.tokens.events import EventSequence

from .scoregen import random_score


# --- vocabulary audit ---------------------------------------------------------

def test_vocab_totals():
    assert DEFAULT_VOCAB.total_base() == 672
    assert DEFAULT_VOCAB.total_special() == 13


def test_vocab_per_attribute_sizes():
    expected = {
        "family": (5, 0),
        "emotion": (11, 1),
        "genre": (6, 1),
        "bar_beat": (33, 1),
        "tempo": (65, 2),
        "chord": (133, 2),
        "density": (33, 1),
        "strength": (37, 1),
        "program": (17, 1),
        "pitch": (256, 1),
        "duration": (32, 1),
        "velocity": (44, 1),
    }
    for name, (base, special) in expected.items():
        spec = DEFAULT_VOCAB[name]
        assert spec.base_size == base, name
        assert spec.has_conti + spec.has_ignore == special, name


def test_vocab_reference_embed_widths():
    widths = {
        "program": 64, "tempo": 256, "bar_beat": 256, "chord": 256,
        "pitch": 1024, "duration": 512, "velocity": 512, "family": 64,
        "density": 128, "strength": 128, "emotion": 64, "genre": 64,
    }
    for name, width in widths.items():
        assert DEFAULT_VOCAB[name].embed_width == width, name


# --- density / strength --------------------------------------------------------

def test_density_examples():
    assert compute_density([]) == 0
    assert compute_density(range(40)) == 32  # clamp
    assert compute_density([0, 0, 8]) == 3


def test_strength_examples():
    assert compute_strength([8, 8, 8], 8) == 3
    assert compute_strength([], 0) == 0
    assert compute_strength([0] * 50, 0) == 36  # clamp


# --- encode examples ------------------------------------------------------------

def one_bar_piano_quarter():
    return quantize_score(
        make_score(
            [(InstrumentClass.PIANO, [Note(0, 60, 480, 100)])],
            tempo_map=[(0, 119.0)],
        )
    )


def test_encode_single_quarter_note_shape():
    seq = encode(one_bar_piano_quarter(), "happy", "pop")
    fams = [e.family for e in seq.events]
    assert fams == [
        Family.TAG,
        Family.RHYTHM,          # bar
        Family.RHYTHM,          # beat 1
        Family.INSTRUMENT,
        Family.NOTE,
        Family.RHYTHM,          # beats 2..4
        Family.RHYTHM,
        Family.RHYTHM,
        Family.EOS,
    ]
    tag, bar, beat1, inst, note = seq.events[:5]
    assert tag.emotion == EMOTIONS.index("happy")
    assert tag.genre == GENRES.index("pop")
    assert bar.bar_beat == BAR_MARK and bar.density == 1
    assert beat1.bar_beat == 0 and beat1.strength == 1
    assert beat1.tempo == 29  # bin index of 119 in {32, 35, ...}
    assert inst.program == int(InstrumentClass.PIANO)
    assert note.pitch == 60
    assert note.duration == 7  # 8 steps, index 7
    assert note.velocity == (100 - 40) // 2
    assert not any(sequence_violations(seq))


def test_encode_empty_score():
    seq = encode(quantize_score(make_score([])), "sad", None)
    assert [e.family for e in seq.events] == [Family.TAG, Family.EOS]
    assert seq.events[0].emotion == EMOTIONS.index("sad")
    assert seq.events[0].genre == DEFAULT_VOCAB["genre"].ignore


def test_encode_drum_pseudo_pitch():
    score = quantize_score(
        make_score([(InstrumentClass.DRUM, [Note(0, 36, 60, 100)])])
    )
    seq = encode(score)
    note = next(e for e in seq.events if e.family == Family.NOTE)
    assert note.pitch == 128 + 36


def test_encode_rejects_unquantized():
    raw = make_score([(InstrumentClass.PIANO, [Note(1, 60, 481, 99)])])
    with pytest.raises(UnencodableScore):
        encode(raw)


def test_encode_rejects_non_44():
    s = quantize_score(make_score([(InstrumentClass.PIANO, [Note(0, 60, 480, 100)])]))
    odd = make_score(
        [(InstrumentClass.PIANO, list(s.tracks[0][1]))],
        tempo_map=s.tempo_map,
        time_signature=(3, 4),
    )
    with pytest.raises(UnencodableScore):
        encode(odd)


def test_encode_splits_long_notes():
    # 40 steps -> 32 + 8, touching segments
    score = quantize_score(
        make_score([(InstrumentClass.PIANO, [Note(0, 60, 40 * 60, 100)])])
    )
    seq = encode(score)
    notes = [e for e in seq.events if e.family == Family.NOTE]
    assert [n.duration + 1 for n in notes] == [32, 8]
    back, _, _ = decode(seq)
    assert back == score


# --- masks and grammar -----------------------------------------------------------

def test_family_masks_asserted_per_event():
    bad = blank_event(Family.NOTE, pitch=60, duration=7, velocity=10, emotion=2)
    assert any("emotion" in p for p in event_violations(bad))
    ok = blank_event(Family.NOTE, pitch=60, duration=7, velocity=10)
    assert event_violations(ok) == []


def test_note_before_instrument_is_malformed():
    seq = encode(one_bar_piano_quarter(), "happy", "pop")
    events = list(seq.events)
    del events[3]  # drop the Instrument event
    with pytest.raises(MalformedSequence):
        decode(EventSequence(tuple(events), seq.metadata))


def test_out_of_range_density_is_malformed():
    seq = encode(one_bar_piano_quarter(), None, None)
    events = list(seq.events)
    bar = events[1]
    events[1] = blank_event(Family.RHYTHM, bar_beat=BAR_MARK, density=40)
    with pytest.raises(MalformedSequence):
        decode(EventSequence(tuple(events), seq.metadata))


def test_drum_pitch_under_melodic_instrument_is_malformed():
    seq = encode(one_bar_piano_quarter(), None, None)
    events = list(seq.events)
    events[4] = blank_event(Family.NOTE, pitch=164, duration=7, velocity=10)
    with pytest.raises(MalformedSequence):
        decode(EventSequence(tuple(events), seq.metadata))


def test_sequence_grammar_requires_eos():
    seq = encode(one_bar_piano_quarter(), None, None)
    assert any(
        "EOS" in p for p in sequence_violations(
            EventSequence(seq.events[:-1], seq.metadata)
        )
    )


# --- chords ---------------------------------------------------------------------

def test_chord_detection():
    assert detect_chord(set()) == NO_CHORD
    assert detect_chord({0, 4, 7}) == chord_index(0, 0)      # C major
    assert detect_chord({9, 0, 4}) == chord_index(9, 1)      # A minor
    assert detect_chord({2, 5, 9, 0}) == chord_index(2, 6)   # D minor 7


# --- round trip -------------------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(
    st.integers(min_value=0, max_value=2**32 - 1),
    st.sampled_from([None, *range(len(EMOTIONS))]),
    st.sampled_from([None, *range(len(GENRES))]),
)
def test_round_trip_property(seed, emo, gen):
    q = quantize_score(random_score(seed))
    emotion = None if emo is None else EMOTIONS[emo]
    genre = None if gen is None else GENRES[gen]
    seq = encode(q, emotion, genre)
    assert not sequence_violations(seq)
    score, emotion_back, genre_back = decode(seq)
    assert score == q
    assert emotion_back == emotion
    assert genre_back == genre


def test_round_trip_with_tempo_changes():
    s = make_score(
        [(InstrumentClass.PIANO, [Note(0, 60, 480, 100), Note(1920, 62, 2400, 80)])],
        tempo_map=[(0, 119.0), (480, 80.0), (1920, 140.0)],
    )
    q = quantize_score(s)
    score, _, _ = decode(encode(q))
    assert score == q


# --- serialization ----------------------------------------------------------------

def test_jsonl_round_trip():
    seq = encode(one_bar_piano_quarter(), "happy", "pop")
    assert from_jsonl(to_jsonl(seq)) == seq


def test_binary_round_trip():
    seq = encode(one_bar_piano_quarter(), "warm", "jazz")
    assert from_binary(to_binary(seq)) == seq


def test_readers_only_raise_value_errors_on_corrupt_input():
    import random

    seq = encode(one_bar_piano_quarter(), "happy", "pop")
    bin_base, jsonl_base = to_binary(seq), to_jsonl(seq)
    rng = random.Random(3)
    for _ in range(400):
        data = bytearray(bin_base)
        for _ in range(rng.randint(1, 6)):
            if rng.random() < 0.5 and data:
                data[rng.randrange(len(data))] = rng.randrange(256)
            elif data:
                del data[rng.randrange(len(data))]
        try:
            from_binary(bytes(data))
        except ValueError:
            pass
    for _ in range(400):
        text = list(jsonl_base)
        for _ in range(rng.randint(1, 5)):
            i = rng.randrange(len(text))
            if rng.random() < 0.5:
                text[i] = chr(rng.randrange(32, 127))
            else:
                del text[i]
        try:
            from_jsonl("".join(text))
        except ValueError:
            pass


def test_golden_files_pin_both_formats():
    from pathlib import Path

    golden = Path(__file__).parent / "golden"
    seq = encode(one_bar_piano_quarter(), "happy", "pop")
    assert to_jsonl(seq) == (golden / "one_bar_quarter.jsonl").read_text()
    assert to_binary(seq) == (golden / "one_bar_quarter.bin").read_bytes()
    # and the files load back to the same sequence
    assert from_jsonl((golden / "one_bar_quarter.jsonl").read_text()) == seq
    assert from_binary((golden / "one_bar_quarter.bin").read_bytes()) == seq


def test_binary_layout_is_16bit_le():
    seq = encode(quantize_score(make_score([])), None, None)
    data = to_binary(seq)
    assert data[:4] == b"MGEV"
    count = int.from_bytes(data[-2 * 24 - 4 : -2 * 24], "little")
    assert count == 2  # Tag + EOS
    # Tag event: family 0, emotion IGNORE(11) little-endian in next 2 bytes
    tag = data[-48:-24]
    assert tag[0] == 0 and tag[1] == 0
    assert int.from_bytes(tag[2:4], "little") == 11
