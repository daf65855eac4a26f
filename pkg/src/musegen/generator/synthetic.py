"""Synthetic desk-scale corpora with known structure.

The register corpus ties each emotion label to a fixed pitch band, so a
trained model's conditioning fidelity can be audited by checking where
sampled notes land. The quality corpus extends this with genre-dependent
rhythm figures and a quality bit that is on only when the tags match the
content, giving the scoring model correlated multi-task labels.
"""

from __future__ import annotations

import random

from ..labels import EMOTIONS, GENRES
from ..score.model import InstrumentClass, Note, make_score
from ..score.quantize import quantize_score
from ..tokens.codec import encode
from ..tokens.events import EventSequence

# emotion -> inclusive pitch band (octave-wide, non-overlapping)
EMOTION_REGISTERS: dict[str, tuple[int, int]] = {
    "exciting": (84, 91),
    "happy": (72, 79),
    "sad": (48, 55),
    "quiet": (36, 43),
}

# genre -> onset steps within each bar (denser to sparser figures)
GENRE_FIGURES: dict[str, tuple[int, ...]] = {
    "rock": (0, 4, 8, 12, 16, 20, 24, 28),
    "pop": (0, 8, 16, 24),
}


def register_of(pitch: int) -> str | None:
    for emotion, (lo, hi) in EMOTION_REGISTERS.items():
        if lo <= pitch <= hi:
            return emotion
    return None


def _figure_score(register: tuple[int, int], figure: tuple[int, ...],
                  n_bars: int, rng: random.Random):
    notes = []
    for bar in range(n_bars):
        for step in figure:
            pitch = rng.randint(register[0], register[1])
            onset = (bar * 32 + step) * 60
            notes.append(Note(onset, pitch, onset + 8 * 60, rng.choice((76, 90, 104))))
    return quantize_score(
        make_score([(InstrumentClass.PIANO, notes)], tempo_map=[(0, 119.0)])
    )


def register_corpus(
    n_sequences: int,
    seed: int = 0,
    emotions: tuple[str, ...] = tuple(EMOTION_REGISTERS),
    n_bars: int = 2,
) -> list[EventSequence]:
    """Sequences whose emotion tag deterministically picks the pitch band."""
    rng = random.Random(seed)
    corpus = []
    for i in range(n_sequences):
        emotion = emotions[i % len(emotions)]
        score = _figure_score(
            EMOTION_REGISTERS[emotion], GENRE_FIGURES["pop"], n_bars, rng
        )
        corpus.append(encode(score, emotion, None))
    return corpus


def ablation_corpus(n_sequences: int, seed: int = 0, n_bars: int = 2):
    """Correlated labels where quality is a parity of two latent factors.

    Sequences carry no tags; the content's register class and rhythm
    figure determine everything. Quality is 1 exactly when (register in
    the outer bands) differs from (figure == the dense rock pattern), an
    XOR that is slow to learn from binary supervision alone but immediate
    once the emotion/genre factors are represented, which is what the
    auxiliary heads supervise.

    Returns (sequence, quality, emotion index, genre index) rows.
    """
    rng = random.Random(seed)
    emotions = tuple(EMOTION_REGISTERS)
    genres = tuple(GENRE_FIGURES)
    outer = {"exciting", "sad"}
    data = []
    for _ in range(n_sequences):
        emotion = rng.choice(emotions)
        genre = rng.choice(genres)
        score = _figure_score(
            EMOTION_REGISTERS[emotion], GENRE_FIGURES[genre], n_bars, rng
        )
        quality = int((emotion in outer) != (genre == "rock"))
        data.append(
            (encode(score, None, None), quality,
             EMOTIONS.index(emotion), GENRES.index(genre))
        )
    return data


def quality_corpus(
    n_sequences: int,
    seed: int = 0,
    mismatch_rate: float = 0.5,
    n_bars: int = 2,
):
    """Labeled data for the scoring model.

    Content is generated from a (content emotion, content genre) pair; the
    written tags agree with the content only part of the time. Quality is 1
    exactly when both tags match the content, so recognizing the content's
    emotion/genre is the feature quality assessment needs.

    Returns a list of (sequence, quality, emotion index, genre index) with
    the *content* labels as the recognition targets.
    """
    rng = random.Random(seed)
    emotions = tuple(EMOTION_REGISTERS)
    genres = tuple(GENRE_FIGURES)
    data = []
    for _ in range(n_sequences):
        content_emotion = rng.choice(emotions)
        content_genre = rng.choice(genres)
        tag_emotion = content_emotion
        tag_genre = content_genre
        if rng.random() < mismatch_rate:
            tag_emotion = rng.choice([e for e in emotions if e != content_emotion])
        if rng.random() < mismatch_rate:
            tag_genre = rng.choice([g for g in genres if g != content_genre])
        score = _figure_score(
            EMOTION_REGISTERS[content_emotion],
            GENRE_FIGURES[content_genre],
            n_bars,
            rng,
        )
        seq = encode(score, tag_emotion, tag_genre)
        quality = int(tag_emotion == content_emotion and tag_genre == content_genre)
        data.append(
            (seq, quality, EMOTIONS.index(content_emotion), GENRES.index(content_genre))
        )
    return data
