"""Canonical emotion and genre label sets.

The orderings below are load-bearing: vocabulary indices, one-hot element
vectors and classifier heads all use these positions.
"""

from __future__ import annotations

EMOTIONS: tuple[str, ...] = (
    "exciting",
    "warm",
    "happy",
    "romantic",
    "funny",
    "sad",
    "angry",
    "lazy",
    "quiet",
    "fear",
    "magnificent",
)

GENRES: tuple[str, ...] = (
    "rock",
    "pop",
    "country",
    "jazz",
    "classical",
    "folk",
)

N_EMOTIONS = len(EMOTIONS)
N_GENRES = len(GENRES)


def emotion_index(name: str) -> int:
    """Index of an emotion label; raises ValueError for unknown names."""
    try:
        return EMOTIONS.index(name)
    except ValueError:
        raise ValueError(f"unknown emotion label: {name!r}") from None


def genre_index(name: str) -> int:
    """Index of a genre label; raises ValueError for unknown names."""
    try:
        return GENRES.index(name)
    except ValueError:
        raise ValueError(f"unknown genre label: {name!r}") from None
