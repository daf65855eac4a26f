"""Corpus distribution report: label histograms and durations."""

from __future__ import annotations

from ..labels import EMOTIONS, GENRES
from .index import CorpusIndex

DURATION_EDGES_S = (0, 60, 120, 180, 240, 300, 600)


def corpus_stats(index: CorpusIndex) -> dict:
    emotion_hist = {name: 0 for name in EMOTIONS}
    emotion_hist["unlabeled"] = 0
    genre_hist = {name: 0 for name in GENRES}
    genre_hist["unlabeled"] = 0
    durations = []

    for entry in index.entries:
        emotion_hist[entry.emotion if entry.emotion in EMOTIONS else "unlabeled"] += 1
        genre_hist[entry.genre if entry.genre in GENRES else "unlabeled"] += 1
        durations.append(entry.duration_s)

    edges = list(DURATION_EDGES_S)
    duration_hist = {}
    for lo, hi in zip(edges, edges[1:]):
        duration_hist[f"{lo}-{hi}s"] = sum(1 for d in durations if lo <= d < hi)
    duration_hist[f">={edges[-1]}s"] = sum(1 for d in durations if d >= edges[-1])

    return {
        "files": len(index.entries),
        "skipped": len(index.errors),
        "emotions": emotion_hist,
        "genres": genre_hist,
        "durations": duration_hist,
        "mean_duration_s": (
            sum(durations) / len(durations) if durations else None
        ),
    }
