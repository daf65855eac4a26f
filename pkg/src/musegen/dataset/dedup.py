"""Exact and similarity-based corpus deduplication."""

from __future__ import annotations

import numpy as np

from .index import CorpusEntry, CorpusIndex


def dedup_exact(index: CorpusIndex):
    """One survivor per byte-identical content, first in path order."""
    kept: list[CorpusEntry] = []
    dropped: list[CorpusEntry] = []
    seen: set[str] = set()
    for entry in index.entries:
        if entry.digest in seen:
            dropped.append(entry)
        else:
            seen.add(entry.digest)
            kept.append(entry)
    return kept, dropped


def _similarity(a: CorpusEntry, b: CorpusEntry) -> float:
    if np.array_equal(a.profile, b.profile):
        return 1.0  # identical profiles compare exactly, no fp slack
    return float(np.clip(np.dot(a.profile, b.profile), -1.0, 1.0))


def dedup_similarity(index: CorpusIndex, threshold: float = 0.95):
    """Collapse files whose profiles reach the cosine threshold.

    The longer file of a similar pair survives. Returns (kept, dropped
    pairs) where each dropped pair is (dropped entry, kept entry, cosine).
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    order = sorted(
        index.entries, key=lambda e: (-e.duration_s, str(e.path))
    )
    kept: list[CorpusEntry] = []
    dropped: list[tuple[CorpusEntry, CorpusEntry, float]] = []
    for entry in order:
        match = None
        for survivor in kept:
            sim = _similarity(entry, survivor)
            if sim >= threshold:
                match = (entry, survivor, sim)
                break
        if match is None:
            kept.append(entry)
        else:
            dropped.append(match)
    path_order = {id(e): i for i, e in enumerate(index.entries)}
    kept.sort(key=lambda e: path_order[id(e)])
    return kept, dropped
