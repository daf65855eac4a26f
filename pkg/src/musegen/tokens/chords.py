"""Chord vocabulary (12 roots x 11 qualities + N.C.) and template detection.

Detection runs per half bar: the sounding (non-drum) pitch classes are
matched against each root/quality template; the best-scoring template wins,
ties broken toward the lowest chord index. Windows without notes, or where
no template scores positively, are "no chord".
"""

from __future__ import annotations

ROOTS = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")

QUALITIES: tuple[tuple[str, frozenset[int]], ...] = (
    ("M", frozenset({0, 4, 7})),
    ("m", frozenset({0, 3, 7})),
    ("o", frozenset({0, 3, 6})),
    ("+", frozenset({0, 4, 8})),
    ("7", frozenset({0, 4, 7, 10})),
    ("M7", frozenset({0, 4, 7, 11})),
    ("m7", frozenset({0, 3, 7, 10})),
    ("o7", frozenset({0, 3, 6, 9})),
    ("/o7", frozenset({0, 3, 6, 10})),
    ("sus2", frozenset({0, 2, 7})),
    ("sus4", frozenset({0, 5, 7})),
)

NO_CHORD = len(ROOTS) * len(QUALITIES)  # 132; vocabulary size 133
N_CHORD_SYMBOLS = NO_CHORD + 1


def chord_index(root: int, quality: int) -> int:
    return root * len(QUALITIES) + quality


def chord_name(index: int) -> str:
    if index == NO_CHORD:
        return "N.C."
    root, quality = divmod(index, len(QUALITIES))
    return f"{ROOTS[root]}:{QUALITIES[quality][0]}"


def detect_chord(pitch_classes: set[int]) -> int:
    """Best-matching chord index for a set of sounding pitch classes."""
    if not pitch_classes:
        return NO_CHORD
    best_index = NO_CHORD
    best_score = 0.0
    for root in range(12):
        rel = {(pc - root) % 12 for pc in pitch_classes}
        for q, (_name, template) in enumerate(QUALITIES):
            hit = len(rel & template)
            missing = len(template - rel)
            extra = len(rel - template)
            score = hit - missing - 0.5 * extra
            if score > best_score:
                best_score = score
                best_index = chord_index(root, q)
    return best_index
