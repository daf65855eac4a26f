"""Objective music metrics.

PCE: Shannon entropy (bits) of the 12-bin pitch-class histogram over
non-drum note onsets. Lower means clearer tonality; the uniform histogram
tops out at log2(12) ~ 3.585 bits.

GS:  per bar, a 32-slot binary onset vector (drums included); similarity
of a bar pair is 1 - normalized Hamming distance; the piece score is the
mean over all distinct pairs of bars that contain onsets.

EBR: fraction of quarter-note beats with no onset, over the span from
tick 0 to the end of the last note (or an explicit beat count).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import mean

from ..score.model import (
    InstrumentClass,
    Score,
    TICKS_PER_BAR,
    TICKS_PER_QUARTER,
    TICKS_PER_STEP,
)


class NoMelodicNotes(ValueError):
    """PCE needs at least one non-drum note."""


class TooFewBars(ValueError):
    """GS needs at least two bars containing onsets."""


def pce(score: Score) -> float:
    """Pitch-class histogram entropy in bits."""
    counts = [0] * 12
    for cls, notes in score.tracks:
        if cls == InstrumentClass.DRUM:
            continue
        for n in notes:
            counts[n.pitch % 12] += 1
    total = sum(counts)
    if total == 0:
        raise NoMelodicNotes("score has no melodic (non-drum) notes")
    entropy = 0.0
    for c in counts:
        if c:
            p = c / total
            entropy -= p * math.log2(p)
    return entropy


def _grooving_vectors(score: Score) -> list[int]:
    """Per-bar 32-bit onset patterns for bars that contain onsets."""
    bars: dict[int, int] = {}
    for _cls, notes in score.tracks:
        for n in notes:
            step = n.onset_tick // TICKS_PER_STEP
            bars.setdefault(step // 32, 0)
            bars[step // 32] |= 1 << (step % 32)
    return [bars[b] for b in sorted(bars)]


def gs(score: Score) -> float:
    """Mean pairwise grooving similarity over bars with onsets, in [0, 1]."""
    vectors = _grooving_vectors(score)
    if len(vectors) < 2:
        raise TooFewBars("grooving similarity needs at least two bars with onsets")
    sims = []
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            hamming = bin(vectors[i] ^ vectors[j]).count("1")
            sims.append(1.0 - hamming / 32.0)
    return sum(sims) / len(sims)


def ebr(score: Score, n_beats: int | None = None) -> float:
    """Fraction of quarter-note beats containing no note onset.

    ``n_beats`` overrides the span (needed for scores that are silent but
    have a known length); otherwise the span runs to the last note offset.
    """
    if n_beats is None:
        n_beats = math.ceil(score.end_tick() / TICKS_PER_QUARTER)
    if n_beats < 1:
        raise ValueError("score must span at least one beat")
    occupied = set()
    for _cls, notes in score.tracks:
        for n in notes:
            beat = n.onset_tick // TICKS_PER_QUARTER
            if beat < n_beats:
                occupied.add(beat)
    return (n_beats - len(occupied)) / n_beats


@dataclass(frozen=True)
class MetricReport:
    pce: float | None
    gs: float | None
    ebr: float | None

    def as_dict(self) -> dict:
        return {"pce": self.pce, "gs": self.gs, "ebr": self.ebr}


def evaluate_score(score: Score) -> MetricReport:
    """All three metrics; metrics whose preconditions fail come back None."""
    try:
        p = pce(score)
    except NoMelodicNotes:
        p = None
    try:
        g = gs(score)
    except TooFewBars:
        g = None
    e = ebr(score) if score.end_tick() > 0 else None
    return MetricReport(p, g, e)


def summarize(reports) -> dict:
    """Corpus means, skipping None entries per metric."""
    out = {}
    for name in ("pce", "gs", "ebr"):
        values = [getattr(r, name) for r in reports if getattr(r, name) is not None]
        out[name] = {
            "mean": mean(values) if values else None,
            "count": len(values),
        }
    return out
