"""Seeded random score generation shared by property and acceptance tests."""

import random

from musegen.score import InstrumentClass, Note
from musegen.score.model import make_score


def random_score(seed, max_bars=4, max_notes=40, messy=True):
    """Generate a random 4/4 score.

    With ``messy=True`` the result uses an arbitrary resolution, unsnapped
    velocities/tempos and may contain overlapping notes, the input side of
    ``quantize_score``. With ``messy=False`` values land on the canonical
    grid directly.
    """
    rng = random.Random(seed)
    tpq = rng.choice([96, 192, 384, 480, 960]) if messy else 480
    step = tpq / 8
    n_bars = rng.randint(0, max_bars) if messy else rng.randint(1, max_bars)
    n_notes = 0 if n_bars == 0 else rng.randint(0, max_notes)

    classes = rng.sample(sorted(InstrumentClass), k=rng.randint(1, 4))
    tracks = {cls: [] for cls in classes}
    for _ in range(n_notes):
        cls = rng.choice(classes)
        if messy:
            onset = rng.randint(0, n_bars * tpq * 4 - 1)
            offset = onset + rng.randint(1, tpq * 6)
            velocity = rng.randint(1, 127)
        else:
            onset = int(rng.randrange(0, n_bars * 32) * step)
            offset = int(onset + rng.randint(1, 40) * step)
            velocity = rng.choice(range(40, 127, 2))
        pitch = rng.randint(0, 127)
        tracks[cls].append(Note(onset, pitch, offset, velocity))

    tempo_map = [(0, rng.uniform(30.0, 230.0))]
    for _ in range(rng.randint(0, 3)):
        tempo_map.append(
            (rng.randint(1, max(1, n_bars) * tpq * 4), rng.uniform(30.0, 230.0))
        )
    tempo_map.sort(key=lambda tb: tb[0])

    return make_score(
        [(cls, sorted(ns)) for cls, ns in tracks.items() if ns],
        tempo_map=tempo_map,
        ticks_per_quarter=tpq,
    )
