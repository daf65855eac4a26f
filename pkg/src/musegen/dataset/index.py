"""Per-file corpus index: content hash, chroma-style profile, duration."""

from __future__ import annotations

import csv
import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..score.model import InstrumentClass, Score
from ..score.smf import parse_midi


def pitch_class_profile(score: Score) -> np.ndarray:
    """Duration-weighted, L2-normalized 12-bin pitch-class profile.

    Computed symbolically from the note list (drums excluded); stands in
    for audio-rendered chroma. Velocity does not enter the weighting, so
    profiles are invariant under velocity scaling; transposition shifts
    the bins, so transposed copies remain distinguishable.
    """
    profile = np.zeros(12)
    for cls, notes in score.tracks:
        if cls == InstrumentClass.DRUM:
            continue
        for n in notes:
            profile[n.pitch % 12] += n.duration
    norm = float(np.linalg.norm(profile))
    return profile / norm if norm > 0 else profile


@dataclass(frozen=True)
class CorpusEntry:
    path: Path
    digest: str
    profile: np.ndarray
    duration_s: float
    emotion: str | None = None
    genre: str | None = None


@dataclass
class CorpusIndex:
    entries: list[CorpusEntry] = field(default_factory=list)
    errors: list[tuple[Path, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)


def _read_labels(label_file: Path | None) -> dict[str, tuple[str | None, str | None]]:
    if label_file is None:
        return {}
    labels = {}
    with open(label_file, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            labels[row["path"]] = (row.get("emotion") or None, row.get("genre") or None)
    return labels


def _index_one(args):
    """Per-file worker; isolated so one bad file cannot sink the run."""
    path_str, algorithm = args
    path = Path(path_str)
    try:
        data = path.read_bytes()
        score = parse_midi(data)
    except Exception as exc:  # noqa: BLE001 - per-file isolation
        return path_str, None, str(exc)
    record = (
        hashlib.new(algorithm, data).hexdigest(),
        pitch_class_profile(score),
        score.duration_seconds(),
        data,
    )
    return path_str, record, None


def build_index(
    paths,
    label_file: Path | None = None,
    algorithm: str = "sha256",
    jobs: int = 1,
) -> CorpusIndex:
    """Index MIDI files; unreadable or malformed files are skipped and reported.

    Per-file work runs across ``jobs`` processes; results keep path order.
    Verifies that equal digests really mean equal bytes (hash collisions
    inside a corpus would silently merge distinct files in dedup).
    """
    labels = _read_labels(label_file)
    index = CorpusIndex()
    work = [(str(p), algorithm) for p in paths]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_index_one, work))
    else:
        results = [_index_one(item) for item in work]

    seen: dict[str, bytes] = {}
    for path_str, record, error in results:
        path = Path(path_str)
        if error is not None:
            index.errors.append((path, error))
            continue
        digest, profile, duration_s, data = record
        if digest in seen and seen[digest] != data:
            raise RuntimeError(f"digest collision in corpus at {path}")
        seen[digest] = data
        emotion, genre = labels.get(str(path), labels.get(path.name, (None, None)))
        index.entries.append(
            CorpusEntry(
                path=path,
                digest=digest,
                profile=profile,
                duration_s=duration_s,
                emotion=emotion,
                genre=genre,
            )
        )
    return index
