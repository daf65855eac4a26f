"""Text emotion similarities via hashed character n-gram embeddings.

Each emotion's synonymous description and the input text are embedded as
L2-normalized hashed 3-gram count vectors; the cosine similarities are
returned raw (the core applies softmax). Deterministic by construction,
standing in for a sentence-embedding model (none reachable offline).
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

from .emotions import DESCRIPTIONS, EMOTIONS

EMBED_DIM = 512
_NGRAM = 3


class EmptyText(ValueError):
    pass


def _embed(text: str) -> np.ndarray:
    cleaned = re.sub(r"\s+", " ", text.lower().strip())
    padded = f" {cleaned} "
    vec = np.zeros(EMBED_DIM)
    for i in range(len(padded) - _NGRAM + 1):
        gram = padded[i : i + _NGRAM]
        digest = hashlib.md5(gram.encode("utf-8")).digest()
        index = int.from_bytes(digest[:4], "little") % EMBED_DIM
        sign = 1.0 if digest[4] % 2 else -1.0
        vec[index] += sign
    norm = np.linalg.norm(vec)
    return vec / norm if norm > 0 else vec


_ANCHORS = np.stack([_embed(DESCRIPTIONS[e]) for e in EMOTIONS])


def score_text(text: str) -> list[float]:
    """Raw (un-normalized) cosine similarity per emotion."""
    if not text or not text.strip():
        raise EmptyText("input text is empty")
    sims = _ANCHORS @ _embed(text)
    return [float(v) for v in sims]
