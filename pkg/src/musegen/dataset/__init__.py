from .index import CorpusEntry, CorpusIndex, build_index, pitch_class_profile
from .dedup import dedup_exact, dedup_similarity
from .stats import corpus_stats

__all__ = [
    "CorpusEntry",
    "CorpusIndex",
    "build_index",
    "pitch_class_profile",
    "dedup_exact",
    "dedup_similarity",
    "corpus_stats",
]
