from .features import FEATURES_SCHEMA, FEATURES_SCHEMA_VERSION, PromptFeatures
from .percentiles import (
    PercentileTable,
    PercentileTables,
    TableEmpty,
    build_tables,
    default_tables,
)
from .mappings import (
    DimensionMismatch,
    EmptyVideo,
    NonPositiveDuration,
    StdNote,
    StdSequence,
    TooFewBeats,
    UnknownTag,
    fuse_image_scores,
    humming_to_elements,
    parse_features,
    standardize_humming,
    tag_to_element,
    text_emotion,
    video_bar_count,
    video_emotion,
    video_rhythm,
    video_tempo,
    video_to_elements,
)

__all__ = [
    "FEATURES_SCHEMA",
    "FEATURES_SCHEMA_VERSION",
    "PromptFeatures",
    "PercentileTable",
    "PercentileTables",
    "TableEmpty",
    "build_tables",
    "default_tables",
    "DimensionMismatch",
    "EmptyVideo",
    "NonPositiveDuration",
    "StdNote",
    "StdSequence",
    "TooFewBeats",
    "UnknownTag",
    "fuse_image_scores",
    "humming_to_elements",
    "parse_features",
    "standardize_humming",
    "tag_to_element",
    "text_emotion",
    "video_bar_count",
    "video_emotion",
    "video_rhythm",
    "video_tempo",
    "video_to_elements",
]
