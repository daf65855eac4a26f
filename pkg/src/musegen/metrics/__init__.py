from .objective import (
    MetricReport,
    NoMelodicNotes,
    TooFewBars,
    ebr,
    evaluate_score,
    gs,
    pce,
    summarize,
)

__all__ = [
    "MetricReport",
    "NoMelodicNotes",
    "TooFewBars",
    "ebr",
    "evaluate_score",
    "gs",
    "pce",
    "summarize",
]
