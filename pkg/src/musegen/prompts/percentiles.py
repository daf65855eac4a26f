"""Percentile reference tables for flow-to-density and saliency-to-strength.

Raw motion statistics from a prompt are placed on the corpus distribution:
the percentile rank of a value (fraction of reference samples <= value) is
scaled onto the target bin range. Default tables ship with the package and
can be rebuilt from any corpus of video feature files.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from importlib import resources


class TableEmpty(ValueError):
    """Raised when a percentile table has no reference samples."""


@dataclass(frozen=True)
class PercentileTable:
    samples: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.samples:
            raise TableEmpty("percentile table needs at least one sample")
        if any(b < a for a, b in zip(self.samples, self.samples[1:])):
            raise ValueError("samples must be sorted ascending")

    @classmethod
    def from_values(cls, values) -> "PercentileTable":
        vals = sorted(float(v) for v in values)
        return cls(tuple(vals))

    def rank(self, value: float) -> float:
        """Fraction of reference samples <= value, in [0, 1]."""
        return bisect_right(self.samples, value) / len(self.samples)

    def to_bin(self, value: float, max_bin: int) -> int:
        """Scale the percentile rank onto 0..max_bin."""
        return min(max_bin, int(self.rank(value) * max_bin))


@dataclass(frozen=True)
class PercentileTables:
    flow: PercentileTable
    saliency: PercentileTable

    @classmethod
    def from_dict(cls, doc: dict) -> "PercentileTables":
        if doc.get("schema_version") != 1:
            raise ValueError("unsupported percentile table version")
        return cls(
            flow=PercentileTable.from_values(doc["flow"]),
            saliency=PercentileTable.from_values(doc["saliency"]),
        )

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "flow": list(self.flow.samples),
            "saliency": list(self.saliency.samples),
        }


def default_tables() -> PercentileTables:
    ref = resources.files("musegen.data").joinpath("percentile_tables.json")
    return PercentileTables.from_dict(json.loads(ref.read_text(encoding="utf-8")))


def build_tables(video_payloads, n_bpb: int = 4) -> PercentileTables:
    """Recompute reference tables from video feature payloads.

    Pools per-bar mean flow (bars approximated by even division of the
    frame sequence) and raw per-beat saliency across the corpus. Samples
    that are not strictly positive are dropped: the tables describe the
    distribution over *moving* content, which keeps motionless input at
    percentile rank zero.
    """
    flows: list[float] = []
    saliencies: list[float] = []
    for payload in video_payloads:
        flow = [float(v) for v in payload["flow_per_frame"]]
        saliency = [float(v) for v in payload["beat_saliency"]]
        n_bars = max(1, len(saliency) // n_bpb)
        per_bar = max(1, len(flow) // n_bars)
        for i in range(n_bars):
            chunk = flow[i * per_bar : (i + 1) * per_bar]
            if chunk:
                flows.append(sum(chunk) / len(chunk))
        saliencies.extend(saliency)
    flows = [v for v in flows if v > 0]
    saliencies = [v for v in saliencies if v > 0]
    if not flows or not saliencies:
        raise TableEmpty("corpus produced no positive reference samples")
    return PercentileTables(
        flow=PercentileTable.from_values(flows),
        saliency=PercentileTable.from_values(saliencies),
    )
