"""Run manifests: every subcommand records how to reproduce its outputs."""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

from .. import __version__
from ..elements.io import SCHEMA_VERSION as ELEMENTS_VERSION
from ..prompts.features import FEATURES_SCHEMA_VERSION
from ..tokens.io import FORMAT_VERSION as EVENTS_VERSION
from ..nn.checkpoint import FORMAT_VERSION as CHECKPOINT_VERSION

SCHEMA_VERSIONS = {
    "package": __version__,
    "events": EVENTS_VERSION,
    "elements": ELEMENTS_VERSION,
    "features": FEATURES_SCHEMA_VERSION,
    "checkpoint": CHECKPOINT_VERSION,
}


def write_manifest(
    output_path: str | Path,
    subcommand: str,
    argv: list[str],
    seed: int | None,
    inputs: list[str],
    outputs: list[str],
) -> Path:
    """Write ``<output>.manifest.json`` next to the main output."""
    path = Path(str(output_path) + ".manifest.json")
    doc = {
        "subcommand": subcommand,
        "argv": argv,
        "seed": seed,
        "inputs": [str(p) for p in inputs],
        "outputs": [str(p) for p in outputs],
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "versions": SCHEMA_VERSIONS,
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
