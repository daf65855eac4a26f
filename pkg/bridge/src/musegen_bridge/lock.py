"""Pinned model identifiers; goldens regenerate only on an explicit bump."""

from __future__ import annotations

import json
from importlib import resources


def model_lock() -> dict:
    ref = resources.files("musegen_bridge").joinpath("models.lock.json")
    return json.loads(ref.read_text(encoding="utf-8"))
