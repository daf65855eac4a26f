"""Self-describing JSON checkpoint container.

Holds the vocabulary layout, the model configuration, a role tag telling
the generative and scoring models apart, and every weight tensor as a
base64 blob with named shape/dtype. One file, no pickle.
"""

from __future__ import annotations

import base64
import json
from dataclasses import asdict

import numpy as np
import torch

from ..tokens.vocab import AttributeSpec, VocabSpec

FORMAT_NAME = "musegen-checkpoint"
FORMAT_VERSION = 1


class CheckpointError(ValueError):
    pass


def _vocab_to_dict(vocab: VocabSpec) -> list[dict]:
    return [asdict(a) for a in vocab.attributes]


def _vocab_from_dict(items: list[dict]) -> VocabSpec:
    return VocabSpec(attributes=tuple(AttributeSpec(**a) for a in items))


def save_checkpoint(path, role: str, config: dict, vocab: VocabSpec, state_dict) -> None:
    weights = {}
    for name, tensor in state_dict.items():
        array = tensor.detach().cpu().numpy()
        weights[name] = {
            "shape": list(array.shape),
            "dtype": str(array.dtype),
            "data": base64.b64encode(array.tobytes()).decode("ascii"),
        }
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "role": role,
        "config": config,
        "vocab": _vocab_to_dict(vocab),
        "weights": weights,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f)


def load_checkpoint(path, expected_role: str | None = None):
    """Returns (role, config dict, VocabSpec, state_dict of tensors)."""
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    if doc.get("format") != FORMAT_NAME:
        raise CheckpointError(f"not a {FORMAT_NAME} file")
    if doc.get("version") != FORMAT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {doc.get('version')}")
    role = doc.get("role")
    if expected_role is not None and role != expected_role:
        raise CheckpointError(f"expected a {expected_role} checkpoint, found {role}")
    state = {}
    try:
        for name, blob in doc["weights"].items():
            array = np.frombuffer(
                base64.b64decode(blob["data"]), dtype=np.dtype(blob["dtype"])
            ).reshape(blob["shape"])
            state[name] = torch.from_numpy(array.copy())
        return role, doc["config"], _vocab_from_dict(doc["vocab"]), state
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise CheckpointError(f"corrupt checkpoint payload: {exc}") from exc
