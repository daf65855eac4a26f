"""Typed access to prompt-feature files (the media-bridge contract)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import jsonschema

from ..elements.io import _load_schema

FEATURES_SCHEMA = _load_schema("features.schema.json")
FEATURES_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class PromptFeatures:
    """A validated feature document for one prompt."""

    modality: str
    payload: dict
    extractor: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, doc: dict) -> "PromptFeatures":
        jsonschema.validate(doc, FEATURES_SCHEMA)
        modality = doc["modality"]
        return cls(
            modality=modality,
            payload=doc[modality],
            extractor=doc.get("extractor", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> "PromptFeatures":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        doc = {
            "schema_version": FEATURES_SCHEMA_VERSION,
            "modality": self.modality,
            self.modality: self.payload,
        }
        if self.extractor:
            doc["extractor"] = self.extractor
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
