"""JSON (de)serialization for control elements, schema-validated."""

from __future__ import annotations

import json
from importlib import resources

import jsonschema

from .types import (
    BarElement,
    BeatElement,
    EmotionElement,
    GenreElement,
    NoteElement,
    ProjectionElements,
    RhythmElement,
)

SCHEMA_VERSION = 1


def _load_schema(name: str) -> dict:
    ref = resources.files("musegen.schemas").joinpath(name)
    return json.loads(ref.read_text(encoding="utf-8"))


ELEMENTS_SCHEMA = _load_schema("elements.schema.json")


def elements_to_dict(elements: ProjectionElements) -> dict:
    doc: dict = {
        "schema_version": SCHEMA_VERSION,
        "source_modality": elements.source_modality,
    }
    doc["emotion"] = elements.emotion.label if elements.emotion else None
    doc["genre"] = elements.genre.label if elements.genre else None
    if elements.emotion_per_bar is not None:
        doc["emotion_per_bar"] = [e.label for e in elements.emotion_per_bar]
    if elements.rhythm is not None:
        doc["rhythm"] = {
            "beats_per_bar": elements.rhythm.beats_per_bar,
            "bars": [
                {"start_s": b.start_s, "density": b.density}
                for b in elements.rhythm.bars
            ],
            "beats": [
                {"start_s": b.start_s, "tempo_bpm": b.tempo_bpm, "strength": b.strength}
                for b in elements.rhythm.beats
            ],
        }
    else:
        doc["rhythm"] = None
    if elements.notes is not None:
        doc["notes"] = [
            {"pitch": n.pitch, "duration_steps": n.duration_steps, "velocity": n.velocity}
            for n in elements.notes
        ]
    else:
        doc["notes"] = None
    return doc


def elements_from_dict(doc: dict) -> ProjectionElements:
    jsonschema.validate(doc, ELEMENTS_SCHEMA)
    rhythm = None
    if doc.get("rhythm"):
        r = doc["rhythm"]
        rhythm = RhythmElement(
            bars=tuple(BarElement(b["start_s"], b["density"]) for b in r["bars"]),
            beats=tuple(
                BeatElement(b["start_s"], b["tempo_bpm"], b["strength"])
                for b in r["beats"]
            ),
            beats_per_bar=r["beats_per_bar"],
        )
    notes = None
    if doc.get("notes") is not None:
        notes = tuple(
            NoteElement(n["pitch"], n["duration_steps"], n["velocity"])
            for n in doc["notes"]
        )
    per_bar = None
    if doc.get("emotion_per_bar") is not None:
        per_bar = tuple(EmotionElement(e) for e in doc["emotion_per_bar"])
    return ProjectionElements(
        source_modality=doc["source_modality"],
        emotion=EmotionElement(doc["emotion"]) if doc.get("emotion") else None,
        genre=GenreElement(doc["genre"]) if doc.get("genre") else None,
        rhythm=rhythm,
        notes=notes,
        emotion_per_bar=per_bar,
    )


def dump_elements(elements: ProjectionElements) -> str:
    return json.dumps(elements_to_dict(elements), indent=2, sort_keys=True) + "\n"


def load_elements(text: str) -> ProjectionElements:
    return elements_from_dict(json.loads(text))
