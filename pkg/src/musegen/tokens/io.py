"""Event-sequence serialization: JSON-lines and compact binary.

JSON-lines: a header record with format name/version and metadata, then
one object per event keyed by attribute name (family as a lowercase name,
all other attributes as raw vocabulary indices).

Binary: magic ``MGEV``, u16 version, u16 metadata length + UTF-8 JSON
metadata, u32 event count, then 12 little-endian u16 indices per event in
canonical attribute order.
"""

from __future__ import annotations

import json
import struct

from .events import CompoundEvent, EventSequence, Family, event_from_indices
from .vocab import ATTRIBUTE_NAMES, DEFAULT_VOCAB, VocabSpec

FORMAT_NAME = "musegen-events"
FORMAT_VERSION = 1
BINARY_MAGIC = b"MGEV"


def to_jsonl(seq: EventSequence) -> str:
    lines = [
        json.dumps(
            {"format": FORMAT_NAME, "version": FORMAT_VERSION, "metadata": seq.metadata},
            sort_keys=True,
        )
    ]
    for ev in seq.events:
        record = {"family": ev.family.name.lower()}
        for name, value in zip(ATTRIBUTE_NAMES[1:], ev.indices()[1:]):
            record[name] = value
        lines.append(json.dumps(record))
    return "\n".join(lines) + "\n"


def from_jsonl(text: str, vocab: VocabSpec = DEFAULT_VOCAB) -> EventSequence:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty event file")
    header = json.loads(lines[0])
    if header.get("format") != FORMAT_NAME:
        raise ValueError(f"not a {FORMAT_NAME} file")
    if header.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported version {header.get('version')}")
    events = []
    for i, ln in enumerate(lines[1:]):
        record = json.loads(ln)
        try:
            family = Family[str(record["family"]).upper()]
            indices = [int(family)] + [int(record[name]) for name in ATTRIBUTE_NAMES[1:]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"event {i}: bad record: {exc}") from exc
        events.append(event_from_indices(indices, vocab))
    return EventSequence(tuple(events), header.get("metadata", {}))


def to_binary(seq: EventSequence) -> bytes:
    meta = json.dumps(seq.metadata, sort_keys=True).encode("utf-8")
    out = bytearray()
    out += BINARY_MAGIC
    out += struct.pack("<H", FORMAT_VERSION)
    out += struct.pack("<H", len(meta)) + meta
    out += struct.pack("<I", len(seq.events))
    for ev in seq.events:
        out += struct.pack("<12H", *ev.indices())
    return bytes(out)


def from_binary(data: bytes, vocab: VocabSpec = DEFAULT_VOCAB) -> EventSequence:
    if data[:4] != BINARY_MAGIC:
        raise ValueError("bad magic; not an event-sequence binary")
    (version,) = struct.unpack_from("<H", data, 4)
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported version {version}")
    (meta_len,) = struct.unpack_from("<H", data, 6)
    meta = json.loads(data[8 : 8 + meta_len].decode("utf-8")) if meta_len else {}
    offset = 8 + meta_len
    (count,) = struct.unpack_from("<I", data, offset)
    offset += 4
    expected = offset + 24 * count
    if len(data) != expected:
        raise ValueError(f"truncated event data: {len(data)} != {expected} bytes")
    events = []
    for i in range(count):
        indices = struct.unpack_from("<12H", data, offset + 24 * i)
        events.append(event_from_indices(indices, vocab))
    return EventSequence(tuple(events), meta)
