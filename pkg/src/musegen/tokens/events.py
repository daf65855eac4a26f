"""Compound events, family masks and the sequence grammar.

An event is one time step holding a family plus 11 attribute indices; the
family determines which attributes may be active. Sequences follow

    Tag ( Bar content* ( Tag Bar content* )* )? EOS
    content := Position | Instrument Note+ ... with Note also allowed
               directly after another Note

where Bar is a rhythm event whose bar-beat attribute is the bar marker and
Position is a rhythm event at an in-bar grid position.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum

from .vocab import ATTRIBUTE_NAMES, BAR_MARK, DEFAULT_VOCAB, VocabSpec


class Family(IntEnum):
    TAG = 0
    RHYTHM = 1
    INSTRUMENT = 2
    NOTE = 3
    EOS = 4


# Attributes that may be non-IGNORE for each family.
FAMILY_MASK: dict[Family, frozenset[str]] = {
    Family.TAG: frozenset({"emotion", "genre"}),
    Family.RHYTHM: frozenset({"bar_beat", "tempo", "chord", "density", "strength"}),
    Family.INSTRUMENT: frozenset({"program"}),
    Family.NOTE: frozenset({"pitch", "duration", "velocity"}),
    Family.EOS: frozenset(),
}

_ATTRS = ATTRIBUTE_NAMES[1:]  # the 11 non-family attributes


@dataclass(frozen=True)
class CompoundEvent:
    family: Family
    emotion: int
    genre: int
    bar_beat: int
    tempo: int
    chord: int
    density: int
    strength: int
    program: int
    pitch: int
    duration: int
    velocity: int

    def get(self, name: str) -> int:
        return getattr(self, name)

    def indices(self) -> tuple[int, ...]:
        """All 12 indices in canonical attribute order (family first)."""
        return (int(self.family),) + tuple(getattr(self, a) for a in _ATTRS)

    def is_bar(self) -> bool:
        return self.family == Family.RHYTHM and self.bar_beat == BAR_MARK

    def is_position(self) -> bool:
        return self.family == Family.RHYTHM and self.bar_beat != BAR_MARK


def blank_event(family: Family, vocab: VocabSpec = DEFAULT_VOCAB, **attrs: int) -> CompoundEvent:
    """Event with every attribute at IGNORE except the given overrides."""
    values = {name: vocab[name].ignore for name in _ATTRS}
    for name, value in attrs.items():
        if name not in values:
            raise KeyError(f"unknown attribute {name!r}")
        values[name] = value
    return CompoundEvent(family=family, **values)


def event_from_indices(indices, vocab: VocabSpec = DEFAULT_VOCAB) -> CompoundEvent:
    if len(indices) != 12:
        raise ValueError(f"expected 12 indices, got {len(indices)}")
    return CompoundEvent(
        family=Family(indices[0]),
        **{name: int(v) for name, v in zip(_ATTRS, indices[1:])},
    )


@dataclass(frozen=True)
class EventSequence:
    """Ordered compound events plus free-form metadata (source id, labels)."""

    events: tuple[CompoundEvent, ...]
    metadata: dict

    def __len__(self) -> int:
        return len(self.events)

    def with_metadata(self, **kv) -> "EventSequence":
        return replace(self, metadata={**self.metadata, **kv})


def event_violations(event: CompoundEvent, vocab: VocabSpec = DEFAULT_VOCAB) -> list[str]:
    """Mask and range violations for a single event (empty when valid)."""
    problems = []
    for name in _ATTRS:
        if not vocab[name].in_range(event.get(name)):
            problems.append(f"{name} index {event.get(name)} out of range")
    if not 0 <= int(event.family) < len(Family):
        problems.append(f"family index {int(event.family)} out of range")
        return problems

    mask = FAMILY_MASK[event.family]
    for name in _ATTRS:
        if name not in mask and event.get(name) != vocab[name].ignore:
            problems.append(f"{event.family.name}: {name} must be IGNORE")

    if event.family == Family.RHYTHM:
        ignore = {n: vocab[n].ignore for n in ("bar_beat", "tempo", "chord", "density", "strength")}
        if event.bar_beat == ignore["bar_beat"]:
            problems.append("RHYTHM: bar_beat must be set")
        elif event.bar_beat == BAR_MARK:
            if event.density == ignore["density"]:
                problems.append("bar event: density must be set")
            for name in ("tempo", "chord", "strength"):
                if event.get(name) != ignore[name]:
                    problems.append(f"bar event: {name} must be IGNORE")
        else:
            if event.density != ignore["density"]:
                problems.append("position event: density must be IGNORE")
            for name in ("tempo", "chord", "strength"):
                if event.get(name) == ignore[name]:
                    problems.append(f"position event: {name} must be set")
    elif event.family == Family.INSTRUMENT:
        if event.program == vocab["program"].ignore:
            problems.append("INSTRUMENT: program must be set")
    elif event.family == Family.NOTE:
        for name in ("pitch", "duration", "velocity"):
            if event.get(name) == vocab[name].ignore:
                problems.append(f"NOTE: {name} must be set")
    return problems


def sequence_violations(seq: EventSequence, vocab: VocabSpec = DEFAULT_VOCAB) -> list[str]:
    """Grammar, mask and range violations for a whole sequence."""
    problems = []
    events = seq.events
    if not events:
        return ["empty sequence"]

    state = "start"  # start -> after_tag -> after_bar/content -> done
    seen_instrument = False
    for i, ev in enumerate(events):
        for p in event_violations(ev, vocab):
            problems.append(f"event {i}: {p}")
        if state == "done":
            problems.append(f"event {i}: content after EOS")
            break
        fam = ev.family
        if state == "start":
            if fam != Family.TAG:
                problems.append(f"event {i}: sequence must begin with a Tag event")
            state = "after_first_tag"
        elif state in ("after_first_tag", "after_tag"):
            if fam == Family.EOS and state == "after_first_tag":
                state = "done"
            elif ev.is_bar():
                state = "content"
                seen_instrument = False
            else:
                problems.append(f"event {i}: Tag must be followed by a bar event")
                state = "content"
        elif state == "content":
            if fam == Family.TAG:
                state = "after_tag"
            elif fam == Family.EOS:
                state = "done"
            elif fam == Family.RHYTHM:
                if ev.is_bar():
                    problems.append(f"event {i}: bar marker without preceding Tag")
            elif fam == Family.INSTRUMENT:
                seen_instrument = True
                state = "after_instrument"
            elif fam == Family.NOTE:
                if not seen_instrument:
                    problems.append(f"event {i}: Note before any Instrument event")
        elif state == "after_instrument":
            if fam != Family.NOTE:
                problems.append(f"event {i}: Instrument must be followed by a Note")
                state = "content"
                if fam == Family.TAG:
                    state = "after_tag"
                elif fam == Family.EOS:
                    state = "done"
            else:
                state = "content"

    if state != "done":
        problems.append("sequence must end with EOS")
    return problems
