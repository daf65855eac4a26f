"""Temperature sampling with grammar constraints and control injection.

The sampler owns its RNG and walks the event grammar explicitly, so every
emitted sequence decodes cleanly:

* the opening Tag/bar pair is injected, with Tag attributes forced from the
  control elements when present (a bar-level emotion list overrides the
  global emotion bar by bar);
* under rhythm control the bar/beat skeleton is injected outright - the
  model's probability mass on Tag/Rhythm/EOS acts as an "advance scaffold"
  choice, while Instrument/Note events are sampled freely between beats;
* note prefixes (humming) are teacher-forced verbatim after the first
  beat, under a default piano instrument event;
* pitch sampling is range-masked by the active instrument (percussion
  pseudo-pitches only on drum tracks), and family choices are restricted
  to grammar-legal continuations. Runaway sequences are truncated with a
  forced EOS just before the context limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch.nn import functional as F

from ..elements.types import ProjectionElements
from ..labels import EMOTIONS, GENRES
from ..score.quantize import TEMPO_BINS, snap_tempo
from ..tokens.events import CompoundEvent, EventSequence, Family, blank_event
from ..tokens.vocab import BAR_MARK, VocabSpec
from .model import GeneratorModel, events_to_tensor

BEAT_GRID = (0, 8, 16, 24)
PREFIX_INSTRUMENT = 0  # piano carries teacher-forced note prefixes


@dataclass
class _Control:
    emotion_idx: int | None = None
    genre_idx: int | None = None
    emotion_per_bar: list[int] | None = None
    bar_densities: list[int] | None = None       # per bar, when rhythm given
    beat_tempo_idx: list[int] | None = None      # per beat (flat), tempo bin index
    beat_strengths: list[int] | None = None
    note_prefix: list[tuple[int, int, int]] | None = None  # (pitch, dur idx, vel idx)

    @property
    def has_rhythm(self) -> bool:
        return self.bar_densities is not None

    @property
    def n_bars(self) -> int | None:
        return len(self.bar_densities) if self.bar_densities is not None else None


def _control_from_elements(elements: ProjectionElements | None) -> _Control:
    if elements is None:
        return _Control()
    control = _Control()
    if elements.emotion is not None:
        control.emotion_idx = elements.emotion.index
    if elements.genre is not None:
        control.genre_idx = elements.genre.index
    if elements.emotion_per_bar:
        control.emotion_per_bar = [e.index for e in elements.emotion_per_bar]
    if elements.rhythm is not None:
        control.bar_densities = [b.density for b in elements.rhythm.bars]
        control.beat_tempo_idx = [
            TEMPO_BINS.index(snap_tempo(b.tempo_bpm)) for b in elements.rhythm.beats
        ]
        control.beat_strengths = [b.strength for b in elements.rhythm.beats]
    if elements.notes:
        control.note_prefix = [
            (n.pitch, n.duration_steps - 1, (max(40, min(126, n.velocity)) - 40) // 2)
            for n in elements.notes
        ]
    return control


class _SeqState:
    __slots__ = (
        "events", "mode", "bars_started", "seen_instrument",
        "active_instrument", "pending_beats", "done",
    )

    def __init__(self):
        self.events: list[CompoundEvent] = []
        self.mode = "start"  # start / after_tag / content / after_instrument / done
        self.bars_started = 0
        self.seen_instrument = False
        self.active_instrument: int | None = None
        self.pending_beats: list[int] = []
        self.done = False


class Sampler:
    """Reentrant sampling helper; each instance owns its RNG."""

    def __init__(self, model: GeneratorModel, seed: int = 0):
        self.model = model
        self.vocab: VocabSpec = model.vocab
        self.rng = torch.Generator().manual_seed(seed)

    # -- distribution helpers -------------------------------------------------

    def _draw(self, logits: torch.Tensor, allowed: list[int], temperature: float) -> int:
        probs = F.softmax(logits[allowed] / temperature, dim=-1)
        pick = int(torch.multinomial(probs, 1, generator=self.rng))
        return allowed[pick]

    def _value_indices(self, name: str, with_conti: bool = False) -> list[int]:
        spec = self.vocab[name]
        indices = list(range(spec.base_size))
        if with_conti and spec.has_conti:
            indices.append(spec.conti)
        return indices

    # -- event construction ----------------------------------------------------

    def _tag_event(self, control: _Control, bar_index: int, attr_logits, row: int,
                   temperature: float) -> CompoundEvent:
        vocab = self.vocab
        if control.emotion_per_bar:
            per_bar = control.emotion_per_bar
            emotion = per_bar[min(bar_index, len(per_bar) - 1)]
        elif control.emotion_idx is not None:
            emotion = control.emotion_idx
        else:
            emotion = self._draw(
                attr_logits["emotion"][row],
                self._value_indices("emotion") + [vocab["emotion"].ignore],
                temperature,
            )
        if control.genre_idx is not None:
            genre = control.genre_idx
        else:
            genre = self._draw(
                attr_logits["genre"][row],
                self._value_indices("genre") + [vocab["genre"].ignore],
                temperature,
            )
        return blank_event(Family.TAG, vocab, emotion=emotion, genre=genre)

    def _bar_event(self, control: _Control, bar_index: int, attr_logits, row: int,
                   temperature: float) -> CompoundEvent:
        if control.bar_densities is not None:
            density = control.bar_densities[min(bar_index, len(control.bar_densities) - 1)]
        else:
            density = self._draw(
                attr_logits["density"][row], self._value_indices("density"), temperature
            )
        return blank_event(Family.RHYTHM, self.vocab, bar_beat=BAR_MARK, density=density)

    def _beat_event(self, control: _Control, bar_index: int, position: int,
                    attr_logits, row: int, temperature: float) -> CompoundEvent:
        beat_number = bar_index * len(BEAT_GRID) + BEAT_GRID.index(position)
        tempo = control.beat_tempo_idx[min(beat_number, len(control.beat_tempo_idx) - 1)]
        strength = control.beat_strengths[min(beat_number, len(control.beat_strengths) - 1)]
        chord = self._draw(
            attr_logits["chord"][row], self._value_indices("chord", with_conti=True),
            temperature,
        )
        return blank_event(
            Family.RHYTHM, self.vocab,
            bar_beat=position, tempo=tempo, chord=chord, strength=strength,
        )

    def _free_position_event(self, attr_logits, row: int, temperature: float) -> CompoundEvent:
        position = self._draw(
            attr_logits["bar_beat"][row], list(range(32)), temperature
        )
        tempo = self._draw(
            attr_logits["tempo"][row], self._value_indices("tempo", with_conti=True),
            temperature,
        )
        chord = self._draw(
            attr_logits["chord"][row], self._value_indices("chord", with_conti=True),
            temperature,
        )
        strength = self._draw(
            attr_logits["strength"][row], self._value_indices("strength"), temperature
        )
        return blank_event(
            Family.RHYTHM, self.vocab,
            bar_beat=position, tempo=tempo, chord=chord, strength=strength,
        )

    def _instrument_event(self, attr_logits, row: int, temperature: float) -> CompoundEvent:
        program = self._draw(
            attr_logits["program"][row], self._value_indices("program"), temperature
        )
        return blank_event(Family.INSTRUMENT, self.vocab, program=program)

    def _note_event(self, active_instrument: int, attr_logits, row: int,
                    temperature: float) -> CompoundEvent:
        drum = active_instrument == 16
        pitch_range = list(range(128, 256)) if drum else list(range(128))
        pitch = self._draw(attr_logits["pitch"][row], pitch_range, temperature)
        duration = self._draw(
            attr_logits["duration"][row], self._value_indices("duration"), temperature
        )
        velocity = self._draw(
            attr_logits["velocity"][row], self._value_indices("velocity"), temperature
        )
        return blank_event(
            Family.NOTE, self.vocab, pitch=pitch, duration=duration, velocity=velocity
        )

    # -- the sampling loop --------------------------------------------------------

    def sample(
        self,
        control_elements: ProjectionElements | None = None,
        temperature: float = 1.0,
        max_bars: int = 8,
        batch_size: int = 1,
    ) -> list[EventSequence]:
        if temperature <= 0:
            raise ValueError("temperature must be positive")
        model = self.model
        model.eval()
        control = _control_from_elements(control_elements)
        n_bars_target = control.n_bars if control.has_rhythm else max_bars
        cap = model.config.context_length

        states = [_SeqState() for _ in range(batch_size)]
        for s in states:
            self._prime(s, control)

        with torch.no_grad():
            while not all(s.done for s in states):
                length = len(states[0].events)
                if length >= cap:
                    break
                tokens = torch.stack(
                    [
                        torch.tensor([ev.indices() for ev in s.events], dtype=torch.long)
                        for s in states
                    ]
                )
                h = model.hidden(tokens)[:, -1]
                family_logits = model.family_logits(h)

                families = []
                for row, s in enumerate(states):
                    families.append(
                        self._choose_family(
                            s, control, n_bars_target, family_logits[row],
                            temperature, length, cap,
                        )
                    )
                attr_logits = model.attribute_logits(
                    h, torch.tensor(families, dtype=torch.long)
                )
                for row, s in enumerate(states):
                    self._emit(
                        s, Family(families[row]), control, attr_logits, row, temperature
                    )

        sequences = []
        for i, s in enumerate(states):
            if s.events[-1].family != Family.EOS:
                s.events.append(blank_event(Family.EOS, self.vocab))
            # drop EOS padding rows appended to keep the batch rectangular
            first_eos = next(
                k for k, ev in enumerate(s.events) if ev.family == Family.EOS
            )
            s.events = s.events[: first_eos + 1]
            metadata = {"sampled": True, "index": i}
            if control.emotion_idx is not None:
                metadata["emotion"] = EMOTIONS[control.emotion_idx]
            if control.genre_idx is not None:
                metadata["genre"] = GENRES[control.genre_idx]
            sequences.append(EventSequence(tuple(s.events), metadata))
        return sequences

    def _prime(self, s: _SeqState, control: _Control) -> None:
        """Inject the forced opening: Tag, bar, first beat, note prefix."""
        vocab = self.vocab
        emotion = control.emotion_idx
        if control.emotion_per_bar:
            emotion = control.emotion_per_bar[0]
        s.events.append(
            blank_event(
                Family.TAG, vocab,
                emotion=vocab["emotion"].ignore if emotion is None else emotion,
                genre=vocab["genre"].ignore if control.genre_idx is None else control.genre_idx,
            )
        )
        s.bars_started = 1
        density = control.bar_densities[0] if control.has_rhythm else 0
        s.events.append(
            blank_event(Family.RHYTHM, vocab, bar_beat=BAR_MARK, density=density)
        )
        s.pending_beats = list(BEAT_GRID) if control.has_rhythm else []
        s.mode = "content"
        if control.has_rhythm:
            s.events.append(self._forced_beat(control, 0, s.pending_beats.pop(0)))
        if control.note_prefix:
            s.events.append(
                blank_event(Family.INSTRUMENT, vocab, program=PREFIX_INSTRUMENT)
            )
            s.seen_instrument = True
            s.active_instrument = PREFIX_INSTRUMENT
            for pitch, dur_idx, vel_idx in control.note_prefix:
                s.events.append(
                    blank_event(
                        Family.NOTE, vocab,
                        pitch=min(pitch, 127), duration=dur_idx, velocity=vel_idx,
                    )
                )

    def _forced_beat(self, control: _Control, bar_index: int, position: int) -> CompoundEvent:
        """Beat event with forced tempo/strength and a neutral CONTI chord."""
        beat_number = bar_index * len(BEAT_GRID) + BEAT_GRID.index(position)
        tempo = control.beat_tempo_idx[min(beat_number, len(control.beat_tempo_idx) - 1)]
        strength = control.beat_strengths[min(beat_number, len(control.beat_strengths) - 1)]
        return blank_event(
            Family.RHYTHM, self.vocab,
            bar_beat=position, tempo=tempo, chord=self.vocab["chord"].conti,
            strength=strength,
        )

    def _choose_family(
        self, s: _SeqState, control: _Control, n_bars_target: int,
        logits: torch.Tensor, temperature: float, length: int, cap: int,
    ) -> int:
        if s.done:
            return int(Family.EOS)
        # truncation window: wind the grammar down before the context limit
        if length >= cap - 2:
            if s.mode == "after_instrument":
                return int(Family.NOTE)
            if s.mode == "after_tag":
                return int(Family.RHYTHM)
            return int(Family.EOS)
        if s.mode == "after_tag":
            return int(Family.RHYTHM)
        if s.mode == "after_instrument":
            return int(Family.NOTE)

        allowed = [int(Family.INSTRUMENT)]
        if s.seen_instrument:
            allowed.append(int(Family.NOTE))
        if control.has_rhythm:
            # Tag/Rhythm/EOS all mean "advance the scaffold"
            allowed += [int(Family.TAG), int(Family.RHYTHM), int(Family.EOS)]
        else:
            allowed.append(int(Family.RHYTHM))
            if s.bars_started < n_bars_target:
                allowed.append(int(Family.TAG))
            allowed.append(int(Family.EOS))
        choice = self._draw(logits, sorted(set(allowed)), temperature)

        if control.has_rhythm and choice in (
            int(Family.TAG), int(Family.RHYTHM), int(Family.EOS)
        ):
            if s.pending_beats:
                return int(Family.RHYTHM)
            if s.bars_started < n_bars_target:
                return int(Family.TAG)
            return int(Family.EOS)
        if not control.has_rhythm and choice == int(Family.TAG):
            if s.bars_started >= n_bars_target:
                return int(Family.EOS)
        return choice

    def _emit(
        self, s: _SeqState, family: Family, control: _Control,
        attr_logits, row: int, temperature: float,
    ) -> None:
        if s.done:
            s.events.append(blank_event(Family.EOS, self.vocab))
            return
        if family == Family.EOS:
            s.events.append(blank_event(Family.EOS, self.vocab))
            s.mode = "done"
            s.done = True
        elif family == Family.TAG:
            s.events.append(
                self._tag_event(control, s.bars_started, attr_logits, row, temperature)
            )
            s.bars_started += 1
            s.mode = "after_tag"
        elif family == Family.RHYTHM:
            if s.mode == "after_tag":
                s.events.append(
                    self._bar_event(
                        control, s.bars_started - 1, attr_logits, row, temperature
                    )
                )
                s.seen_instrument = False
                s.active_instrument = None
                s.pending_beats = list(BEAT_GRID) if control.has_rhythm else []
                s.mode = "content"
            elif control.has_rhythm:
                position = s.pending_beats.pop(0)
                s.events.append(
                    self._beat_event(
                        control, s.bars_started - 1, position, attr_logits, row,
                        temperature,
                    )
                )
            else:
                s.events.append(self._free_position_event(attr_logits, row, temperature))
        elif family == Family.INSTRUMENT:
            event = self._instrument_event(attr_logits, row, temperature)
            s.events.append(event)
            s.seen_instrument = True
            s.active_instrument = event.program
            s.mode = "after_instrument"
        elif family == Family.NOTE:
            s.events.append(
                self._note_event(s.active_instrument, attr_logits, row, temperature)
            )
            s.mode = "content"


def sample(
    model: GeneratorModel,
    control: ProjectionElements | None = None,
    temperature: float = 1.0,
    max_bars: int = 8,
    seed: int = 0,
    batch_size: int = 1,
) -> list[EventSequence]:
    """Convenience wrapper: one fresh Sampler per call."""
    return Sampler(model, seed).sample(control, temperature, max_bars, batch_size)
