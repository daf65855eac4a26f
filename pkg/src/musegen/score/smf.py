"""Standard MIDI File reader/writer (formats 0 and 1).

The reader resolves note-on/note-off pairs per track (FIFO within a
(channel, key) pair; note-on with velocity 0 counts as note-off) and maps
programs to instrument classes as it goes. Unclosed notes are closed at
the end of their track. The writer always emits format 1 at 480 ticks per
quarter: track 0 carries tempo and time signature, then one track per
instrument class.
"""

from __future__ import annotations

import struct
from collections import OrderedDict

from .instruments import class_program, group_instruments
from .model import (
    InstrumentClass,
    MalformedFile,
    Note,
    Score,
    TICKS_PER_QUARTER,
)

DRUM_CHANNEL = 9

_META_TEMPO = 0x51
_META_TIME_SIG = 0x58
_META_END_OF_TRACK = 0x2F


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def read(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise MalformedFile("unexpected end of file")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u8(self) -> int:
        return self.read(1)[0]

    def data_byte(self) -> int:
        value = self.u8()
        if value & 0x80:
            raise MalformedFile(f"expected a data byte, got 0x{value:02x}")
        return value

    def u16(self) -> int:
        return struct.unpack(">H", self.read(2))[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.read(4))[0]

    def vlq(self) -> int:
        value = 0
        for _ in range(4):
            byte = self.u8()
            value = (value << 7) | (byte & 0x7F)
            if not byte & 0x80:
                return value
        raise MalformedFile("variable-length quantity too long")

    @property
    def remaining(self) -> int:
        return len(self.data) - self.pos


def _parse_track(
    reader: _Reader,
    notes_out: list[tuple[InstrumentClass, Note]],
    tempo_out: list[tuple[int, float]],
    timesig_out: list[tuple[int, int]],
) -> None:
    if reader.read(4) != b"MTrk":
        raise MalformedFile("expected MTrk chunk")
    length = reader.u32()
    end = reader.pos + length
    if end > len(reader.data):
        raise MalformedFile("track chunk overruns file")

    tick = 0
    running_status: int | None = None
    programs = [0] * 16
    # (channel, key) -> FIFO of (onset_tick, velocity, program-at-onset)
    open_notes: dict[tuple[int, int], list[tuple[int, int, int]]] = {}

    def close_note(channel: int, key: int, off_tick: int) -> None:
        fifo = open_notes.get((channel, key))
        if not fifo:
            return  # orphan note-off, ignored
        onset, velocity, program = fifo.pop(0)
        if off_tick <= onset:
            off_tick = onset + 1  # degenerate; quantization will stretch it
        cls = group_instruments(program, channel == DRUM_CHANNEL)
        notes_out.append((cls, Note(onset, key, off_tick, max(1, velocity))))

    while reader.pos < end:
        tick += reader.vlq()
        status = reader.u8()
        if status < 0x80:
            if running_status is None:
                raise MalformedFile("data byte without running status")
            reader.pos -= 1
            status = running_status

        if status == 0xFF:
            running_status = None
            meta_type = reader.u8()
            meta_len = reader.vlq()
            payload = reader.read(meta_len)
            if meta_type == _META_TEMPO and meta_len == 3:
                usec = (payload[0] << 16) | (payload[1] << 8) | payload[2]
                if usec > 0:
                    tempo_out.append((tick, 60_000_000.0 / usec))
            elif meta_type == _META_TIME_SIG and meta_len >= 2:
                timesig_out.append((payload[0], 1 << payload[1]))
            elif meta_type == _META_END_OF_TRACK:
                break
        elif status in (0xF0, 0xF7):
            running_status = None
            reader.read(reader.vlq())
        elif status >= 0xF0:
            raise MalformedFile(f"unsupported system message 0x{status:02x}")
        else:
            running_status = status
            kind = status >> 4
            channel = status & 0x0F
            if kind in (0x8, 0x9, 0xA, 0xB, 0xE):
                a, b = reader.data_byte(), reader.data_byte()
                if kind == 0x9 and b > 0:
                    open_notes.setdefault((channel, a), []).append(
                        (tick, b, programs[channel])
                    )
                elif kind == 0x8 or (kind == 0x9 and b == 0):
                    close_note(channel, a, tick)
            elif kind in (0xC, 0xD):
                a = reader.data_byte()
                if kind == 0xC:
                    programs[channel] = a
            else:
                raise MalformedFile(f"unknown status byte 0x{status:02x}")

    # decision: unresolved note-ons are closed at the end of the track
    for (channel, key), fifo in open_notes.items():
        for onset, velocity, program in fifo:
            off = max(tick, onset + 1)
            cls = group_instruments(program, channel == DRUM_CHANNEL)
            notes_out.append((cls, Note(onset, key, off, max(1, velocity))))

    reader.pos = end


def parse_midi(data: bytes) -> Score:
    """Parse SMF bytes (format 0 or 1) into a Score.

    Raises MalformedFile for structural problems. The result is *not*
    quantized; tick resolution follows the file header.
    """
    reader = _Reader(data)
    if reader.read(4) != b"MThd":
        raise MalformedFile("missing MThd header")
    header_len = reader.u32()
    if header_len < 6:
        raise MalformedFile("header chunk too short")
    fmt = reader.u16()
    n_tracks = reader.u16()
    division = reader.u16()
    reader.read(header_len - 6)
    if fmt not in (0, 1):
        raise MalformedFile(f"unsupported SMF format {fmt}")
    if division & 0x8000:
        raise MalformedFile("SMPTE time division is not supported")
    if division == 0:
        raise MalformedFile("zero ticks per quarter")
    if fmt == 0 and n_tracks != 1:
        raise MalformedFile("format-0 file must have exactly one track")

    notes: list[tuple[InstrumentClass, Note]] = []
    tempos: list[tuple[int, float]] = []
    timesigs: list[tuple[int, int]] = []
    for _ in range(n_tracks):
        _parse_track(reader, notes, tempos, timesigs)

    by_class: dict[InstrumentClass, list[Note]] = {}
    for cls, note in notes:
        by_class.setdefault(cls, []).append(note)
    tracks = tuple(
        (cls, tuple(sorted(by_class[cls]))) for cls in sorted(by_class)
    )

    tempos.sort(key=lambda tb: tb[0])
    dedup: OrderedDict[int, float] = OrderedDict()
    for tick, bpm in tempos:
        dedup[tick] = bpm  # last event at a tick wins
    tempo_map = tuple(dedup.items()) or ((0, 120.0),)
    if tempo_map[0][0] != 0:
        tempo_map = ((0, 120.0),) + tempo_map

    time_signature = timesigs[0] if timesigs else (4, 4)
    return Score(
        tracks=tracks,
        tempo_map=tempo_map,
        time_signature=time_signature,
        ticks_per_quarter=division,
    )


def _vlq_bytes(value: int) -> bytes:
    if value < 0:
        raise ValueError("negative delta time")
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(out))


def _track_chunk(events: list[tuple[int, int, bytes]]) -> bytes:
    """Assemble a track chunk from (tick, order, message-bytes) events."""
    events.sort(key=lambda e: (e[0], e[1]))
    body = bytearray()
    last_tick = 0
    for tick, _order, msg in events:
        body += _vlq_bytes(tick - last_tick)
        body += msg
        last_tick = tick
    body += _vlq_bytes(0) + bytes((0xFF, _META_END_OF_TRACK, 0x00))
    return b"MTrk" + struct.pack(">I", len(body)) + bytes(body)


def serialize_midi(score: Score) -> bytes:
    """Serialize a Score as a format-1 SMF at 480 ticks per quarter.

    The score must already use the canonical resolution; quantize first.
    """
    if score.ticks_per_quarter != TICKS_PER_QUARTER:
        raise ValueError("serialize_midi expects the canonical 480-tick resolution")

    num, den = score.time_signature
    den_pow = max(0, den.bit_length() - 1)
    if 1 << den_pow != den:
        raise ValueError(f"time signature denominator not a power of two: {den}")

    meta_events: list[tuple[int, int, bytes]] = [
        (0, 0, bytes((0xFF, _META_TIME_SIG, 0x04, num, den_pow, 24, 8)))
    ]
    for tick, bpm in score.tempo_map:
        usec = round(60_000_000.0 / bpm)
        meta_events.append(
            (tick, 1, bytes((0xFF, _META_TEMPO, 0x03)) + struct.pack(">I", usec)[1:])
        )
    chunks = [_track_chunk(meta_events)]

    melodic_channels = [c for c in range(16) if c != DRUM_CHANNEL]
    next_channel = 0
    for cls, notes in score.tracks:
        if cls == InstrumentClass.DRUM:
            channel = DRUM_CHANNEL
        else:
            channel = melodic_channels[next_channel % len(melodic_channels)]
            next_channel += 1
        events: list[tuple[int, int, bytes]] = [
            (0, 0, bytes((0xC0 | channel, class_program(cls))))
        ]
        for n in notes:
            # note-offs sort before note-ons at the same tick
            events.append((n.onset_tick, 2, bytes((0x90 | channel, n.pitch, n.velocity))))
            events.append((n.offset_tick, 1, bytes((0x80 | channel, n.pitch, 0))))
        chunks.append(_track_chunk(events))

    header = b"MThd" + struct.pack(">IHHH", 6, 1, len(chunks), TICKS_PER_QUARTER)
    return header + b"".join(chunks)
