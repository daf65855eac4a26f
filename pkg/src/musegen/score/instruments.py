"""General MIDI program grouping into the 17 instrument classes.

Melodic programs are grouped by their GM family (blocks of eight programs);
any note on a drum channel maps to DRUM regardless of program. The four
tail blocks (synth FX, ethnic, percussive, sound FX) have no obvious
counterpart among the class names, so the assignment below is a fixed
convention: FX sweeps read as harp-like, the ethnic block is dominated by
plucked lutes (pipa), the percussive block by struck strings (guzheng),
and the sound-effects block lands on tuba as the remaining low-register
class. The table is the contract; tests pin it.
"""

from __future__ import annotations

from .model import InstrumentClass

# GM family block -> class, block i covers programs [8*i, 8*i+7].
_BLOCK_CLASSES: tuple[InstrumentClass, ...] = (
    InstrumentClass.PIANO,      # 0-7    pianos
    InstrumentClass.XYLOPHONE,  # 8-15   chromatic percussion
    InstrumentClass.ORGAN,      # 16-23  organs
    InstrumentClass.GUITAR,     # 24-31  guitars
    InstrumentClass.BASS,       # 32-39  basses
    InstrumentClass.VIOLIN,     # 40-47  solo strings
    InstrumentClass.STRING,     # 48-55  ensembles
    InstrumentClass.TRUMPET,    # 56-63  brass
    InstrumentClass.SAX,        # 64-71  reeds
    InstrumentClass.FLUTE,      # 72-79  pipes
    InstrumentClass.LEAD,       # 80-87  synth leads
    InstrumentClass.PAD,        # 88-95  synth pads
    InstrumentClass.HARP,       # 96-103 synth effects
    InstrumentClass.PIPA,       # 104-111 ethnic
    InstrumentClass.GUZHENG,    # 112-119 percussive
    InstrumentClass.TUBA,       # 120-127 sound effects
)

# Representative program written back when serializing a class track.
_CLASS_PROGRAMS: dict[InstrumentClass, int] = {
    cls: 8 * block for block, cls in enumerate(_BLOCK_CLASSES)
}
_CLASS_PROGRAMS[InstrumentClass.DRUM] = 0


def group_instruments(program: int, is_drum_channel: bool) -> InstrumentClass:
    """Map a GM program (0-127) and drum-channel flag to an instrument class.

    Total over all 256 inputs; drum channels always map to DRUM.
    """
    if not 0 <= program <= 127:
        raise ValueError(f"program out of range: {program}")
    if is_drum_channel:
        return InstrumentClass.DRUM
    return _BLOCK_CLASSES[program // 8]


def class_program(cls: InstrumentClass) -> int:
    """Representative GM program for a class (block start)."""
    return _CLASS_PROGRAMS[cls]
