"""Symbolic music generation pipeline with multi-modal prompt control.

Subpackages:
    score     -- MIDI file codec, quantization, instrument grouping
    tokens    -- compound-event representation (encode/decode, vocabularies)
    elements  -- the control-element space shared by all prompt modalities
    prompts   -- mappings from extracted prompt features to control elements
    generator -- autoregressive event model, training and sampling
    selector  -- multi-task quality/emotion/genre scoring of sequences
    metrics   -- objective evaluation (PCE, GS, EBR)
    dataset   -- corpus indexing, deduplication and statistics
    cli       -- command-line entry points
"""

__version__ = "0.1.0"
