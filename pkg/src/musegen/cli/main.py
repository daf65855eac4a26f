"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 model error.
JSON crosses every module boundary; MIDI bytes appear only at the edges.
``MUSEGEN_LOG`` sets the log level.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import jsonschema

from .. import __version__
from ..dataset import build_index, corpus_stats, dedup_exact, dedup_similarity
from ..elements import dump_elements, load_elements
from ..labels import EMOTIONS, GENRES
from ..generator import (
    ContextOverflow,
    GeneratorConfig,
    build_generator,
    sample,
    synthetic,
    train_generator,
)
from ..metrics import evaluate_score, summarize
from ..nn.checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from ..prompts import PercentileTables, PromptFeatures, build_tables, parse_features
from ..score import parse_midi, quantize_score, serialize_midi
from ..score.model import MalformedFile, Score
from ..selector import (
    SelectorConfig,
    build_selector,
    score_batch,
    select_best,
    train_multitask,
)
from ..tokens import (
    MalformedSequence,
    UnencodableScore,
    decode,
    encode,
    from_binary,
    from_jsonl,
    to_binary,
    to_jsonl,
)
from .manifest import SCHEMA_VERSIONS, write_manifest

log = logging.getLogger("musegen")

USAGE_ERROR, DATA_ERROR, MODEL_ERROR = 1, 2, 3

DATA_ERRORS = (
    MalformedFile,
    MalformedSequence,
    UnencodableScore,
    jsonschema.ValidationError,
    FileNotFoundError,
    IsADirectoryError,
    ValueError,
    KeyError,
    json.JSONDecodeError,
)
MODEL_ERRORS = (CheckpointError, ContextOverflow, RuntimeError)


class UsageError(Exception):
    pass


# --- sequence file helpers -----------------------------------------------------

def _read_sequence(path: Path):
    if path.suffix == ".bin":
        return from_binary(path.read_bytes())
    return from_jsonl(path.read_text(encoding="utf-8"))


def _write_sequence(seq, path: Path) -> None:
    if path.suffix == ".bin":
        path.write_bytes(to_binary(seq))
    else:
        path.write_text(to_jsonl(seq), encoding="utf-8")


def _read_score(path: Path) -> Score:
    return quantize_score(parse_midi(path.read_bytes()))


def _load_generator(path: Path):
    _role, config, vocab, state = load_checkpoint(path, expected_role="generator")
    model = build_generator(GeneratorConfig.from_dict(config))
    model.load_state_dict(state)
    return model


def _load_selector(path: Path):
    _role, config, vocab, state = load_checkpoint(path, expected_role="selector")
    model = build_selector(SelectorConfig.from_dict(config))
    model.load_state_dict(state)
    return model


# --- subcommand implementations ---------------------------------------------------

def cmd_tokenize(args, argv) -> int:
    seq = encode(_read_score(Path(args.input)), args.emotion, args.genre)
    seq = seq.with_metadata(source=Path(args.input).name)
    out = Path(args.output)
    _write_sequence(seq, out)
    write_manifest(out, "tokenize", argv, None, [args.input], [str(out)])
    log.info("wrote %s (%d events)", out, len(seq.events))
    return 0


def cmd_detokenize(args, argv) -> int:
    score, emotion, genre = decode(_read_sequence(Path(args.input)))
    out = Path(args.output)
    out.write_bytes(serialize_midi(score))
    write_manifest(out, "detokenize", argv, None, [args.input], [str(out)])
    log.info("wrote %s (labels: %s/%s)", out, emotion, genre)
    return 0


def cmd_parse_prompt(args, argv) -> int:
    features = PromptFeatures.from_json(Path(args.features).read_text(encoding="utf-8"))
    tables = None
    if args.tables:
        tables = PercentileTables.from_dict(
            json.loads(Path(args.tables).read_text(encoding="utf-8"))
        )
    elements = parse_features(features, tables)
    out = Path(args.output)
    out.write_text(dump_elements(elements), encoding="utf-8")
    write_manifest(out, "parse-prompt", argv, None, [args.features], [str(out)])
    return 0


def cmd_generate(args, argv) -> int:
    elements = None
    if args.elements:
        elements = load_elements(Path(args.elements).read_text(encoding="utf-8"))
    model = _load_generator(Path(args.checkpoint))
    sequences = sample(
        model,
        elements,
        temperature=args.temperature,
        max_bars=args.max_bars,
        seed=args.seed,
        batch_size=args.batch,
    )
    chosen = 0
    if args.select:
        if not args.selector_checkpoint:
            raise UsageError("--select requires --selector-checkpoint")
        selector = _load_selector(Path(args.selector_checkpoint))
        best = select_best(selector, sequences, threshold=args.threshold)
        if best is None:
            raise ValueError(
                f"no sample reached quality threshold {args.threshold}; "
                "lower --threshold or raise --batch"
            )
        chosen = best
    seq = sequences[chosen]
    out = Path(args.output)
    inputs = [p for p in (args.elements, args.checkpoint, args.selector_checkpoint) if p]
    outputs = [str(out)]
    if out.suffix in (".jsonl", ".bin"):
        _write_sequence(seq, out)
    else:
        score, _e, _g = decode(seq)
        out.write_bytes(serialize_midi(score))
    if args.emit_events:
        _write_sequence(seq, Path(args.emit_events))
        outputs.append(args.emit_events)
    write_manifest(out, "generate", argv, args.seed, inputs, outputs)
    log.info("sampled %d candidate(s); wrote #%d to %s", len(sequences), chosen, out)
    return 0


def cmd_select(args, argv) -> int:
    selector = _load_selector(Path(args.checkpoint))
    sequences = [_read_sequence(Path(p)) for p in args.inputs]
    outputs = score_batch(selector, sequences)
    best = select_best(selector, sequences, threshold=args.threshold)
    report = {
        "scores": [o.quality_score for o in outputs],
        "threshold": args.threshold,
        "best_index": best,
        "best_input": args.inputs[best] if best is not None else None,
    }
    out = Path(args.output)
    out.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    write_manifest(out, "select", argv, None, list(args.inputs), [str(out)])
    return 0


def _evaluate_one(path_str: str):
    score, _e, _g = decode(_read_sequence(Path(path_str))) if path_str.endswith(
        (".jsonl", ".bin")
    ) else (_read_score(Path(path_str)), None, None)
    return path_str, evaluate_score(score)


def cmd_evaluate(args, argv) -> int:
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_evaluate_one, args.inputs))
    else:
        results = [_evaluate_one(p) for p in args.inputs]
    out = Path(args.output)
    with open(out, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["path", "pce", "gs", "ebr"])
        for path_str, report in results:
            writer.writerow([path_str, report.pce, report.gs, report.ebr])
    summary_path = out.with_suffix(".summary.json")
    summary_path.write_text(
        json.dumps(summarize([r for _, r in results]), indent=2) + "\n",
        encoding="utf-8",
    )
    write_manifest(
        out, "evaluate", argv, None, list(args.inputs), [str(out), str(summary_path)]
    )
    return 0


def cmd_dedup(args, argv) -> int:
    paths = sorted(Path(args.corpus).glob("*.mid")) + sorted(
        Path(args.corpus).glob("*.midi")
    )
    algorithm = "md5" if args.md5 else "sha256"
    index = build_index(
        paths, label_file=args.labels, algorithm=algorithm, jobs=args.jobs
    )
    kept, dropped_exact = dedup_exact(index)
    report = {
        "files": len(index.entries),
        "skipped": [[str(p), why] for p, why in index.errors],
        "exact_dropped": [str(e.path) for e in dropped_exact],
        "algorithm": algorithm,
    }
    if args.similarity:
        index.entries = kept
        kept_sim, dropped_pairs = dedup_similarity(index, threshold=args.threshold)
        report["similarity_threshold"] = args.threshold
        report["similarity_dropped"] = [
            {"dropped": str(d.path), "kept": str(k.path), "cosine": sim}
            for d, k, sim in dropped_pairs
        ]
        kept = kept_sim
    report["kept"] = [str(e.path) for e in kept]
    out = Path(args.output)
    out.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    write_manifest(out, "dedup", argv, None, [str(args.corpus)], [str(out)])
    return 0


def cmd_stats(args, argv) -> int:
    paths = sorted(Path(args.corpus).glob("*.mid")) + sorted(
        Path(args.corpus).glob("*.midi")
    )
    index = build_index(paths, label_file=args.labels, jobs=args.jobs)
    out = Path(args.output)
    out.write_text(json.dumps(corpus_stats(index), indent=2) + "\n", encoding="utf-8")
    write_manifest(out, "stats", argv, None, [str(args.corpus)], [str(out)])
    return 0


def cmd_make_tables(args, argv) -> int:
    payloads = []
    for path in sorted(Path(args.features).glob("*.json")):
        doc = json.loads(path.read_text(encoding="utf-8"))
        if doc.get("modality") == "video":
            payloads.append(PromptFeatures.from_dict(doc).payload)
    if not payloads:
        raise ValueError(f"no video feature files under {args.features}")
    tables = build_tables(payloads)
    out = Path(args.output)
    out.write_text(json.dumps(tables.to_dict(), indent=2) + "\n", encoding="utf-8")
    write_manifest(out, "make-tables", argv, None, [str(args.features)], [str(out)])
    return 0


def cmd_rerun(args, argv) -> int:
    doc = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    recorded = doc.get("argv")
    if not recorded or recorded[0] == "rerun":
        raise ValueError("manifest does not carry a rerunnable command")
    log.info("rerunning: %s", " ".join(recorded))
    return main(recorded)


def _model_config(cls, args):
    overrides = {"seed": args.seed}
    if args.config:
        overrides = {**json.loads(Path(args.config).read_text(encoding="utf-8")),
                     **overrides}
    return cls(**overrides)


def cmd_train(args, argv) -> int:
    out = Path(args.output)
    if args.role == "generator":
        config = _model_config(GeneratorConfig, args)
        model = build_generator(config)
        if args.synthetic:
            corpus = synthetic.register_corpus(args.sequences, seed=args.seed)
        else:
            corpus = [
                _read_sequence(p)
                for p in sorted(Path(args.corpus).glob("*.jsonl"))
                + sorted(Path(args.corpus).glob("*.bin"))
            ]
        losses = train_generator(
            model, corpus, steps=args.steps, batch_size=args.batch, seed=args.seed
        )
        save_checkpoint(out, "generator", config.as_dict(), model.vocab, model.state_dict())
    else:
        config = _model_config(SelectorConfig, args)
        model = build_selector(config)
        if not args.synthetic:
            raise UsageError(
                "selector training needs quality labels; use --synthetic"
            )
        data = synthetic.quality_corpus(args.sequences, seed=args.seed)
        losses = train_multitask(
            model, data, steps=args.steps, batch_size=args.batch, seed=args.seed
        )
        save_checkpoint(out, "selector", config.as_dict(), model.vocab, model.state_dict())
    write_manifest(
        out, "train", argv, args.seed, [args.corpus] if args.corpus else [], [str(out)]
    )
    log.info("final loss %.4f -> %s", losses[-1], out)
    return 0


# --- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="musegen",
        description="Prompt-controlled symbolic music pipeline",
    )
    parser.add_argument(
        "--version", action="store_true", help="print format versions and exit"
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("tokenize", help="MIDI file -> event sequence")
    p.add_argument("input")
    p.add_argument("--emotion", choices=EMOTIONS, default=None)
    p.add_argument("--genre", choices=GENRES, default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("detokenize", help="event sequence -> MIDI file")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_detokenize)

    p = sub.add_parser("parse-prompt", help="feature JSON -> control elements")
    p.add_argument("--features", required=True)
    p.add_argument("--tables", default=None, help="percentile tables JSON")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_parse_prompt)

    p = sub.add_parser("generate", help="sample sequences from a checkpoint")
    p.add_argument("--elements", default=None)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--batch", type=int, default=1)
    p.add_argument("--temperature", type=float, default=1.0)
    p.add_argument("--max-bars", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--select", action="store_true")
    p.add_argument("--selector-checkpoint", default=None)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--emit-events", default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("select", help="score event files, report the best")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("evaluate", help="objective metrics over files")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True, help="per-file CSV path")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("dedup", help="deduplicate a MIDI corpus")
    p.add_argument("corpus")
    p.add_argument("--similarity", action="store_true")
    p.add_argument("--threshold", type=float, default=0.95)
    p.add_argument("--labels", default=None)
    p.add_argument("--md5", action="store_true", help="hash with MD5 (default sha256)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_dedup)

    p = sub.add_parser("stats", help="corpus label/duration statistics")
    p.add_argument("corpus")
    p.add_argument("--labels", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("make-tables", help="build percentile tables from features")
    p.add_argument("--features", required=True, help="directory of feature JSON files")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_make_tables)

    p = sub.add_parser("train", help="desk-scale training")
    p.add_argument("role", choices=["generator", "selector"])
    p.add_argument("--corpus", default=None, help="directory of event files")
    p.add_argument("--synthetic", action="store_true")
    p.add_argument("--sequences", type=int, default=200)
    p.add_argument("--steps", type=int, default=300)
    p.add_argument("--batch", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", default=None,
                   help="model config JSON; flags override its seed")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("rerun", help="re-execute the command a manifest records")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_rerun)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(level=os.environ.get("MUSEGEN_LOG", "WARNING").upper())
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else USAGE_ERROR
    if args.version:
        print(json.dumps(SCHEMA_VERSIONS, indent=2))
        return 0
    if not getattr(args, "command", None):
        parser.print_help()
        return USAGE_ERROR
    try:
        return args.func(args, argv)
    except UsageError as exc:
        log.error("usage: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except MODEL_ERRORS as exc:  # before DATA_ERRORS: CheckpointError is a ValueError
        log.error("model error: %s", exc)
        print(f"model error: {exc}", file=sys.stderr)
        return MODEL_ERROR
    except DATA_ERRORS as exc:
        log.error("data error: %s", exc)
        print(f"data error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
