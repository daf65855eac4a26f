"""Bridge CLI: ``bridge extract --modality {image,text,video} IN -o features.json``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import jsonschema

from . import __version__
from .image import UndecodableImage, score_image
from .lock import model_lock
from .text import EmptyText, score_text
from .video import UndecodableVideo, extract_video

try:
    from musegen.prompts.features import FEATURES_SCHEMA
except ImportError:  # pragma: no cover - core package is a hard dependency
    FEATURES_SCHEMA = None


def _extract(modality: str, input_path: Path) -> dict:
    lock = model_lock()
    if modality == "image":
        classifier, zeroshot = score_image(input_path)
        payload = {"classifier_scores": classifier, "zeroshot_scores": zeroshot}
        extractor = {
            "classifier": lock["image_classifier"],
            "zeroshot": lock["image_zeroshot"],
            "note": "feature-based scorers; no pretrained weights available",
        }
    elif modality == "text":
        payload = {"similarities": score_text(input_path.read_text(encoding="utf-8"))}
        extractor = {"embedder": lock["text_embedder"]}
    elif modality == "video":
        payload = extract_video(input_path)
        extractor = {"extractor": lock["video_extractor"]}
    else:
        raise ValueError(f"unsupported modality {modality!r}")
    doc = {
        "schema_version": 1,
        "modality": modality,
        modality: payload,
        "extractor": {"bridge_version": __version__, **extractor},
    }
    if FEATURES_SCHEMA is not None:
        jsonschema.validate(doc, FEATURES_SCHEMA)
    return doc


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="bridge", description=__doc__)
    sub = parser.add_subparsers(dest="command")
    p = sub.add_parser("extract", help="extract prompt features from media")
    p.add_argument("input")
    p.add_argument("--modality", required=True, choices=["image", "text", "video"])
    p.add_argument("-o", "--output", required=True)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    if args.command != "extract":
        parser.print_help()
        return 1
    try:
        doc = _extract(args.modality, Path(args.input))
    except (UndecodableImage, UndecodableVideo, EmptyText, FileNotFoundError,
            ValueError, jsonschema.ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    Path(args.output).write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
