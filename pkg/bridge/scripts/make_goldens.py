"""Regenerate golden feature files. Run only after bumping models.lock.json.

Usage: python bridge/scripts/make_goldens.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from musegen_bridge import __version__, model_lock, score_image_array, score_text
from musegen_bridge.video import extract_video

GOLDEN_DIR = Path(__file__).resolve().parents[1] / "tests" / "golden"


def fixture_image() -> np.ndarray:
    """Deterministic test card: warm bright top, dark blue bottom."""
    img = np.zeros((96, 96, 3), np.uint8)
    for y in range(48):
        img[y, :] = (40, 160 + y * 2, 255)  # BGR warm gradient
    img[48:, :] = (90, 30, 10)  # dark blue
    img[20:40, 20:40] = (0, 0, 230)  # red patch
    return img


def fixture_video_frames() -> list[np.ndarray]:
    """Four 12-frame solid-color shots (3 hard cuts) with a moving square."""
    colors = [(60, 60, 60), (0, 0, 200), (0, 180, 0), (200, 60, 0)]
    frames = []
    for shot, color in enumerate(colors):
        for i in range(12):
            frame = np.full((48, 64, 3), color, np.uint8)
            x = 4 + 3 * i
            frame[20:28, x : x + 8] = (255, 255, 255)
            frames.append(frame)
    return frames


def write_video(path: Path) -> None:
    import cv2

    writer = cv2.VideoWriter(
        str(path), cv2.VideoWriter_fourcc(*"MJPG"), 8.0, (64, 48)
    )
    assert writer.isOpened(), "MJPG writer unavailable"
    for frame in fixture_video_frames():
        writer.write(frame)
    writer.release()


def main() -> None:
    import cv2

    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    features_dir = GOLDEN_DIR / "features"
    features_dir.mkdir(exist_ok=True)
    lock = model_lock()
    extractor_base = {"bridge_version": __version__}

    img = fixture_image()
    cv2.imwrite(str(GOLDEN_DIR / "fixture_image.png"), img)
    classifier, zeroshot = score_image_array(img)
    (features_dir / "image.json").write_text(json.dumps({
        "schema_version": 1,
        "modality": "image",
        "image": {"classifier_scores": classifier, "zeroshot_scores": zeroshot},
        "extractor": {**extractor_base,
                      "classifier": lock["image_classifier"],
                      "zeroshot": lock["image_zeroshot"]},
    }, indent=2, sort_keys=True) + "\n")

    text = "a calm quiet morning by the still lake"
    (GOLDEN_DIR / "fixture_text.txt").write_text(text + "\n")
    (features_dir / "text.json").write_text(json.dumps({
        "schema_version": 1,
        "modality": "text",
        "text": {"similarities": score_text(text)},
        "extractor": {**extractor_base, "embedder": lock["text_embedder"]},
    }, indent=2, sort_keys=True) + "\n")

    video_path = GOLDEN_DIR / "fixture_video.avi"
    write_video(video_path)
    (features_dir / "video.json").write_text(json.dumps({
        "schema_version": 1,
        "modality": "video",
        "video": extract_video(video_path),
        "extractor": {**extractor_base, "extractor": lock["video_extractor"]},
    }, indent=2, sort_keys=True) + "\n")

    (features_dir / "tag.json").write_text(json.dumps({
        "schema_version": 1,
        "modality": "tag",
        "tag": {"tag": "jazz"},
        "extractor": {**extractor_base, "note": "hand-authored"},
    }, indent=2, sort_keys=True) + "\n")

    (features_dir / "humming.json").write_text(json.dumps({
        "schema_version": 1,
        "modality": "humming",
        "humming": {
            "notes": [
                {"onset_s": 0.02, "offset_s": 0.48, "pitch": 62, "velocity": 96},
                {"onset_s": 0.51, "offset_s": 0.97, "pitch": 64, "velocity": 92},
                {"onset_s": 1.02, "offset_s": 1.95, "pitch": 67, "velocity": 98},
            ],
            "beats": [0.0, 0.5, 1.0, 1.5, 2.0],
        },
        "extractor": {**extractor_base, "note": "hand-authored transcription"},
    }, indent=2, sort_keys=True) + "\n")

    print(f"goldens written under {GOLDEN_DIR}")


if __name__ == "__main__":
    main()
