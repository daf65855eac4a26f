"""Rebuild the default percentile tables from the sample feature corpus.

Synthesizes a small spread of videos (varying cut rates and motion), runs
the bridge extractor over them, stores the feature files as the sample
corpus under tests/data/sample_features/, and recomputes the packaged
percentile tables from that corpus. `musegen make-tables` performs the
same recomputation for any user corpus.

Usage: python scripts/make_default_tables.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "bridge" / "src"))

import cv2  # noqa: E402

from musegen.prompts import build_tables  # noqa: E402
from musegen_bridge import __version__, model_lock  # noqa: E402
from musegen_bridge.video import extract_video  # noqa: E402

SAMPLES = ROOT / "tests" / "data" / "sample_features"


def synth_video(path: Path, n_shots: int, speed: int, seed: int) -> None:
    rng = np.random.default_rng(seed)
    colors = [tuple(int(c) for c in rng.integers(0, 255, 3)) for _ in range(n_shots)]
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"MJPG"), 8.0, (64, 48))
    assert writer.isOpened()
    frames_per_shot = max(4, 64 // n_shots)
    for color in colors:
        x = int(rng.integers(0, 40))
        for i in range(frames_per_shot):
            frame = np.full((48, 64, 3), color, np.uint8)
            px = (x + speed * i) % 56
            frame[18:30, px : px + 8] = (255, 255, 255)
            writer.write(frame)
    writer.release()


def main() -> None:
    SAMPLES.mkdir(parents=True, exist_ok=True)
    lock = model_lock()
    payloads = []
    specs = [(1, 0, 10), (2, 1, 11), (3, 2, 12), (5, 3, 13), (8, 5, 14), (12, 7, 15)]
    for n_shots, speed, seed in specs:
        video = SAMPLES / f"video_{n_shots:02d}shots.avi"
        synth_video(video, n_shots, speed, seed)
        payload = extract_video(video)
        payloads.append(payload)
        doc = {
            "schema_version": 1,
            "modality": "video",
            "video": payload,
            "extractor": {
                "bridge_version": __version__,
                "extractor": lock["video_extractor"],
                "note": f"synthetic sample, {n_shots} shots, square speed {speed}",
            },
        }
        out = SAMPLES / f"video_{n_shots:02d}shots.json"
        out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        video.unlink()  # keep only the feature files in the repo

    tables = build_tables(payloads)
    target = ROOT / "src" / "musegen" / "data" / "percentile_tables.json"
    target.write_text(json.dumps(tables.to_dict(), indent=2) + "\n")
    print(
        f"{len(payloads)} sample feature files -> {target} "
        f"(flow n={len(tables.flow.samples)}, saliency n={len(tables.saliency.samples)})"
    )


if __name__ == "__main__":
    main()
