"""Bridge acceptance criterion, printed in the same style as the core suite."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema

from musegen.prompts.features import FEATURES_SCHEMA
from musegen_bridge.video import extract_video

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "scripts"))
from make_goldens import write_video  # noqa: E402

GOLDEN = Path(__file__).parent / "golden" / "features"


def test_bridge_contract(tmp_path):
    schema_ok = []
    core_ok = []
    for path in sorted(GOLDEN.glob("*.json")):
        doc = json.loads(path.read_text())
        try:
            jsonschema.validate(doc, FEATURES_SCHEMA)
            schema_ok.append(path.stem)
        except jsonschema.ValidationError:
            pass
        out = tmp_path / f"{path.stem}.elements.json"
        proc = subprocess.run(
            [sys.executable, "-m", "musegen.cli.main", "parse-prompt",
             "--features", str(path), "-o", str(out)],
            capture_output=True, text=True,
        )
        if proc.returncode == 0 and out.exists():
            core_ok.append(path.stem)

    video = tmp_path / "cuts.avi"
    write_video(video)
    n_scenes = extract_video(video)["n_scenes"]

    expected = ["humming", "image", "tag", "text", "video"]
    passed = schema_ok == expected and core_ok == expected and n_scenes == 3
    print(
        f"\nACCEPTANCE {'PASS' if passed else 'FAIL'}: bridge contract "
        f"(schema={len(schema_ok)}/5 parse-prompt={len(core_ok)}/5 "
        f"synth video cuts={n_scenes})"
    )
    assert passed
