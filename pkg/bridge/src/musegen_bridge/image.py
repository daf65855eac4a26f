"""Image emotion scoring.

Two independent deterministic scorers emit 11-way probability vectors:

* ``colorstat-v1`` (classifier path): global color statistics (brightness,
  saturation, warm/cool balance, colorfulness, contrast, edge density)
  through a fixed linear map and softmax.
* ``palette-sim-v1`` (zero-shot path): cosine similarity between the
  image's hue/lightness descriptor and per-emotion palette anchors derived
  from the textual emotion descriptions, then softmax.

Both stand in for pretrained networks, which are unreachable here; the
substitution is recorded in the extractor block of every feature file.
"""

from __future__ import annotations

import numpy as np

try:
    import cv2
except ImportError as exc:  # pragma: no cover
    raise ImportError("musegen-bridge requires opencv-python-headless") from exc

from .emotions import EMOTIONS

N_HUE_BINS = 18
DARK_BIN = N_HUE_BINS
PALE_BIN = N_HUE_BINS + 1
DESCRIPTOR_DIM = N_HUE_BINS + 2

# feature order: brightness, saturation, warmth, coolness, colorfulness,
# contrast, edge density, bias
_CLASSIFIER_WEIGHTS = np.array(
    [
        [0.5, 1.5, 0.5, 0.0, 1.0, 1.5, 1.5, 0.0],    # exciting
        [1.0, 0.5, 2.0, -1.0, 0.0, -0.5, -0.5, 0.0],  # warm
        [1.5, 1.0, 1.0, 0.0, 0.5, 0.0, 0.0, 0.0],     # happy
        [0.5, 0.5, 1.0, 0.0, 0.0, -1.0, -0.5, 0.2],   # romantic
        [1.0, 1.0, 0.0, 0.0, 1.5, 0.0, 0.5, 0.0],     # funny
        [-1.5, -1.0, -0.5, 1.0, -0.5, 0.0, -0.5, 0.0],  # sad
        [-0.5, 1.0, 1.5, -0.5, 0.0, 1.0, 0.5, 0.0],   # angry
        [0.5, -0.5, 0.0, 0.0, -0.5, -1.0, -1.0, 0.2],  # lazy
        [0.5, -1.0, 0.0, 0.5, -1.0, -0.5, -1.0, 0.2],  # quiet
        [-2.0, -0.5, -0.5, 0.5, -0.5, 1.0, 0.5, 0.0],  # fear
        [0.5, 0.5, 0.0, 0.5, 1.0, 1.0, 0.5, 0.0],     # magnificent
    ]
)
_CLASSIFIER_GAIN = 2.0

# (hue bin center in cv2's 0..179 scale | DARK | PALE, weight)
_PALETTES: dict[str, tuple[tuple[float | str, float], ...]] = {
    "exciting": ((0, 2.0), (11, 1.0), (160, 1.0)),
    "warm": ((11, 2.0), (20, 1.5), (5, 0.5)),
    "happy": ((25, 2.0), (15, 1.0), ("pale", 0.5)),
    "romantic": ((165, 2.0), (140, 0.5), ("pale", 0.5)),
    "funny": ((25, 1.0), (160, 1.0), (85, 1.0)),
    "sad": ((110, 2.0), ("dark", 1.0), (95, 0.5)),
    "angry": ((0, 2.5), ("dark", 0.5)),
    "lazy": ((35, 1.0), ("pale", 1.5)),
    "quiet": (("pale", 2.0), (90, 0.5)),
    "fear": (("dark", 2.5), (135, 0.5)),
    "magnificent": ((140, 1.5), (115, 1.0), ("dark", 0.5)),
}
_ZEROSHOT_GAIN = 8.0


class UndecodableImage(ValueError):
    pass


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max()
    e = np.exp(z)
    return e / e.sum()


def _features(bgr: np.ndarray) -> np.ndarray:
    hsv = cv2.cvtColor(bgr, cv2.COLOR_BGR2HSV).astype(np.float64)
    hue, sat, val = hsv[..., 0], hsv[..., 1] / 255.0, hsv[..., 2] / 255.0
    gray = cv2.cvtColor(bgr, cv2.COLOR_BGR2GRAY).astype(np.float64) / 255.0

    warm_mask = ((hue <= 30) | (hue >= 160)).astype(np.float64)
    weight = sat * val
    weight_sum = float(weight.sum()) or 1.0
    warmth = float((warm_mask * weight).sum() / weight_sum)

    # Hasler-Suesstrunk style colorfulness, squashed to ~[0, 1]
    b, g, r = [bgr[..., i].astype(np.float64) for i in range(3)]
    rg, yb = r - g, 0.5 * (r + g) - b
    colorfulness = float(
        np.hypot(rg.std(), yb.std()) + 0.3 * np.hypot(rg.mean(), yb.mean())
    ) / 255.0

    edges = cv2.Sobel(gray, cv2.CV_64F, 1, 0), cv2.Sobel(gray, cv2.CV_64F, 0, 1)
    edge_density = float(np.hypot(edges[0], edges[1]).mean())

    return np.array(
        [
            float(val.mean()),
            float(sat.mean()),
            warmth,
            1.0 - warmth,
            min(1.0, colorfulness),
            min(1.0, float(gray.std()) * 4.0),
            min(1.0, edge_density),
            1.0,
        ]
    )


def _descriptor(bgr: np.ndarray) -> np.ndarray:
    hsv = cv2.cvtColor(bgr, cv2.COLOR_BGR2HSV).astype(np.float64)
    hue, sat, val = hsv[..., 0], hsv[..., 1] / 255.0, hsv[..., 2] / 255.0
    desc = np.zeros(DESCRIPTOR_DIM)
    dark = val < 0.25
    pale = (~dark) & (sat < 0.15)
    chroma = (~dark) & (~pale)
    desc[DARK_BIN] = float(dark.mean())
    desc[PALE_BIN] = float(pale.mean())
    if chroma.any():
        bins = np.minimum((hue[chroma] / (180.0 / N_HUE_BINS)).astype(int), N_HUE_BINS - 1)
        weights = (sat * val)[chroma]
        hist = np.bincount(bins, weights=weights, minlength=N_HUE_BINS)
        total = hist.sum()
        if total > 0:
            desc[:N_HUE_BINS] = hist / total * float(chroma.mean())
    return desc


def _palette_anchor(palette) -> np.ndarray:
    anchor = np.zeros(DESCRIPTOR_DIM)
    for entry, weight in palette:
        if entry == "dark":
            anchor[DARK_BIN] += weight
        elif entry == "pale":
            anchor[PALE_BIN] += weight
        else:
            center = float(entry) / (180.0 / N_HUE_BINS)
            for b in range(N_HUE_BINS):
                distance = min(abs(b + 0.5 - center), N_HUE_BINS - abs(b + 0.5 - center))
                anchor[b] += weight * np.exp(-0.5 * (distance / 0.9) ** 2)
    return anchor / np.linalg.norm(anchor)


_ANCHORS = np.stack([_palette_anchor(_PALETTES[e]) for e in EMOTIONS])


def score_image_array(bgr: np.ndarray) -> tuple[list[float], list[float]]:
    """Two softmax-normalized 11-way emotion score vectors for a BGR image."""
    if bgr is None or bgr.ndim != 3 or bgr.shape[2] != 3 or bgr.size == 0:
        raise UndecodableImage("expected a decoded 3-channel image")
    small = cv2.resize(bgr, (128, 128), interpolation=cv2.INTER_AREA)

    classifier = _softmax(_CLASSIFIER_GAIN * (_CLASSIFIER_WEIGHTS @ _features(small)))

    desc = _descriptor(small)
    norm = np.linalg.norm(desc)
    if norm > 0:
        sims = _ANCHORS @ (desc / norm)
    else:
        sims = np.zeros(len(EMOTIONS))
    zeroshot = _softmax(_ZEROSHOT_GAIN * sims)
    return [float(v) for v in classifier], [float(v) for v in zeroshot]


def score_image(path) -> tuple[list[float], list[float]]:
    bgr = cv2.imread(str(path), cv2.IMREAD_COLOR)
    if bgr is None:
        raise UndecodableImage(f"cannot decode image: {path}")
    return score_image_array(bgr)
