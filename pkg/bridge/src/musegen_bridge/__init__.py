"""Media feature extraction for the musegen prompt pipeline.

Turns raw images, text and video into the versioned feature JSON the core
`parse-prompt` command consumes. Scorers are deterministic feature-based
models pinned in ``models.lock.json``; this sandbox has no access to
pretrained network weights, so both image score vectors come from the
descriptor paths described there (recorded in each output's ``extractor``
block).
"""

from .image import score_image, score_image_array
from .text import score_text
from .video import extract_video
from .lock import model_lock

__version__ = "0.1.0"

__all__ = [
    "score_image",
    "score_image_array",
    "score_text",
    "extract_video",
    "model_lock",
    "__version__",
]
