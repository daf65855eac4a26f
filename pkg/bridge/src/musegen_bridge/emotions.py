"""Canonical emotion order and the synonymous textual descriptions.

The order must match the core's label list; the descriptions feed the
zero-shot text-similarity path and the palette anchors of the zero-shot
image path.
"""

EMOTIONS = (
    "exciting",
    "warm",
    "happy",
    "romantic",
    "funny",
    "sad",
    "angry",
    "lazy",
    "quiet",
    "fear",
    "magnificent",
)

DESCRIPTIONS = {
    "exciting": (
        "exciting thrilling energetic electrifying exhilarating action "
        "fast intense adrenaline dynamic vivid racing"
    ),
    "warm": (
        "warm cozy comforting gentle tender soft soothing friendly "
        "welcoming golden sunlit homely"
    ),
    "happy": (
        "happy joyful cheerful delighted smiling sunny bright glad "
        "playful upbeat laughing celebration"
    ),
    "romantic": (
        "romantic loving affectionate dreamy tender intimate candlelit "
        "rose sweet sentimental valentine"
    ),
    "funny": (
        "funny humorous silly comic amusing hilarious goofy witty "
        "whimsical clownish absurd lighthearted"
    ),
    "sad": (
        "sad sorrowful mournful gloomy melancholy tearful grieving blue "
        "lonely somber downcast heartbroken"
    ),
    "angry": (
        "angry furious enraged fierce aggressive hostile burning violent "
        "storming raging irritated mad"
    ),
    "lazy": (
        "lazy idle relaxed sleepy drowsy unhurried sluggish lounging "
        "slow easygoing languid resting"
    ),
    "quiet": (
        "quiet calm still peaceful serene tranquil hushed silent gentle "
        "placid restful meditative"
    ),
    "fear": (
        "fear scary frightening terrifying eerie dark ominous dreadful "
        "haunted creepy sinister menacing"
    ),
    "magnificent": (
        "magnificent grand majestic epic monumental glorious imposing "
        "splendid vast awe-inspiring triumphant regal"
    ),
}
