"""Valence lexicon, degree modifiers, and negation vocabulary.

The lexicon file is tab-separated `token<TAB>valence`, UTF-8, `#` comments
allowed. Negators and boosters are fixed vocabulary of the scoring rules and
ship as code constants rather than data files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

BOOSTER_INCREMENT = 0.293
BOOSTER_DECREMENT = -0.293

# degree modifiers that amplify the following sentiment token
_BOOSTERS_UP = (
    "absolutely", "amazingly", "awfully", "completely", "considerable",
    "considerably", "decidedly", "deeply", "enormous", "enormously",
    "entirely", "especially", "exceptional", "exceptionally", "extreme",
    "extremely", "fabulously", "fully", "greatly", "highly", "hugely",
    "incredible", "incredibly", "intensely", "major", "majorly", "more",
    "most", "particularly", "purely", "quite", "really", "remarkably",
    "sharply", "significantly", "so", "steeply", "substantially",
    "thoroughly", "total", "totally", "tremendous", "tremendously",
    "uber", "unbelievably", "unusually", "utter", "utterly", "very",
)

# degree modifiers that dampen the following sentiment token
_BOOSTERS_DOWN = (
    "almost", "barely", "hardly", "kinda", "kindof", "kind-of", "less",
    "little", "marginal", "marginally", "mildly", "occasional",
    "occasionally", "partly", "scarce", "scarcely", "slight", "slightly",
    "somewhat", "sorta", "sortof", "sort-of",
)

_NEGATORS = (
    "aint", "ain't", "arent", "aren't", "cannot", "cant", "can't",
    "couldnt", "couldn't", "darent", "daren't", "despite", "didnt",
    "didn't", "doesnt", "doesn't", "dont", "don't", "hadnt", "hadn't",
    "hasnt", "hasn't", "havent", "haven't", "isnt", "isn't", "mightnt",
    "mightn't", "mustnt", "mustn't", "neednt", "needn't", "neither",
    "never", "no", "none", "nope", "nor", "not", "nothing", "nowhere",
    "oughtnt", "oughtn't", "rarely", "seldom", "shant", "shan't",
    "shouldnt", "shouldn't", "uhuh", "uh-uh", "wasnt", "wasn't", "werent",
    "weren't", "without", "wont", "won't", "wouldnt", "wouldn't",
)


@dataclass(frozen=True)
class Lexicon:
    """Token valences plus the booster and negator vocabularies."""

    valences: dict[str, float]
    boosters: dict[str, float] = field(
        default_factory=lambda: dict(
            {w: BOOSTER_INCREMENT for w in _BOOSTERS_UP},
            **{w: BOOSTER_DECREMENT for w in _BOOSTERS_DOWN},
        )
    )
    negators: frozenset[str] = field(default_factory=lambda: frozenset(_NEGATORS))

    def __post_init__(self) -> None:
        for token, valence in self.valences.items():
            if not token or token != token.lower():
                raise ValueError(f"lexicon token {token!r} must be lowercase and non-empty")
            if not math.isfinite(valence):
                raise ValueError(f"lexicon token {token!r} has non-finite valence")

    def is_negator(self, token: str) -> bool:
        return token in self.negators or "n't" in token

    def protected_from_stopwords(self, token: str) -> bool:
        """Negators and boosters survive stopword removal."""
        return token in self.boosters or self.is_negator(token)


def parse_lexicon(text: str) -> Lexicon:
    valences: dict[str, float] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise ValueError(f"malformed lexicon line: {raw!r}")
        valences[parts[0]] = float(parts[1])
    return Lexicon(valences=valences)


def load_lexicon(path: str | Path | None = None) -> Lexicon:
    """Load a lexicon file, defaulting to the bundled one."""
    if path is None:
        text = resources.files("stockcast.sentiment").joinpath("data/lexicon.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return parse_lexicon(text)


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Load a one-token-per-line stopword list, defaulting to the bundled one."""
    if path is None:
        text = resources.files("stockcast.sentiment").joinpath("data/stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = (line.strip() for line in text.splitlines())
    return frozenset(w for w in words if w and not w.startswith("#"))
