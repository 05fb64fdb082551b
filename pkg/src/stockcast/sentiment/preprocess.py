"""Headline text normalization ahead of sentiment scoring.

Exclamation marks carry emphasis for the scorer, so special-character
removal keeps them but detaches them into standalone tokens. Negators and
degree modifiers are exempt from stopword removal: dropping "not" would
silently invert the meaning the scorer is supposed to capture.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .lexicon import Lexicon

_POSSESSIVE_RE = re.compile(r"'s\b")
_SPECIAL_RE = re.compile(r"[^a-z0-9!\s]+")
_BANG_RUN_RE = re.compile(r"(!+)")


@dataclass(frozen=True)
class PreprocessConfig:
    remove_stopwords: bool = True
    remove_special_chars: bool = True


def preprocess_text(
    raw: str,
    config: PreprocessConfig,
    lexicon: Lexicon,
    stopwords: frozenset[str],
) -> str:
    """Lowercase, strip special characters, drop stopwords, collapse spaces.

    Total function: any input string yields a (possibly empty) string.
    """
    text = raw.lower()
    if config.remove_special_chars:
        text = _POSSESSIVE_RE.sub("", text)
        text = _BANG_RUN_RE.sub(r" \1 ", text)
        # delete rather than blank out, so contractions keep their negating
        # shape ("doesn't" -> "doesnt", not "doesn t")
        text = _SPECIAL_RE.sub("", text)
    tokens = text.split()
    if config.remove_stopwords:
        tokens = [
            t for t in tokens
            if t not in stopwords or lexicon.protected_from_stopwords(t)
        ]
    return " ".join(tokens)
