"""Lexicon sentiment engine: preprocessing, scoring, daily aggregation."""

from .daily import DailySentiment, aggregate_daily, effective_trading_date
from .lexicon import Lexicon, load_lexicon, load_stopwords, parse_lexicon
from .preprocess import PreprocessConfig, preprocess_text
from .scorer import (
    EMPTY_SCORE,
    NEUTRAL_SCORE,
    SentimentScore,
    score_text,
    token_valences,
    valence_sum,
)

__all__ = [
    "DailySentiment",
    "EMPTY_SCORE",
    "Lexicon",
    "NEUTRAL_SCORE",
    "PreprocessConfig",
    "SentimentScore",
    "aggregate_daily",
    "effective_trading_date",
    "load_lexicon",
    "load_stopwords",
    "parse_lexicon",
    "preprocess_text",
    "score_text",
    "token_valences",
    "valence_sum",
]
