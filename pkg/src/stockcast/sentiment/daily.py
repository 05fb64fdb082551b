"""Collapse per-headline news into one sentiment record per trading day.

News published on a non-trading day (weekend, holiday) rolls FORWARD to
the next trading day: it can only influence the next session's price.
Rolling backward would leak the future into the past.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Sequence

from ..errors import NewsAfterCalendarEnd
from ..ingest import NewsItem
from ..series import TradingDate
from .lexicon import Lexicon
from .preprocess import PreprocessConfig, preprocess_text
from .scorer import NEUTRAL_SCORE, SentimentScore, score_text

HEADLINE_JOINER = ". "


@dataclass(frozen=True)
class DailySentiment:
    """Scores for one ticker on one trading day."""

    date: TradingDate
    ticker: str
    score: SentimentScore
    headline_count: int

    def __post_init__(self) -> None:
        if self.headline_count < 0:
            raise ValueError("headline_count must be >= 0")
        if self.headline_count == 0 and self.score != NEUTRAL_SCORE:
            raise ValueError("days without news must carry the neutral default score")


def effective_trading_date(
    published: TradingDate, calendar: Sequence[TradingDate]
) -> TradingDate:
    """First calendar date >= the publication date."""
    i = bisect_left(calendar, published)
    if i == len(calendar):
        raise NewsAfterCalendarEnd(published)
    return calendar[i]


def aggregate_daily(
    items: Sequence[NewsItem],
    calendar: Sequence[TradingDate],
    ticker: str,
    lexicon: Lexicon,
    stopwords: frozenset[str],
    config: PreprocessConfig = PreprocessConfig(),
    per_headline_average: bool = False,
) -> list[DailySentiment]:
    """One record per calendar date for `ticker`.

    Headlines sharing an effective date are joined with ". " in file order,
    preprocessed once, and scored once. `per_headline_average` instead
    scores each preprocessed headline separately and averages the four
    components; it is an offered alternative, not the default, because a
    day's sentiment is defined as the sentiment of the day's combined news.
    """
    calendar = list(calendar)
    by_day: dict[TradingDate, list[str]] = {}
    for item in items:
        if item.ticker != ticker:
            continue
        day = effective_trading_date(item.date, calendar)
        by_day.setdefault(day, []).append(item.headline)

    records: list[DailySentiment] = []
    for day in calendar:
        headlines = by_day.get(day, [])
        if not headlines:
            records.append(DailySentiment(day, ticker, NEUTRAL_SCORE, 0))
            continue
        if per_headline_average:
            scores = [
                score_text(preprocess_text(h, config, lexicon, stopwords), lexicon)
                for h in headlines
            ]
            n = len(scores)
            score = SentimentScore(
                pos=sum(s.pos for s in scores) / n,
                neg=sum(s.neg for s in scores) / n,
                neu=sum(s.neu for s in scores) / n,
                compound=sum(s.compound for s in scores) / n,
            )
        else:
            combined = HEADLINE_JOINER.join(headlines)
            score = score_text(
                preprocess_text(combined, config, lexicon, stopwords), lexicon
            )
        records.append(DailySentiment(day, ticker, score, len(headlines)))
    return records
