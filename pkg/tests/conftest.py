"""Shared builders for dated test data."""

from __future__ import annotations

from datetime import date, timedelta

import numpy as np
import pytest

from stockcast.series import (
    AlignedPanel,
    MacroPanel,
    MacroSeries,
    PriceBar,
    PriceSeries,
    SentimentColumns,
)


def weekdays(start: date, count: int) -> list[date]:
    """`count` consecutive weekdays from `start` (skipping Sat/Sun)."""
    out = []
    d = start
    while len(out) < count:
        if d.weekday() < 5:
            out.append(d)
        d += timedelta(days=1)
    return out


def make_bar(d: date, close: float, spread: float = 1.0) -> PriceBar:
    return PriceBar(
        date=d,
        open=close,
        high=close + spread,
        low=max(close - spread, 0.01),
        close=close,
        adj_close=close,
        volume=1000,
    )


def make_prices(dates: list[date], closes, ticker: str = "TEST") -> PriceSeries:
    return PriceSeries(ticker, tuple(make_bar(d, float(c)) for d, c in zip(dates, closes)))


def make_macro(dates: list[date], base: float = 100.0, name: str = "gold") -> MacroSeries:
    return MacroSeries(name, tuple(dates), tuple(base + i for i in range(len(dates))))


def make_macro_panel(dates: list[date]) -> MacroPanel:
    return MacroPanel(
        gold=make_macro(dates, 1800.0, "gold"),
        brent=make_macro(dates, 70.0, "brent"),
        gsec=make_macro(dates, 6.0, "gsec"),
        usd_inr=make_macro(dates, 74.0, "usd_inr"),
    )


def make_panel(
    n: int = 120,
    start: date = date(2021, 1, 1),
    ticker: str = "TEST",
    with_sentiment: bool = True,
    seed: int = 0,
) -> AlignedPanel:
    rng = np.random.Generator(np.random.PCG64(seed))
    dates = weekdays(start, n)
    closes = 100.0 + np.cumsum(rng.normal(0.1, 1.0, n))
    closes = np.maximum(closes, 1.0)
    sentiment = None
    if with_sentiment:
        pos = rng.uniform(0, 0.4, n)
        neg = rng.uniform(0, 0.4, n)
        neu = 1.0 - pos - neg
        sentiment = SentimentColumns(
            pos=pos, neg=neg, neu=neu, compound=rng.uniform(-0.9, 0.9, n)
        )
    return AlignedPanel(
        dates=tuple(dates),
        close=closes,
        gold=1800.0 + rng.normal(0, 5, n),
        brent=70.0 + rng.normal(0, 2, n),
        gsec=6.0 + rng.normal(0, 0.1, n),
        usd_inr=74.0 + rng.normal(0, 0.5, n),
        sentiment=sentiment,
        ticker=ticker,
    )


@pytest.fixture
def small_panel() -> AlignedPanel:
    return make_panel(n=40, seed=7)
