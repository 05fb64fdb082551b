#!/usr/bin/env python3
"""Regenerate the bundled synthetic sample dataset (sample_data/).

Deterministic: fixed seed, fixed calendar, hand-written news set. Prices
live on a trading calendar with synthetic holidays; macro series quote on
all weekdays so forward-fill alignment has real work to do.
"""

from __future__ import annotations

import csv
from datetime import date, timedelta
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "sample_data"

START = date(2019, 6, 3)
N_TRADING_DAYS = 500
TICKERS = ("ALFA", "BRVO")

# synthetic exchange holidays (weekdays without trading)
HOLIDAYS = {
    date(2019, 8, 15), date(2019, 10, 2), date(2019, 12, 25),
    date(2020, 1, 1), date(2020, 4, 10), date(2020, 8, 14),
    date(2020, 11, 16), date(2020, 12, 25), date(2021, 1, 26),
    date(2021, 4, 2),
}


def weekday_calendar(start: date, end: date) -> list[date]:
    days = []
    d = start
    while d <= end:
        if d.weekday() < 5:
            days.append(d)
        d += timedelta(days=1)
    return days


def trading_calendar(start: date, count: int) -> list[date]:
    days = []
    d = start
    while len(days) < count:
        if d.weekday() < 5 and d not in HOLIDAYS:
            days.append(d)
        d += timedelta(days=1)
    return days


def make_closes(rng: np.random.Generator, n: int, start_price: float, drift: float) -> np.ndarray:
    t = np.arange(n)
    cycle = 0.02 * np.sin(2 * np.pi * t / 47.0) + 0.01 * np.sin(2 * np.pi * t / 13.0)
    shocks = rng.normal(drift, 0.011, n)
    log_price = np.log(start_price) + np.cumsum(shocks) + cycle
    return np.exp(log_price)


def write_prices(path: Path, dates: list[date], closes: np.ndarray, rng: np.random.Generator):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["Date", "Open", "High", "Low", "Close", "Adj Close", "Volume"])
        prev = closes[0]
        for d, close in zip(dates, closes):
            spread = abs(rng.normal(0, 0.004)) + 0.002
            open_ = prev * (1 + rng.normal(0, 0.003))
            high = max(open_, close) * (1 + spread)
            low = min(open_, close) * (1 - spread)
            volume = int(rng.integers(200_000, 4_000_000))
            writer.writerow(
                [d.isoformat(), f"{open_:.2f}", f"{high:.2f}", f"{low:.2f}",
                 f"{close:.2f}", f"{close:.2f}", volume]
            )
            prev = close


def write_macro(path: Path, dates: list[date], values: np.ndarray):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["Date", "Value"])
        for d, v in zip(dates, values):
            writer.writerow([d.isoformat(), f"{v:.4f}"])


NEWS = [
    # (days after START, ticker, headline)
    (2, "ALFA", "Alfa Industries profits surge on strong retail demand"),
    (2, "ALFA", "Analysts upgrade Alfa Industries after record quarter"),
    (2, "ALFA", "Alfa Industries wins landmark supply contract"),
    (9, "BRVO", "Bravo Techno misses estimates, shares drop"),
    (16, "ALFA", "Regulator opens probe into Alfa unit, investors worried"),
    (23, "BRVO", "Bravo Techno announces dividend, investors cheer"),
    (30, "ALFA", "Alfa Industries quarterly review scheduled next week"),
    (37, "BRVO", "Bravo Techno plunges after weak guidance"),
    (44, "ALFA", "Strong growth continues at Alfa Industries"),
    (51, "BRVO", "Bravo Techno recovers as panic eases"),
    (58, "ALFA", "Alfa Industries faces lawsuit over vendor dispute"),
    (65, "BRVO", "Bravo Techno rally extends on upbeat outlook"),
    (72, "ALFA", "Alfa Industries board approves expansion plan"),
    (79, "BRVO", "Bravo Techno warns of supply shortage"),
    (86, "ALFA", "Alfa Industries debt downgrade sparks concern"),
    (93, "BRVO", "Bravo Techno beats estimates with very good margins"),
    (100, "ALFA", "Alfa Industries launches new venture"),
    (107, "BRVO", "Bravo Techno suffers outage, services disrupted"),
    (114, "ALFA", "Alfa Industries sees remarkable recovery in demand"),
    (121, "BRVO", "Bravo Techno loses key client, revenue at risk"),
    (128, "ALFA", "Not a good quarter for Alfa Industries"),
    (135, "BRVO", "Bravo Techno celebrates milestone, staff awarded"),
    (142, "ALFA", "Alfa Industries announces buyback, shares jump"),
    (149, "BRVO", "Bravo Techno under pressure as losses widen"),
    (156, "ALFA", "Alfa Industries guidance disappoints investors"),
    (163, "BRVO", "Bravo Techno secures major deal, outlook bright"),
    (170, "ALFA", "Alfa Industries holds annual shareholder meeting"),
    (177, "BRVO", "Fraud allegations hit Bravo Techno supplier"),
    (184, "ALFA", "Alfa Industries optimistic on festive season sales"),
    (191, "BRVO", "Bravo Techno downgraded amid rising uncertainty"),
    (198, "ALFA", "Record profit at Alfa Industries, dividend boosted"),
    (205, "BRVO", "Bravo Techno stumbles on weak export numbers"),
    (212, "ALFA", "Alfa Industries files routine compliance documents"),
    (219, "BRVO", "Bravo Techno soars after successful product launch"),
    (226, "ALFA", "Alfa Industries restructure aims to cut costs"),
    (233, "BRVO", "Bravo Techno credit outlook stable, says agency"),
    (240, "ALFA", "Alfa Industries, unit sale talks progress well"),
    (247, "BRVO", "Bravo Techno shares slump on margin worries"),
    (254, "ALFA", "Very strong quarter boosts Alfa Industries confidence"),
    (261, "BRVO", "Bravo Techno settles litigation, relief for investors"),
    (268, "ALFA", "Alfa Industries wins export award"),
    (275, "BRVO", "Bravo Techno trims workforce, layoffs announced"),
    (282, "ALFA", "Alfa Industries supply chain disruption feared"),
    (289, "BRVO", "Bravo Techno gains on robust subscriber growth"),
    (296, "ALFA", "Alfa Industries posts steady results"),
    (303, "BRVO", "Bravo Techno outage resolved, operations restored"),
    (310, "ALFA", "Alfa Industries crash in spot volumes alarms traders"),
    (317, "BRVO", "Bravo Techno improves efficiency, costs decline"),
    (324, "ALFA", "Alfa Industries rally continues on upgrade"),
    (331, "BRVO", "Bravo Techno delays plant opening"),
    (338, "ALFA", "Alfa Industries risk committee flags volatility"),
    (345, "BRVO", "Bravo Techno reports excellent quarter"),
    (352, "ALFA", "Alfa Industries neutral session as markets await data"),
    (359, "BRVO", "Bravo Techno downgrade reversed after strong rebound"),
    (366, "ALFA", "Alfa Industries profits fall, outlook gloomy"),
    (373, "BRVO", "Bravo Techno surges on merger speculation"),
    (380, "ALFA", "Alfa Industries declares special dividend"),
    (387, "BRVO", "Bravo Techno security breach investigated"),
    (394, "ALFA", "Alfa Industries capacity expansion on track"),
    (401, "BRVO", "Bravo Techno wins government contract"),
    (408, "ALFA", "Weak demand hurts Alfa Industries volumes"),
    (415, "BRVO", "Bravo Techno cautious on near-term growth"),
    (422, "ALFA", "Alfa Industries celebrates record exports"),
    (429, "BRVO", "Bravo Techno shares volatile ahead of results"),
    (436, "ALFA", "Alfa Industries strong momentum impresses analysts"),
    (443, "BRVO", "Bravo Techno recovery gathers pace"),
    (450, "ALFA", "Alfa Industries trading update due Monday"),
    (457, "BRVO", "Bravo Techno hit by adverse currency moves"),
    (464, "ALFA", "Alfa Industries upbeat after successful trial run"),
    (471, "BRVO", "Bravo Techno announces leadership change"),
]


def write_news(path: Path):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["Date", "Ticker", "Headline"])
        for offset, ticker, headline in NEWS:
            d = START + timedelta(days=offset)
            writer.writerow([d.isoformat(), ticker, headline])


CONFIG = """\
# stockcast sample run configuration
[universe]
tickers = ALFA, BRVO

[paths]
prices_ALFA = prices_ALFA.csv
prices_BRVO = prices_BRVO.csv
macro_gold = macro_gold.csv
macro_brent = macro_brent.csv
macro_gsec = macro_gsec.csv
macro_usd_inr = macro_usd_inr.csv
news = news.csv
# lexicon / stopwords default to the bundled files

[dataset]
window = 60
train_fraction = 0.95

[sentiment]
remove_stopwords = true
remove_special_chars = true
per_headline_average = false

[lstm]
layers = 128, 64
dense = 25, 1
epochs = 15
batch_size = 32
learning_rate = 0.001
patience = 4

[forest]
n_trees = 100

[arima]
order = 0, 1, 1
seasonal_order = 2, 1, 0, 12
max_evals = 50

[knn]
folds = 5

[gridsearch]
windows = 20, 60, 120

[run]
seed = 42
out_dir = out
"""


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    calendar = trading_calendar(START, N_TRADING_DAYS)
    end = calendar[-1]
    macro_days = weekday_calendar(START - timedelta(days=7), end)

    rng = np.random.Generator(np.random.PCG64(20210628))
    write_prices(OUT / "prices_ALFA.csv", calendar, make_closes(rng, N_TRADING_DAYS, 1450.0, 0.0006), rng)
    write_prices(OUT / "prices_BRVO.csv", calendar, make_closes(rng, N_TRADING_DAYS, 310.0, 0.0004), rng)

    n = len(macro_days)
    t = np.arange(n)
    write_macro(OUT / "macro_gold.csv", macro_days,
                1400 + 0.45 * t + 25 * np.sin(2 * np.pi * t / 120) + rng.normal(0, 6, n))
    write_macro(OUT / "macro_brent.csv", macro_days,
                64 - 0.01 * t + 7 * np.sin(2 * np.pi * t / 90) + rng.normal(0, 1.1, n))
    write_macro(OUT / "macro_gsec.csv", macro_days,
                6.8 - 0.0009 * t + 0.15 * np.sin(2 * np.pi * t / 150) + rng.normal(0, 0.03, n))
    write_macro(OUT / "macro_usd_inr.csv", macro_days,
                69.5 + 0.009 * t + 0.8 * np.sin(2 * np.pi * t / 200) + rng.normal(0, 0.15, n))

    write_news(OUT / "news.csv")
    (OUT / "config.ini").write_text(CONFIG, encoding="utf-8")
    print(f"sample data written to {OUT} ({N_TRADING_DAYS} trading days, {len(NEWS)} headlines)")


if __name__ == "__main__":
    main()
