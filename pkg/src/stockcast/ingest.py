"""Strict CSV parsers for the three input file families.

All parsers are total over arbitrary byte input: every failure is a typed
error carrying a 1-based line number. Dates are accepted in YYYY-MM-DD
only; locale-ambiguous formats are rejected outright because a silent
month/day swap corrupts the whole calendar.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from datetime import date
from typing import Collection, Iterator

from .errors import (
    DuplicateDate,
    EmptyFile,
    MissingHeader,
    ParseError,
    UnknownTicker,
)
from .series import MacroSeries, PriceBar, PriceSeries, TradingDate

PRICE_HEADER = ["Date", "Open", "High", "Low", "Close", "Adj Close", "Volume"]
MACRO_HEADER = ["Date", "Value"]
NEWS_HEADER = ["Date", "Ticker", "Headline"]

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_NULL_TOKENS = {"", "null", "na", "n/a"}


@dataclass(frozen=True)
class NewsItem:
    """One headline; file order is significant for daily concatenation."""

    date: TradingDate
    ticker: str
    headline: str


@dataclass(frozen=True)
class ParsedPrices:
    series: PriceSeries
    skipped: int


@dataclass(frozen=True)
class ParsedMacro:
    series: MacroSeries
    skipped: int


@dataclass(frozen=True)
class ParsedNews:
    items: tuple[NewsItem, ...]
    skipped: int


def _decode(data: bytes | str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(0, None, f"input is not valid UTF-8: {exc}") from None


def _rows(text: str, expected_header: list[str]) -> Iterator[tuple[int, list[str]]]:
    """Yield (line_number, row) for data rows after validating the header."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyFile("input has no rows") from None
    except csv.Error as exc:
        raise ParseError(1, None, f"malformed CSV: {exc}") from None
    if header and header[0].startswith("﻿"):
        header[0] = header[0].lstrip("﻿")
    if header != expected_header:
        raise MissingHeader(",".join(expected_header), ",".join(header))
    while True:
        try:
            row = next(reader)
        except StopIteration:
            return
        except csv.Error as exc:
            raise ParseError(reader.line_num, None, f"malformed CSV: {exc}") from None
        line = reader.line_num
        if not row or all(cell.strip() == "" for cell in row):
            continue
        yield line, row


def _parse_date(line: int, text: str) -> TradingDate:
    value = text.strip()
    if not _DATE_RE.match(value):
        raise ParseError(line, "Date", f"expected YYYY-MM-DD, got {value!r}")
    try:
        return date.fromisoformat(value)
    except ValueError as exc:
        raise ParseError(line, "Date", str(exc)) from None


def _parse_number(line: int, column: str, text: str) -> float | None:
    """Parse a numeric cell; None means the cell was empty/null (skip row)."""
    value = text.strip()
    if value.lower() in _NULL_TOKENS:
        return None
    try:
        number = float(value)
    except ValueError:
        raise ParseError(line, column, f"not a number: {value!r}") from None
    if not math.isfinite(number):
        raise ParseError(line, column, f"non-finite value: {value!r}")
    return number


def parse_price_csv(data: bytes | str, ticker: str) -> ParsedPrices:
    """Parse an OHLCV file into a date-sorted PriceSeries.

    Rows with an empty or null numeric cell are dropped and tallied in the
    result; any other malformed cell is a ParseError. Duplicate dates are a
    hard error rather than last-wins.
    """
    text = _decode(data)
    parsed: list[tuple[int, PriceBar]] = []
    skipped = 0
    for line, row in _rows(text, PRICE_HEADER):
        if len(row) != len(PRICE_HEADER):
            raise ParseError(line, None, f"expected {len(PRICE_HEADER)} fields, got {len(row)}")
        day = _parse_date(line, row[0])
        numbers = {}
        for column, cell in zip(PRICE_HEADER[1:], row[1:]):
            numbers[column] = _parse_number(line, column, cell)
        if any(v is None for v in numbers.values()):
            skipped += 1
            continue
        try:
            bar = PriceBar(
                date=day,
                open=numbers["Open"],
                high=numbers["High"],
                low=numbers["Low"],
                close=numbers["Close"],
                adj_close=numbers["Adj Close"],
                volume=numbers["Volume"],
            )
        except ValueError as exc:
            raise ParseError(line, None, str(exc)) from None
        parsed.append((line, bar))
    if not parsed:
        raise EmptyFile("no usable price rows")
    parsed.sort(key=lambda item: item[1].date)
    for (_, a), (_, b) in zip(parsed, parsed[1:]):
        if a.date == b.date:
            raise DuplicateDate(b.date)
    return ParsedPrices(PriceSeries(ticker, tuple(bar for _, bar in parsed)), skipped)


def write_price_csv(series: PriceSeries) -> str:
    """Serialize a PriceSeries back to the interchange format (round-trips)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(PRICE_HEADER)
    for bar in series.bars:
        volume = int(bar.volume) if bar.volume == int(bar.volume) else bar.volume
        writer.writerow(
            [bar.date.isoformat(), repr(bar.open), repr(bar.high), repr(bar.low),
             repr(bar.close), repr(bar.adj_close), volume]
        )
    return out.getvalue()


_MACRO_POSITIVE = {"gold", "brent", "usd_inr"}


def parse_macro_csv(data: bytes | str, column: str) -> ParsedMacro:
    """Parse a two-column macro file into a sorted, duplicate-free series.

    `column` is one of gold/brent/gsec/usd_inr and fixes the positivity
    requirement (yields may be negative, prices and FX rates may not).
    """
    if column not in ("gold", "brent", "gsec", "usd_inr"):
        raise ValueError(f"unknown macro column {column!r}")
    text = _decode(data)
    rows: list[tuple[TradingDate, float]] = []
    skipped = 0
    for line, row in _rows(text, MACRO_HEADER):
        if len(row) != 2:
            raise ParseError(line, None, f"expected 2 fields, got {len(row)}")
        day = _parse_date(line, row[0])
        value = _parse_number(line, "Value", row[1])
        if value is None:
            skipped += 1
            continue
        if column in _MACRO_POSITIVE and value <= 0:
            raise ParseError(line, "Value", f"{column} must be > 0, got {value}")
        rows.append((day, value))
    if not rows:
        raise EmptyFile("no usable macro rows")
    rows.sort(key=lambda item: item[0])
    for (a, _), (b, _) in zip(rows, rows[1:]):
        if a == b:
            raise DuplicateDate(b)
    return ParsedMacro(
        MacroSeries(column, tuple(d for d, _ in rows), tuple(v for _, v in rows)),
        skipped,
    )


def parse_news_file(data: bytes | str, universe: Collection[str] | None = None) -> ParsedNews:
    """Parse headlines, preserving file order (it drives daily concatenation).

    Blank headlines are skipped and tallied. When `universe` is given, any
    other ticker is an UnknownTicker error.
    """
    text = _decode(data)
    items: list[NewsItem] = []
    skipped = 0
    saw_row = False
    for line, row in _rows(text, NEWS_HEADER):
        saw_row = True
        if len(row) != 3:
            raise ParseError(line, None, f"expected 3 fields, got {len(row)}")
        day = _parse_date(line, row[0])
        ticker = row[1].strip()
        if not ticker:
            raise ParseError(line, "Ticker", "ticker must be non-empty")
        if universe is not None and ticker not in universe:
            raise UnknownTicker(ticker, line)
        headline = row[2].strip()
        if not headline:
            skipped += 1
            continue
        items.append(NewsItem(date=day, ticker=ticker, headline=headline))
    if not saw_row:
        raise EmptyFile("no news rows")
    return ParsedNews(tuple(items), skipped)
