"""Emission of metric tables, per-series plot data, and the markdown report.

Outputs are deterministic byte-for-byte given the same report: rows are
sorted, floats formatted with fixed precision in tables and full repr
precision in CSV data files.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import date
from pathlib import Path

import numpy as np

from .errors import EmptyReport
from .evaluation import ForecastReport, MetricSet, ReportEntry
from .models.artifacts import MODEL_KINDS

METRICS_HEADER = ["ticker", "model", "rmse", "mape", "n"]
SERIES_HEADER = ["date", "split", "actual", "predicted"]

MODEL_LABELS = {
    "lstm": "LSTM",
    "bilstm": "Bidirectional LSTM",
    "linreg": "Linear regression",
    "arima": "ARIMA",
    "knn": "KNN",
    "additive": "Additive trend",
    "forest": "Random forest (sentiment)",
    "persistence": "Persistence",
}


def _model_order(kind: str) -> int:
    order = list(MODEL_KINDS) + ["persistence"]
    return order.index(kind) if kind in order else len(order)


def render_metrics_csv(report: ForecastReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(METRICS_HEADER)
    entries = sorted(report.entries, key=lambda e: (e.ticker, _model_order(e.model), e.model))
    for e in entries:
        writer.writerow([e.ticker, e.model, repr(e.metrics.rmse), repr(e.metrics.mape), e.metrics.n])
    return out.getvalue()


def render_series_csv(entry: ReportEntry) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SERIES_HEADER)
    for d, a in zip(entry.train_dates, entry.train_actual):
        writer.writerow([d.isoformat(), "train", repr(float(a)), ""])
    for d, a, p in zip(entry.dates, entry.actual, entry.predicted):
        writer.writerow([d.isoformat(), "validation", repr(float(a)), repr(float(p))])
    return out.getvalue()


def _comparison_table(report: ForecastReport, ticker: str) -> list[str]:
    lines = [
        f"## Model comparison ({ticker})",
        "",
        "| Model | RMSE |",
        "| --- | --- |",
    ]
    entries = [e for e in report.entries if e.ticker == ticker]
    entries.sort(key=lambda e: (_model_order(e.model), e.model))
    for e in entries:
        label = MODEL_LABELS.get(e.model, e.model)
        lines.append(f"| {label} | {e.metrics.rmse:.2f} |")
    return lines


def _final_day_table(report: ForecastReport) -> list[str]:
    last_date: date | None = None
    for e in report.entries:
        if e.dates:
            d = e.dates[-1]
            last_date = d if last_date is None or d > last_date else last_date
    lines = [
        f"## Final-day predictions ({last_date.isoformat() if last_date else 'n/a'})",
        "",
        "| Stock | Actual | LSTM prediction | Sentiment prediction |",
        "| --- | --- | --- | --- |",
    ]
    for ticker in report.tickers():
        lstm = report.entry(ticker, "lstm")
        forest = report.entry(ticker, "forest")
        source = lstm or forest
        actual = f"{source.actual[-1]:.2f}" if source is not None and len(source.actual) else "-"
        lstm_cell = f"{lstm.predicted[-1]:.2f}" if lstm is not None and len(lstm.predicted) else "-"
        forest_cell = (
            f"{forest.predicted[-1]:.2f}" if forest is not None and len(forest.predicted) else "-"
        )
        lines.append(f"| {ticker} | {actual} | {lstm_cell} | {forest_cell} |")
    return lines


def _per_stock_table(report: ForecastReport) -> list[str]:
    lines = [
        "## Per-stock error summary",
        "",
        "| Stock | LSTM RMSE | LSTM MAPE% | Sentiment RMSE | Sentiment MAPE% |",
        "| --- | --- | --- | --- | --- |",
    ]
    for ticker in report.tickers():
        lstm = report.entry(ticker, "lstm")
        forest = report.entry(ticker, "forest")

        def cells(entry: ReportEntry | None) -> tuple[str, str]:
            if entry is None:
                return "-", "-"
            return f"{entry.metrics.rmse:.2f}", f"{entry.metrics.mape:.2f}"

        lr, lm = cells(lstm)
        fr, fm = cells(forest)
        lines.append(f"| {ticker} | {lr} | {lm} | {fr} | {fm} |")
    return lines


def render_report_md(report: ForecastReport) -> str:
    if not report.entries:
        raise EmptyReport("no entries to render")
    meta = report.metadata
    lines = ["# Forecast report", ""]
    if meta:
        for key in sorted(meta):
            lines.append(f"- {key}: {meta[key]}")
        lines.append("")
    primary = meta.get("primary_ticker") or report.tickers()[0]
    lines += _comparison_table(report, primary)
    lines.append("")
    lines += _final_day_table(report)
    lines.append("")
    lines += _per_stock_table(report)
    lines.append("")
    return "\n".join(lines)


def render_series_svg(entry: ReportEntry, width: int = 900, height: int = 300) -> str:
    """Minimal polyline chart: actual series in full, predictions overlaid."""
    all_dates = list(entry.train_dates) + list(entry.dates)
    actual = np.concatenate([entry.train_actual, entry.actual])
    n = len(all_dates)
    lo = float(min(actual.min(), entry.predicted.min() if len(entry.predicted) else actual.min()))
    hi = float(max(actual.max(), entry.predicted.max() if len(entry.predicted) else actual.max()))
    span = hi - lo or 1.0
    margin = 10.0

    def x(i: int) -> float:
        return margin + (width - 2 * margin) * (i / max(n - 1, 1))

    def y(v: float) -> float:
        return height - margin - (height - 2 * margin) * ((v - lo) / span)

    def polyline(points: list[tuple[float, float]], color: str) -> str:
        coords = " ".join(f"{px:.2f},{py:.2f}" for px, py in points)
        return f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{coords}"/>'

    actual_points = [(x(i), y(float(v))) for i, v in enumerate(actual)]
    offset = len(entry.train_dates)
    pred_points = [(x(offset + i), y(float(v))) for i, v in enumerate(entry.predicted)]
    return "\n".join(
        [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
            f"<title>{entry.ticker} {entry.model}</title>",
            polyline(actual_points, "#1f77b4"),
            polyline(pred_points, "#2ca02c"),
            "</svg>",
            "",
        ]
    )


def emit_report(report: ForecastReport, out_dir: str | Path, svg: bool = False) -> list[Path]:
    """Write metrics.csv, per-series CSVs, report.md, and optional SVGs."""
    if not report.entries:
        raise EmptyReport("refusing to emit an empty report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    path = out / "metrics.csv"
    path.write_text(render_metrics_csv(report), encoding="utf-8")
    written.append(path)

    for entry in sorted(report.entries, key=lambda e: (e.ticker, e.model)):
        path = out / f"series_{entry.ticker}_{entry.model}.csv"
        path.write_text(render_series_csv(entry), encoding="utf-8")
        written.append(path)
        if svg:
            path = out / f"series_{entry.ticker}_{entry.model}.svg"
            path.write_text(render_series_svg(entry), encoding="utf-8")
            written.append(path)

    path = out / "report.md"
    path.write_text(render_report_md(report), encoding="utf-8")
    written.append(path)
    return written


# --- report round trip (drives the standalone `report` command) ---------


def report_to_json(report: ForecastReport) -> str:
    doc = {
        "metadata": report.metadata,
        "entries": [
            {
                "ticker": e.ticker,
                "model": e.model,
                "dates": [d.isoformat() for d in e.dates],
                "actual": [float(v) for v in e.actual],
                "predicted": [float(v) for v in e.predicted],
                "metrics": {"rmse": e.metrics.rmse, "mape": e.metrics.mape, "n": e.metrics.n},
                "train_dates": [d.isoformat() for d in e.train_dates],
                "train_actual": [float(v) for v in e.train_actual],
            }
            for e in report.entries
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def report_from_json(text: str) -> ForecastReport:
    doc = json.loads(text)
    report = ForecastReport(metadata=doc["metadata"])
    for e in doc["entries"]:
        report.add(
            ReportEntry(
                ticker=e["ticker"],
                model=e["model"],
                dates=tuple(date.fromisoformat(d) for d in e["dates"]),
                actual=np.asarray(e["actual"], dtype=np.float64),
                predicted=np.asarray(e["predicted"], dtype=np.float64),
                metrics=MetricSet(**e["metrics"]),
                train_dates=tuple(date.fromisoformat(d) for d in e["train_dates"]),
                train_actual=np.asarray(e["train_actual"], dtype=np.float64),
            )
        )
    return report
