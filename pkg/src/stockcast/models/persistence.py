"""Persistence baseline: tomorrow's forecast is today's close."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PersistenceModel:
    train_end: object | None = None
