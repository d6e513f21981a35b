"""Reading club budget files (CSV ``club,budget`` or a JSON array of objects)."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from .errors import ValidationError
from .model import BudgetDistribution, canonicalize


class InputError(ValidationError):
    """Malformed or invalid budget file; message carries the offending line."""


def _budget(value, where: str) -> float:
    if isinstance(value, bool):
        raise InputError(f"{where}: budget is not a number: {value!r}")
    try:
        b = float(value)
    except (TypeError, ValueError):
        raise InputError(f"{where}: budget is not a number: {value!r}") from None
    if not math.isfinite(b):
        raise InputError(f"{where}: budget is not finite: {value!r}")
    if b <= 0:
        raise InputError(f"{where}: budget must be > 0, got {value!r}")
    return b


def parse_csv(text: str, name: str = "<csv>") -> list[tuple[str, float]]:
    rows = csv.reader(text.splitlines())
    header = next(rows, None)
    if header is None:
        raise InputError(f"{name}: empty file")
    header = [h.strip().lstrip("﻿").lower() for h in header]
    if header[:2] != ["club", "budget"]:
        raise InputError(f"{name}:1: expected header 'club,budget', got {','.join(header)!r}")
    out = []
    for lineno, row in enumerate(rows, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) < 2:
            raise InputError(f"{name}:{lineno}: expected 2 columns, got {len(row)}")
        out.append((row[0].strip(), _budget(row[1].strip(), f"{name}:{lineno}")))
    return out


def parse_json(text: str, name: str = "<json>") -> list[tuple[str, float]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{name}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    if not isinstance(data, list):
        raise InputError(f"{name}: expected a JSON array of {{club, budget}} objects")
    out = []
    for i, item in enumerate(data):
        where = f"{name}: entry {i}"
        if not isinstance(item, dict) or "club" not in item or "budget" not in item:
            raise InputError(f"{where}: expected an object with 'club' and 'budget'")
        if not isinstance(item["budget"], (int, float)):
            raise InputError(f"{where}: budget is not a number: {item['budget']!r}")
        out.append((str(item["club"]), _budget(item["budget"], where)))
    return out


def load_budgets(path: str | Path) -> BudgetDistribution:
    """Load and canonicalize a budget file; format is chosen by extension (.json, else CSV)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise InputError(f"{path}: not valid UTF-8") from None
    if path.suffix.lower() == ".json" or text.lstrip().startswith("["):
        pairs = parse_json(text, str(path))
    else:
        pairs = parse_csv(text, str(path))
    if len(pairs) < 2:
        raise InputError(f"{path}: need at least 2 clubs, got {len(pairs)}")
    return canonicalize(pairs)
