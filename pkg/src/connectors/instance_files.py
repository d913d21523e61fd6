"""
Instance files on disk, warm-start files and JSON / JSON-lines run records.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable
from pathlib import Path

from pydantic import BaseModel

from src.models.errors import WarmStartError
from src.models.graph import Graph
from src.skills.instance_io import parse_instance, write_instance

logger = logging.getLogger(__name__)


def read_instance(path: str | Path) -> Graph:
    """Raises FileNotFoundError for a missing file, InstanceParseError for bad content."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_instance(text)


def write_instance_file(g: Graph, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(write_instance(g), encoding="utf-8")
    logger.info(f"Wrote {path} (n={g.n}, m={g.m})")
    return path


def list_instances(directory: str | Path) -> list[Path]:
    """All *.txt files directly under `directory`, sorted by name."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"not a directory: {directory}")
    return sorted(p for p in directory.glob("*.txt") if p.is_file())


def read_warm_start(path: str | Path) -> list[int]:
    """Whitespace-separated 0-based vertex indices."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise WarmStartError(f"cannot read warm start file: {e}") from None
    try:
        return [int(tok) for tok in text.split()]
    except ValueError:
        raise WarmStartError(f"warm start file {path} must hold integer vertex indices") from None


def write_json(record: BaseModel, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(record.model_dump_json(indent=2), encoding="utf-8")


def append_jsonl(records: Iterable[BaseModel], path: str | Path) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "a", encoding="utf-8") as f:
        for record in records:
            f.write(record.model_dump_json() + "\n")
            count += 1
    return count


def read_jsonl(path: str | Path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows
