"""Versioned JSON-lines files: one header line, one record per line."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .errors import ParseError

SUITE_FORMAT = "menli-suite"
SCORES_FORMAT = "menli-scores"
FORMAT_VERSION = 1


def dumps(record: dict) -> str:
    """Deterministic single-line encoding (sorted keys, compact separators)."""
    return json.dumps(record, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":"))


def write_records(path, fmt: str, records: Iterable[dict],
                  header_extra: Optional[dict] = None) -> int:
    """Write a header line plus records; returns the record count."""
    header = {"format": fmt, "version": FORMAT_VERSION}
    if header_extra:
        header.update(header_extra)
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(header) + "\n")
        for record in records:
            fh.write(dumps(record) + "\n")
            count += 1
    return count


def read_records_lenient(path, fmt: str,
                         ) -> tuple[Optional[dict], list[tuple[int, dict]],
                                    list[tuple[int, str]]]:
    """Read (header, [(lineno, record)], problems) without raising.

    Malformed lines are reported with their line numbers so callers can
    append their own record-level problems before failing.
    """
    path = Path(path)
    problems: list[tuple[int, str]] = []
    records: list[tuple[int, dict]] = []
    header: Optional[dict] = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                problems.append((lineno, f"invalid JSON: {exc.msg}"))
                continue
            if not isinstance(obj, dict):
                problems.append((lineno, "expected a JSON object"))
                continue
            if header is None:
                if obj.get("format") != fmt:
                    problems.append(
                        (lineno, f"expected header with format={fmt!r}, "
                                 f"got {obj.get('format')!r}"))
                    break
                if obj.get("version") != FORMAT_VERSION:
                    problems.append(
                        (lineno, f"unsupported version {obj.get('version')!r}"))
                    break
                header = obj
                continue
            records.append((lineno, obj))
    if header is None and not problems:
        problems.append((0, "empty file (missing header line)"))
    return header, records, problems


def read_records(path, fmt: str) -> tuple[dict, list[dict]]:
    """Read (header, records), raising ParseError on any malformed line."""
    header, records, problems = read_records_lenient(path, fmt)
    if problems:
        raise ParseError(path, problems)
    return header, [record for _, record in records]


def iter_records(path, fmt: str) -> Iterator[dict]:
    _, records = read_records(path, fmt)
    return iter(records)
