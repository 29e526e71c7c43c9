"""File formats: path CSV, dataset JSONL, and JSON views of result objects.

Path CSV: header ``t,x1,...,xd``, one row per sample, strictly increasing
``t``.  Dataset JSONL: one object per line with fields ``id`` (string label),
``t`` (array of sample times) and ``x`` (array of sample points, each of
length ``d``).  Words serialize as JSON arrays of integers (``[]`` for the
empty word).
"""

from __future__ import annotations

import csv
import io as _stdio
import json
from typing import Iterable, TextIO

import numpy as np

from .errors import InputError
from .paths import PiecewiseLinearPath, from_samples


def _open_for_read(path_or_file) -> TextIO:
    if hasattr(path_or_file, "read"):
        return path_or_file
    return open(path_or_file, "r", newline="")


def read_path_csv(path_or_file) -> PiecewiseLinearPath:
    """Read a path from CSV with header ``t,x1,...,xd``."""
    f = _open_for_read(path_or_file)
    close = f is not path_or_file
    try:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError("empty path CSV") from None
        header = [h.strip() for h in header]
        if not header or header[0] != "t" or len(header) < 2:
            raise InputError(f"path CSV header must be t,x1,...,xd, got {header}")
        expected = ["x%d" % (i + 1) for i in range(len(header) - 1)]
        if header[1:] != expected:
            raise InputError(f"path CSV header must be t,x1,...,xd, got {header}")
        times, pts = [], []
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise InputError(f"CSV row {row} does not match header width")
            try:
                vals = [float(c) for c in row]
            except ValueError as exc:
                raise InputError(f"non-numeric CSV entry in row {row}") from exc
            times.append(vals[0])
            pts.append(vals[1:])
        return from_samples(times, pts)
    finally:
        if close:
            f.close()


def write_path_csv(path_or_file, path: PiecewiseLinearPath) -> None:
    """Write a path as CSV with header ``t,x1,...,xd``."""
    f = open(path_or_file, "w", newline="") if not hasattr(path_or_file, "write") else path_or_file
    close = f is not path_or_file
    try:
        writer = csv.writer(f)
        writer.writerow(["t"] + ["x%d" % (i + 1) for i in range(path.dim)])
        for t, p in zip(path.knots, path.points):
            writer.writerow([repr(float(t))] + [repr(float(v)) for v in p])
    finally:
        if close:
            f.close()


def read_dataset_jsonl(path_or_file) -> list[tuple[str, PiecewiseLinearPath]]:
    """Read a labeled dataset of paths from JSONL records
    ``{"id": ..., "t": [...], "x": [[...], ...]}``."""
    f = _open_for_read(path_or_file)
    close = f is not path_or_file
    out: list[tuple[str, PiecewiseLinearPath]] = []
    try:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"bad JSON on dataset line {lineno}: {exc}") from exc
            if not isinstance(rec, dict) or not {"id", "t", "x"} <= set(rec):
                raise InputError(
                    f"dataset line {lineno} must have fields id, t, x"
                )
            out.append((str(rec["id"]), from_samples(rec["t"], rec["x"])))
    finally:
        if close:
            f.close()
    if not out:
        raise InputError("dataset contains no paths")
    labels = [label for label, _ in out]
    if len(set(labels)) != len(labels):
        seen: set[str] = set()
        dup = next(lb for lb in labels if lb in seen or seen.add(lb))
        raise InputError(f"dataset labels must be distinct; {dup!r} is duplicated")
    return out


def write_dataset_jsonl(path_or_file, dataset: Iterable[tuple[str, PiecewiseLinearPath]]) -> None:
    """Write a labeled dataset in the JSONL format read by
    :func:`read_dataset_jsonl`."""
    f = open(path_or_file, "w") if not hasattr(path_or_file, "write") else path_or_file
    close = f is not path_or_file
    try:
        for label, path in dataset:
            rec = {
                "id": str(label),
                "t": [float(t) for t in path.knots],
                "x": [[float(v) for v in p] for p in path.points],
            }
            f.write(json.dumps(rec) + "\n")
    finally:
        if close:
            f.close()


def word_key(w) -> str:
    """Serialize a word as its JSON array text, used as a JSON object key."""
    return json.dumps([int(x) for x in w], separators=(",", ":"))


def parse_word_key(key: str) -> tuple[int, ...]:
    try:
        arr = json.loads(key)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad word key {key!r}") from exc
    if not isinstance(arr, list) or not all(isinstance(x, int) for x in arr):
        raise InputError(f"word key must be a JSON array of integers, got {key!r}")
    return tuple(arr)


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, no trailing whitespace drift."""
    return json.dumps(obj, sort_keys=True, indent=2)


def path_to_csv_text(path: PiecewiseLinearPath) -> str:
    buf = _stdio.StringIO()
    write_path_csv(buf, path)
    return buf.getvalue()


def matrix_to_csv_text(labels: list[str], matrix: np.ndarray) -> str:
    """Render a labeled square matrix as CSV with an id header row/column."""
    buf = _stdio.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["id"] + list(labels))
    for label, row in zip(labels, np.asarray(matrix)):
        writer.writerow([label] + [repr(float(v)) for v in row])
    return buf.getvalue()
