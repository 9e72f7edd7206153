"""Snapshot files and an on-disk snapshot store.

Two formats are supported:

* CSV, header ``entity_id,score``, UTF-8 with LF line endings.
* JSON lines: a header record ``{"format": "momentum-snapshot", "version": 1,
  "as_of": "YYYY-MM-DD", ...}`` followed by one ``{"id": ..., "score": ...}``
  record per entity.

The store keeps one file per calendar date under a root directory together
with an ``index.json`` mapping ISO dates to file names. Every write goes to a
temporary file in the same directory and is moved into place with
``os.replace``, so readers never see a partial file.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
import tempfile
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .core import MomentumError, ScoreSnapshot

FORMAT_NAME = "momentum-snapshot"
FORMAT_VERSION = 1
CSV_HEADER = ("entity_id", "score")
INDEX_FILE = "index.json"

_DATE_IN_NAME = re.compile(r"(\d{4}-\d{2}-\d{2})")


class SnapshotFormatError(MomentumError):
    def __init__(self, message: str, path=None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class StoreError(MomentumError):
    pass


def _parse_score(text: str, path, line: int) -> float:
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise SnapshotFormatError(f"score {text!r} is not a number", path, line) from None
    if not math.isfinite(value):
        raise SnapshotFormatError(f"score {text!r} is not finite", path, line)
    if value < 0:
        raise SnapshotFormatError(f"negative score {value} is not allowed", path, line)
    return value


def _add(scores: dict, entity: str, value: float, path, line: int) -> None:
    if not entity:
        raise SnapshotFormatError("empty entity id", path, line)
    if entity in scores:
        raise SnapshotFormatError(f"duplicate entity id {entity!r}", path, line)
    scores[entity] = value


def parse_csv(text: str, as_of: date | None = None, path=None) -> ScoreSnapshot:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SnapshotFormatError("empty file", path, 1) from None
    if tuple(h.strip() for h in header) != CSV_HEADER:
        raise SnapshotFormatError(f"expected header {','.join(CSV_HEADER)!r}, got {','.join(header)!r}", path, 1)
    scores: dict[str, float] = {}
    for row in reader:
        line = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 2:
            raise SnapshotFormatError(f"expected 2 fields, got {len(row)}", path, line)
        _add(scores, row[0].strip(), _parse_score(row[1].strip(), path, line), path, line)
    return ScoreSnapshot(as_of, scores)


def format_csv(snap: ScoreSnapshot) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for entity, score in snap.scores.items():
        writer.writerow((entity, repr(score)))
    return buf.getvalue()


def parse_jsonl(text: str, as_of: date | None = None, path=None) -> ScoreSnapshot:
    lines = text.splitlines()
    if not lines:
        raise SnapshotFormatError("empty file", path, 1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise SnapshotFormatError(f"bad header record: {exc.msg}", path, 1) from None
    if not isinstance(header, dict) or header.get("format") != FORMAT_NAME:
        raise SnapshotFormatError(f"missing {FORMAT_NAME!r} header record", path, 1)
    if header.get("version") != FORMAT_VERSION:
        raise SnapshotFormatError(f"unsupported format version {header.get('version')!r}", path, 1)
    if header.get("as_of"):
        try:
            as_of = date.fromisoformat(header["as_of"])
        except ValueError:
            raise SnapshotFormatError(f"bad as_of date {header['as_of']!r}", path, 1) from None

    scores: dict[str, float] = {}
    for line, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SnapshotFormatError(f"bad record: {exc.msg}", path, line) from None
        if not isinstance(rec, dict) or "id" not in rec or "score" not in rec:
            raise SnapshotFormatError("record needs 'id' and 'score'", path, line)
        if isinstance(rec["score"], bool) or not isinstance(rec["score"], (int, float)):
            raise SnapshotFormatError(f"score {rec['score']!r} is not a number", path, line)
        _add(scores, str(rec["id"]), _parse_score(rec["score"], path, line), path, line)
    return ScoreSnapshot(as_of, scores)


def format_jsonl(snap: ScoreSnapshot, **meta) -> str:
    header = {"format": FORMAT_NAME, "version": FORMAT_VERSION}
    if snap.as_of is not None:
        header["as_of"] = snap.as_of.isoformat()
    header.update(meta)
    out = [json.dumps(header, sort_keys=True)]
    out.extend(json.dumps({"id": k, "score": v}, sort_keys=True) for k, v in snap.scores.items())
    return "\n".join(out) + "\n"


def _format_of(path: Path) -> str:
    return "jsonl" if path.suffix.lower() in (".jsonl", ".ndjson") else "csv"


def date_from_name(path) -> date | None:
    m = _DATE_IN_NAME.search(Path(path).name)
    if not m:
        return None
    try:
        return date.fromisoformat(m.group(1))
    except ValueError:
        return None


def load_snapshot(path, as_of: date | None = None) -> ScoreSnapshot:
    """Read a snapshot file; the date comes from ``as_of``, the file header or the file name."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise SnapshotFormatError("no such file", path) from None
    except (OSError, UnicodeDecodeError) as exc:
        raise SnapshotFormatError(f"cannot read: {exc}", path) from None
    as_of = as_of or date_from_name(path)
    if _format_of(path) == "jsonl":
        return parse_jsonl(text, as_of, path)
    return parse_csv(text, as_of, path)


def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def save_snapshot_file(snap: ScoreSnapshot, path, **meta) -> Path:
    path = Path(path)
    text = format_jsonl(snap, **meta) if _format_of(path) == "jsonl" else format_csv(snap)
    atomic_write(path, text)
    return path


@dataclass
class SnapshotStore:
    """Directory of dated snapshots. Single writer, any number of readers."""

    root: Path
    fmt: str = "csv"
    index: dict[date, str] = field(default_factory=dict)
    version: int = FORMAT_VERSION

    @classmethod
    def open(cls, root, fmt: str = "csv", create: bool = True) -> SnapshotStore:
        root = Path(root)
        if not root.is_dir():
            if not create:
                raise StoreError(f"no snapshot store at {root}")
            root.mkdir(parents=True)
        if fmt not in ("csv", "jsonl"):
            raise StoreError(f"unknown snapshot format {fmt!r}")
        store = cls(root, fmt)
        store._load_index()
        return store

    def _load_index(self) -> None:
        index_path = self.root / INDEX_FILE
        index: dict[date, str] = {}
        if index_path.exists():
            try:
                raw = json.loads(index_path.read_text(encoding="utf-8"))
                for key, name in raw.get("snapshots", {}).items():
                    index[date.fromisoformat(key)] = name
            except (ValueError, AttributeError) as exc:
                raise StoreError(f"corrupt index {index_path}: {exc}") from None
        # a crash between the data rename and the index rename leaves an unindexed file
        for path in self.root.iterdir():
            if path.name.startswith(".") or path.name == INDEX_FILE:
                continue
            if path.suffix.lower() not in (".csv", ".jsonl"):
                continue
            d = date_from_name(path)
            if d is not None and d not in index:
                index[d] = path.name
        self.index = {d: name for d, name in index.items() if (self.root / name).exists()}

    def _write_index(self) -> None:
        payload = {
            "version": self.version,
            "snapshots": {d.isoformat(): name for d, name in sorted(self.index.items())},
        }
        atomic_write(self.root / INDEX_FILE, json.dumps(payload, indent=2, sort_keys=True) + "\n")

    @property
    def dates(self) -> list[date]:
        return sorted(self.index)

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, d: date) -> bool:
        return d in self.index

    def path_for(self, d: date) -> Path:
        return self.root / f"{d.isoformat()}.{self.fmt}"

    def save(self, snap: ScoreSnapshot, overwrite: bool = False) -> date:
        if snap.as_of is None:
            raise StoreError("snapshot has no as_of date")
        if snap.as_of in self.index and not overwrite:
            raise StoreError(f"a snapshot for {snap.as_of.isoformat()} already exists")
        path = self.path_for(snap.as_of)
        save_snapshot_file(snap, path)
        old = self.index.get(snap.as_of)
        self.index[snap.as_of] = path.name
        self._write_index()
        if old and old != path.name:
            (self.root / old).unlink(missing_ok=True)
        return snap.as_of

    def load(self, d: date) -> ScoreSnapshot:
        try:
            name = self.index[d]
        except KeyError:
            raise StoreError(f"no snapshot for {d.isoformat()}") from None
        return load_snapshot(self.root / name, as_of=d)

    def history(self) -> dict[date, ScoreSnapshot]:
        return {d: self.load(d) for d in self.dates}


def save_snapshot(snap: ScoreSnapshot, store: SnapshotStore, overwrite: bool = False) -> date:
    return store.save(snap, overwrite=overwrite)
