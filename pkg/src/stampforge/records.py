"""JSON basis records and the best-known-basis cache."""
from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from filelock import FileLock

from .sumsets import DomainError, IntegerBasis, coverage

log = logging.getLogger(__name__)

KINDS = ("trivial", "lift", "jia_shen", "searched", "exact_witness")
CACHE_ENV = "STAMPFORGE_CACHE"
DEFAULT_CACHE = "stampforge_cache.json"


class RecordError(ValueError):
    """A record or cache file could not be parsed or was rejected."""


def timestamp() -> str:
    """UTC time from SOURCE_DATE_EPOCH (0 when unset) so reruns are byte-identical."""
    epoch = int(os.environ.get("SOURCE_DATE_EPOCH", "0") or 0)
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class BasisRecord:
    kind: str
    params: dict
    elements: list[int]
    order: int
    verified: bool
    created_at: str = field(default_factory=timestamp)
    size_ledger: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RecordError(f"unknown record kind {self.kind!r}")
        self.elements = sorted(int(e) for e in self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def n(self) -> int | None:
        n = self.params.get("n")
        return int(n) if n is not None else None

    def key(self) -> str:
        if self.n is None:
            raise RecordError("record has no n parameter to key on")
        return cache_key(self.n, self.order)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "elements": self.elements,
            "size": self.size,
            "order": self.order,
            "verified": self.verified,
            "created_at": self.created_at,
            "size_ledger": self.size_ledger,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "BasisRecord":
        try:
            rec = cls(
                kind=d["kind"],
                params=dict(d["params"]),
                elements=list(d["elements"]),
                order=int(d["order"]),
                verified=bool(d["verified"]),
                created_at=str(d["created_at"]),
                size_ledger=dict(d.get("size_ledger", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise RecordError(f"malformed basis record: {exc}") from exc
        if "size" in d and int(d["size"]) != rec.size:
            raise RecordError(f"record size {d['size']} != {rec.size} elements")
        return rec

    @classmethod
    def from_json(cls, text: str) -> "BasisRecord":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise RecordError(f"not JSON: {exc}") from exc

    def recheck(self) -> bool:
        """Re-run coverage on [1, n] at the recorded order."""
        if self.n is None or not self.elements:
            return False
        return coverage(IntegerBasis(self.elements, self.n, self.order, canonical=False)).is_basis


def load_elements(text: str) -> tuple[list[int], BasisRecord | None]:
    """Parse a BasisRecord or a bare JSON / whitespace / comma separated integer list."""
    text = text.strip()
    if not text:
        raise RecordError("empty input")
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        try:
            return [int(t) for t in text.replace(",", " ").split()], None
        except ValueError as exc:
            raise RecordError(f"cannot parse integers: {exc}") from exc
    if isinstance(data, dict):
        rec = BasisRecord.from_dict(data)
        return rec.elements, rec
    if isinstance(data, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in data):
        if not data:
            raise RecordError("empty element list")
        return list(data), None
    raise RecordError("expected a basis record or a list of integers")


def cache_key(n: int, h: int) -> str:
    return f"n={int(n)},h={int(h)}"


def cache_path(path=None) -> Path:
    return Path(path or os.environ.get(CACHE_ENV) or DEFAULT_CACHE)


class BasisCache:
    """Best-known bases keyed by (n, h), stored as one JSON document."""

    def __init__(self, path=None):
        self.path = cache_path(path)
        self.lock = FileLock(str(self.path) + ".lock")

    def _read(self) -> dict:
        if not self.path.exists():
            return {}
        text = self.path.read_text()
        try:
            doc = json.loads(text)
            entries = doc["entries"]
            return {k: BasisRecord.from_dict(v) for k, v in entries.items()}
        except (json.JSONDecodeError, KeyError, TypeError, RecordError) as exc:
            backup = self.path.with_name(self.path.name + ".corrupt")
            i = 1
            while backup.exists():
                backup = self.path.with_name(f"{self.path.name}.corrupt{i}")
                i += 1
            self.path.replace(backup)
            log.warning("cache %s is corrupt (%s); moved to %s and starting afresh", self.path, exc, backup)
            return {}

    def _write(self, entries: dict) -> None:
        doc = {"entries": {k: entries[k].to_dict() for k in sorted(entries)}, "version": 1}
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def entries(self) -> dict:
        with self.lock:
            return self._read()

    def get(self, n: int, h: int) -> BasisRecord | None:
        return self.entries().get(cache_key(n, h))

    def put(self, record: BasisRecord) -> bool:
        """Store ``record`` if verified and strictly smaller than the current entry."""
        if not record.verified:
            raise RecordError("refusing to cache an unverified record")
        if not record.recheck():
            raise RecordError("record claims verified but fails coverage")
        key = record.key()
        with self.lock:
            entries = self._read()
            old = entries.get(key)
            if old is not None and old.size <= record.size:
                return False
            entries[key] = record
            self._write(entries)
        return True


def write_record(record: BasisRecord, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(record.to_json())
    return path


def record_from_basis(kind: str, basis: IntegerBasis, params: dict, *, verified: bool,
                      size_ledger: dict | None = None) -> BasisRecord:
    if kind not in KINDS:
        raise DomainError(f"unknown kind {kind}")
    params = {"n": basis.n, "h": basis.h, **params}
    return BasisRecord(kind, params, list(basis.elements), basis.h, verified,
                       size_ledger=dict(size_ledger or {}))
