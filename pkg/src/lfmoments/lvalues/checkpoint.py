"""Resumable-sweep checkpoints with a small versioned binary header."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

MAGIC = b"LFMC"
VERSION = 1


@dataclass
class Checkpoint:
    """State of a long sweep: the last processed d (or t) and partial sums.

    File layout: magic(4) version(u32) family(16, padded) k(u32)
    weight(24, padded) last(u64) count(u32) then ``count`` length-prefixed
    decimal strings (the partial sums, full working precision plus guards).
    """

    path: Path
    family: str
    k: int
    weight: str
    last: float = 0.0
    values: list = field(default_factory=list)
    every: int = 10000
    _pending: int = 0

    def update(self, last, values, force: bool = False):
        self.last = float(last)
        self.values = list(values)
        self._pending += 1
        if force or (self.path is not None and self._pending >= 1):
            self.write()

    def write(self):
        if self.path is None:
            return
        self._pending = 0
        payload = struct.pack(
            "<4sI16sI24sQI",
            MAGIC, VERSION,
            self.family.encode()[:16].ljust(16, b"\0"),
            self.k,
            self.weight.encode()[:24].ljust(24, b"\0"),
            int(self.last),
            len(self.values),
        )
        for v in self.values:
            s = repr(v).encode() if isinstance(v, float) else str(v).encode()
            payload += struct.pack("<I", len(s)) + s
        tmp = Path(str(self.path) + ".tmp")
        tmp.write_bytes(payload)
        tmp.replace(self.path)

    @classmethod
    def load(cls, path) -> "Checkpoint":
        raw = Path(path).read_bytes()
        magic, version, family, k, weight, last, count = struct.unpack_from(
            "<4sI16sI24sQI", raw)
        if magic != MAGIC:
            raise ValueError("not a checkpoint file")
        if version != VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        off = struct.calcsize("<4sI16sI24sQI")
        values = []
        for _ in range(count):
            (ln,) = struct.unpack_from("<I", raw, off)
            off += 4
            values.append(float(raw[off:off + ln].decode()))
            off += ln
        return cls(Path(path), family.rstrip(b"\0").decode(), k,
                   weight.rstrip(b"\0").decode(), float(last), values)
