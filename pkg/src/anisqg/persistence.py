"""Binary checkpoints and line-delimited JSON diagnostics."""

from __future__ import annotations

import io
import json
import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping

import numpy as np

from .solver import RECORD_FIELDS, DiagnosticsRecord, SolverState
from .spectral import Grid, dealias, from_spectral, to_spectral

MAGIC = b"ASQG"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIII5d")


class CheckpointError(ValueError):
    pass


class CheckpointMagicError(CheckpointError):
    pass


class CheckpointVersionError(CheckpointError):
    pass


class CheckpointTruncatedError(CheckpointError):
    pass


@dataclass(frozen=True)
class Checkpoint:
    n1: int
    n2: int
    t: float
    alpha: float
    beta: float
    mu: float
    nu: float
    samples: np.ndarray  # shape (n2, n1), x₂ outer

    @classmethod
    def from_state(cls, state: SolverState, alpha: float, beta: float, mu: float, nu: float) -> "Checkpoint":
        g = state.theta.grid
        return cls(g.n1, g.n2, float(state.t), alpha, beta, mu, nu, from_spectral(state.theta))

    @property
    def state(self) -> SolverState:
        theta = to_spectral(self.samples, Grid(self.n1, self.n2))
        return SolverState(self.t, dealias(theta))


def save_checkpoint(ck: Checkpoint) -> bytes:
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, ck.n1, ck.n2, ck.t, ck.alpha, ck.beta, ck.mu, ck.nu)
    payload = np.ascontiguousarray(ck.samples, dtype="<f8").tobytes(order="C")
    return header + payload


def load_checkpoint(data: bytes) -> Checkpoint:
    if len(data) < 4 or data[:4] != MAGIC:
        raise CheckpointMagicError(f"not a checkpoint: magic {data[:4]!r} != {MAGIC!r}")
    if len(data) < _HEADER.size:
        raise CheckpointTruncatedError(f"header truncated: {len(data)} of {_HEADER.size} bytes")
    _, version, n1, n2, t, alpha, beta, mu, nu = _HEADER.unpack_from(data)
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(f"checkpoint format version {version}, expected {FORMAT_VERSION}")
    expected = n1 * n2 * 8
    payload = data[_HEADER.size :]
    if len(payload) != expected:
        kind = "truncated" if len(payload) < expected else "oversized"
        raise CheckpointTruncatedError(f"payload {kind}: {len(payload)} bytes, expected {expected} for {n1}x{n2}")
    samples = np.frombuffer(payload, dtype="<f8").reshape(n2, n1).astype(np.float64)
    return Checkpoint(n1, n2, t, alpha, beta, mu, nu, samples)


def write_checkpoint(path: str | Path, ck: Checkpoint) -> None:
    Path(path).write_bytes(save_checkpoint(ck))


def read_checkpoint(path: str | Path) -> Checkpoint:
    return load_checkpoint(Path(path).read_bytes())


# ---------------------------------------------------------------------------
# diagnostics


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def format_record(rec: DiagnosticsRecord) -> str:
    body = ", ".join(f'"{name}": {format_float(getattr(rec, name))}' for name in RECORD_FIELDS)
    return "{" + body + "}"


def parse_record(line: str) -> DiagnosticsRecord:
    d = json.loads(line)
    if list(d) != list(RECORD_FIELDS):
        raise ValueError(f"record fields {list(d)} do not match {list(RECORD_FIELDS)}")
    return DiagnosticsRecord(**{k: float(v) for k, v in d.items()})


def emit_diagnostics(records: Iterable[DiagnosticsRecord], stream: IO[str], header: Mapping) -> None:
    """Header line, then one record per line."""
    with DiagnosticsWriter(stream) as w:
        w.header(header)
        for rec in records:
            w.record(rec)


def parse_diagnostics(text: str) -> tuple[dict, list[DiagnosticsRecord], list[dict]]:
    """Split a diagnostics stream into (header, records, trailer lines)."""
    header: dict = {}
    records, trailers = [], []
    for line in io.StringIO(text):
        if not line.strip():
            continue
        d = json.loads(line)
        if "header" in d:
            header = d["header"]
        elif "t" in d:
            records.append(parse_record(line))
        else:
            trailers.append(d)
    return header, records, trailers


class DiagnosticsWriter:
    """Serialized writer; an I/O error mid-stream leaves a partial-output marker."""

    def __init__(self, stream: IO[str]):
        self.stream = stream
        self.lines = 0

    def _line(self, text: str) -> None:
        self.stream.write(text + "\n")
        self.lines += 1

    def header(self, content: Mapping) -> None:
        self._line(json.dumps({"header": content}, sort_keys=False))

    def record(self, rec: DiagnosticsRecord) -> None:
        self._line(format_record(rec))

    def trailer(self, content: Mapping) -> None:
        self._line(json.dumps(content))

    def __enter__(self) -> "DiagnosticsWriter":
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        if exc_type is not None and issubclass(exc_type, OSError):
            try:
                self.stream.write(json.dumps({"partial_output": True, "lines_written": self.lines, "error": str(exc)}) + "\n")
                self.stream.flush()
            except (OSError, ValueError):
                pass
        return False
