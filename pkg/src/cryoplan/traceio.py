"""Trace import/export: one delimited text file per trace.

Format: '#'-prefixed metadata header (kind, timestamp, label), then one
point per row as ``delay_s<TAB>population``.
"""

from __future__ import annotations

import os

import numpy as np

from .coherence import DecayTrace
from .errors import ParseError


def write_trace(path: str, trace: DecayTrace) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# kind: {trace.kind}\n")
        fh.write(f"# timestamp: {trace.timestamp!r}\n")
        if trace.label:
            fh.write(f"# label: {trace.label}\n")
        fh.write("# delay_s\tpopulation\n")
        for d, p in zip(trace.delays_s, trace.populations):
            fh.write(f"{d:.9e}\t{p:.9e}\n")


def read_trace(path: str) -> DecayTrace:
    kind = None
    timestamp = 0.0
    label = ""
    delays: list[float] = []
    pops: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                key, _, val = body.partition(":")
                key = key.strip().lower()
                val = val.strip()
                if key == "kind":
                    kind = val
                elif key == "timestamp":
                    try:
                        timestamp = float(val)
                    except ValueError:
                        raise ParseError(f"bad timestamp {val!r}", line=lineno, path=path) from None
                elif key == "label":
                    label = val
                continue
            cols = line.split()
            if len(cols) != 2:
                raise ParseError("expected two columns: delay_s population", line=lineno, path=path)
            try:
                delays.append(float(cols[0]))
                pops.append(float(cols[1]))
            except ValueError:
                raise ParseError(f"bad numeric row {line!r}", line=lineno, path=path) from None
    if kind is None:
        raise ParseError("missing '# kind:' header", path=path)
    if not delays:
        raise ParseError("no data rows", path=path)
    try:
        return DecayTrace(np.array(delays), np.array(pops), timestamp=timestamp, kind=kind, label=label)
    except Exception as exc:
        raise ParseError(f"invalid trace: {exc}", path=path) from exc


def write_batch(directory: str, traces, prefix: str = "trace") -> list[str]:
    os.makedirs(directory, exist_ok=True)
    paths = []
    for i, trace in enumerate(traces):
        path = os.path.join(directory, f"{prefix}_{i:05d}_{trace.kind}.txt")
        write_trace(path, trace)
        paths.append(path)
    return paths


def read_batch(directory: str) -> tuple[list[DecayTrace], list[str]]:
    """Read every trace file in a directory; unreadable files become warnings."""
    if not os.path.isdir(directory):
        raise ParseError(f"not a directory: {directory}", path=directory)
    names = sorted(fn for fn in os.listdir(directory) if fn.endswith((".txt", ".dat", ".trace")))
    if not names:
        raise ParseError(f"no trace files in {directory}", path=directory)
    traces: list[DecayTrace] = []
    warnings: list[str] = []
    for fn in names:
        path = os.path.join(directory, fn)
        try:
            traces.append(read_trace(path))
        except ParseError as exc:
            warnings.append(f"skipped {fn}: {exc}")
    return traces, warnings
