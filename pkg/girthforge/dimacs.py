"""DIMACS-like graph files.

    p edge <n> <m>
    c key=value        (metadata, sorted by key)
    e <u> <v>          (1-indexed, u < v, lexicographic)

LF line endings, ASCII, no trailing whitespace.  Comment lines without
``=`` are accepted and ignored by the reader.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, Mapping, Tuple, Union

import numpy as np

from .errors import BadParameters, ParseError, StorageError
from .graph import Graph

log = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _clean(value: object) -> str:
    text = str(value)
    if any(c in text for c in "\r\n") or not text.isascii():
        raise BadParameters(f"metadata value {text!r} must be single-line ASCII")
    return text.strip()


def dumps(g: Graph, metadata: Mapping[str, object] = ()) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    for key in sorted(dict(metadata)):
        lines.append(f"c {key}={_clean(dict(metadata)[key])}")
    e = g.edges() + 1
    lines.extend(f"e {u} {v}" for u, v in e.tolist())
    return "\n".join(lines) + "\n"


def loads(text: str) -> Tuple[Graph, Dict[str, str]]:
    header = None
    metadata: Dict[str, str] = {}
    edges = []
    for number, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        tag, _, rest = line.partition(" ")
        if tag == "c":
            key, eq, value = rest.partition("=")
            if eq:
                metadata[key.strip()] = value.strip()
        elif tag == "p":
            fields = rest.split()
            if header is not None:
                raise ParseError("second problem line", number)
            if len(fields) != 3 or fields[0] != "edge":
                raise ParseError(f"malformed problem line {line!r}", number)
            try:
                header = (int(fields[1]), int(fields[2]))
            except ValueError:
                raise ParseError(f"non-integer counts in {line!r}", number) from None
        elif tag == "e":
            if header is None:
                raise ParseError("edge before problem line", number)
            fields = rest.split()
            try:
                u, v = (int(x) for x in fields)
            except ValueError:
                raise ParseError(f"malformed edge line {line!r}", number) from None
            if not (1 <= u <= header[0] and 1 <= v <= header[0]) or u == v:
                raise ParseError(f"invalid edge {u} {v}", number)
            edges.append((u - 1, v - 1))
        else:
            raise ParseError(f"unknown line type {tag!r}", number)
    if header is None:
        raise ParseError("missing problem line")
    g = Graph(header[0], np.array(edges, dtype=np.int64).reshape(-1, 2))
    if g.m != header[1]:
        raise ParseError(f"problem line declares {header[1]} edges, found {g.m} distinct")
    return g, metadata


def write_graph(path: PathLike, g: Graph, metadata: Mapping[str, object] = ()) -> Path:
    path = Path(path)
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(dumps(g, metadata))
    except OSError as exc:
        raise StorageError(f"cannot write {path}: {exc}") from exc
    log.info("wrote %r to %s", g, path)
    return path


def read_graph(path: PathLike) -> Tuple[Graph, Dict[str, str]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not ASCII") from exc
    except OSError as exc:
        raise StorageError(f"cannot read {path}: {exc}") from exc
    return loads(text)
