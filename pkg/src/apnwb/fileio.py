"""Truth-table files: a header line, an optional provenance line, hex values.

    n=10 modulus=0x46f
    # provenance {"family": "PowerMap", ...}
    0x0
    0x1
    ...
"""

from __future__ import annotations

import json
import re

import numpy as np

from .constructions import ConstructionParams, build
from .gf2n import get_field
from .vbf import VBF

HEADER_RE = re.compile(r"^n=(\d+)\s+modulus=(0x[0-9a-fA-F]+)\s*$")
PROVENANCE_PREFIX = "# provenance "


class ParseError(Exception):
    """A function file could not be read."""


def format_table(f):
    lines = [f"n={f.n} modulus={f.field.modulus:#x}"]
    if isinstance(f.provenance, ConstructionParams):
        lines.append(PROVENANCE_PREFIX + f.provenance.to_json())
    lines += [f"{int(v):#x}" for v in f.table]
    return "\n".join(lines) + "\n"


def write_table(f, path):
    with open(path, "w") as fh:
        fh.write(format_table(f))


def parse_table(text):
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty file")
    m = HEADER_RE.match(lines[0])
    if not m:
        raise ParseError(f"bad header {lines[0]!r}")
    n, modulus = int(m.group(1)), int(m.group(2), 16)
    provenance = None
    body = []
    for ln in lines[1:]:
        if ln.startswith(PROVENANCE_PREFIX):
            try:
                provenance = ConstructionParams.from_json(ln[len(PROVENANCE_PREFIX):])
            except (ValueError, KeyError) as exc:
                raise ParseError(f"bad provenance line: {exc}") from exc
        elif ln.startswith("#"):
            continue
        else:
            try:
                body.append(int(ln, 16))
            except ValueError as exc:
                raise ParseError(f"bad value {ln!r}") from exc
    field = get_field(n, modulus)
    if len(body) != field.size:
        raise ParseError(f"expected {field.size} values, got {len(body)}")
    try:
        return VBF(field, np.array(body, dtype=np.int64), provenance)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def read_params(path):
    with open(path) as fh:
        text = fh.read()
    try:
        return ConstructionParams.from_json(text)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"bad parameter file: {exc}") from exc


def read_function(path):
    """Load a truth-table file, or build from a parameter JSON file."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        try:
            params = ConstructionParams.from_json(text)
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"bad parameter file: {exc}") from exc
        return build(params)
    return parse_table(text)
