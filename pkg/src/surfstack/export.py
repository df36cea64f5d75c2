"""Serialization: alist check matrices and JSON bundles for codes, lattices, stacks and merges.

Rows in JSON are hex strings of the bit vector with qubit 0 as the least
significant bit.  Qubits are indexed in the lattice's (z, y, x) lexicographic
vertex order.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .codealg import CssCode, as_matrix, from_hex, to_hex
from .lattice import COLORS, Lattice
from .report import _plain
from .stack_builder import Stack


class FormatError(ValueError):
    """Malformed alist or JSON bundle."""


# ---------------------------------------------------------------- alist

def to_alist(m) -> str:
    """MacKay alist text: sizes, max weights, weight lists, then 1-based column and row lists padded with 0."""
    m = as_matrix(m)
    rows, cols = m.shape
    col_lists = [list(np.flatnonzero(m[:, j]) + 1) for j in range(cols)]
    row_lists = [list(np.flatnonzero(m[i]) + 1) for i in range(rows)]
    max_c = max((len(c) for c in col_lists), default=0)
    max_r = max((len(r) for r in row_lists), default=0)
    pad = lambda xs, k: " ".join(str(int(x)) for x in xs + [0] * (k - len(xs)))
    lines = [f"{cols} {rows}", f"{max_c} {max_r}",
             " ".join(str(len(c)) for c in col_lists), " ".join(str(len(r)) for r in row_lists)]
    lines += [pad(c, max_c) for c in col_lists]
    lines += [pad(r, max_r) for r in row_lists]
    return "\n".join(lines) + "\n"


def from_alist(text: str) -> np.ndarray:
    tokens = text.split()
    try:
        nums = [int(t) for t in tokens]
        cols, rows, max_c, max_r = nums[:4]
        pos = 4 + cols + rows
        m = np.zeros((rows, cols), dtype=np.uint8)
        for j in range(cols):
            for r in nums[pos:pos + max_c]:
                if r:
                    m[r - 1, j] = 1
            pos += max_c
        check = np.zeros_like(m)
        for i in range(rows):
            for c in nums[pos:pos + max_r]:
                if c:
                    check[i, c - 1] = 1
            pos += max_r
    except (ValueError, IndexError) as exc:
        raise FormatError(f"malformed alist: {exc}") from exc
    if not np.array_equal(m, check):
        raise FormatError("alist column and row lists disagree")
    return m


def write_alist(m, path) -> Path:
    path = Path(path)
    path.write_text(to_alist(m))
    return path


def read_alist(path) -> np.ndarray:
    return from_alist(Path(path).read_text())


# ---------------------------------------------------------------- JSON bundles

def code_to_dict(code: CssCode) -> dict:
    return {"n": code.n, "label": code.label,
            "Hx": [to_hex(r) for r in code.hx], "Hz": [to_hex(r) for r in code.hz],
            "logicals": {"X": [to_hex(r) for r in code.logical_x], "Z": [to_hex(r) for r in code.logical_z]}}


def code_from_dict(data: dict) -> CssCode:
    try:
        n = int(data["n"])
        rows = lambda key: as_matrix([from_hex(h, n) for h in key], n)
        logicals = data.get("logicals") or {}
        lx = rows(logicals["X"]) if "X" in logicals else None
        lz = rows(logicals["Z"]) if "Z" in logicals else None
        return CssCode(n, rows(data["Hx"]), rows(data["Hz"]), lx, lz, label=data.get("label", ""))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"code bundle is missing {exc}") from exc


def lattice_to_dict(lat: Lattice) -> dict:
    d = lat.dims
    return {"dims": [d.dx, d.dy, d.dz], "vertex_order": "zyx-lex",
            "vertices": [list(v) for v in lat.vertices],
            "cells": [{"center": list(c.center), "color": c.color, "kind": c.kind, "support": list(c.support)}
                      for c in lat.cells],
            "faces": [{"color_pair": f.color_pair, "kind": f.kind, "support": list(f.support),
                       "cells": [list(p) for p in f.cells]} for f in lat.faces]}


def stack_to_dict(stack: Stack) -> dict:
    d = stack.lattice.dims
    return {"lattice": {"dims": [d.dx, d.dy, d.dz], "vertex_order": "zyx-lex"}, "n": stack.n,
            "codes": {c: code_to_dict(stack.codes[c]) for c in COLORS}}


def merge_to_dict(m) -> dict:
    out = {"kind": m.kind, "axis": m.axis, "n": m.n,
           "embed_a": list(m.embed_a), "embed_b": list(m.embed_b), "new_qubits": list(m.new_qubits),
           "new_x_gens": m.new_x_gens, "new_z_gens": m.new_z_gens, "modified_gens": m.modified_gens,
           "measured": {c: {"kind": m.measured_kind[c], "rows": m.measured_rows[c],
                            "product": to_hex(m.measured_product[c])} for c in m.measured_product},
           "metadata": m.metadata, "report": m.report.to_dict()}
    return _plain(out)


def dump_json(obj: dict, path=None) -> str:
    text = json.dumps(obj, sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
