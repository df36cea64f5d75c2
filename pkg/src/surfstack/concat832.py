"""The [[8,3,2]] cube code and the concatenation that turns a stack into one colour code.

Cube vertices are indexed by their corner label (a, b, c) as 4a + 2b + c.  The
logical qubit ``gy`` has its X membrane on the face a = 0, ``by`` on b = 0 and
``ry`` on c = 0; each Z logical is the edge along the matching axis through
corner 000.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .codealg import (CssCode, as_matrix, code_k, find_logical_of_weight, from_support, min_distance,
                      rank_gf2, weight)
from .report import Report
from .simkit import (KET, SINGLE, TOL, apply_single, load_circuit, load_inputs, pauli_expectation,
                     permute_qubits, run)
from .stack_builder import Stack

LABELS = ("ry", "gy", "by")
COLOR_LABEL = {"r": "ry", "g": "gy", "b": "by"}
LABEL_AXIS = {"gy": 0, "by": 1, "ry": 2}
CORNERS = tuple(product((0, 1), repeat=3))


class MappingError(RuntimeError):
    """Substituted generators fail to commute."""


@dataclass(frozen=True)
class Code832:
    code: CssCode
    logical_x: dict
    logical_z: dict
    vertex_parity: tuple[int, ...]

    @property
    def hx(self):
        return self.code.hx

    @property
    def hz(self):
        return self.code.hz


def _face(axis: int, value: int) -> np.ndarray:
    return from_support([i for i, cr in enumerate(CORNERS) if cr[axis] == value], 8)


def _edge(axis: int) -> np.ndarray:
    return from_support([i for i, cr in enumerate(CORNERS) if all(cr[j] == 0 for j in range(3) if j != axis)], 8)


def code832() -> Code832:
    hx = np.ones((1, 8), dtype=np.uint8)
    hz = np.array([_face(0, 0), _face(1, 0), _face(2, 0), _face(0, 1)])
    lx = {lab: _face(LABEL_AXIS[lab], 0) for lab in LABELS}
    lz = {lab: _edge(LABEL_AXIS[lab]) for lab in LABELS}
    code = CssCode(8, hx, hz, np.array([lx[l] for l in LABELS]), np.array([lz[l] for l in LABELS]),
                   label="[[8,3,2]]")
    parity = tuple(sum(cr) % 2 for cr in CORNERS)
    return Code832(code, lx, lz, parity)


@dataclass(frozen=True)
class ConcatCode:
    code: CssCode
    block_map: dict
    inherited_logicals: dict  # colour -> (X vector, Z vector)

    @property
    def n(self) -> int:
        return self.code.n


def concatenate(stack: Stack) -> ConcatCode:
    """Encode the three qubits at each vertex into one [[8,3,2]] block.

    A single-qubit X (Z) of SC_c on vertex v becomes the block-v logical X (Z)
    of label c+'y'; every block contributes its own X and four Z checks.
    """
    inner = code832()
    n = stack.n
    big = 8 * n
    block_map = {v: list(range(8 * v, 8 * v + 8)) for v in range(n)}

    def lift(vec, table):
        out = np.zeros(big, dtype=np.uint8)
        for v in np.flatnonzero(vec):
            out[8 * v:8 * v + 8] ^= table
        return out

    hx_rows, hz_rows = [], []
    for c in ("r", "g", "b"):
        lab = COLOR_LABEL[c]
        code = stack.codes[c]
        hx_rows += [lift(r, inner.logical_x[lab]) for r in code.hx]
        hz_rows += [lift(r, inner.logical_z[lab]) for r in code.hz]
    for v in range(n):
        for r in inner.hx:
            hx_rows.append(lift(from_support([v], n), r))
        for r in inner.hz:
            hz_rows.append(lift(from_support([v], n), r))
    hx, hz = as_matrix(hx_rows, big), as_matrix(hz_rows, big)
    if ((hx.astype(np.int64) @ hz.T) % 2).any():
        raise MappingError("lifted X and Z generators do not commute")
    inherited = {c: (lift(stack.canonical_x[c], inner.logical_x[COLOR_LABEL[c]]),
                     lift(stack.canonical_z[c], inner.logical_z[COLOR_LABEL[c]])) for c in ("r", "g", "b")}
    lx = np.array([inherited[c][0] for c in ("r", "g", "b")])
    lz = np.array([inherited[c][1] for c in ("r", "g", "b")])
    code = CssCode(big, hx, hz, lx, lz, label=f"concatenated {stack.lattice.dims}")
    return ConcatCode(code, block_map, inherited)


def verify_colorcode_distance(cc: ConcatCode, max_weight: int = 3) -> Report:
    """No logical of either type up to ``max_weight``; inherited logicals are valid."""
    code = cc.code
    rep = Report("colour code distance", {"n": code.n, "max_weight": max_weight})
    rx, rz = rank_gf2(code.hx), rank_gf2(code.hz)
    rep.add("independent generators n-3", rx + rz == code.n - 3, rank_x=rx, rank_z=rz)
    rep.add("k = 3", code_k(code) == 3, k=code_k(code))
    for kind in ("X", "Z"):
        v = find_logical_of_weight(code, kind, max_weight)
        rep.add(f"no {kind} logical of weight <= {max_weight}", v is None,
                found=None if v is None else [int(i) for i in np.flatnonzero(v)])
    rep.add("inherited logicals commute with checks and pair correctly", code.check_logicals())
    zw = {c: weight(z) for c, (_, z) in cc.inherited_logicals.items()}
    min_z = min(zw.values())
    rep.add(f"an inherited Z logical of weight {max_weight + 1} certifies distance {max_weight + 1}",
            min_z == max_weight + 1, inherited_z_weights=zw)
    return rep


def _encoded_832(bits) -> np.ndarray:
    """Encoder output for a logical basis input, reordered to corner indexing."""
    enc = load_circuit("encoder_832")
    ins = enc.meta["inputs"]
    psi = load_inputs(8, {ins[lab]: KET[str(b)] for lab, b in zip(("gy", "by", "ry"), bits)})
    out = run(enc, psi).state
    corner = [tuple(c) for c in enc.meta["corner"]]
    # New qubit i (corner index) is circuit qubit holding CORNERS[i].
    order = [corner.index(cr) for cr in CORNERS]
    return permute_qubits(out, order)


def verify_832_gates(tol: float = TOL) -> Report:
    """Encoder produces the right codewords; the T/T-dagger pattern is logical CCZ."""
    rep = Report("[[8,3,2]] circuits")
    inner = code832()
    states = {}
    for bits in product((0, 1), repeat=3):
        psi = _encoded_832(bits)
        states[bits] = psi
        stab_ok = all(abs(pauli_expectation(psi, np.flatnonzero(r), "X") - 1) < tol for r in inner.hx)
        stab_ok &= all(abs(pauli_expectation(psi, np.flatnonzero(r), "Z") - 1) < tol for r in inner.hz)
        logical_ok = all(
            abs(pauli_expectation(psi, np.flatnonzero(inner.logical_z[lab]), "Z") - (-1) ** b) < tol
            for lab, b in zip(("gy", "by", "ry"), bits))
        name = "".join(map(str, bits))
        rep.add(f"encoder |{name}> (gy,by,ry): stabilized, logical Z values correct", stab_ok and logical_ok)
    ref = None
    all_ok = True
    for bits, psi in states.items():
        out = psi
        for q in range(8):
            out = apply_single(out, SINGLE["T" if inner.vertex_parity[q] == 0 else "Tdg"], q)
        phase = np.vdot(psi, out)
        if abs(abs(phase) - 1) > tol:
            all_ok = False
            continue
        if ref is None:
            ref = phase
        expected = -1 if all(bits) else 1
        ok = abs(phase / ref - expected) < tol
        all_ok &= ok
        name = "".join(map(str, bits))
        rep.add(f"T pattern on encoded |{name}> gives phase {expected:+d}", ok)
    rep.add("T pattern preserves every encoded basis state", all_ok)
    return rep


def distance_832() -> int | None:
    return min_distance(code832().code, 3)
