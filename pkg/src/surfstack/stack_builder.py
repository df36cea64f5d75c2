"""The three 3D surface codes on one rectified lattice, plus 2D surface codes."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .codealg import (CssCode, RowSpace, as_matrix, code_k, from_support, min_distance, rank_gf2,
                      span_equal)
from .lattice import COLORS, Lattice, LatticeDims, build_lattice
from .report import Report

ZPAIR = {"r": "gb", "g": "rb", "b": "rg"}


class ConstructionError(RuntimeError):
    """A constructed code does not encode exactly one logical qubit."""


class FixtureMismatchError(RuntimeError):
    """No qubit relabelling maps the generated d=2 stack onto the reference groups."""


@dataclass(frozen=True)
class Stack:
    lattice: Lattice
    codes: dict
    canonical_z: dict
    canonical_x: dict

    @property
    def n(self) -> int:
        return self.lattice.n

    @property
    def d(self) -> int:
        dims = self.lattice.dims
        if not dims.isotropic:
            raise ValueError("stack is not isotropic")
        return dims.dx


def canonical_logicals(lat: Lattice) -> tuple[dict, dict]:
    """Boundary-line Z strings and boundary-membrane X operators at the origin corner.

    Z for colour c runs where the two other colours' minimal boundaries meet;
    X for colour c covers the minimal c-boundary.
    """
    (x0, _), (y0, _), (z0, _) = lat.dims.bounds()
    n = lat.n
    lines = {
        "g": lambda v: v[0] == x0 and v[1] == y0,
        "r": lambda v: v[2] == z0 and v[1] == y0,
        "b": lambda v: v[2] == z0 and v[0] == x0,
    }
    membranes = {
        "g": lambda v: v[2] == z0,
        "r": lambda v: v[0] == x0,
        "b": lambda v: v[1] == y0,
    }
    zs = {c: from_support([i for i, v in enumerate(lat.vertices) if f(v)], n) for c, f in lines.items()}
    xs = {c: from_support([i for i, v in enumerate(lat.vertices) if f(v)], n) for c, f in membranes.items()}
    return zs, xs


def code_from_lattice(lat: Lattice, color: str) -> tuple[np.ndarray, np.ndarray]:
    n = lat.n
    hx = as_matrix([from_support(c.support, n) for c in lat.cells_of(color)], n)
    hz = as_matrix([from_support(f.support, n) for f in lat.faces_of(ZPAIR[color])], n)
    return hx, hz


def build_stack(dims: LatticeDims | int) -> Stack:
    """Build SC_r, SC_g and SC_b on a shared lattice with canonical logicals attached."""
    if isinstance(dims, int):
        dims = LatticeDims.cube(dims)
    lat = build_lattice(dims)
    zs, xs = canonical_logicals(lat)
    codes = {}
    for c in COLORS:
        hx, hz = code_from_lattice(lat, c)
        code = CssCode(lat.n, hx, hz, xs[c][None, :], zs[c][None, :], label=f"SC_{c}")
        k = code_k(code)
        if k != 1:
            raise ConstructionError(
                f"SC_{c} on {dims}: n={lat.n}, rank Hx={rank_gf2(hx)}, rank Hz={rank_gf2(hz)}, k={k}")
        if not code.check_logicals():
            raise ConstructionError(f"SC_{c} on {dims}: canonical logicals are not a valid pair")
        codes[c] = code
    return Stack(lat, codes, zs, xs)


def expected_ranks(d: int) -> dict[str, tuple[int, int]]:
    """Closed-form independent generator counts (X, Z) for the isotropic stack."""
    rb_x = (d - 1) * (d * d + d) // 2
    rb_z = (d - 1) * (5 * d * d - 3 * d + 2) // 2
    return {
        "g": (d * d * (d - 1), (d - 1) * (2 * d * d - d + 1)),
        "r": (rb_x, rb_z),
        "b": (rb_x, rb_z),
    }


def verify_counts(stack: Stack) -> Report:
    d = stack.d
    rep = Report("counts", {"d": d})
    n_expected = 3 * d**3 - 4 * d**2 + 2 * d
    rep.add("vertex count 3d^3-4d^2+2d", stack.n == n_expected, observed=stack.n, expected=n_expected)
    for c, (ex, ez) in expected_ranks(d).items():
        code = stack.codes[c]
        rx, rz = rank_gf2(code.hx), rank_gf2(code.hz)
        rep.add(f"SC_{c} independent X generators", rx == ex, observed=rx, expected=ex)
        rep.add(f"SC_{c} independent Z generators", rz == ez, observed=rz, expected=ez)
        rep.add(f"SC_{c} total generators n-1", rx + rz == stack.n - 1, observed=rx + rz,
                expected=stack.n - 1)
    return rep


# ---------------------------------------------------------------- fixture

def load_fixture_d2() -> dict:
    """Reference d=2 generator lists, qubit labels 1..12."""
    text = resources.files("surfstack").joinpath("data/d2_fixture.json").read_text()
    return json.loads(text)


def fixture_stack_d2() -> dict[str, CssCode]:
    """The reference d=2 codes as CssCode objects on indices 0..11 (label - 1)."""
    fx = load_fixture_d2()
    n = fx["n"]
    out = {}
    for c, entry in fx["codes"].items():
        vec = lambda labels: from_support([q - 1 for q in labels], n)
        out[c] = CssCode(n, [vec(r) for r in entry["X"]], [vec(r) for r in entry["Z"]],
                         vec(entry["logicalX"])[None, :], vec(entry["logicalZ"])[None, :],
                         label=f"fixture SC_{c}")
    return out


def _span_masks(m: np.ndarray) -> set[int]:
    basis = [sum(1 << int(i) for i in np.flatnonzero(r)) for r in RowSpace(m).basis]
    span = {0}
    for b in basis:
        span |= {s ^ b for s in span}
    return span


def match_codes(reference: dict[str, CssCode], target: dict[str, CssCode]) -> list[int]:
    """Find perm with reference qubit q -> target qubit perm[q] making all spans equal.

    Raises FixtureMismatchError if none exists.
    """
    keys = sorted(reference)
    n = next(iter(reference.values())).n
    if sorted(target) != keys or any(c.n != n for c in target.values()):
        raise FixtureMismatchError("code families have different colours or sizes")
    ref_sets, tgt_sets = [], []
    for c in keys:
        for attr in ("hx", "hz"):
            ref_sets.append(_span_masks(getattr(reference[c], attr)))
            tgt_sets.append(_span_masks(getattr(target[c], attr)))
    if [len(s) for s in ref_sets] != [len(s) for s in tgt_sets]:
        raise FixtureMismatchError("stabilizer group sizes differ")

    def signature(sets, q):
        return tuple(tuple(sorted(Counter(bin(e).count("1") for e in s if e >> q & 1).items()))
                     for s in sets)

    ref_sig = [signature(ref_sets, q) for q in range(n)]
    tgt_sig = [signature(tgt_sets, q) for q in range(n)]
    if sorted(ref_sig) != sorted(tgt_sig):
        raise FixtureMismatchError("per-qubit stabilizer weight profiles differ")
    order = sorted(range(n), key=lambda q: sum(1 for s in ref_sig if s == ref_sig[q]))
    pos = {q: i for i, q in enumerate(order)}
    # Each reference element is checked once its last qubit (in search order) is placed.
    due: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for si, s in enumerate(ref_sets):
        for e in s:
            if e:
                last = max(pos[q] for q in range(n) if e >> q & 1)
                due[last].append((si, e))
    perm = [-1] * n
    used = [False] * n

    def image(e):
        out = 0
        for q in range(n):
            if e >> q & 1:
                out |= 1 << perm[q]
        return out

    def search(i):
        if i == n:
            return True
        q = order[i]
        for t in range(n):
            if used[t] or tgt_sig[t] != ref_sig[q]:
                continue
            perm[q] = t
            if all(image(e) in tgt_sets[si] for si, e in due[i]):
                used[t] = True
                if search(i + 1):
                    return True
                used[t] = False
            perm[q] = -1
        return False

    if not search(0):
        raise FixtureMismatchError("no qubit relabelling reproduces every stabilizer group")
    return perm


def permute_vector(v, perm: list[int]) -> np.ndarray:
    out = np.zeros_like(np.asarray(v))
    out[..., perm] = v
    return out


def match_fixture_d2(stack: Stack | dict) -> list[int]:
    """Relabelling (reference label - 1) -> generated index under which all six groups agree.

    Also checks that every reference logical lands in the coset of the generated one.
    """
    codes = stack.codes if isinstance(stack, Stack) else stack
    ref = fixture_stack_d2()
    perm = match_codes(ref, codes)
    for c, rc in ref.items():
        tc = codes[c]
        if not (span_equal(permute_vector(rc.hx, perm), tc.hx)
                and span_equal(permute_vector(rc.hz, perm), tc.hz)):
            raise FixtureMismatchError(f"SC_{c} spans differ after relabelling")
        lx = permute_vector(rc.logical_x[0], perm)
        lz = permute_vector(rc.logical_z[0], perm)
        if not (RowSpace(tc.hx).contains(lx ^ tc.logical_x[0])
                and RowSpace(tc.hz).contains(lz ^ tc.logical_z[0])):
            raise FixtureMismatchError(f"SC_{c} logical operators fall in a different coset")
    return perm


# ---------------------------------------------------------------- 2D codes

def build_2d(d: int, picture: str = "rotated", flip: bool = False) -> CssCode:
    """2D surface code of distance d.

    ``rotated``: d*d qubits, qubit ``row*d + col``; bulk plaquette (col, row) is X-type
    when col+row is even (odd if ``flip``); weight-2 X checks on the left/right edges and
    weight-2 Z checks on the top/bottom edges.  Logical X is row 0, logical Z is column 0.
    The flipped patch is the mirror-image partner needed to join two even-distance
    patches side by side.

    ``kitaev``: qubits at (i, j) with i+j even on a (2d-1) x (2d-1) grid, Z plaquettes
    at (odd, even) and X vertex checks at (even, odd).
    """
    if d < 2:
        raise ValueError("distance must be at least 2")
    if picture == "rotated":
        return _rotated(d, flip)
    if picture == "kitaev":
        return _kitaev(d)
    raise ValueError(f"unknown picture {picture!r}")


def _rotated(d: int, flip: bool = False) -> CssCode:
    n = d * d
    q = lambda col, row: row * d + col
    hx, hz = [], []
    for row in range(-1, d):
        for col in range(-1, d):
            pts = [(col + a, row + b) for a in (0, 1) for b in (0, 1)]
            pts = [q(c, r) for c, r in pts if 0 <= c < d and 0 <= r < d]
            is_x = (col + row + flip) % 2 == 0
            if len(pts) == 4:
                (hx if is_x else hz).append(from_support(pts, n))
            elif len(pts) == 2:
                side = col in (-1, d - 1)
                if is_x and side:
                    hx.append(from_support(pts, n))
                elif not is_x and not side:
                    hz.append(from_support(pts, n))
    lx = from_support([q(c, 0) for c in range(d)], n)
    lz = from_support([q(0, r) for r in range(d)], n)
    label = f"rotated d={d}" + (" flipped" if flip else "")
    return CssCode(n, hx, hz, lx[None, :], lz[None, :], label=label)


def _kitaev(d: int) -> CssCode:
    size = 2 * d - 1
    sites = [(i, j) for i in range(size) for j in range(size) if (i + j) % 2 == 0]
    idx = {s: k for k, s in enumerate(sites)}
    n = len(sites)

    def star(i, j):
        pts = [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)]
        return from_support([idx[p] for p in pts if p in idx], n)

    hz = [star(i, j) for i in range(1, size, 2) for j in range(0, size, 2)]
    hx = [star(i, j) for i in range(0, size, 2) for j in range(1, size, 2)]
    lx = from_support([idx[(i, 0)] for i in range(0, size, 2)], n)
    lz = from_support([idx[(0, j)] for j in range(0, size, 2)], n)
    return CssCode(n, hx, hz, lx[None, :], lz[None, :], label=f"kitaev d={d}")


# ---------------------------------------------------------------- redundancy

def redundancy_identities(stack: Stack) -> Report:
    """Products of Z faces around single cells that multiply to the identity.

    For every cell and every Z-face colour pair containing the cell's colour, the
    kept faces of that pair whose support lies inside the cell are summed.  Zero
    sums are recorded as identities; the span of all identities must account for
    the full gap between the number of Z rows and their rank.
    """
    lat = stack.lattice
    rep = Report("redundancy", {"dims": [lat.dims.dx, lat.dims.dy, lat.dims.dz]})
    for c in COLORS:
        pair = ZPAIR[c]
        faces = lat.faces_of(pair)
        code = stack.codes[c]
        face_sets = [set(f.support) for f in faces]
        identities = []
        kinds = Counter()
        for cell in lat.cells:
            if cell.color not in pair:
                continue
            cs = set(cell.support)
            members = [i for i, fs in enumerate(face_sets) if fs <= cs]
            if len(members) < 2:
                continue
            if not (code.hz[members].sum(axis=0) % 2).any():
                coeff = np.zeros(len(faces), dtype=np.uint8)
                coeff[members] = 1
                identities.append(coeff)
                kinds[(cell.color, cell.kind, len(cell.support))] += 1
        deficit = code.hz.shape[0] - rank_gf2(code.hz)
        found = rank_gf2(identities) if identities else 0
        rep.add(f"SC_{c} Z-row redundancy explained by cell identities", found == deficit,
                rows=int(code.hz.shape[0]), rank=int(code.hz.shape[0] - deficit),
                deficit=int(deficit), identities=len(identities), independent_identities=int(found),
                by_cell={f"{col}:{kind}:{w}": v for (col, kind, w), v in sorted(kinds.items())})
    return rep


# ---------------------------------------------------------------- distances

def distance_report(max_d: int = 3) -> Report:
    """Brute-force distances of the d=2 stack codes and of the 2D codes up to ``max_d``."""
    rep = Report("brute-force distances", {"max_d": max_d})
    stack = build_stack(2)
    for c in COLORS:
        code = stack.codes[c]
        dist = min_distance(code, 3)
        rep.add(f"SC_{c} at d=2 is [[{code.n},{code.k},2]]", (code.n, code.k, dist) == (12, 1, 2),
                n=code.n, k=code.k, distance=dist)
    for d in range(2, max_d + 1):
        for picture in ("rotated", "kitaev"):
            code = build_2d(d, picture)
            dist = min_distance(code, d + 1)
            rep.add(f"{picture} sheet d={d} is [[{code.n},1,{d}]]", code.k == 1 and dist == d,
                    n=code.n, k=code.k, distance=dist)
    return rep
