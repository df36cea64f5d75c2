"""Lattice surgery: merging and splitting stacks and 2D sheets, with algebraic checks.

Two stacks are merged along a colour axis by building one stack with that extent
doubled.  The second stack is shifted by 2d along the axis; for odd d it is also
mirrored along a perpendicular axis so that the cell colouring lines up.  The
vertices of the merged lattice that belong to neither image form the junction
layer.  Generators touching the junction are classified by comparing them with
the embedded rows of the two inputs.

Sheets (2D codes) are joined to a stack or to each other by a seam routine: a
line of ancillas is placed between two Z logical lines, new Z checks are added
on the faces of the two strips, and the boundary X checks next to the seam are
extended onto the ancillas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .codealg import (CssCode, RowSpace, as_matrix, code_k, from_support, nullspace, rank_gf2, restrict_span,
                      row_basis, solve_left, span_equal, support, weight)
from .lattice import COLOR_AXIS, COLORS, LatticeDims
from .report import Report
from .simkit import (KET, SINGLE, TOL, QubitBudgetError, ZeroProbabilityBranch, apply_pauli,
                     css_basis_state, equal_up_to_phase, kron, pauli_measure, project_out)
from .stack_builder import Stack, build_stack

SIM_QUBIT_LIMIT = 14

# Axis mirrored for odd d so that B's cell colours survive the 2d shift.
REFLECT_AXIS = {"g": 0, "r": 1, "b": 0}


class SurgeryError(ValueError):
    """Inputs cannot be merged (mismatched sizes, no compatible seam)."""


class EmbeddingError(RuntimeError):
    """A merged code does not restrict back to its inputs."""


@dataclass(frozen=True)
class MergeReport:
    """Result of a merge: the merged object, embeddings and the generator bookkeeping.

    ``embed_a[i]`` is the merged index of qubit i of the first input (likewise
    ``embed_b``).  Row indices refer to the merged code of each colour.  For each
    colour, ``measured_rows`` lists the merged rows whose sum is
    ``measured_product`` (kind ``measured_kind``).
    """

    kind: str
    axis: str
    n: int
    embed_a: tuple[int, ...]
    embed_b: tuple[int, ...]
    new_qubits: tuple[int, ...]
    new_x_gens: dict
    new_z_gens: dict
    modified_gens: dict
    measured_kind: dict
    measured_rows: dict
    measured_product: dict
    report: Report
    merged_stack: Stack | None = None
    merged_code: CssCode | None = None
    sources: tuple = ()
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.report.passed


def _key(row: np.ndarray) -> bytes:
    return np.packbits(row).tobytes()


def _row_set(m: np.ndarray) -> set[bytes]:
    return {_key(r) for r in m}


def _embed_matrix(m: np.ndarray, emb: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((m.shape[0], n), dtype=np.uint8)
    out[:, emb] = m
    return out


def _sum_rows(m: np.ndarray, idx, n: int) -> np.ndarray:
    idx = list(idx)
    if not idx:
        return np.zeros(n, dtype=np.uint8)
    return (m[idx].sum(axis=0) % 2).astype(np.uint8)


# ---------------------------------------------------------------- 3D-3D merge

def _merged_dims(d: int, axis: str) -> LatticeDims:
    ext = [d, d, d]
    ext[COLOR_AXIS[axis]] = 2 * d
    return LatticeDims(*ext)


def _place_b(coord, d: int, axis: str, bounds) -> tuple[int, int, int]:
    p = list(coord)
    if d % 2:
        r = REFLECT_AXIS[axis]
        lo, hi = bounds[r]
        p[r] = lo + hi - p[r]
    p[COLOR_AXIS[axis]] += 2 * d
    return tuple(p)


def _classify(rows: np.ndarray, junction: np.ndarray, emb_a, emb_b, old_a: set, old_b: set):
    """Split merged rows into unchanged, modified and new ones.

    A junction-touching row is 'modified' when its parts on both inputs are each
    empty or an old row (and not both empty); otherwise it is 'new'.  Rows away
    from the junction must be old rows of exactly one input.
    """
    new, modified, foreign = [], [], []
    for i, row in enumerate(rows):
        pa, pb = row[emb_a], row[emb_b]
        ok_a = not pa.any() or _key(pa) in old_a
        ok_b = not pb.any() or _key(pb) in old_b
        if row[junction].any():
            (modified if ok_a and ok_b and (pa.any() or pb.any()) else new).append(i)
        elif not ((pa.any() and not pb.any() and ok_a) or (pb.any() and not pa.any() and ok_b)):
            foreign.append(i)
    return new, modified, foreign


def _covered(old: np.ndarray, merged: np.ndarray, emb, modified) -> bool:
    """Each old row appears unchanged in the merged rows or as the restriction of a modified row."""
    merged_keys = {_key(r[emb]) for r in merged if not np.delete(r, emb).any()}
    mod_keys = {_key(merged[i][emb]) for i in modified}
    return all(_key(r) in merged_keys or _key(r) in mod_keys for r in old)


def merge_stacks(a: Stack, b: Stack, axis: str) -> MergeReport:
    """Join two equal cubic stacks across their ``axis``-coloured boundaries.

    The ``axis`` code undergoes an X-type merge and the other two codes a
    Z-type merge.  The returned report carries per-colour checks.
    """
    if axis not in COLORS:
        raise SurgeryError(f"unknown axis colour {axis!r}")
    for s in (a, b):
        if not s.lattice.dims.isotropic:
            raise SurgeryError("merge_stacks needs cubic stacks")
    if a.d != b.d:
        raise SurgeryError(f"distance mismatch: {a.d} vs {b.d}")
    d = a.d
    merged = build_stack(_merged_dims(d, axis))
    lat = merged.lattice
    bounds = a.lattice.dims.bounds()
    emb_a = np.array([lat.index[v] for v in a.lattice.vertices])
    try:
        emb_b = np.array([lat.index[_place_b(v, d, axis, bounds)] for v in b.lattice.vertices])
    except KeyError as exc:
        raise EmbeddingError(f"shifted vertex {exc} is not in the merged lattice") from exc
    n = lat.n
    used = np.zeros(n, dtype=bool)
    used[emb_a] = True
    if used[emb_b].any():
        raise EmbeddingError("embeddings overlap")
    used[emb_b] = True
    junction = np.flatnonzero(~used)
    jmask = ~used

    rep = Report(f"merge along {axis}", {"d": d, "axis": axis})
    ax = COLOR_AXIS[axis]
    planes = sorted({lat.vertices[i][ax] for i in junction})
    rep.add("junction qubits lie on one plane", len(planes) == 1, plane=planes, axis="xyz"[ax],
            count=len(junction))
    rep.add("merged qubit count is 2n + junction", n == a.n + b.n + len(junction), n=n)

    new_x, new_z, modified, m_kind, m_rows, m_prod = {}, {}, {}, {}, {}, {}
    for c in COLORS:
        code, ca, cb = merged.codes[c], a.codes[c], b.codes[c]
        nx, mx, fx = _classify(code.hx, jmask, emb_a, emb_b, _row_set(ca.hx), _row_set(cb.hx))
        nz, mz, fz = _classify(code.hz, jmask, emb_a, emb_b, _row_set(ca.hz), _row_set(cb.hz))
        new_x[c], new_z[c] = nx, nz
        modified[c] = {"X": mx, "Z": mz}
        rep.add(f"SC_{c}: merged code is CSS with k=1", code.commutes() and code_k(code) == 1,
                k=code_k(code))
        rep.add(f"SC_{c}: rows away from the junction are embedded old rows", not fx and not fz,
                foreign_x=fx, foreign_z=fz)
        covered = all(_covered(o.hx, code.hx, e, mx) and _covered(o.hz, code.hz, e, mz)
                      for o, e in ((ca, emb_a), (cb, emb_b)))
        rep.add(f"SC_{c}: every old row survives in the merged code", covered)
        old_rank = rank_gf2(ca.hx) + rank_gf2(ca.hz) + rank_gf2(cb.hx) + rank_gf2(cb.hz)
        delta = rank_gf2(code.hx) + rank_gf2(code.hz) - old_rank
        rep.add(f"SC_{c}: independent generators grow by junction size + 1", delta == len(junction) + 1,
                new_independent=delta, new_x_rows=len(nx), new_z_rows=len(nz),
                modified_x_rows=len(mx), modified_z_rows=len(mz))

        old_hx = np.vstack([_embed_matrix(ca.hx, emb_a, n), _embed_matrix(cb.hx, emb_b, n)])
        old_hz = np.vstack([_embed_matrix(ca.hz, emb_a, n), _embed_matrix(cb.hz, emb_b, n)])
        xa = _embed_matrix(ca.logical_x, emb_a, n)[0]
        xb = _embed_matrix(cb.logical_x, emb_b, n)[0]
        za = _embed_matrix(ca.logical_z, emb_a, n)[0]
        zb = _embed_matrix(cb.logical_z, emb_b, n)[0]
        if c == axis:
            prod = _sum_rows(code.hx, nx, n)
            m_kind[c], m_rows[c], m_prod[c] = "X", nx, prod
            ok = RowSpace(old_hx).contains(prod ^ xa ^ xb)
            rep.add(f"SC_{c}: new X rows multiply to X_A X_B modulo old X stabilizers", ok,
                    product_weight=weight(prod))
            opposite = za
        else:
            target = xa * 0 + (za ^ zb)
            coeff = solve_left(code.hz, target)
            rows = [] if coeff is None else [int(i) for i in np.flatnonzero(coeff)]
            m_kind[c], m_rows[c], m_prod[c] = "Z", rows, target
            measurable = coeff is not None
            fresh = not RowSpace(old_hz).contains(target)
            rep.add(f"SC_{c}: Z_A Z_B is a merged stabilizer but not an old one", measurable and fresh,
                    measurable=measurable, outside_old_span=fresh)
            opposite = xa
        prod = m_prod[c]
        checks = code.hz if m_kind[c] == "X" else code.hx
        commutes = not ((checks.astype(np.int64) @ prod) % 2).any()
        anti = int(prod.astype(np.int64) @ opposite) % 2 == 1
        rep.add(f"SC_{c}: measured product commutes with merged checks and flips A's opposite logical",
                commutes and anti, commutes=commutes, anticommutes=anti)

    return MergeReport("3d3d", axis, n, tuple(int(i) for i in emb_a), tuple(int(i) for i in emb_b),
                       tuple(int(i) for i in junction), new_x, new_z, modified, m_kind, m_rows, m_prod,
                       rep, merged_stack=merged, sources=(a, b),
                       metadata={"junction_plane": {"xyz"[ax]: planes[0] if len(planes) == 1 else planes}})


def _commuting_part(checks: np.ndarray, measured: np.ndarray) -> np.ndarray:
    """Subgroup of span(checks) that commutes with every row of ``measured``."""
    if measured.shape[0] == 0 or checks.shape[0] == 0:
        return checks
    basis = row_basis(checks)
    overlap = (basis.astype(np.int64) @ measured.T.astype(np.int64)) % 2
    keep = nullspace(overlap.T.astype(np.uint8), basis.shape[0])
    return ((keep.astype(np.int64) @ basis) % 2).astype(np.uint8)


def _remeasure(current: np.ndarray, old_checks, embs, old_logicals, n: int) -> np.ndarray:
    """Original checks missing from ``current``, each verified to be fixable on its own side."""
    span = RowSpace(current)
    lost = []
    for checks, emb, logical in zip(old_checks, embs, old_logicals):
        rows = _embed_matrix(checks, emb, n)
        missing = np.flatnonzero(~np.atleast_1d(span.contains(rows))) if rows.shape[0] else []
        for i in missing:
            target = np.zeros(checks.shape[0] + logical.shape[0], dtype=np.uint8)
            target[i] = 1
            if solve_left(np.vstack([checks, logical]).T, target) is None:
                raise EmbeddingError("a re-measured boundary check has no local correction")
            lost.append(rows[i])
    return as_matrix(lost, n)


def _split_code(code: CssCode, junction, emb, other, old_a: CssCode, old_b: CssCode, measured: str):
    """Measure the junction in one basis, re-measure lost boundary checks, keep one side.

    Returns the X and Z checks supported on ``emb`` (pulled back to the input's
    indexing) and the number of original checks that had to be re-measured.
    Junction-centred cells glue a boundary check of each input into a single
    merged check; measuring the junction leaves only their product, so the
    original boundary checks are measured again.  A -1 outcome on a re-measured check is
    undone by an opposite-type string on that side that flips only this check
    and commutes with the side's logical; ``EmbeddingError`` is raised if no
    such string exists.
    """
    n = code.n
    hx, hz = code.hx, code.hz
    if measured == "Z":
        hx, hz = restrict_span(hx, junction), hz.copy()
        hz[:, junction] = 0
    else:
        hx, hz = hx.copy(), restrict_span(hz, junction)
        hx[:, junction] = 0
    emb_all = (np.asarray(emb), np.asarray(other))
    lost_x = _remeasure(hx, (old_a.hx, old_b.hx), emb_all, (old_a.logical_x, old_b.logical_x), n)
    hz = _commuting_part(hz, lost_x)
    hx = np.vstack([hx, lost_x])
    lost_z = _remeasure(hz, (old_a.hz, old_b.hz), emb_all, (old_a.logical_z, old_b.logical_z), n)
    hx = _commuting_part(hx, lost_z)
    hz = np.vstack([hz, lost_z])
    remeasured = lost_x.shape[0] + lost_z.shape[0]
    drop = list(junction) + list(other)
    return restrict_span(hx, drop)[:, emb], restrict_span(hz, drop)[:, emb], remeasured


def split_stack(m: MergeReport, axis: str | None = None, counts: dict | None = None) -> tuple[Stack, Stack]:
    """Measure out the junction layer and return the two separated stacks.

    The junction is measured in Z for the X-type colour and in X for the other
    two, after which boundary checks glued across the junction are measured
    again.  Raises ``EmbeddingError`` unless both halves reproduce the original
    row spans.  If ``counts`` is given it receives the re-measured check count
    per colour.
    """
    if m.kind != "3d3d" or m.merged_stack is None:
        raise SurgeryError("split_stack needs a report from merge_stacks")
    if axis is not None and axis != m.axis:
        raise SurgeryError(f"report was merged along {m.axis}, not {axis}")
    a, b = m.sources
    emb_a, emb_b = list(m.embed_a), list(m.embed_b)
    out = []
    for src, emb, other, pair in ((a, emb_a, emb_b, (a, b)), (b, emb_b, emb_a, (b, a))):
        codes = {}
        for c in COLORS:
            measured = "Z" if c == m.axis else "X"
            hx, hz, again = _split_code(m.merged_stack.codes[c], m.new_qubits, emb, other,
                                        pair[0].codes[c], pair[1].codes[c], measured)
            if counts is not None:
                counts[c] = counts.get(c, 0) + again
            old = src.codes[c]
            if not (span_equal(hx, old.hx) and span_equal(hz, old.hz)):
                raise EmbeddingError(f"SC_{c} does not split back to its original row span")
            codes[c] = CssCode(src.n, hx, hz, old.logical_x, old.logical_z, label=old.label)
        out.append(Stack(src.lattice, codes, src.canonical_z, src.canonical_x))
    return out[0], out[1]


def round_trip_report(m: MergeReport) -> Report:
    rep = Report(f"split after merge along {m.axis}", {"removed": len(m.new_qubits)})
    counts: dict = {}
    try:
        sa, sb = split_stack(m, counts=counts)
    except EmbeddingError as exc:
        rep.add("split reproduces both original stacks", False, error=str(exc))
        return rep
    for name, s, o in (("A", sa, m.sources[0]), ("B", sb, m.sources[1])):
        ok = all(span_equal(s.codes[c].hx, o.codes[c].hx) and span_equal(s.codes[c].hz, o.codes[c].hz)
                 for c in COLORS)
        rep.add(f"stack {name} is span-equal to its original", ok, remeasured_checks=counts)
    rep.add("removed qubit count equals junction size", len(m.new_qubits) == m.n - m.sources[0].n - m.sources[1].n,
            removed=len(m.new_qubits))
    return rep


# ---------------------------------------------------------------- seams between Z logical lines

@dataclass(frozen=True)
class Seam:
    """A merged code built from two codes joined along two Z logical lines."""

    code: CssCode
    n_a: int
    n_b: int
    ancillas: tuple[int, ...]
    new_z: tuple[int, ...]
    modified_x: tuple[int, ...]
    weights: dict  # merged X row -> (old weight, new weight)
    logical_x: np.ndarray
    logical_z: np.ndarray


def _outer_rows(hx: np.ndarray, line, allowed: np.ndarray) -> dict[int, int]:
    """For each link (line[j], line[j+1]), the X row containing both and supported on ``allowed``."""
    out = {}
    for j in range(len(line) - 1):
        hits = [i for i, r in enumerate(hx) if r[line[j]] and r[line[j + 1]] and not (r & ~allowed).any()]
        if len(hits) > 1:
            raise SurgeryError(f"several boundary X checks on link {j}")
        if hits:
            out[j] = hits[0]
    return out


def seam_merge(a: CssCode, b: CssCode, line_a, line_b, outer_a: dict, outer_b: dict) -> Seam:
    """Join code a and code b (layout [a | b | ancillas]) along their Z lines.

    Face j of the a-side strip is X-type iff a has a boundary X check on link j,
    and likewise for the b-side strip; the two patterns must be complementary.
    """
    d = len(line_a)
    if len(line_b) != d:
        raise SurgeryError(f"line lengths differ: {d} vs {len(line_b)}")
    links = set(range(d - 1))
    pa, pb = set(outer_a), set(outer_b)
    if pa & pb or (pa | pb) != links:
        raise SurgeryError(f"boundary checks do not alternate across the seam: {sorted(pa)} vs {sorted(pb)}")
    n_a, n_b = a.n, b.n
    n = n_a + n_b + d
    anc = [n_a + n_b + j for j in range(d)]
    lines = (list(line_a), [n_a + q for q in line_b])

    hx = np.vstack([_embed_matrix(a.hx, np.arange(n_a), n), _embed_matrix(b.hx, np.arange(n_a, n_a + n_b), n)])
    hz_old = np.vstack([_embed_matrix(a.hz, np.arange(n_a), n), _embed_matrix(b.hz, np.arange(n_a, n_a + n_b), n)])
    modified, weights = [], {}
    for offset, outer in ((0, outer_a), (a.hx.shape[0], outer_b)):
        for j, r in outer.items():
            i = offset + r
            before = weight(hx[i])
            hx[i, [anc[j], anc[j + 1]]] ^= 1
            modified.append(i)
            weights[i] = (before, weight(hx[i]))

    new_rows = []
    for line, x_links in zip(lines, (pa, pb)):
        for j in range(d - 1):
            if j not in x_links:
                new_rows.append(from_support([line[j], line[j + 1], anc[j], anc[j + 1]], n))
        # Virtual end links take the opposite type of their neighbour.
        for row, neighbour in ((0, 0), (d - 1, d - 2)):
            if neighbour in x_links:
                new_rows.append(from_support([line[row], anc[row]], n))
    hz = np.vstack([hz_old, as_matrix(new_rows, n)])
    new_z = tuple(range(hz_old.shape[0], hz.shape[0]))

    lx = np.zeros(n, dtype=np.uint8)
    lx[:n_a] = a.logical_x[0]
    lx[n_a:n_a + n_b] ^= b.logical_x[0]
    # Complete X_a X_b on the ancillas so it commutes with the new Z checks.
    rhs = (hz.astype(np.int64) @ lx) % 2
    fix = solve_left(hz[:, anc].T, rhs)
    if fix is None:
        raise SurgeryError("no ancilla completion of the merged X logical")
    lx[anc] ^= fix
    lz = np.zeros(n, dtype=np.uint8)
    lz[:n_a] = a.logical_z[0]
    code = CssCode(n, hx, hz, lx[None, :], lz[None, :], label=f"seam({a.label}, {b.label})")
    return Seam(code, n_a, n_b, tuple(anc), new_z, tuple(modified), weights, lx, lz)


def dual(code: CssCode) -> CssCode:
    """Exchange the roles of X and Z (the code seen after a transversal Hadamard)."""
    return CssCode(code.n, code.hz, code.hx, code.logical_z, code.logical_x, label=f"dual {code.label}")


def _sheet_lines(code: CssCode):
    """Boundary rows and columns of a d x d sheet that are Z logicals, with their boundary X checks."""
    d = int(round(code.n ** 0.5))
    if d * d != code.n:
        raise SurgeryError(f"sheet with {code.n} qubits is not a d x d patch")
    hz_span = RowSpace(code.hz)
    cands = [("column", c, [r * d + c for r in range(d)]) for c in (0, d - 1)]
    cands += [("row", r, [r * d + c for c in range(d)]) for r in (0, d - 1)]
    out = []
    for kind, pos, line in cands:
        v = from_support(line, code.n)
        if ((code.hx.astype(np.int64) @ v) % 2).any() or hz_span.contains(v):
            continue
        out.append((kind, pos, line, _outer_rows(code.hx, line, v.astype(bool))))
    return out


def merge_sheets(a: CssCode, b: CssCode, kind: str = "Z") -> Seam:
    """Join two rotated sheets so that the new checks measure Z_a Z_b (``kind='Z'``) or X_a X_b.

    For ``kind='X'`` the seam is built on the dual codes and the result is
    dualised back.
    """
    if kind not in ("X", "Z"):
        raise SurgeryError("kind must be 'X' or 'Z'")
    wa, wb = (a, b) if kind == "Z" else (dual(a), dual(b))
    for la in _sheet_lines(wa):
        for lb in _sheet_lines(wb):
            pa, pb = set(la[3]), set(lb[3])
            if not pa & pb and (pa | pb) == set(range(len(la[2]) - 1)):
                seam = seam_merge(wa, wb, la[2], lb[2], la[3], lb[3])
                if kind == "X":
                    seam = Seam(dual(seam.code), seam.n_a, seam.n_b, seam.ancillas, seam.new_z,
                                seam.modified_x, seam.weights, seam.logical_z, seam.logical_x)
                return seam
    raise SurgeryError("no pair of boundary lines gives alternating seam checks; "
                       "for even d pair a sheet with its flipped partner")


# ---------------------------------------------------------------- 2D-3D merge

def _stack_line(stack: Stack, color: str):
    """Canonical Z line of SC_color in the bottom layer, the boundary plane beside it, and the outward axis."""
    if color == "g":
        raise SurgeryError("SC_g's Z logical is perpendicular to the bottom layer; use colour r or b")
    lat = stack.lattice
    along = COLOR_AXIS[color]
    side = 1 - along  # b runs along y with the sheet beyond x = 0; r runs along x with the sheet beyond y = 0
    z0 = lat.dims.bounds()[2][0]
    line = sorted((i for i, v in enumerate(lat.vertices) if v[2] == z0 and v[side] == 0 and stack.canonical_z[color][i]),
                  key=lambda i: lat.vertices[i][along])
    plane = np.array([v[side] == 0 for v in lat.vertices])
    return line, plane, along, side


def merge_2d3d(sheet: CssCode, stack: Stack, color: str = "b") -> MergeReport:
    """Measure Z_2D Z_3D between a rotated sheet and SC_color of a stack.

    The sheet lies in the bottom layer of the stack, two grid units beyond the
    boundary holding the canonical Z line, with the ancilla line in between.
    """
    d = stack.d
    if sheet.n != d * d:
        raise SurgeryError(f"sheet has {sheet.n} qubits, expected {d * d} for distance {d}")
    code3 = stack.codes[color]
    line_a, plane, along, side = _stack_line(stack, color)
    if len(line_a) != d:
        raise SurgeryError(f"canonical Z line has {len(line_a)} vertices, expected {d}")
    outer_a = _outer_rows(code3.hx, line_a, plane)
    seam = None
    for kind, pos, line_b, outer_b in _sheet_lines(sheet):
        if kind != "column":
            continue
        pb = set(outer_b)
        if not pb & set(outer_a) and (pb | set(outer_a)) == set(range(d - 1)):
            seam = seam_merge(code3, sheet, line_a, line_b, outer_a, outer_b)
            column = pos
            break
    if seam is None:
        raise SurgeryError(f"no sheet column alternates with the SC_{color} boundary checks at d={d}; "
                           "try the flipped sheet")
    code = seam.code
    n, n3 = code.n, stack.n
    rep = Report(f"2D-3D merge with SC_{color}", {"d": d, "color": color})
    rep.add("merged code is CSS with k=1", code.commutes() and code_k(code) == 1, k=code_k(code))
    rep.add("d ancillas in a line", len(seam.ancillas) == d, ancillas=len(seam.ancillas))
    rep.add("d+1 new Z checks", len(seam.new_z) == d + 1, new_z=len(seam.new_z))
    prod = _sum_rows(code.hz, seam.new_z, n)
    target = np.zeros(n, dtype=np.uint8)
    target[:n3] = code3.logical_z[0]
    target[n3:n3 + sheet.n] = from_support(line_b, sheet.n)
    rep.add("new Z checks multiply to Z_3D Z_2D", np.array_equal(prod, target), product_weight=weight(prod))
    commutes = not ((code.hx.astype(np.int64) @ prod) % 2).any()
    x3 = np.zeros(n, dtype=np.uint8)
    x3[:n3] = code3.logical_x[0]
    anti = int(prod.astype(np.int64) @ x3) % 2 == 1
    rep.add("measured product commutes with merged X checks and flips the 3D code's X logical",
            commutes and anti, commutes=commutes, anticommutes=anti)
    grown3 = {i: w for i, w in seam.weights.items() if i < code3.hx.shape[0]}
    grown2 = {i: w for i, w in seam.weights.items() if i >= code3.hx.shape[0]}
    rep.add("boundary 3D X checks grow from weight 3 to 5", all(w == (3, 5) for w in grown3.values()),
            grown=len(grown3), weights=list(grown3.values()))
    rep.add("boundary sheet X checks grow from weight 2 to 4", all(w == (2, 4) for w in grown2.values()),
            grown=len(grown2))
    rep.add("rank grows by d+1", rank_gf2(code.hx) + rank_gf2(code.hz)
            == rank_gf2(code3.hx) + rank_gf2(code3.hz) + rank_gf2(sheet.hx) + rank_gf2(sheet.hz) + d + 1)

    coords = {}
    for j, q in enumerate(seam.ancillas):
        coords[q] = _plane_point(along, side, 2 * j, -1)
    for r in range(d):
        for c in range(d):
            coords[n3 + r * d + c] = _plane_point(along, side, 2 * r, -2 - 2 * abs(c - column))
    new_x = {color: []}
    new_z = {color: list(seam.new_z)}
    return MergeReport("2d3d", color, n, tuple(range(n3)), tuple(range(n3, n3 + sheet.n)), seam.ancillas,
                       new_x, new_z, {color: {"X": list(seam.modified_x), "Z": []}}, {color: "Z"},
                       {color: list(seam.new_z)}, {color: prod}, rep, merged_code=code,
                       sources=(stack, sheet),
                       metadata={"sheet_column": column, "coordinates": coords,
                                 "grown_3d_checks": len(grown3)})


def _plane_point(along: int, side: int, t: int, s: int) -> tuple[int, int, int]:
    p = [0, 0, 1]
    p[along], p[side] = t, s
    return tuple(p)


# ---------------------------------------------------------------- state-vector check of the logical maps

H2 = SINGLE["H"]


def _logical(amps, zero, one):
    return amps[0] * zero + amps[1] * one


def _signed_zero(code: CssCode, signs: np.ndarray, z_logical: np.ndarray) -> np.ndarray:
    """Code state with Z-check eigenvalues (-1)^signs and logical Z = +1."""
    m = np.vstack([code.hz, z_logical[None, :]])
    x0 = solve_left(m.T, np.concatenate([signs, [0]]).astype(np.uint8))
    if x0 is None:
        raise SurgeryError("inconsistent Z-check signs")
    return css_basis_state(code.n, code.hx, x0)


def _random_qubit(rng) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def simulate_merge_mapping(code_a: CssCode, code_b: CssCode, kind: str = "Z", trials: int = 3,
                           seed: int = 0, tol: float = TOL, operator: str | None = None) -> Report:
    """State-vector check of the merge and split maps on two small sheets.

    The merge is simulated in the frame where its new checks are Z-type (for
    ``kind='X'`` every qubit is Hadamard-conjugated, so the dual codes are
    used and the logical results are mapped back by a logical Hadamard).

    Z-type merge, phi = a|+> + b|->:  psi (x) phi -> a psi + (-1)^m b Z psi.
    X-type merge, phi = a|0> + b|1>:  psi (x) phi -> a psi + (-1)^m b X psi.
    Split of the merged qubit alpha|0> + beta|1> gives alpha|00> + beta|11>
    (Z-type) or, for X-type, alpha|+> + beta|-> gives alpha|++> + beta|-->.
    ``operator`` overrides the Pauli expected in the merge map (default: the
    merge type), which lets callers confirm that the other choice fails.
    """
    if kind not in ("X", "Z"):
        raise SurgeryError("kind must be 'X' or 'Z'")
    wa, wb = (code_a, code_b) if kind == "Z" else (dual(code_a), dual(code_b))
    seam = merge_sheets(wa, wb, "Z")
    code = seam.code
    n = code.n
    if n > SIM_QUBIT_LIMIT:
        raise QubitBudgetError(f"{n} qubits exceed the simulation limit of {SIM_QUBIT_LIMIT}")
    n_a, n_b, anc = seam.n_a, seam.n_b, list(seam.ancillas)
    rng = np.random.default_rng(seed)
    frame = (lambda v: v) if kind == "Z" else (lambda v: H2 @ v)
    rep = Report(f"{kind}-type merge and split on two sheets", {"n": n, "seed": seed, "trials": trials})

    zero_a = css_basis_state(n_a, wa.hx, np.zeros(n_a, np.uint8))
    one_a = apply_pauli(zero_a, support(wa.logical_x[0]), "X")
    zero_b = css_basis_state(n_b, wb.hx, np.zeros(n_b, np.uint8))
    one_b = apply_pauli(zero_b, support(wb.logical_x[0]), "X")
    plus_anc = kron(*[KET["+"]] * len(anc))

    # ---- merge
    inputs = [(KET["+"], KET["+"])] + [(_random_qubit(rng), _random_qubit(rng)) for _ in range(trials)]
    n_old_z = code.hz.shape[0] - len(seam.new_z)
    ok_all, branches = True, 0
    for psi, phi in inputs:
        a, b = (phi @ KET["+"].conj(), phi @ KET["-"].conj()) if kind == "Z" else (phi[0], phi[1])
        op = SINGLE[operator or kind]
        pw, fw = frame(psi), frame(phi)
        state0 = kron(_logical(pw, zero_a, one_a), _logical(fw, zero_b, one_b), plus_anc)
        for outcomes in product((0, 1), repeat=len(seam.new_z)):
            st = state0
            try:
                for r, o in zip(seam.new_z, outcomes):
                    st, _, _ = pauli_measure(st, support(code.hz[r]), "Z", o)
            except ZeroProbabilityBranch:
                continue
            branches += 1
            m = int(sum(outcomes)) % 2
            signs = np.concatenate([np.zeros(n_old_z, np.uint8), np.array(outcomes, np.uint8)])
            z0 = _signed_zero(code, signs, seam.logical_z)
            z1 = apply_pauli(z0, support(seam.logical_x), "X")
            c = np.array([np.vdot(z0, st), np.vdot(z1, st)])
            in_code = np.linalg.norm(st - c[0] * z0 - c[1] * z1) < tol
            expected = a * psi + (-1) ** m * b * (op @ psi)
            ok = in_code and equal_up_to_phase(frame(c), expected / np.linalg.norm(expected), tol)
            ok_all &= ok
    rep.add(f"merge: every outcome branch gives a psi + (-1)^m b {operator or kind} psi",
            ok_all and branches > 0, branches=branches, inputs=len(inputs))

    # ---- split
    lz_a = np.zeros(n, np.uint8)
    lz_a[:n_a] = wa.logical_z[0]
    lx_b = np.zeros(n, np.uint8)
    lx_b[n_a:n_a + n_b] = wb.logical_x[0]
    old_hx = code.hx[:, :n_a + n_b]
    split_ok, split_branches = True, 0
    for m in (0, 1):
        signs = np.zeros(code.hz.shape[0], np.uint8)
        signs[seam.new_z[0]] = m
        z0 = _signed_zero(code, signs, seam.logical_z)
        z1 = apply_pauli(z0, support(seam.logical_x), "X")
        for _ in range(trials):
            amp = _random_qubit(rng)
            st0 = _logical(amp, z0, z1)
            for outcomes in product((0, 1), repeat=len(anc)):
                st = st0
                try:
                    for q, o in zip(anc, outcomes):
                        st, _, _ = pauli_measure(st, [q], "X", o)
                except ZeroProbabilityBranch:
                    continue
                split_branches += 1
                o_vec = np.zeros(n, np.uint8)
                o_vec[anc] = outcomes
                # X checks lost their ancilla factors; restore their signs with Z on the old qubits.
                flips = (code.hx.astype(np.int64) @ o_vec) % 2
                z = solve_left(old_hx.T, flips.astype(np.uint8))
                st = apply_pauli(st, np.flatnonzero(z), "Z")
                # Relative sign of the |11> branch: ancilla outcomes on the logical's support and the Z fix.
                flip = (int(o_vec @ seam.logical_x) + int(z @ seam.logical_x[:n_a + n_b])) % 2
                if flip:
                    st = apply_pauli(st, support(lz_a), "Z")
                if m:
                    st = apply_pauli(st, support(lx_b), "X")
                st = project_out(st, {q: KET["-" if o else "+"] for q, o in zip(anc, outcomes)})
                # In the X-type case this is alpha|++> + beta|--> once the Hadamards are undone.
                want_w = amp[0] * kron(zero_a, zero_b) + amp[1] * kron(one_a, one_b)
                split_ok &= equal_up_to_phase(st, want_w / np.linalg.norm(want_w), tol)
    label = "alpha|00> + beta|11>" if kind == "Z" else "alpha|++> + beta|-->"
    rep.add(f"split: every ancilla outcome gives {label} after record-based corrections",
            split_ok and split_branches > 0, branches=split_branches)
    return rep
