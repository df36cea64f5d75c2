"""Checks that transversal CCZ (three codes) and CZ (two codes) act as logical gates.

A logical basis state |alpha beta gamma> of the stack is a uniform superposition
over X-stabilizer cosets t in G_alpha^r, u in G_beta^g, v in G_gamma^b.
Physical CCZ on every vertex multiplies each term by (-1)^|t & u & v|, so the
gate is logical CCZ exactly when that parity is constant on each coset triple
and odd only for alpha = beta = gamma = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .codealg import CosetGroup, RowSpace, row_basis, weight
from .lattice import COLORS
from .report import Report
from .stack_builder import Stack

EXHAUSTIVE_LIMIT = 1 << 20
DEFAULT_SAMPLES = 100_000


class PhaseViolation(AssertionError):
    """A coset triple produced a phase inconsistent with a logical gate."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class PhaseTable:
    """Observed logical phase per basis label and the number of coset tuples checked."""

    phases: dict = field(default_factory=dict)
    samples: dict = field(default_factory=dict)
    mode: str = "exhaustive"
    seed: int | None = None

    def to_dict(self) -> dict:
        key = lambda lab: "".join(map(str, lab))
        return {"mode": self.mode, "seed": self.seed,
                "phases": {key(k): v for k, v in sorted(self.phases.items())},
                "samples": {key(k): v for k, v in sorted(self.samples.items())}}


@dataclass(frozen=True)
class OverlapWitness:
    colors: tuple[str, str]
    indices: tuple[int, int]
    overlap: np.ndarray
    member: bool


def coset(stack: Stack, color: str, bit: int) -> CosetGroup:
    """G_bit for one colour: canonical X logical (if bit) plus the X stabilizer group."""
    shift = stack.canonical_x[color] if bit else None
    return CosetGroup(row_basis(stack.codes[color].hx), shift)


def pairwise_overlap_check(stack: Stack) -> list[OverlapWitness]:
    """Every overlap of X generators from two colours must be a Z stabilizer of the third."""
    out = []
    for c1, c2 in (("r", "g"), ("r", "b"), ("g", "b")):
        (third,) = set(COLORS) - {c1, c2}
        span = RowSpace(stack.codes[third].hz)
        a, b = stack.codes[c1].hx, stack.codes[c2].hx
        overlaps = (a[:, None, :] & b[None, :, :]).reshape(-1, stack.n)
        members = np.atleast_1d(span.contains(overlaps))
        for k, (ov, mem) in enumerate(zip(overlaps, members)):
            out.append(OverlapWitness((c1, c2), divmod(k, b.shape[0]), ov, bool(mem)))
    return out


def _triple_parities(t: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Parities of |t & u & v| for all combinations of rows, chunked over t."""
    out = []
    for row in t:
        tu = u & row
        out.append(((tu.astype(np.int32) @ v.T.astype(np.int32)) % 2).ravel())
    return np.concatenate(out)


def _record(table: PhaseTable, label, parities, witness_fn):
    odd = int(parities.sum())
    if 0 < odd < parities.size:
        bad = int(np.flatnonzero(parities != parities[0])[0])
        raise PhaseViolation(f"mixed parity for |{''.join(map(str, label))}>", witness_fn(bad))
    table.phases[label] = -1 if odd else 1
    table.samples[label] = int(parities.size)


def ccz_phase_exhaustive(stack: Stack, limit: int = EXHAUSTIVE_LIMIT) -> PhaseTable:
    table = PhaseTable(mode="exhaustive")
    for label in product((0, 1), repeat=3):
        groups = [coset(stack, c, b) for c, b in zip(COLORS, label)]
        total = groups[0].size * groups[1].size * groups[2].size
        if total > limit:
            raise ValueError(f"{total} coset triples exceed the exhaustive limit {limit}")
        t, u, v = (g.elements() for g in groups)
        par = _triple_parities(t, u, v)
        nu, nv = u.shape[0], v.shape[0]
        _record(table, label, par, lambda i: (i // (nu * nv), i // nv % nu, i % nv))
    return table


def ccz_phase_sampled(stack: Stack, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> PhaseTable:
    rng = np.random.default_rng(seed)
    table = PhaseTable(mode="sampled", seed=seed)
    for label in product((0, 1), repeat=3):
        groups = [coset(stack, c, b) for c, b in zip(COLORS, label)]
        t, u, v = (g.sample(samples, rng) for g in groups)
        par = (t & u & v).sum(axis=1) % 2
        _record(table, label, par, lambda i: (t[i], u[i], v[i]))
    return table


def expected_ccz(label) -> int:
    return -1 if all(label) else 1


def corner_structure_check(stack: Stack) -> Report:
    """Pairwise canonical X overlaps are Z logicals of the third code; the triple overlap is one vertex."""
    rep = Report("corner structure", {"dims": list(stack.lattice.dims.__dict__.values())})
    xs = stack.canonical_x
    for c1, c2 in (("r", "g"), ("r", "b"), ("g", "b")):
        (third,) = set(COLORS) - {c1, c2}
        code = stack.codes[third]
        w = xs[c1] & xs[c2]
        commutes = not ((code.hx.astype(np.int64) @ w) % 2).any()
        anticommutes = int(w @ xs[third].astype(np.int64)) % 2 == 1
        # The string must touch both boundaries of the third colour.
        axis = {"r": 0, "b": 1, "g": 2}[third]
        lo, hi = stack.lattice.dims.bounds()[axis]
        coords = [stack.lattice.vertices[i][axis] for i in np.flatnonzero(w)]
        spans = bool(coords) and min(coords) == lo and max(coords) == hi
        rep.add(f"X_{c1} & X_{c2} is a Z logical of SC_{third}", commutes and anticommutes and spans,
                weight=weight(w), commutes=commutes, anticommutes=anticommutes, spans_boundaries=spans)
    triple = xs["r"] & xs["g"] & xs["b"]
    rep.add("X_r & X_g & X_b has weight 1", weight(triple) == 1, weight=weight(triple))
    return rep


def boundary_membrane(stack: Stack, color: str, side: str) -> np.ndarray:
    """All vertices on the minimal ('min') or maximal ('max') boundary of a colour."""
    plane = {"r": "x", "b": "y", "g": "z"}[color] + ("-" if side == "min" else "+")
    v = np.zeros(stack.n, dtype=np.uint8)
    v[stack.lattice.boundary_vertices(plane)] = 1
    return v


def cz_phase_check(stack: Stack, pair: tuple[str, str], boundary: str = "min",
                   reselect_canonical: bool = False, samples: int | None = None,
                   seed: int = 0, limit: int = EXHAUSTIVE_LIMIT) -> PhaseTable:
    """Transversal CZ between two codes, applied on one boundary of the third colour.

    The phase of a coset pair (t, u) is (-1)^|t & u & B| where B is the chosen
    boundary.  The canonical X logical of the third colour sits on the 'min'
    boundary; choosing 'max' is only accepted with ``reselect_canonical=True``,
    meaning the caller takes that boundary as the third colour's X logical.
    """
    c1, c2 = pair
    if c1 == c2 or {c1, c2} - set(COLORS):
        raise ValueError(f"invalid colour pair {pair!r}")
    (third,) = set(COLORS) - {c1, c2}
    if boundary not in ("min", "max"):
        raise ValueError("boundary must be 'min' or 'max'")
    if boundary == "max" and not reselect_canonical:
        raise ValueError("the opposite boundary does not carry the canonical X logical; "
                         "pass reselect_canonical=True to use it")
    mask = boundary_membrane(stack, third, boundary)
    rng = np.random.default_rng(seed)
    table = PhaseTable(mode="exhaustive" if samples is None else "sampled",
                       seed=None if samples is None else seed)
    for a, b in product((0, 1), repeat=2):
        g1, g2 = coset(stack, c1, a), coset(stack, c2, b)
        if samples is None:
            if g1.size * g2.size > limit:
                raise ValueError("coset pairs exceed the exhaustive limit")
            t, u = g1.elements(), g2.elements()
            par = (((t & mask).astype(np.int32) @ u.T.astype(np.int32)) % 2).ravel()
        else:
            t, u = g1.sample(samples, rng), g2.sample(samples, rng)
            par = (t & u & mask).sum(axis=1) % 2
        # The third code's state never enters the phase, so both gamma values agree.
        for gamma in (0, 1):
            label = {c1: a, c2: b, third: gamma}
            key = tuple(label[c] for c in COLORS)
            _record(table, key, par, lambda i: i)
    return table


def expected_cz(label, pair) -> int:
    bits = dict(zip(COLORS, label))
    return -1 if bits[pair[0]] and bits[pair[1]] else 1


def ccz_report(table: PhaseTable) -> Report:
    rep = Report(f"transversal CCZ ({table.mode})", {"seed": table.seed})
    for label in product((0, 1), repeat=3):
        got = table.phases.get(label)
        rep.add(f"|{''.join(map(str, label))}> phase", got == expected_ccz(label),
                observed=got, expected=expected_ccz(label), samples=table.samples.get(label))
    return rep


def cz_report(table: PhaseTable, pair) -> Report:
    rep = Report(f"transversal CZ {pair[0]}{pair[1]} ({table.mode})", {"seed": table.seed})
    for label in product((0, 1), repeat=3):
        got = table.phases.get(label)
        exp = expected_cz(label, pair)
        rep.add(f"|{''.join(map(str, label))}> phase", got == exp, observed=got, expected=exp,
                samples=table.samples.get(label))
    return rep


def overlap_report(stack: Stack) -> Report:
    wit = pairwise_overlap_check(stack)
    rep = Report("pairwise X-generator overlaps", {"n": stack.n})
    for c1, c2 in (("r", "g"), ("r", "b"), ("g", "b")):
        sub = [w for w in wit if w.colors == (c1, c2)]
        bad = [w.indices for w in sub if not w.member]
        rep.add(f"SC_{c1} x SC_{c2} overlaps are Z stabilizers of the third code", not bad,
                pairs=len(sub), failures=bad[:10])
    return rep
