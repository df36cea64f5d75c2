"""Binary linear algebra over GF(2) and a small CSS code model.

Bit vectors are ``numpy.uint8`` arrays holding 0/1 entries; check matrices are
2D arrays of the same dtype with one row per generator.  Elimination always
picks the lowest available row as pivot so that reduced forms are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

GROUP_BUDGET = 1 << 24
DISTANCE_BUDGET = 10**8


class InconsistentCodeError(ValueError):
    """Raised when X and Z checks of a CSS code fail to commute."""


class ResourceBudgetError(RuntimeError):
    """Raised when an enumeration would exceed its configured budget."""


def as_matrix(rows, n: int | None = None) -> np.ndarray:
    """Coerce rows (array, list of vectors or empty) into a 2D uint8 matrix."""
    m = np.asarray(rows, dtype=np.uint8)
    if m.ndim == 1:
        if m.size == 0:
            return np.zeros((0, n or 0), dtype=np.uint8)
        m = m[None, :]
    if m.size == 0:
        return np.zeros((0, n if n is not None else m.shape[-1]), dtype=np.uint8)
    return m & 1


def rref(m) -> tuple[np.ndarray, list[int]]:
    """Return the reduced row echelon form (nonzero rows only) and pivot columns."""
    a = as_matrix(m).copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        mask = a[:, c].astype(bool)
        mask[r] = False
        a[mask] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank_gf2(m) -> int:
    """GF(2) row rank."""
    a = as_matrix(m)
    if a.shape[0] == 0:
        return 0
    return len(rref(a)[1])


class RowSpace:
    """Row span of a matrix, prepared for fast repeated membership tests."""

    def __init__(self, m, n: int | None = None):
        a = as_matrix(m, n)
        self.n = a.shape[1]
        self.basis, self.pivots = rref(a) if a.shape[0] else (a[:0], [])

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v) -> np.ndarray:
        """Remainder of v (or rows of a matrix) after eliminating the pivots."""
        v = np.asarray(v, dtype=np.uint8) & 1
        if self.dim == 0:
            return v.copy()
        coeff = v[..., self.pivots]
        return ((v + coeff.astype(np.int64) @ self.basis) % 2).astype(np.uint8)

    def contains(self, v) -> bool | np.ndarray:
        v = np.asarray(v, dtype=np.uint8)
        if v.shape[-1] != self.n:
            raise ValueError(f"length {v.shape[-1]} does not match span width {self.n}")
        rem = self.reduce(v)
        return ~rem.any(axis=-1) if rem.ndim > 1 else not rem.any()


def in_rowspan(v, m) -> bool:
    """True iff v is a GF(2) combination of the rows of m."""
    v = np.asarray(v, dtype=np.uint8)
    m = as_matrix(m, v.shape[-1])
    if m.shape[1] != v.shape[-1]:
        raise ValueError(f"vector length {v.shape[-1]} vs matrix width {m.shape[1]}")
    return bool(RowSpace(m).contains(v))


def row_basis(m) -> np.ndarray:
    """Independent rows spanning the same space (the nonzero RREF rows)."""
    a = as_matrix(m)
    if a.shape[0] == 0:
        return a
    return rref(a)[0]


def independent_rows(m) -> list[int]:
    """Indices of a greedy maximal independent subset of rows, in order."""
    a = as_matrix(m)
    chosen: list[int] = []
    basis = np.zeros((0, a.shape[1]), dtype=np.uint8)
    for i, row in enumerate(a):
        if not row.any():
            continue
        cand = np.vstack([basis, row])
        if rank_gf2(cand) > basis.shape[0]:
            basis = row_basis(cand)
            chosen.append(i)
    return chosen


def span_equal(a, b) -> bool:
    """True iff the two matrices have identical row spans."""
    a = as_matrix(a)
    b = as_matrix(b, a.shape[1])
    if a.shape[1] != b.shape[1]:
        return False
    ra, rb = rank_gf2(a), rank_gf2(b)
    return ra == rb and rank_gf2(np.vstack([a, b])) == ra


def nullspace(m, n: int | None = None) -> np.ndarray:
    """Basis (as rows) of {x : m x = 0}."""
    a = as_matrix(m, n)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.uint8)
    r, piv = rref(a)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.uint8)
    for i, f in enumerate(free):
        out[i, f] = 1
        out[i, piv] = r[:, f]
    return out


def solve_left(m, v) -> np.ndarray | None:
    """Coefficients x with x @ m = v (mod 2), or None if v is not in the row span."""
    a = as_matrix(m)
    v = np.asarray(v, dtype=np.uint8) & 1
    k = a.shape[0]
    aug = np.hstack([a, np.eye(k, dtype=np.uint8)])
    r, piv = rref(aug)
    n = a.shape[1]
    rem = v.copy()
    x = np.zeros(k, dtype=np.uint8)
    for row, p in zip(r, piv):
        if p >= n:
            break
        if rem[p]:
            rem ^= row[:n]
            x ^= row[n:]
    return None if rem.any() else x


def inverse_gf2(m) -> np.ndarray:
    """Inverse of a square invertible GF(2) matrix."""
    a = as_matrix(m)
    k = a.shape[0]
    r, piv = rref(np.hstack([a, np.eye(k, dtype=np.uint8)]))
    if piv[:k] != list(range(k)) or len(piv) < k:
        raise ValueError("matrix is singular over GF(2)")
    return r[:k, k:]


def restrict_span(m, zero_cols: Sequence[int]) -> np.ndarray:
    """Basis of the subspace of rowspan(m) whose vectors vanish on ``zero_cols``."""
    a = as_matrix(m)
    n = a.shape[1]
    zero_cols = list(zero_cols)
    keep = [c for c in range(n) if c not in set(zero_cols)]
    order = zero_cols + keep
    r, piv = rref(a[:, order]) if a.shape[0] else (a, [])
    sub = r[[i for i, p in enumerate(piv) if p >= len(zero_cols)]]
    out = np.zeros((sub.shape[0], n), dtype=np.uint8)
    out[:, order] = sub
    return out


def weight(v) -> int:
    return int(np.count_nonzero(v))


def support(v) -> list[int]:
    return [int(i) for i in np.flatnonzero(v)]


def from_support(idx: Iterable[int], n: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.uint8)
    v[list(idx)] = 1
    return v


def to_int(v) -> int:
    """Pack a bit vector into an int with index 0 as the least significant bit."""
    out = 0
    for i in np.flatnonzero(v):
        out |= 1 << int(i)
    return out


def from_int(x: int, n: int) -> np.ndarray:
    return np.array([(x >> i) & 1 for i in range(n)], dtype=np.uint8)


def to_hex(v) -> str:
    return format(to_int(v), "x")


def from_hex(s: str, n: int) -> np.ndarray:
    return from_int(int(s, 16), n)


def parity_lemma_check(vs: Sequence) -> bool:
    """Check that weight(sum vs) and sum(weight v) agree mod 2."""
    if len(vs) == 0:
        return True
    m = as_matrix(vs)
    total = m.sum(axis=0) % 2
    return int(total.sum()) % 2 == int(m.sum()) % 2


@dataclass(frozen=True)
class CosetGroup:
    """The set ``shift + span(basis)``; basis rows must be independent."""

    basis: np.ndarray
    shift: np.ndarray | None = None

    def __post_init__(self):
        b = as_matrix(self.basis, None if self.shift is None else len(self.shift))
        object.__setattr__(self, "basis", b)
        if b.shape[0] and rank_gf2(b) != b.shape[0]:
            raise ValueError("coset basis rows are not independent")

    @property
    def size(self) -> int:
        return 1 << self.basis.shape[0]

    def elements(self, budget: int = GROUP_BUDGET) -> np.ndarray:
        """All elements as a (2^m, n) array, in binary-counter order of coefficients."""
        m, n = self.basis.shape
        if (1 << m) > budget:
            raise ResourceBudgetError(f"group of size 2^{m} exceeds budget {budget}")
        coeffs = ((np.arange(1 << m)[:, None] >> np.arange(m)) & 1).astype(np.uint8)
        out = (coeffs.astype(np.int64) @ self.basis) % 2 if m else np.zeros((1, n), dtype=np.uint8)
        if self.shift is not None:
            out ^= np.asarray(self.shift, dtype=np.uint8)
        return out.astype(np.uint8)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        m, n = self.basis.shape
        coeffs = rng.integers(0, 2, size=(count, m), dtype=np.uint8)
        out = (coeffs.astype(np.int64) @ self.basis) % 2 if m else np.zeros((count, n), dtype=np.int64)
        out = out.astype(np.uint8)
        if self.shift is not None:
            out ^= np.asarray(self.shift, dtype=np.uint8)
        return out


def enumerate_group(g: CosetGroup, budget: int = GROUP_BUDGET) -> Iterator[np.ndarray]:
    """Yield every element of the coset once (Gray-code order)."""
    m, n = g.basis.shape
    if (1 << m) > budget:
        raise ResourceBudgetError(f"group of size 2^{m} exceeds budget {budget}")
    cur = np.zeros(n, dtype=np.uint8) if g.shift is None else np.asarray(g.shift, dtype=np.uint8).copy()
    yield cur.copy()
    for i in range(1, 1 << m):
        bit = (i & -i).bit_length() - 1
        cur ^= g.basis[bit]
        yield cur.copy()


@dataclass(frozen=True)
class CssCode:
    """CSS code given by X and Z check matrices plus paired logical representatives."""

    n: int
    hx: np.ndarray
    hz: np.ndarray
    logical_x: np.ndarray = field(default=None)
    logical_z: np.ndarray = field(default=None)
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "hx", as_matrix(self.hx, self.n))
        object.__setattr__(self, "hz", as_matrix(self.hz, self.n))
        for m in (self.hx, self.hz):
            if m.shape[1] != self.n:
                raise ValueError(f"check matrix width {m.shape[1]} != n={self.n}")
        if self.logical_x is None or self.logical_z is None:
            lx, lz = find_logicals(self.hx, self.hz)
            object.__setattr__(self, "logical_x", lx)
            object.__setattr__(self, "logical_z", lz)
        else:
            object.__setattr__(self, "logical_x", as_matrix(self.logical_x, self.n))
            object.__setattr__(self, "logical_z", as_matrix(self.logical_z, self.n))

    def commutes(self) -> bool:
        return not ((self.hx.astype(np.int64) @ self.hz.T.astype(np.int64)) % 2).any()

    @property
    def k(self) -> int:
        return code_k(self)

    def with_logicals(self, lx, lz) -> "CssCode":
        return CssCode(self.n, self.hx, self.hz, lx, lz, self.label)

    def check_logicals(self) -> bool:
        """Logicals commute with opposite checks, avoid the stabilizer span, and pair symplectically."""
        lx, lz = self.logical_x, self.logical_z
        if lx.shape[0] != self.k or lz.shape[0] != self.k:
            return False
        if ((lx.astype(np.int64) @ self.hz.T) % 2).any() or ((lz.astype(np.int64) @ self.hx.T) % 2).any():
            return False
        pairing = (lx.astype(np.int64) @ lz.T) % 2
        return bool(np.array_equal(pairing, np.eye(self.k, dtype=pairing.dtype)))


def code_k(code: CssCode) -> int:
    """Number of logical qubits, n - rank(Hx) - rank(Hz)."""
    if not code.commutes():
        raise InconsistentCodeError(f"X and Z checks of {code.label or 'code'} do not commute")
    return code.n - rank_gf2(code.hx) - rank_gf2(code.hz)


def _extend_outside(candidates: np.ndarray, base: np.ndarray) -> np.ndarray:
    """Greedily pick candidate rows that are independent of base and of each other."""
    n = base.shape[1]
    picked = []
    span = RowSpace(base, n)
    cur = base
    for row in candidates:
        if span.reduce(row).any():
            picked.append(row)
            cur = np.vstack([cur, row])
            span = RowSpace(cur, n)
    return np.array(picked, dtype=np.uint8).reshape(-1, n)


def find_logicals(hx, hz) -> tuple[np.ndarray, np.ndarray]:
    """Algebraic logical basis: X from ker(Hz) outside rowspan(Hx), Z dually, paired symplectically."""
    hx, hz = as_matrix(hx), as_matrix(hz)
    n = hx.shape[1] if hx.shape[0] else hz.shape[1]
    lx = _extend_outside(nullspace(hz, n), hx)
    lz = _extend_outside(nullspace(hx, n), hz)
    if lx.shape[0] == 0:
        return lx, lz
    pairing = (lx.astype(np.int64) @ lz.T) % 2
    lz = (inverse_gf2(pairing.astype(np.uint8)).T.astype(np.int64) @ lz) % 2
    return lx, lz.astype(np.uint8)


def find_logical_of_weight(code: CssCode, kind: str, max_weight: int,
                           budget: int = DISTANCE_BUDGET) -> np.ndarray | None:
    """Lowest-weight logical operator of type ``kind`` ('X' or 'Z') up to ``max_weight``."""
    if kind not in ("X", "Z"):
        raise ValueError("kind must be 'X' or 'Z'")
    n = code.n
    if comb(n, min(max_weight, n)) > budget:
        raise ResourceBudgetError(f"C({n},{max_weight}) exceeds budget {budget}")
    checks, same = (code.hz, code.hx) if kind == "X" else (code.hx, code.hz)
    col_syn = [to_int(checks[:, i]) for i in range(n)]
    stab = RowSpace(same, n)
    for w in range(1, max_weight + 1):
        for idx in _zero_syndrome_sets(col_syn, w):
            v = from_support(idx, n)
            if not stab.contains(v):
                return v
    return None


def _zero_syndrome_sets(col_syn: list[int], w: int) -> Iterator[tuple[int, ...]]:
    """Index sets of size w whose column syndromes XOR to zero."""
    n = len(col_syn)
    if w == 1:
        for i in range(n):
            if col_syn[i] == 0:
                yield (i,)
        return
    # Fix the first w-1 indices, look the last one up by syndrome.
    by_syn: dict[int, list[int]] = {}
    for i, s in enumerate(col_syn):
        by_syn.setdefault(s, []).append(i)
    for head in combinations(range(n), w - 1):
        s = 0
        for i in head:
            s ^= col_syn[i]
        for j in by_syn.get(s, ()):
            if j > head[-1]:
                yield head + (j,)


def brute_distance(code: CssCode, kind: str, max_weight: int,
                   budget: int = DISTANCE_BUDGET) -> int | None:
    """Minimum weight of a ``kind`` logical up to ``max_weight``; None if none is found."""
    v = find_logical_of_weight(code, kind, max_weight, budget)
    return None if v is None else weight(v)


def min_distance(code: CssCode, max_weight: int, budget: int = DISTANCE_BUDGET) -> int | None:
    """Smaller of the X and Z distances, searched up to ``max_weight``; None if both exceed it."""
    found = [w for w in (brute_distance(code, k, max_weight, budget) for k in ("X", "Z")) if w is not None]
    return min(found) if found else None
