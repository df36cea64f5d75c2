"""Dense statevector simulation for small circuits (at most 16 qubits).

Qubit 0 is the most significant bit of a basis-state index.  Measurements
either follow a branch selector or are sampled with a seeded generator, and
later gates may be conditioned on recorded outcomes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_QUBITS = 16
TOL = 1e-10

_S2 = 1 / np.sqrt(2)
SINGLE = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _S2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "S": np.diag([1, 1j]),
    "Sdg": np.diag([1, -1j]),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    "Tdg": np.diag([1, np.exp(-1j * np.pi / 4)]),
}
CONTROLLED = {"CX": 2, "CZ": 2, "CCZ": 3}
MEASUREMENTS = ("MeasureX", "MeasureZ")
GATE_KINDS = tuple(SINGLE) + tuple(CONTROLLED) + MEASUREMENTS


class QubitBudgetError(ValueError):
    pass


class ZeroProbabilityBranch(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    key: str | None = None        # outcome name written by a measurement
    condition: str | None = None  # outcome name gating this operation

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "targets": list(self.targets)}
        if self.key is not None:
            out["key"] = self.key
        if self.condition is not None:
            out["condition"] = self.condition
        return out


@dataclass
class Circuit:
    n_qubits: int
    gates: list[Gate] = field(default_factory=list)
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.n_qubits > MAX_QUBITS:
            raise QubitBudgetError(f"{self.n_qubits} qubits exceed the dense limit {MAX_QUBITS}")
        seen_keys: set[str] = set()
        for g in self.gates:
            if g.kind not in GATE_KINDS:
                raise ValueError(f"unknown gate kind {g.kind!r}")
            want = CONTROLLED.get(g.kind, 1)
            if len(g.targets) != want or len(set(g.targets)) != want:
                raise ValueError(f"{g.kind} needs {want} distinct targets, got {g.targets}")
            if any(not 0 <= t < self.n_qubits for t in g.targets):
                raise ValueError(f"target out of range in {g}")
            if g.condition is not None and g.condition not in seen_keys:
                raise ValueError(f"{g.kind} is conditioned on {g.condition!r} before it is measured")
            if g.kind in MEASUREMENTS:
                if g.key is None:
                    raise ValueError("measurements need a key")
                seen_keys.add(g.key)

    def add(self, kind: str, *targets: int, key: str | None = None, condition: str | None = None) -> "Circuit":
        self.gates.append(Gate(kind, tuple(targets), key, condition))
        self.validate()
        return self

    @property
    def measurement_keys(self) -> list[str]:
        return [g.key for g in self.gates if g.kind in MEASUREMENTS]

    def to_dict(self) -> dict:
        return {"name": self.name, "n_qubits": self.n_qubits, "meta": self.meta,
                "gates": [g.to_dict() for g in self.gates]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, data: Mapping) -> "Circuit":
        gates = [Gate(g["kind"], tuple(g["targets"]), g.get("key"), g.get("condition"))
                 for g in data["gates"]]
        return cls(int(data["n_qubits"]), gates, data.get("name", ""), dict(data.get("meta", {})))

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_dict(json.loads(text))


def load_circuit(name: str) -> Circuit:
    """Load a packaged circuit fixture, e.g. ``teleported_h``."""
    text = resources.files("surfstack").joinpath(f"data/circuits/{name}.json").read_text()
    return Circuit.from_json(text)


# ---------------------------------------------------------------- states

def zero_state(n: int) -> np.ndarray:
    if n > MAX_QUBITS:
        raise QubitBudgetError(f"{n} qubits exceed the dense limit {MAX_QUBITS}")
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1
    return psi


def basis_state(bits: Sequence[int]) -> np.ndarray:
    psi = zero_state(len(bits))
    psi[0] = 0
    psi[_index(bits)] = 1
    return psi


def _index(bits: Sequence[int]) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def kron(*states: np.ndarray) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for s in states:
        out = np.kron(out, s)
    return out


KET = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) * _S2,
    "-": np.array([1, -1], dtype=complex) * _S2,
    "+i": np.array([1, 1j], dtype=complex) * _S2,
    "-i": np.array([1, -1j], dtype=complex) * _S2,
}


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def canonical_phase(psi: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Rescale so that the first non-negligible amplitude is real and positive."""
    psi = np.asarray(psi, dtype=complex)
    nz = np.flatnonzero(np.abs(psi) > tol)
    if nz.size == 0:
        return psi.copy()
    a = psi[nz[0]]
    return psi * (abs(a) / a)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> bool:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < tol or nb < tol:
        return na < tol and nb < tol
    return bool(np.max(np.abs(canonical_phase(a / na) - canonical_phase(b / nb))) <= tol)


def proportional(m: np.ndarray, target: np.ndarray, tol: float = TOL) -> bool:
    """True iff m = c * target for a nonzero complex c (matrices or vectors)."""
    m, target = np.asarray(m, dtype=complex).ravel(), np.asarray(target, dtype=complex).ravel()
    return equal_up_to_phase(m, target, tol)


# ---------------------------------------------------------------- gate application

def _n_of(psi: np.ndarray) -> int:
    n = int(psi.size).bit_length() - 1
    if 1 << n != psi.size:
        raise ValueError("state length is not a power of two")
    return n


def apply_single(psi: np.ndarray, u: np.ndarray, q: int) -> np.ndarray:
    n = _n_of(psi)
    t = psi.reshape((2,) * n)
    t = np.moveaxis(np.tensordot(u, t, axes=([1], [q])), 0, q)
    return t.reshape(-1)


def _bit(n: int, q: int) -> np.ndarray:
    return (np.arange(1 << n) >> (n - 1 - q)) & 1


def apply_gate(psi: np.ndarray, kind: str, targets: Sequence[int]) -> np.ndarray:
    n = _n_of(psi)
    if kind in SINGLE:
        return apply_single(psi, SINGLE[kind], targets[0])
    if kind == "CX":
        c, t = targets
        ctrl = _bit(n, c).astype(bool)
        idx = np.arange(1 << n)
        flipped = idx ^ (1 << (n - 1 - t))
        out = psi.copy()
        out[ctrl] = psi[flipped[ctrl]]
        return out
    if kind in ("CZ", "CCZ"):
        mask = np.ones(1 << n, dtype=bool)
        for q in targets:
            mask &= _bit(n, q).astype(bool)
        out = psi.copy()
        out[mask] *= -1
        return out
    raise ValueError(f"not a unitary gate: {kind}")


def measure(psi: np.ndarray, kind: str, q: int, outcome: int | None, rng: np.random.Generator | None,
            renormalize: bool = True) -> tuple[np.ndarray, int, float]:
    """Single-qubit X or Z measurement; returns (post state, outcome, probability)."""
    n = _n_of(psi)
    if kind == "MeasureX":
        psi = apply_single(psi, SINGLE["H"], q)
    bits = _bit(n, q)
    norm2 = float(np.vdot(psi, psi).real)
    p1 = float(np.sum(np.abs(psi[bits == 1]) ** 2)) / norm2 if norm2 > 0 else 0.0
    if outcome is None:
        if rng is None:
            raise ValueError("either an outcome or a random generator is required")
        outcome = int(rng.random() < p1)
    prob = p1 if outcome else 1 - p1
    if prob < TOL and renormalize:
        raise ZeroProbabilityBranch(f"outcome {outcome} on qubit {q} has probability {prob:.3g}")
    out = np.where(bits == outcome, psi, 0)
    if renormalize:
        out = out / np.linalg.norm(out)
    if kind == "MeasureX":
        out = apply_single(out, SINGLE["H"], q)
    return out, outcome, prob


@dataclass
class RunResult:
    state: np.ndarray
    outcomes: dict
    probability: float


def run(circuit: Circuit, state: np.ndarray | None = None,
        branch: Mapping[str, int] | Sequence[int] | None = None, seed: int | None = None,
        renormalize: bool = True) -> RunResult:
    """Apply the circuit.  ``branch`` fixes measurement outcomes (by key or in order);
    otherwise outcomes are sampled with ``seed``."""
    n = circuit.n_qubits
    psi = zero_state(n) if state is None else np.asarray(state, dtype=complex).copy()
    if psi.size != 1 << n:
        raise ValueError("state size does not match the circuit")
    keys = circuit.measurement_keys
    if branch is not None and not isinstance(branch, Mapping):
        branch = dict(zip(keys, branch))
    rng = np.random.default_rng(seed) if branch is None else None
    outcomes: dict[str, int] = {}
    prob = 1.0
    for g in circuit.gates:
        if g.condition is not None and not outcomes[g.condition]:
            continue
        if g.kind in MEASUREMENTS:
            want = None if branch is None else int(branch[g.key])
            psi, bit, p = measure(psi, g.kind, g.targets[0], want, rng, renormalize)
            outcomes[g.key] = bit
            prob *= p
        else:
            psi = apply_gate(psi, g.kind, g.targets)
            if renormalize and abs(np.linalg.norm(psi) - 1) > TOL:
                raise AssertionError("norm drift after unitary gate")
    return RunResult(psi, outcomes, prob)


def branches(circuit: Circuit) -> list[dict]:
    keys = circuit.measurement_keys
    return [dict(zip(keys, bits)) for bits in product((0, 1), repeat=len(keys))]


def project_out(psi: np.ndarray, fixed: Mapping[int, np.ndarray]) -> np.ndarray:
    """Contract the given qubits with single-qubit bras; returns the remaining register."""
    n = _n_of(psi)
    t = psi.reshape((2,) * n)
    for q in sorted(fixed, reverse=True):
        t = np.tensordot(np.conj(fixed[q]), t, axes=([0], [q]))
    return t.reshape(-1)


def permute_qubits(psi: np.ndarray, order: Sequence[int]) -> np.ndarray:
    """Reorder qubits so that new qubit i is old qubit order[i]."""
    n = _n_of(psi)
    return np.transpose(psi.reshape((2,) * n), order).reshape(-1)


def load_inputs(n: int, inputs: Mapping[int, np.ndarray]) -> np.ndarray:
    """Product state with the given single-qubit kets and |0> elsewhere."""
    return kron(*[inputs.get(q, KET["0"]) for q in range(n)])


def branch_map(circuit: Circuit, in_qubits: Sequence[int], out_qubits: Sequence[int],
               branch: Mapping[str, int]) -> np.ndarray:
    """Linear map from the input register to the output register on one branch.

    Input qubits are loaded with computational basis states (others |0>).  After
    the run, every qubit outside ``out_qubits`` must be in a known single-qubit
    state (set by its last measurement and any later single-qubit gates); it is
    contracted with that state.  The result is unnormalized, so relative phases
    between columns are meaningful.
    """
    n = circuit.n_qubits
    k_in, k_out = len(in_qubits), len(out_qubits)
    m = np.zeros((1 << k_out, 1 << k_in), dtype=complex)
    for col, bits in enumerate(product((0, 1), repeat=k_in)):
        kets = {q: KET[str(b)] for q, b in zip(in_qubits, bits)}
        psi = load_inputs(n, kets)
        res = run(circuit, psi, branch, renormalize=False)
        known = {q: kets.get(q, KET["0"]) for q in range(n)}
        for g in circuit.gates:
            if g.condition is not None and not res.outcomes[g.condition]:
                continue
            q = g.targets[0]
            if g.kind in MEASUREMENTS:
                known[q] = KET[("01" if g.kind == "MeasureZ" else "+-")[res.outcomes[g.key]]]
            elif g.kind in SINGLE:
                if q in known:
                    known[q] = SINGLE[g.kind] @ known[q]
            else:
                for t in g.targets:
                    known.pop(t, None)
        rest = [q for q in range(n) if q not in out_qubits]
        missing = [q for q in rest if q not in known]
        if missing:
            raise ValueError(f"qubits {missing} end entangled; list them as outputs")
        out = project_out(res.state, {q: known[q] for q in rest})
        # project_out keeps the remaining qubits in ascending order.
        remaining = sorted(out_qubits)
        out = permute_qubits(out, [remaining.index(q) for q in out_qubits])
        m[:, col] = out
    return m


# ---------------------------------------------------------------- Pauli measurements on code states

def pauli_measure(psi: np.ndarray, support: Iterable[int], kind: str, outcome: int | None = None,
                  rng: np.random.Generator | None = None) -> tuple[np.ndarray, int, float]:
    """Projectively measure X_S or Z_S (S = support); outcome 1 means eigenvalue -1."""
    n = _n_of(psi)
    support = list(support)
    if kind == "X":
        for q in support:
            psi = apply_single(psi, SINGLE["H"], q)
    parity = np.zeros(1 << n, dtype=np.int64)
    for q in support:
        parity ^= _bit(n, q)
    p1 = float(np.sum(np.abs(psi[parity == 1]) ** 2))
    if outcome is None:
        outcome = int(rng.random() < p1)
    prob = p1 if outcome else 1 - p1
    if prob < TOL:
        raise ZeroProbabilityBranch(f"{kind}-parity outcome {outcome} has probability {prob:.3g}")
    out = np.where(parity == outcome, psi, 0)
    out = out / np.linalg.norm(out)
    if kind == "X":
        for q in support:
            out = apply_single(out, SINGLE["H"], q)
    return out, outcome, prob


def apply_pauli(psi: np.ndarray, support: Iterable[int], kind: str) -> np.ndarray:
    for q in support:
        psi = apply_single(psi, SINGLE[kind], q)
    return psi


def pauli_expectation(psi: np.ndarray, support: Iterable[int], kind: str) -> float:
    return float(np.vdot(psi, apply_pauli(psi, support, kind)).real)


def css_basis_state(n: int, x_generators: np.ndarray, offset: np.ndarray) -> np.ndarray:
    """Uniform superposition over offset + rowspan(x_generators) as computational states."""
    from .codealg import CosetGroup, row_basis

    elems = CosetGroup(row_basis(x_generators) if len(x_generators) else np.zeros((0, n), np.uint8),
                       offset).elements()
    psi = np.zeros(1 << n, dtype=complex)
    weights = 1 << np.arange(n - 1, -1, -1)
    psi[elems.astype(np.int64) @ weights] = 1
    return psi / np.linalg.norm(psi)


# ---------------------------------------------------------------- circuit identities

def _report(name):
    from .report import Report

    return Report(name)


def verify_teleported_h(tol: float = TOL):
    """One-bit teleportation through CZ applies H; chained transfers compose as expected."""
    rep = _report("teleported H")
    c = load_circuit("teleported_h")
    h = SINGLE["H"]
    for br in branches(c):
        m = branch_map(c, [0], [1], br)
        rep.add(f"branch {br}: map is H", proportional(m, h, tol), branch=br)
    rng = np.random.default_rng(7)
    inputs = dict(KET)
    inputs["random"] = random_state(1, rng)
    for name, ket in inputs.items():
        for br in branches(c):
            res = run(c, load_inputs(2, {0: ket}), br)
            post = KET[("+-")[res.outcomes["m"]]]
            out = project_out(res.state, {0: post})
            rep.add(f"input {name} branch {br['m']} gives H|psi>", equal_up_to_phase(out, h @ ket, tol))
    for name, expected in (("transfer_twice", np.eye(2)), ("transfer_three_times", h)):
        chain = load_circuit(name)
        out_q = chain.meta["output"]
        ok = all(proportional(branch_map(chain, [0], [out_q], br), expected, tol)
                 for br in branches(chain))
        rep.add(f"{name}: every branch acts as {'I' if expected is not h else 'H'}", ok,
                branches=len(branches(chain)))
    return rep


def ccz_matrix(k: int = 3) -> np.ndarray:
    m = np.eye(1 << k, dtype=complex)
    m[-1, -1] = -1
    return m


def verify_ccz_injection(tol: float = TOL):
    """Consuming a |CCZ> resource with the recorded corrections implements CCZ."""
    rep = _report("CCZ injection")
    c = load_circuit("ccz_injection")
    ins, outs = c.meta["inputs"], c.meta["outputs"]
    target = ccz_matrix()
    for br in branches(c):
        m = branch_map(c, ins, outs, br)
        rep.add(f"branch {''.join(str(br[k]) for k in sorted(br))}: map is CCZ",
                proportional(m, target, tol))
    rng = np.random.default_rng(11)
    ghz = (kron(KET["0"], KET["0"], KET["0"]) + kron(KET["1"], KET["1"], KET["1"])) * _S2
    cases = {"|111>": kron(KET["1"], KET["1"], KET["1"]), "|000>": kron(KET["0"], KET["0"], KET["0"]),
             "GHZ": ghz, "random": random_state(3, rng)}
    for name, vec in cases.items():
        ok = True
        for br in branches(c):
            m = branch_map(c, ins, outs, br)
            ok &= equal_up_to_phase(m @ vec, target @ vec, tol)
        rep.add(f"input {name}: output is CCZ|input> on all branches", ok)
    # Relative sign of |111> against |000> is visible in the unnormalized branch map.
    m = branch_map(c, ins, outs, branches(c)[0])
    rep.add("|111> picks up -1 relative to |000>", abs(m[7, 7] / m[0, 0] + 1) < tol)
    return rep


def verify_gate_identities(tol: float = TOL):
    rep = _report("gate identities")
    rng = np.random.default_rng(3)
    for _ in range(4):
        psi = random_state(2, rng)
        a = apply_gate(apply_gate(apply_gate(psi, "H", [1]), "CX", [0, 1]), "H", [1])
        b = apply_gate(psi, "CZ", [0, 1])
        if np.max(np.abs(a - b)) > tol:
            rep.add("H_t CX H_t = CZ", False)
            return rep
    rep.add("H_t CX H_t = CZ", True)
    return rep
