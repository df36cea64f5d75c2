from __future__ import annotations

import numpy as np
import pytest

from surfstack.simkit import (KET, SINGLE, Circuit, QubitBudgetError, ZeroProbabilityBranch, apply_gate,
                              basis_state, branch_map, branches, css_basis_state, kron, load_circuit, measure,
                              pauli_expectation, pauli_measure, permute_qubits, proportional, random_state, run,
                              verify_ccz_injection, verify_gate_identities, verify_teleported_h)


def test_qubit_zero_is_most_significant():
    assert np.argmax(np.abs(basis_state([1, 0, 0]))) == 4
    assert np.allclose(kron(KET["1"], KET["0"]), basis_state([1, 0]))


def test_circuit_json_round_trip():
    c = load_circuit("ccz_injection")
    again = Circuit.from_json(c.to_json())
    assert again.to_dict() == c.to_dict()


def test_circuit_validation():
    with pytest.raises(ValueError):
        Circuit(2).add("CZ", 0, 0)
    with pytest.raises(ValueError):
        Circuit(1).add("X", 0, condition="m")
    with pytest.raises(QubitBudgetError):
        Circuit(17)


def test_measurement_probabilities():
    psi = KET["+"]
    out, bit, p = measure(psi, "MeasureZ", 0, 1, None)
    assert bit == 1 and abs(p - 0.5) < 1e-12 and np.allclose(out, KET["1"])
    with pytest.raises(ZeroProbabilityBranch):
        measure(KET["0"], "MeasureZ", 0, 1, None)


def test_seeded_run_is_reproducible():
    c = load_circuit("teleported_h")
    a = run(c, seed=4)
    b = run(c, seed=4)
    assert a.outcomes == b.outcomes and np.allclose(a.state, b.state)


def test_permute_qubits():
    psi = basis_state([1, 0, 0])
    assert np.allclose(permute_qubits(psi, [2, 0, 1]), basis_state([0, 1, 0]))


def test_verify_functions_pass():
    for rep in (verify_teleported_h(), verify_ccz_injection(), verify_gate_identities()):
        assert rep.passed, rep.summary()


def test_missing_correction_is_detected():
    c = load_circuit("teleported_h")
    broken = Circuit(c.n_qubits, [g for g in c.gates if g.condition is None], c.name, c.meta)
    maps = [branch_map(broken, [0], [1], br) for br in branches(broken)]
    assert not all(proportional(m, SINGLE["H"]) for m in maps)


def test_pauli_measure_and_css_state():
    # |00>+|11> stabilised by XX and ZZ.
    psi = css_basis_state(2, np.array([[1, 1]], dtype=np.uint8), np.zeros(2, dtype=np.uint8))
    assert abs(pauli_expectation(psi, [0, 1], "X") - 1) < 1e-12
    assert abs(pauli_expectation(psi, [0, 1], "Z") - 1) < 1e-12
    out, bit, p = pauli_measure(psi, [0, 1], "Z", outcome=0)
    assert bit == 0 and abs(p - 1) < 1e-12
    with pytest.raises(ZeroProbabilityBranch):
        pauli_measure(psi, [0, 1], "Z", outcome=1)


def test_cz_is_symmetric():
    rng = np.random.default_rng(0)
    psi = random_state(2, rng)
    assert np.allclose(apply_gate(psi, "CZ", [0, 1]), apply_gate(psi, "CZ", [1, 0]))
