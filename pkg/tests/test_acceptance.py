"""End-to-end acceptance checks, one test per criterion, each timed against its limit."""

from __future__ import annotations

from itertools import product

import numpy as np

from surfstack import concat832, simkit, surgery, transversal
from surfstack.codealg import CssCode, RowSpace, code_k, min_distance, rank_gf2, span_equal
from surfstack.lattice import COLORS
from surfstack.stack_builder import build_2d, build_stack, fixture_stack_d2, match_fixture_d2, permute_vector

AMP_TOL = 1e-10


def test_01_fixture_equality(criterion):
    with criterion(1, "d=2 stack equals the reference groups under a permutation", 1):
        stack = build_stack(2)
        perm = match_fixture_d2(stack)
        assert sorted(perm) == list(range(12))
        ref = fixture_stack_d2()
        for c in COLORS:
            assert span_equal(permute_vector(ref[c].hx, perm), stack.codes[c].hx)
            assert span_equal(permute_vector(ref[c].hz, perm), stack.codes[c].hz)


def test_02_counting_formulas(criterion):
    with criterion(2, "vertex counts and rank splits for d=2..5", 30):
        for d in (2, 3, 4, 5):
            stack = build_stack(d)
            n = 3 * d**3 - 4 * d**2 + 2 * d
            assert stack.n == n
            want = {"g": (d * d * (d - 1), (d - 1) * (2 * d * d - d + 1)),
                    "r": ((d - 1) * (d * d + d) // 2, (d - 1) * (5 * d * d - 3 * d + 2) // 2)}
            want["b"] = want["r"]
            for c in COLORS:
                rx, rz = rank_gf2(stack.codes[c].hx), rank_gf2(stack.codes[c].hz)
                assert (rx, rz) == want[c], (d, c, rx, rz)
                assert rx + rz == n - 1


def test_03_ccz_exhaustive(criterion):
    with criterion(3, "d=2 CCZ phase table over all coset triples", 5):
        table = transversal.ccz_phase_exhaustive(build_stack(2))
        for label in product((0, 1), repeat=3):
            assert table.samples[label] == 1024
            assert table.phases[label] == (-1 if all(label) else 1)


def test_04_ccz_structural(criterion):
    with criterion(4, "overlap and triple-intersection conditions for d=2,3,4", 60):
        for d in (2, 3, 4):
            stack = build_stack(d)
            rep = transversal.overlap_report(stack)
            assert rep.passed, rep.summary()
            rep = transversal.corner_structure_check(stack)
            assert rep.passed, rep.summary()
            x = {c: stack.canonical_x[c] for c in COLORS}
            assert int((x["r"] & x["g"] & x["b"]).sum()) == 1


def test_05_ccz_sampled(criterion):
    with criterion(5, "d=3 CCZ with 1e5 seeded samples per basis state", 60):
        table = transversal.ccz_phase_sampled(build_stack(3), 100_000, seed=0)
        rep = transversal.ccz_report(table)
        assert rep.passed, rep.summary()
        assert all(table.samples[label] == 100_000 for label in product((0, 1), repeat=3))


def test_06_cz(criterion):
    with criterion(6, "d=2 CZ phase pattern for every colour pair", 5):
        stack = build_stack(2)
        for pair in (("r", "g"), ("r", "b"), ("g", "b")):
            table = transversal.cz_phase_check(stack, pair)
            idx = ["rgb".index(c) for c in pair]
            for label in product((0, 1), repeat=3):
                want = -1 if label[idx[0]] and label[idx[1]] else 1
                assert table.phases[label] == want, (pair, label)


def test_07_surgery(criterion):
    with criterion(7, "d=3 g-axis merge counts, k=1, measured product and round trip", 60):
        m = surgery.merge_stacks(build_stack(3), build_stack(3), "g")
        assert m.passed, m.report.summary()
        assert len(m.new_qubits) == 12
        grow = next(c for c in m.report.checks if c.name == "SC_g: independent generators grow by junction size + 1")
        assert grow.details["new_independent"] == 13
        for c in COLORS:
            assert code_k(m.merged_stack.codes[c]) == 1
        # Sum of the new X rows against X_A X_B, modulo the old X stabilizers embedded in the merged code.
        g = m.merged_stack.codes["g"]
        prod = g.hx[m.new_x_gens["g"]].sum(axis=0) % 2
        a, b = m.sources
        xx = np.zeros(m.n, dtype=np.uint8)
        xx[list(m.embed_a)] = a.canonical_x["g"]
        xx[list(m.embed_b)] ^= b.canonical_x["g"]
        old = np.zeros((a.codes["g"].hx.shape[0] + b.codes["g"].hx.shape[0], m.n), dtype=np.uint8)
        old[:a.codes["g"].hx.shape[0], list(m.embed_a)] = a.codes["g"].hx
        old[a.codes["g"].hx.shape[0]:, list(m.embed_b)] = b.codes["g"].hx
        assert RowSpace(old).contains(prod ^ xx)
        rt = surgery.round_trip_report(m)
        assert rt.passed, rt.summary()


def test_08_surgery_2d3d(criterion):
    with criterion(8, "d=3 sheet-to-stack merge: 3 ancillas, 4 Z checks, one check 3->5", 10):
        stack = build_stack(3)
        m = surgery.merge_2d3d(build_2d(3), stack, "b")
        assert m.passed, m.report.summary()
        assert len(m.new_qubits) == 3 and len(m.new_z_gens["b"]) == 4
        assert code_k(m.merged_code) == 1
        prod = m.merged_code.hz[m.new_z_gens["b"]].sum(axis=0) % 2
        assert np.array_equal(prod, m.measured_product["b"])
        assert np.array_equal(prod[:stack.n], stack.canonical_z["b"])
        grown = next(c for c in m.report.checks if c.name.startswith("boundary 3D X checks"))
        assert grown.details["weights"] == [[3, 5]]


def test_09_merge_state_mapping(criterion):
    with criterion(9, "[[4,1,2]] Z-type merge and split mappings on all branches", 5):
        rep = surgery.simulate_merge_mapping(build_2d(2), build_2d(2, flip=True), "Z", tol=AMP_TOL)
        assert rep.passed, rep.summary()


def test_10_concatenation(criterion):
    with criterion(10, "d=2 concatenation: 96 qubits, 93 generators, k=3, distance 4", 600):
        cc = concat832.concatenate(build_stack(2))
        assert cc.n == 96
        assert rank_gf2(cc.code.hx) + rank_gf2(cc.code.hz) == 93
        rep = concat832.verify_colorcode_distance(cc, 3)
        assert rep.passed, rep.summary()


def test_11_circuit_oracles(criterion):
    with criterion(11, "teleported H, encoder, T pattern and CCZ injection", 10):
        for rep in (simkit.verify_teleported_h(AMP_TOL), simkit.verify_ccz_injection(AMP_TOL),
                    concat832.verify_832_gates(AMP_TOL)):
            assert rep.passed, rep.summary()


def test_12_distances(criterion):
    with criterion(12, "brute-force distances of the small codes", 60):
        stack = build_stack(2)
        for c in COLORS:
            code = stack.codes[c]
            assert (code.n, code_k(code)) == (12, 1)
            assert min_distance(code, 3) == 2
        for code, n in ((build_2d(3), 9), (build_2d(3, "kitaev"), 13)):
            assert (code.n, code_k(code)) == (n, 1)
            assert min_distance(code, 4) == 3
        inner = concat832.code832().code
        assert isinstance(inner, CssCode) and code_k(inner) == 3
        assert min_distance(inner, 3) == 2
