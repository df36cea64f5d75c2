from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfstack.codealg import CssCode, RowSpace, code_k, rank_gf2, span_equal
from surfstack.lattice import COLORS, LatticeDims
from surfstack.stack_builder import (FixtureMismatchError, build_2d, build_stack, distance_report,
                                     expected_ranks, fixture_stack_d2, match_codes, match_fixture_d2,
                                     permute_vector, redundancy_identities, verify_counts)

# Reference label L (1-based) maps to generated vertex FIXTURE_PERM[L - 1].
FIXTURE_PERM = [8, 10, 9, 11, 4, 5, 7, 6, 0, 2, 1, 3]


@pytest.mark.parametrize("d", [2, 3, 4])
def test_counts_match_closed_forms(d):
    rep = verify_counts(build_stack(d))
    assert rep.passed, rep.summary()


def test_known_rank_splits():
    assert expected_ranks(3) == {"g": (18, 32), "r": (12, 38), "b": (12, 38)}
    assert expected_ranks(4) == {"g": (48, 87), "r": (30, 105), "b": (30, 105)}


def test_canonical_logicals_pair_up():
    stack = build_stack(3)
    for c in COLORS:
        assert stack.codes[c].check_logicals()


def test_fixture_matches_under_recorded_permutation():
    stack = build_stack(2)
    perm = match_fixture_d2(stack)
    assert perm == FIXTURE_PERM
    d2 = stack.lattice.vertices
    assert [d2[i] for i in perm[:4]] == [(0, 0, 3), (0, 2, 3), (2, 0, 3), (2, 2, 3)]


def test_fixture_mismatch_is_detected():
    stack = build_stack(2)
    codes = dict(stack.codes)
    g = codes["g"]
    extra = np.zeros((1, g.n), dtype=np.uint8)
    extra[0, 0] = 1  # a weight-1 Z check changes the group
    codes["g"] = CssCode(g.n, g.hx, np.vstack([g.hz, extra]), g.logical_x, g.logical_z)
    with pytest.raises((FixtureMismatchError, ValueError)):
        match_fixture_d2(codes)


def test_matching_a_shuffled_copy():
    ref = fixture_stack_d2()
    rng = np.random.default_rng(5)
    shuffle = rng.permutation(12)
    target = {c: CssCode(12, permute_vector(code.hx, list(shuffle)), permute_vector(code.hz, list(shuffle)))
              for c, code in ref.items()}
    perm = match_codes(ref, target)
    for c in COLORS:
        assert span_equal(permute_vector(ref[c].hx, perm), target[c].hx)
        assert span_equal(permute_vector(ref[c].hz, perm), target[c].hz)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_redundancy_explains_rank_deficit(d):
    rep = redundancy_identities(build_stack(d))
    assert rep.passed, rep.summary()


def test_redundancy_deficits_at_d3():
    rep = redundancy_identities(build_stack(3))
    deficits = {c.name[3]: c.details["deficit"] for c in rep.checks}
    assert deficits == {"r": 10, "g": 12, "b": 10}


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("picture", ["rotated", "kitaev"])
def test_2d_codes(d, picture):
    code = build_2d(d, picture)
    assert code.k == 1 and code.check_logicals()
    assert code.n == (d * d if picture == "rotated" else d * d + (d - 1) ** 2)


def test_flipped_sheet_is_a_valid_code():
    code = build_2d(2, flip=True)
    assert code.k == 1 and code.check_logicals()


def test_build_2d_rejects_small_distance():
    with pytest.raises(ValueError):
        build_2d(1)


def test_distance_report():
    assert distance_report().passed


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(2, 4))
def test_anisotropic_stacks_encode_one_qubit_each(dx, dy, dz):
    stack = build_stack(LatticeDims(dx, dy, dz))
    for c in COLORS:
        code = stack.codes[c]
        assert code.commutes() and code_k(code) == 1
        assert rank_gf2(code.hx) + rank_gf2(code.hz) == stack.n - 1
        assert not RowSpace(code.hz).contains(stack.canonical_z[c])
