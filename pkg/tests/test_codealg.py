from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from surfstack.codealg import (CosetGroup, CssCode, InconsistentCodeError, ResourceBudgetError, RowSpace,
                               brute_distance, code_k, find_logical_of_weight, find_logicals, from_hex,
                               from_int, in_rowspan, independent_rows, inverse_gf2, min_distance, nullspace,
                               parity_lemma_check, rank_gf2, restrict_span, row_basis, rref, solve_left,
                               span_equal, to_hex, to_int)


def bit_matrices(max_rows=7, max_cols=9):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda s: arrays(np.uint8, s, elements=st.integers(0, 1)))


def test_rank_of_known_matrices():
    assert rank_gf2(np.eye(4, dtype=np.uint8)) == 4
    assert rank_gf2([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2
    assert rank_gf2(np.zeros((3, 5), dtype=np.uint8)) == 0


def test_rref_pivots_are_leading_ones():
    r, piv = rref([[0, 1, 1], [1, 1, 0], [1, 0, 1]])
    assert piv == [0, 1]
    assert r.shape[0] == 2
    for row, p in zip(r, piv):
        assert row[p] == 1 and not row[:p].any()


@given(bit_matrices())
def test_rank_equals_rank_of_transpose(m):
    assert rank_gf2(m) == rank_gf2(m.T)


@given(bit_matrices())
def test_nullspace_is_annihilated_and_has_complementary_dimension(m):
    ns = nullspace(m)
    assert ns.shape[0] == m.shape[1] - rank_gf2(m)
    assert not ((m.astype(np.int64) @ ns.T) % 2).any()


@given(bit_matrices(), st.data())
def test_solve_left_recovers_combination(m, data):
    coeff = data.draw(arrays(np.uint8, m.shape[0], elements=st.integers(0, 1)))
    v = (coeff.astype(np.int64) @ m) % 2
    x = solve_left(m, v)
    assert x is not None
    assert np.array_equal((x.astype(np.int64) @ m) % 2, v)


def test_solve_left_rejects_vector_outside_span():
    assert solve_left([[1, 1, 0]], [1, 0, 0]) is None


@given(bit_matrices(), st.data())
def test_span_is_invariant_under_row_operations(m, data):
    i = data.draw(st.integers(0, m.shape[0] - 1))
    j = data.draw(st.integers(0, m.shape[0] - 1))
    m2 = m.copy()
    if i != j:
        m2[i] ^= m2[j]
    assert span_equal(m, m2)
    assert span_equal(m, row_basis(m))


@given(bit_matrices())
def test_rowspace_contains_every_row_and_batch(m):
    rs = RowSpace(m)
    assert rs.dim == rank_gf2(m)
    assert np.all(rs.contains(m))
    assert all(in_rowspan(r, m) for r in m)


@given(bit_matrices())
def test_independent_rows_form_a_basis(m):
    idx = independent_rows(m)
    assert len(idx) == rank_gf2(m)
    assert span_equal(m[idx], m) if idx else not m.any()


@given(bit_matrices(), st.data())
def test_restrict_span_vanishes_on_chosen_columns(m, data):
    cols = data.draw(st.lists(st.integers(0, m.shape[1] - 1), unique=True, max_size=m.shape[1]))
    sub = restrict_span(m, cols)
    assert not sub[:, cols].any()
    assert all(in_rowspan(r, m) for r in sub)
    # Every span element vanishing on cols lies in the restricted span.
    for coeff in np.eye(m.shape[0], dtype=np.uint8):
        v = (coeff.astype(np.int64) @ m) % 2
        if not v[cols].any():
            assert in_rowspan(v, sub) if sub.shape[0] else not v.any()


def test_inverse_gf2():
    a = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]], dtype=np.uint8)
    inv = inverse_gf2(a)
    assert np.array_equal((a.astype(np.int64) @ inv) % 2, np.eye(3))
    with pytest.raises(ValueError):
        inverse_gf2([[1, 1], [1, 1]])


@given(arrays(np.uint8, st.integers(1, 70), elements=st.integers(0, 1)))
def test_hex_round_trip_with_lsb_first(v):
    assert np.array_equal(from_hex(to_hex(v), v.size), v)
    assert np.array_equal(from_int(to_int(v), v.size), v)


def test_bit_zero_is_least_significant():
    assert to_hex([1, 0, 0, 0, 1]) == "11"
    assert to_int([0, 1]) == 2


@given(st.lists(arrays(np.uint8, 10, elements=st.integers(0, 1)), min_size=1, max_size=5))
def test_parity_lemma(vs):
    assert parity_lemma_check(vs)


def repetition_like_code():
    # [[4,2,2]]: X and Z checks are the all-ones vector.
    return CssCode(4, [[1, 1, 1, 1]], [[1, 1, 1, 1]])


def test_css_code_finds_paired_logicals():
    code = repetition_like_code()
    assert code.k == 2
    assert code.check_logicals()


def test_inconsistent_code_raises():
    with pytest.raises(InconsistentCodeError):
        code_k(CssCode(3, [[1, 1, 0]], [[1, 0, 0]]))


def test_find_logicals_pairing_is_identity():
    lx, lz = find_logicals([[1, 1, 1, 1]], [[1, 1, 1, 1]])
    assert np.array_equal((lx.astype(np.int64) @ lz.T) % 2, np.eye(2))


def test_distance_search():
    code = repetition_like_code()
    assert brute_distance(code, "X", 3) == 2
    assert min_distance(code, 3) == 2
    five = CssCode(5, np.zeros((0, 5)), [[1, 1, 0, 0, 0], [0, 1, 1, 0, 0], [0, 0, 1, 1, 0], [0, 0, 0, 1, 1]])
    assert brute_distance(five, "X", 5) == 5
    assert brute_distance(five, "Z", 5) == 1
    assert find_logical_of_weight(five, "X", 4) is None


def test_distance_budget_is_enforced():
    code = CssCode(40, np.zeros((0, 40)), np.zeros((0, 40)))
    with pytest.raises(ResourceBudgetError):
        find_logical_of_weight(code, "X", 20, budget=1000)


@settings(max_examples=30)
@given(st.integers(0, 4), st.integers(0, 2**31 - 1))
def test_coset_group_elements_and_samples_are_members(k, seed):
    rng = np.random.default_rng(seed)
    basis = row_basis(rng.integers(0, 2, size=(k, 8), dtype=np.uint8)) if k else np.zeros((0, 8), np.uint8)
    shift = rng.integers(0, 2, size=8, dtype=np.uint8)
    g = CosetGroup(basis, shift)
    elems = g.elements()
    assert elems.shape[0] == g.size == 2 ** basis.shape[0]
    assert len({e.tobytes() for e in elems}) == g.size
    span = RowSpace(basis, 8)
    assert np.all(span.contains(elems ^ shift))
    assert np.all(span.contains(g.sample(16, rng) ^ shift))
