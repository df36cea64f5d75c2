from __future__ import annotations

from dataclasses import replace

import pytest

from surfstack.codealg import CssCode, code_k, rank_gf2, weight
from surfstack.concat832 import (CORNERS, code832, concatenate, distance_832, verify_832_gates,
                                 verify_colorcode_distance)
from surfstack.stack_builder import build_stack


def test_inner_code_parameters():
    inner = code832()
    assert inner.code.n == 8 and code_k(inner.code) == 3
    assert inner.code.check_logicals()
    assert distance_832() == 2


def test_corner_indexing_and_parity():
    assert CORNERS[5] == (1, 0, 1)
    inner = code832()
    assert inner.vertex_parity == (0, 1, 1, 0, 1, 0, 0, 1)


def test_inner_logicals_are_faces_and_edges():
    inner = code832()
    for lab in ("ry", "gy", "by"):
        assert weight(inner.logical_x[lab]) == 4
        assert weight(inner.logical_z[lab]) == 2
        assert inner.logical_z[lab][0] == 1  # every Z edge passes through corner 000


def test_encoder_and_t_pattern():
    rep = verify_832_gates()
    assert rep.passed, rep.summary()


@pytest.fixture(scope="module")
def concat_d2():
    return concatenate(build_stack(2))


def test_concatenated_d2_parameters(concat_d2):
    code = concat_d2.code
    assert code.n == 96
    assert rank_gf2(code.hx) == 22 and rank_gf2(code.hz) == 71
    assert code_k(code) == 3
    assert sorted(concat_d2.block_map[3]) == list(range(24, 32))


def test_concatenated_d2_distance(concat_d2):
    rep = verify_colorcode_distance(concat_d2, 3)
    assert rep.passed, rep.summary()


def test_inherited_z_logicals_have_weight_four(concat_d2):
    assert {c: weight(z) for c, (_, z) in concat_d2.inherited_logicals.items()} == {"r": 4, "g": 4, "b": 4}


def test_dropping_block_checks_lowers_distance(concat_d2):
    # Without the inner Z checks of block 0, a weight-2 X error on that block becomes undetectable.
    code = concat_d2.code
    keep = [i for i, r in enumerate(code.hz) if r[8:].any()]
    broken = replace(concat_d2, code=CssCode(code.n, code.hx, code.hz[keep], label="broken"))
    rep = verify_colorcode_distance(broken, 3)
    assert not rep.passed
