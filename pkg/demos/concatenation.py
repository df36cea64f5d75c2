"""Concatenate the d=2 stack with [[8,3,2]] and certify distance 4."""

from __future__ import annotations

from surfstack import build_stack
from surfstack.codealg import code_k, rank_gf2
from surfstack.concat832 import concatenate, verify_832_gates, verify_colorcode_distance


def main() -> None:
    print(verify_832_gates().summary())
    cc = concatenate(build_stack(2))
    code = cc.code
    print(f"n={code.n}, generators={rank_gf2(code.hx) + rank_gf2(code.hz)}, k={code_k(code)}")
    print(verify_colorcode_distance(cc, 3).summary())


if __name__ == "__main__":
    main()
