"""Build small stacks, print their parameters and check the transversal CCZ phases."""

from __future__ import annotations

from itertools import product

from surfstack import build_stack
from surfstack.codealg import code_k, rank_gf2
from surfstack.transversal import ccz_phase_exhaustive, cz_phase_check


def main() -> None:
    for d in (2, 3, 4):
        stack = build_stack(d)
        print(f"d={d}: n={stack.n}")
        for c, code in stack.codes.items():
            print(f"  SC_{c}: {rank_gf2(code.hx)} X + {rank_gf2(code.hz)} Z generators, k={code_k(code)}")

    stack = build_stack(2)
    table = ccz_phase_exhaustive(stack)
    print("CCZ phases at d=2 (r, g, b bits -> sign):")
    for label in product((0, 1), repeat=3):
        print(f"  {label} -> {table.phases[label]:+d}")
    cz = cz_phase_check(stack, ("r", "g"))
    print("CZ(r, g) phases:", {"".join(map(str, k)): v for k, v in cz.phases.items()})


if __name__ == "__main__":
    main()
