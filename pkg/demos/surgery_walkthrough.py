"""Merge two stacks along each axis, split them again and join a sheet to a stack."""

from __future__ import annotations

from surfstack import build_2d, build_stack
from surfstack.surgery import merge_2d3d, merge_stacks, round_trip_report, simulate_merge_mapping


def main() -> None:
    for axis in "rgb":
        m = merge_stacks(build_stack(3), build_stack(3), axis)
        grow = next(c for c in m.report.checks if c.name == f"SC_{axis}: independent generators grow by junction size + 1")
        print(f"axis {axis}: {len(m.new_qubits)} new qubits, {grow.details['new_independent']} new generators, "
              f"merge {'ok' if m.passed else 'FAILED'}, split {'ok' if round_trip_report(m).passed else 'FAILED'}")

    m = merge_2d3d(build_2d(3), build_stack(3), "b")
    print(f"sheet to stack: {len(m.new_qubits)} ancillas, {len(m.new_z_gens['b'])} new Z checks, "
          f"grown 3D checks {m.metadata['grown_3d_checks']}")

    for kind in "ZX":
        rep = simulate_merge_mapping(build_2d(2), build_2d(2, flip=True), kind)
        print(f"{kind}-type merge/split on two [[4,1,2]] codes:", "ok" if rep.passed else rep.summary())


if __name__ == "__main__":
    main()
