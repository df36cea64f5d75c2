"""Command-line front end.

Every report is printed to stdout as one JSON line; a readable summary and
timings go to stderr, so identical commands produce identical stdout.  The exit
status is 0 iff every check passed, 1 if any failed and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import concat832, export, simkit, stack_builder, surgery, transversal
from .codealg import ResourceBudgetError
from .lattice import COLORS, InvalidDimensionError, LatticeDims
from .report import Report

SUITES = ("counts", "ccz", "cz", "fixture", "redundancy", "distance", "all")


def _dims(args) -> LatticeDims:
    if args.dims:
        try:
            dx, dy, dz = (int(v) for v in args.dims.split(","))
        except ValueError as exc:
            raise InvalidDimensionError(f"--dims expects dx,dy,dz, got {args.dims!r}") from exc
        return LatticeDims(dx, dy, dz)
    return LatticeDims.cube(args.d)


def _emit(command: str, params: dict, reports: list[Report], elapsed: dict) -> int:
    for rep in reports:
        line = {"command": command, "parameters": params, **rep.to_dict()}
        print(json.dumps(line, sort_keys=True))
    for rep in reports:
        print(rep.summary(), file=sys.stderr)
    for name, secs in elapsed.items():
        print(f"  time {name}: {secs:.2f} s", file=sys.stderr)
    return 0 if all(r.passed for r in reports) else 1


def _timed(elapsed: dict, name: str, fn, *args, **kwargs):
    t = time.perf_counter()
    out = fn(*args, **kwargs)
    elapsed[name] = time.perf_counter() - t
    return out


def cmd_build(args) -> int:
    dims = _dims(args)
    elapsed: dict = {}
    stack = _timed(elapsed, "build", stack_builder.build_stack, dims)
    out = Path(args.out or f"stack-{dims.dx}x{dims.dy}x{dims.dz}")
    out.mkdir(parents=True, exist_ok=True)
    rep = Report("build", {"dims": [dims.dx, dims.dy, dims.dz]})
    files = []
    if args.format in ("json", "both"):
        export.dump_json(export.stack_to_dict(stack), out / "stack.json")
        export.dump_json(export.lattice_to_dict(stack.lattice), out / "lattice.json")
        files += ["stack.json", "lattice.json"]
    if args.format in ("alist", "both"):
        for c in COLORS:
            for kind, m in (("hx", stack.codes[c].hx), ("hz", stack.codes[c].hz)):
                export.write_alist(m, out / f"SC_{c}_{kind}.alist")
                files.append(f"SC_{c}_{kind}.alist")
    for c in COLORS:
        code = stack.codes[c]
        rep.add(f"SC_{c} is [[{code.n},{code.k}]]", code.k == 1, n=code.n, k=code.k)
    rep.add("files written", True, directory=str(out), files=files)
    return _emit("build", {"dims": [dims.dx, dims.dy, dims.dz], "format": args.format}, [rep], elapsed)


def _ccz_reports(stack, samples, seed, elapsed):
    try:
        table = _timed(elapsed, "ccz", transversal.ccz_phase_exhaustive, stack)
    except ValueError:
        table = _timed(elapsed, "ccz", transversal.ccz_phase_sampled, stack, samples, seed)
    return [transversal.ccz_report(table), transversal.overlap_report(stack),
            transversal.corner_structure_check(stack)]


def _cz_reports(stack, samples, seed, elapsed):
    out = []
    for pair in (("r", "g"), ("r", "b"), ("g", "b")):
        try:
            table = transversal.cz_phase_check(stack, pair)
        except ValueError:
            table = transversal.cz_phase_check(stack, pair, samples=samples, seed=seed)
        out.append(transversal.cz_report(table, pair))
    return out


def _fixture_report(stack) -> Report:
    rep = Report("d=2 reference groups")
    if stack.lattice.dims != LatticeDims.cube(2):
        rep.add("reference groups exist only for d=2", False)
        return rep
    try:
        perm = stack_builder.match_fixture_d2(stack)
        rep.add("generated stack matches the reference groups", True, permutation=perm)
    except stack_builder.FixtureMismatchError as exc:
        rep.add("generated stack matches the reference groups", False, error=str(exc))
    return rep


def cmd_verify(args) -> int:
    dims = _dims(args)
    elapsed: dict = {}
    stack = _timed(elapsed, "build", stack_builder.build_stack, dims)
    suites = SUITES[:-1] if args.suite == "all" else (args.suite,)
    if args.suite == "all" and dims != LatticeDims.cube(2):
        suites = tuple(s for s in suites if s not in ("fixture", "distance"))
    reports: list[Report] = []
    for suite in suites:
        t = time.perf_counter()
        if suite == "counts":
            reports.append(stack_builder.verify_counts(stack))
        elif suite == "ccz":
            reports += _ccz_reports(stack, args.samples, args.seed, elapsed)
        elif suite == "cz":
            reports += _cz_reports(stack, args.samples, args.seed, elapsed)
        elif suite == "fixture":
            reports.append(_fixture_report(stack))
        elif suite == "redundancy":
            reports.append(stack_builder.redundancy_identities(stack))
        elif suite == "distance":
            reports.append(stack_builder.distance_report())
        elapsed[suite] = time.perf_counter() - t
    params = {"dims": [dims.dx, dims.dy, dims.dz], "suite": args.suite, "samples": args.samples,
              "seed": args.seed}
    return _emit("verify", params, reports, elapsed)


def cmd_surgery(args) -> int:
    elapsed: dict = {}
    d = args.d
    if args.axis == "2d3d":
        color = args.color
        stack = stack_builder.build_stack(d)
        try:
            m = _timed(elapsed, "merge", surgery.merge_2d3d, stack_builder.build_2d(d), stack, color)
        except surgery.SurgeryError:
            m = _timed(elapsed, "merge", surgery.merge_2d3d, stack_builder.build_2d(d, flip=True), stack, color)
        reports = [m.report]
        summary = f"{len(m.new_qubits)} ancillas, {len(m.new_z_gens[color])} new Z generators"
    else:
        a, b = stack_builder.build_stack(d), stack_builder.build_stack(d)
        m = _timed(elapsed, "merge", surgery.merge_stacks, a, b, args.axis)
        rt = _timed(elapsed, "split", surgery.round_trip_report, m)
        reports = [m.report, rt]
        grow = next(c for c in m.report.checks if c.name.startswith(f"SC_{args.axis}: independent"))
        summary = f"{len(m.new_qubits)} new qubits, {grow.details['new_independent']} new generators"
    if args.out:
        export.dump_json(export.merge_to_dict(m), args.out)
    print(summary, file=sys.stderr)
    return _emit("surgery", {"d": d, "axis": args.axis, "color": args.color}, reports, elapsed)


def cmd_concat(args) -> int:
    elapsed: dict = {}
    stack = stack_builder.build_stack(args.d)
    cc = _timed(elapsed, "concatenate", concat832.concatenate, stack)
    rep = _timed(elapsed, "distance scan", concat832.verify_colorcode_distance, cc, args.max_weight)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if args.format in ("json", "both"):
            export.dump_json(export.code_to_dict(cc.code), out / "colour_code.json")
        if args.format in ("alist", "both"):
            export.write_alist(cc.code.hx, out / "colour_code_hx.alist")
            export.write_alist(cc.code.hz, out / "colour_code_hz.alist")
    return _emit("concat", {"d": args.d, "max_weight": args.max_weight}, [rep], elapsed)


def cmd_circuits(args) -> int:
    elapsed: dict = {}
    a, b = stack_builder.build_2d(2), stack_builder.build_2d(2, flip=True)
    reports = [
        _timed(elapsed, "teleported H", simkit.verify_teleported_h),
        _timed(elapsed, "CCZ injection", simkit.verify_ccz_injection),
        _timed(elapsed, "gate identities", simkit.verify_gate_identities),
        _timed(elapsed, "[[8,3,2]]", concat832.verify_832_gates),
        _timed(elapsed, "Z merge", surgery.simulate_merge_mapping, a, b, "Z", seed=args.seed),
        _timed(elapsed, "X merge", surgery.simulate_merge_mapping, a, b, "X", seed=args.seed),
    ]
    return _emit("circuits", {"seed": args.seed}, reports, elapsed)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="surfstack", description="Build and verify stacks of 3D surface codes.")
    sub = p.add_subparsers(dest="command", required=True)

    def lattice_args(sp):
        sp.add_argument("--d", type=int, default=2, help="distance of a cubic stack")
        sp.add_argument("--dims", help="anisotropic extents dx,dy,dz (overrides --d)")

    sp = sub.add_parser("build", help="write stack JSON and alist check matrices")
    lattice_args(sp)
    sp.add_argument("--out", help="output directory")
    sp.add_argument("--format", choices=("alist", "json", "both"), default="both")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("verify", help="run counting, transversal-gate and fixture checks")
    lattice_args(sp)
    sp.add_argument("--suite", choices=SUITES, default="all")
    sp.add_argument("--samples", type=int, default=transversal.DEFAULT_SAMPLES)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("surgery", help="merge two stacks (or a sheet and a stack) and check the result")
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--axis", choices=("r", "g", "b", "2d3d"), default="g")
    sp.add_argument("--color", choices=("r", "b"), default="b", help="3D code joined by --axis 2d3d")
    sp.add_argument("--out", help="write the merge report JSON here")
    sp.set_defaults(func=cmd_surgery)

    sp = sub.add_parser("concat", help="concatenate with [[8,3,2]] and scan for low-weight logicals")
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--max-weight", type=int, default=3)
    sp.add_argument("--out", help="output directory for the colour code")
    sp.add_argument("--format", choices=("alist", "json", "both"), default="both")
    sp.set_defaults(func=cmd_concat)

    sp = sub.add_parser("circuits", help="state-vector checks of the small circuits and merge maps")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_circuits)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidDimensionError, stack_builder.ConstructionError, surgery.SurgeryError, ResourceBudgetError,
            simkit.QubitBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
