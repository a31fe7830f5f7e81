"""
Command-line pipeline driver.

Subcommands build the lattices, compile pump spectra, run the Gaussian
simulations and write deterministic text outputs suitable for regression
diffing.  Exit codes: 0 success, 2 configuration error, 3 validation
failure, 4 internal invariant breach.  Errors print exactly one
machine-parsable line on stderr: error: code=<n> cause=<type> detail="...".
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import gaussian, hankel, lattice, verify

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_INTERNAL = 4


def _parse_int_list(text: str):
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise lattice.LatticeError(f"expected comma-separated integers, got {text!r}")


def _parse_float_list(text: str):
    try:
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise lattice.LatticeError(f"expected comma-separated numbers, got {text!r}")


def _write(outdir, name, content, emitted):
    if outdir is None:
        return
    path = Path(outdir)
    path.mkdir(parents=True, exist_ok=True)
    target = path / name
    target.write_text(content)
    emitted.append(str(target))


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# ============================================================
# Commands
# ============================================================

def _lattice_pipeline(M: int):
    S = lattice.build_torus_supergraph(M)
    A = lattice.expand(S)
    ortho = lattice.check_orthogonal(A)
    colors = lattice.bicoloring(A)
    degrees = {S.degree(i) for i in range(S.n_macro)}
    return S, A, ortho, colors, degrees


def cmd_lattice(args) -> int:
    S, A, ortho, colors, degrees = _lattice_pipeline(args.M)
    coords = lattice.coordinates(args.M)
    degree = degrees.pop() if len(degrees) == 1 else sorted(degrees)
    emitted = []
    formats = set(args.formats.split(","))
    if "triplet" in formats:
        _write(args.output_dir, f"lattice_M{args.M}.triplets",
               lattice.export_triplets(A), emitted)
        _write(args.output_dir, f"supergraph_M{args.M}.triplets",
               lattice.export_super_triplets(S), emitted)
    if "dot" in formats:
        _write(args.output_dir, f"lattice_M{args.M}.dot",
               lattice.export_dot(A), emitted)
    summary = (f"orthogonal={str(ortho.is_orthogonal).lower()} "
               f"bicolorable=true degree={degree}")
    if "report" in formats:
        lines = [summary,
                 f"n_macro={S.n_macro} block_side={S.block_side} "
                 f"physical_nodes={A.n} superedges={S.n_superedges} "
                 f"physical_edges={A.nnz // 2}",
                 f"color_counts={np.bincount(colors.colors).tolist()}",
                 "axis_convention x=P2/P3 y=P1/P0 chart=row-major-walk"]
        for axis in ("x", "y"):
            cyc = coords.axis_cycles[axis]
            lines.append(f"axis={axis} cycle_length={len(cyc)} start={cyc[:4]}")
        _write(args.output_dir, f"lattice_M{args.M}.report",
               "\n".join(lines) + "\n", emitted)
    print(summary)
    for f in emitted:
        print(f"wrote {f}")
    return EXIT_OK


def cmd_ring(args) -> int:
    S = lattice.build_ring_supergraph(args.n_macro)
    A = lattice.expand(S)
    ortho = lattice.check_orthogonal(A)
    lattice.bicoloring(A)
    emitted = []
    _write(args.output_dir, f"crown_n{args.n_macro}.triplets",
           lattice.export_triplets(A), emitted)
    _write(args.output_dir, f"ring_n{args.n_macro}.triplets",
           lattice.export_super_triplets(S), emitted)
    summary = (f"orthogonal={str(ortho.is_orthogonal).lower()} "
               f"bicolorable=true n_physical={A.n}")
    print(summary)
    for f in emitted:
        print(f"wrote {f}")
    return EXIT_OK


def cmd_pump(args) -> int:
    M = args.M
    if M % 2:
        raise lattice.LatticeError(f"M must be even, got {M}")
    if M < 6:
        raise lattice.LatticeError(
            f"pump compilation requires even M >= 6: the long zero run "
            f"t = M^2-4M-3 = {M * M - 4 * M - 3} of the 2x2 layout is "
            f"negative at M={M}")
    A = lattice.expand(lattice.build_torus_supergraph(M))
    renum = lattice.renumber_to_block_hankel(A, M)
    short = hankel.shorthand_of(renum.renumbered, block_side=2)
    spectrum = hankel.compile_pump(short)
    emitted = []
    _write(args.output_dir, f"shorthand_M{M}.txt",
           hankel.shorthand_file(short), emitted)
    _write(args.output_dir, f"pump_M{M}.txt",
           hankel.pump_file(spectrum), emitted)
    print(f"pump_lines={len(spectrum.lines)} n_qumodes={spectrum.n_qumodes} "
          f"bandwidth_span={spectrum.bandwidth_span}")
    for f in emitted:
        print(f"wrote {f}")
    return EXIT_OK


def _convention_for(A: lattice.PhysAdjacency, r: float):
    colors = lattice.bicoloring(A)
    dense = A.dense()
    state = gaussian.evolve(gaussian.EvolutionParams(dense, r))
    conv = gaussian.best_phase_convention(state, colors, dense)
    rotated = gaussian.rotate_color_class(state, colors, conv.quarter_turns)
    return colors, conv, rotated


def cmd_simulate(args) -> int:
    A = lattice.expand(lattice.build_torus_supergraph(args.M))
    emitted = []
    for r in args.squeeze_r:
        _, conv, rotated = _convention_for(A, r)
        rep = gaussian.nullifier_variances(rotated, conv.signed_target,
                                           squeeze_r=r)
        tag = f"M{args.M}_r{_fmt(r)}"
        _write(args.output_dir, f"nullifiers_{tag}.txt",
               gaussian.nullifier_table(rep), emitted)
        _write(args.output_dir, f"nullifiers_{tag}.kv",
               gaussian.nullifier_records(rep), emitted)
        print(f"r={_fmt(r)} max_variance={_fmt(rep.max_variance)} "
              f"convention=({conv.quarter_turns:+d},{conv.target_sign:+d}A)")
    for f in emitted:
        print(f"wrote {f}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    A = lattice.expand(lattice.build_torus_supergraph(args.M))
    meridians = tuple(args.meridians)
    emitted = []
    _, ideal_report = gaussian.reduce_and_cut(
        A.dense(), args.M, args.keep_layer, meridians)
    st = ideal_report.graph_stats
    print(f"ideal nodes={st.n_nodes} connected={str(st.is_connected).lower()} "
          f"max_degree={st.max_degree} cycle_rank={st.cycle_rank}")
    for r in args.squeeze_r:
        _, conv, rotated = _convention_for(A, r)
        reduced, rep = gaussian.reduce_and_cut(
            rotated, args.M, args.keep_layer, meridians,
            target=conv.signed_target, squeeze_r=r)
        eg = gaussian.effective_graph(reduced)
        target_kept = conv.signed_target[np.ix_(rep.kept_nodes, rep.kept_nodes)]
        eg_err = float(np.abs(eg.V - target_kept).max())
        tag = f"M{args.M}_r{_fmt(r)}"
        _write(args.output_dir, f"reduction_{tag}.txt",
               f"max_residual={_fmt(rep.max_residual)} "
               f"effective_graph_error={_fmt(eg_err)}\n", emitted)
        _write(args.output_dir, f"effective_graph_{tag}.txt",
               gaussian.effective_graph_dump(eg), emitted)
        print(f"r={_fmt(r)} max_residual={_fmt(rep.max_residual)} "
              f"effective_graph_error={_fmt(eg_err)}")
    for f in emitted:
        print(f"wrote {f}")
    return EXIT_OK


def cmd_scaling(args) -> int:
    rows = hankel.scaling_report(args.M_list)
    table = hankel.scaling_table(rows)
    emitted = []
    _write(args.output_dir, "scaling.txt", table, emitted)
    sys.stdout.write(table)
    for f in emitted:
        print(f"wrote {f}")
    return EXIT_OK


def cmd_verify_all(args) -> int:
    results, report, all_passed = verify.verify_all(args.M)
    emitted = []
    _write(args.output_dir, "verify_report.txt", report, emitted)
    sys.stdout.write(report)
    for f in emitted:
        print(f"wrote {f}")
    return EXIT_OK if all_passed else EXIT_VALIDATION


# ============================================================
# Parser and entry point
# ============================================================

class _Parser(argparse.ArgumentParser):
    """argparse variant whose errors surface as single-line config errors."""

    def error(self, message):
        raise lattice.LatticeError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="combcluster",
        description="Build comb cluster-state lattices, compile pump "
                    "spectra, and verify them with a Gaussian engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--output-dir", default=None,
                       help="directory for emitted files (default: no files)")

    p = sub.add_parser("lattice", help="build and validate the toroidal lattice")
    p.add_argument("--M", type=int, required=True, help="even lattice size >= 4")
    p.add_argument("--formats", default="triplet,dot,report",
                   help="comma subset of triplet,dot,report")
    add_common(p)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("ring", help="build and validate the ring supergraph")
    p.add_argument("--n-macro", type=int, required=True, dest="n_macro",
                   help="even macronode count >= 4")
    add_common(p)
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("pump", help="renumber the lattice and compile its pump")
    p.add_argument("--M", type=int, required=True, help="even lattice size >= 6")
    add_common(p)
    p.set_defaults(func=cmd_pump)

    p = sub.add_parser("simulate", help="nullifier variances at given squeezing")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--r", type=_parse_float_list, default=[1.0, 2.0],
                   dest="squeeze_r", help="comma list of squeezing parameters")
    add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reduce", help="layer measurement plus meridian cut")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--r", type=_parse_float_list, default=[1.0, 2.0],
                   dest="squeeze_r")
    p.add_argument("--keep-layer", type=int, default=0, dest="keep_layer")
    p.add_argument("--meridians", type=_parse_int_list, default=[0, 0],
                   help="x0,y0 chart lines to cut")
    add_common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("scaling", help="scaling table over lattice sizes")
    p.add_argument("--M", type=_parse_int_list, required=True, dest="M_list",
                   help="comma list of even sizes >= 6")
    add_common(p)
    p.set_defaults(func=cmd_scaling)

    for name in ("verify-all", "verify_all"):
        p = sub.add_parser(name, help="run the full verification suite")
        p.add_argument("--M", type=int, default=6)
        add_common(p)
        p.set_defaults(func=cmd_verify_all)
    return parser


def _fail(code: int, cause: str, detail: str) -> int:
    detail = detail.replace('"', "'").replace("\n", " ")
    sys.stderr.write(f'error: code={code} cause={cause} detail="{detail}"\n')
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "meridians", None) is not None \
                and len(args.meridians) != 2:
            raise lattice.LatticeError("meridians must be x0,y0")
        return args.func(args)
    except (lattice.LatticeError, gaussian.GaussianError,
            hankel.NotHankelError, hankel.PumpCompileError) as exc:
        return _fail(EXIT_CONFIG, type(exc).__name__, str(exc))
    except RuntimeError as exc:
        return _fail(EXIT_INTERNAL, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
