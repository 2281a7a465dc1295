"""Command-line front end.

Exit codes: 0 success, 2 some certificate unverified, 3 a check failed,
64 unparsable input, 65 invalid input, 70 computation error, 74 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import io
from .errors import ComputeError, ConleyFormsError, ParseError, ValidationError
from .order_core import ji_poset_of, label_key

EXIT_OK, EXIT_UNVERIFIED, EXIT_FAIL = 0, 2, 3
EXIT_PARSE, EXIT_INVALID, EXIT_COMPUTE, EXIT_IO = 64, 65, 70, 74


def _emit(args, payload, dot: str | None = None) -> None:
    fmt = args.format or getattr(args, "default_format", "json")
    if fmt == "dot":
        if dot is None:
            raise ValidationError("this command has no DOT output")
        text = dot
    else:
        text = io.dumps(payload)
    if args.out:
        io.write_text(args.out, text)
    else:
        sys.stdout.write(text)


# subcommands ---------------------------------------------------------------

def cmd_lattice_birkhoff(args) -> int:
    from .order_core import downset_lattice

    L = downset_lattice(io.poset_from_json(io.load_json(args.poset)))
    _emit(args, io.lattice_to_json(L), io.lattice_dot(L))
    return EXIT_OK


def cmd_lattice_ji(args) -> int:
    L = io.lattice_from_json(io.load_json(args.lattice))
    P = ji_poset_of(L)
    nodes = [label_key(x) for x in P.elements]
    edges = [(nodes[i], nodes[j]) for i, j in P.covers()]
    _emit(args, io.poset_to_json(P), io.hasse_dot("join_irreducibles", nodes, edges))
    return EXIT_OK


def cmd_forms_check(args) -> int:
    from .forms import check_extra_properties, check_form_axioms

    L = io.lattice_from_json(io.load_json(args.lattice))
    d = io.load_json(args.form)
    f = io.form_from_json(L, d)
    ax = check_form_axioms(f, seed=args.seed)
    atoms = d["target"].get("atoms") if d["target"].get("kind") == "sets" else None
    out = io.form_to_json(f, ax, atoms)
    if ax.conley:
        out["extra_properties"] = dataclasses.asdict(check_extra_properties(f))
    _emit(args, out)
    return EXIT_OK if ax.conley else EXIT_FAIL


def cmd_dynamics_attractors(args) -> int:
    from .dynamics import attractor_lattice, repeller_lattice

    F = io.relation_from_json(io.load_json(args.relation))
    L = repeller_lattice(F) if args.repellers else attractor_lattice(F)

    def name(a):
        return io.subset_name(F, L.label(a))

    graph = "repellers" if args.repellers else "attractors"
    _emit(args, io.lattice_to_json(L, name), io.lattice_dot(L, name, graph))
    return EXIT_OK


def _family(F, path):
    from .dynamics import attractor_lattice

    if path is None:
        L = attractor_lattice(F)
        return [L.label(a) for a in L.elements]
    return io.family_from_json(F, io.load_json(path))


def cmd_dynamics_morse(args) -> int:
    from .dynamics import morse_representation, verify_morse_representation

    F = io.relation_from_json(io.load_json(args.relation))
    M = morse_representation(F, _family(F, args.sublattice))
    ok, diag = verify_morse_representation(F, M)
    out = io.morse_to_json(M)
    out["verified"], out["diagnostics"] = ok, list(diag)
    _emit(args, out, io.morse_dot(M))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_tessellate(args) -> int:
    from .pipeline import morse_tessellation

    F = io.relation_from_json(io.load_json(args.relation))
    T = morse_tessellation(F, _family(F, args.sublattice))
    _emit(args, io.tessellation_to_json(T), io.tessellation_dot(T))
    return EXIT_OK


def write_pipeline_artifacts(result, out: Path, status: str) -> None:
    from .report import plot_pipeline

    out.mkdir(parents=True, exist_ok=True)
    tmd = result.decomposition
    io.write_text(out / "relation.json", io.dumps(io.relation_to_json(result.relation)))
    io.write_text(out / "morse_graph.dot", io.morse_dot(tmd.morse))
    io.write_text(out / "tessellation.dot", io.tessellation_dot(tmd.tessellation))
    cert = result.report.as_dict()
    cert["status"] = status
    cert["grid"] = io.grid_to_json(result.approximation.grid)
    cert["closure"] = result.relation.is_transitive() and result.relation.is_reflexive()
    io.write_text(out / "certificates.json", io.dumps(cert))
    plot_pipeline(result, out / "pipeline.png")


_STATUS_EXIT = {"PASS": EXIT_OK, "PASS-BY-MTCHAR1": EXIT_OK, "UNVERIFIED": EXIT_UNVERIFIED}


def cmd_pipeline_run(args) -> int:
    from .pipeline import pipeline_status, run_pipeline

    f = io.map_from_json(io.load_json(args.map))
    grid = io.grid_from_json(io.load_json(args.grid))
    oracle = None
    if args.omega_oracle:
        oracle = io.oracle_from_json(io.load_json(args.omega_oracle), grid.space)
    result = run_pipeline(f, grid, closure=args.closure, omega_oracle=oracle)
    status = pipeline_status(result, oracle is not None)
    write_pipeline_artifacts(result, Path(args.out), status)
    print(status)
    return _STATUS_EXIT.get(status, EXIT_FAIL)


def cmd_selftest(args) -> int:
    from .acceptance import fix_f3, half_map, half_oracle, run_all
    from .dynamics import attractor_lattice, morse_representation
    from .pipeline import pipeline_status, run_pipeline
    from .regular_closed import GridAlgebra1D
    from .report import plot_morse_graph

    only = {int(x) for x in args.only.split(",")} if args.only else None
    results = run_all(args.seed, only)
    for r in results:
        print(r.line(), flush=True)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    F = fix_f3()
    att = attractor_lattice(F)
    M = morse_representation(F, att)
    f3 = out / "fix_f3"
    f3.mkdir(exist_ok=True)
    io.write_text(f3 / "relation.json", io.dumps(io.relation_to_json(F)))
    io.write_text(f3 / "attractors.json",
                  io.dumps(io.lattice_to_json(att, lambda a: io.subset_name(F, att.label(a)))))
    io.write_text(f3 / "morse_graph.dot", io.morse_dot(M))
    plot_morse_graph(M, f3 / "morse_graph.png")

    grid = GridAlgebra1D.uniform(0, 1, 4)
    result = run_pipeline(half_map(), grid, omega_oracle=half_oracle())
    write_pipeline_artifacts(result, out / "fix_half", pipeline_status(result, True))

    summary = {"seed": args.seed, "criteria": [r.as_dict() for r in results],
               "passed": all(r.passed for r in results)}
    io.write_text(out / "summary.json", io.dumps(summary))
    return EXIT_OK if summary["passed"] else EXIT_FAIL


# parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot"),
                        help="output format (default: dot for Morse graphs, json otherwise)")
    common.add_argument("--out", help="output file (default: stdout)")

    p = argparse.ArgumentParser(prog="conleyforms", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    lat = sub.add_parser("lattice").add_subparsers(dest="action", required=True)
    s = lat.add_parser("birkhoff", parents=[common], help="down-set lattice of a poset")
    s.add_argument("--poset", required=True)
    s.set_defaults(func=cmd_lattice_birkhoff)
    s = lat.add_parser("join-irreducibles", parents=[common], help="poset J(L)")
    s.add_argument("--lattice", required=True)
    s.set_defaults(func=cmd_lattice_ji)

    forms = sub.add_parser("forms").add_subparsers(dest="action", required=True)
    s = forms.add_parser("check", parents=[common], help="axiom report for a form table")
    s.add_argument("--lattice", required=True)
    s.add_argument("--form", required=True)
    s.add_argument("--seed", type=int, default=0, help="sampling seed for large lattices")
    s.set_defaults(func=cmd_forms_check)

    dyn = sub.add_parser("dynamics").add_subparsers(dest="action", required=True)
    s = dyn.add_parser("attractors", parents=[common], help="attractor lattice of a relation")
    s.add_argument("--relation", required=True)
    s.add_argument("--repellers", action="store_true", help="repeller lattice instead")
    s.set_defaults(func=cmd_dynamics_attractors)
    s = dyn.add_parser("morse", parents=[common], help="Morse representation")
    s.add_argument("--relation", required=True)
    s.add_argument("--sublattice", help="attractor family (default: all attractors)")
    s.set_defaults(func=cmd_dynamics_morse, default_format="dot")

    s = sub.add_parser("tessellate", parents=[common], help="Morse tessellation")
    s.add_argument("--relation", required=True)
    s.add_argument("--sublattice", help="forward-invariant family (default: all attractors)")
    s.set_defaults(func=cmd_tessellate)

    pipe = sub.add_parser("pipeline").add_subparsers(dest="action", required=True)
    s = pipe.add_parser("run", help="outer approximation and certificates")
    s.add_argument("--map", required=True)
    s.add_argument("--grid", required=True)
    s.add_argument("--closure", action="store_true", help="use the reachability closure")
    s.add_argument("--omega-oracle", dest="omega_oracle")
    s.add_argument("--out", required=True, help="artifact directory")
    s.set_defaults(func=cmd_pipeline_run)

    s = sub.add_parser("selftest", help="run the acceptance suite and write artifacts")
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--out", required=True, help="artifact directory")
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConleyFormsError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return exit_code(e)


def exit_code(e: Exception) -> int:
    if isinstance(e, ParseError):
        return EXIT_PARSE
    if isinstance(e, ValidationError):
        return EXIT_INVALID
    if isinstance(e, ComputeError):
        return EXIT_COMPUTE
    return EXIT_IO if isinstance(e, OSError) else EXIT_COMPUTE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
