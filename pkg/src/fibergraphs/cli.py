"""Command-line interface: ``fibergraphs <command> ...``.

Exit codes: 0 success, 1 error, 2 empty fiber, 3 failed verification.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import akfamily, chain, formats
from .errors import FiberGraphError
from .fibergraph import build_graph, connectivity_report, edge_list_csv, to_dot
from .lattice import DEFAULT_MAX_POINTS, IntMatrix, enumerate_fiber
from .moves import MoveSet, graver_Ak, graver_oracle, groebner_lex_Ak, load_moves_file

EXIT_OK, EXIT_ERROR, EXIT_EMPTY, EXIT_FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_k_range(text: str) -> list[int]:
    """``"3"`` or ``"2..4"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            ks = list(range(int(lo), int(hi) + 1))
        else:
            ks = [int(text)]
    except ValueError as exc:
        raise UsageError(f"bad k range {text!r}") from exc
    if not ks or min(ks) < 1:
        raise UsageError(f"k range {text!r} must contain positive integers")
    return ks


def _budget(args) -> int:
    if getattr(args, "max_vertices", None) is not None:
        value = args.max_vertices
    else:
        value = int(os.environ.get("FIBERGRAPHS_MAX_VERTICES", DEFAULT_MAX_POINTS))
    if value <= 0:
        raise UsageError("vertex budget must be positive")
    return value


def _matrix(args) -> tuple[IntMatrix, int | None]:
    if args.ak is not None and args.matrix is not None:
        raise UsageError("give either --matrix or --ak, not both")
    if args.ak is not None:
        return akfamily.build_Ak(args.ak).matrix, args.ak
    if args.matrix is None:
        raise UsageError("a matrix is required (--matrix PATH or --ak K)")
    return formats.read_matrix(args.matrix), None


def _moves(spec: str, A: IntMatrix, k: int | None) -> MoveSet:
    kind, _, arg = spec.partition(":")
    if kind in ("graver-ak", "groebner-lex-ak"):
        if k is None:
            raise UsageError(f"--moves {kind} needs --ak K")
        return graver_Ak(k) if kind == "graver-ak" else groebner_lex_Ak(k)
    if kind == "oracle":
        radius = int(arg) if arg else 2
        res = graver_oracle(A, radius)
        if not res.complete:
            print(f"warning: Graver oracle at radius {radius} could not certify completeness", file=sys.stderr)
        return res.moveset
    if kind in ("custom", "json"):
        if not arg:
            raise UsageError(f"--moves {kind}:PATH needs a path")
        return load_moves_file(A, formats.resolve(arg))
    raise UsageError(f"unknown move set {spec!r}")


def _emit(args, text: str):
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fiber(args):
    A, k = _matrix(args)
    b = formats.parse_rhs(args.rhs, A.rows)
    if k is not None:
        return akfamily.ak_fiber(k, b, _budget(args)), k
    return enumerate_fiber(A, b, max_points=_budget(args)), k


# ---------------------------------------------------------------------------
# commands


def cmd_fiber(args) -> int:
    fiber, _ = _fiber(args)
    if len(fiber) == 0:
        _emit(args, formats.dumps(formats.fiber_json(fiber)) if args.json else "")
        print(f"fiber F(A, {list(fiber.rhs)}) is empty", file=sys.stderr)
        return EXIT_EMPTY
    _emit(args, formats.dumps(formats.fiber_json(fiber)) if args.json else formats.fiber_csv(fiber))
    return EXIT_OK


def cmd_connectivity(args) -> int:
    fiber, k = _fiber(args)
    if len(fiber) == 0:
        print(f"fiber F(A, {list(fiber.rhs)}) is empty", file=sys.stderr)
        return EXIT_EMPTY
    G = build_graph(fiber, _moves(args.moves, fiber.matrix, k))
    rep = connectivity_report(G)
    if args.dot:
        Path(args.dot).write_text(to_dot(G))
    if args.edges:
        Path(args.edges).write_text(edge_list_csv(G))
    if args.json:
        _emit(args, formats.dumps(rep.to_json()))
    else:
        _emit(args, (
            f"vertices {rep.n_vertices}\nedges {rep.n_edges}\ncomponents {rep.components}\n"
            f"min_degree {rep.min_degree}\nedge_connectivity {rep.edge_connectivity}\n"
            f"vertex_connectivity {rep.vertex_connectivity}\n"
        ))
    return EXIT_OK


def _graver_basis_report(k: int, radius: int) -> akfamily.Report:
    res = graver_oracle(akfamily.build_Ak(k).matrix, radius)
    explicit = graver_Ak(k)
    r = akfamily.Report("graver-basis", {"k": k, "radius": radius})
    r.values = {"oracle_moves": len(res.moveset), "explicit_moves": len(explicit),
                "signed_moves": 2 * len(explicit), "kernel_points": res.kernel_points}
    r.checks = {"oracle_complete": res.complete, "same_moves": res.moveset.same_moves(explicit),
                "signed_count": 2 * len(explicit) == 2 ** (2 * k + 1) + 4 * k}
    return r


def cmd_verify(args) -> int:
    ks = parse_k_range(args.k)
    reports = []
    for k in ks:
        if args.suite == "conj1":
            reports.append(akfamily.verify_counterexample_conj1(k))
        elif args.suite == "graver-theorem":
            for b in akfamily.sample_rhs(k, args.samples, seed=args.seed):
                reports.append(akfamily.verify_graver_theorem(k, b))
        elif args.suite == "graver-basis":
            reports.append(_graver_basis_report(k, args.radius))
        else:
            reports.append(akfamily.verify_universality(k, args.N))
    ok = bool(reports) and all(r.passed for r in reports)
    if args.json:
        _emit(args, formats.dumps({"suite": args.suite, "passed": ok, "reports": [r.to_json() for r in reports]}))
    else:
        lines = []
        for r in reports:
            failed = [name for name, v in r.checks.items() if not v]
            status = "PASS" if r.passed else "FAIL " + ",".join(failed)
            lines.append(f"{r.name} {r.params} {status}")
        lines.append(f"{args.suite}: {'PASS' if ok else 'FAIL'}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_chain(args) -> int:
    if args.target:
        if len(args.target) != 2 or args.target[0] != "experiment" or args.target[1] not in ("fig4", "fig5"):
            raise UsageError("expected 'chain experiment fig4' or 'chain experiment fig5'")
        if args.target[1] == "fig4":
            rows = chain.sweep_fig4(args.kmax, jobs=args.jobs)
        else:
            rows = chain.sweep_fig5(args.lmax, jobs=args.jobs)
        if args.json:
            text = formats.dumps(rows)
        elif args.format == "dat":
            text = chain.table_dat(rows)
        else:
            text = chain.table_csv(rows)
        _emit(args, text)
        return EXIT_OK
    if args.moves is None or args.rhs is None:
        raise UsageError("chain needs --rhs and --moves (or 'experiment fig4|fig5')")
    fiber, k = _fiber(args)
    if len(fiber) == 0:
        print(f"fiber F(A, {list(fiber.rhs)}) is empty", file=sys.stderr)
        return EXIT_EMPTY
    G = build_graph(fiber, _moves(args.moves, fiber.matrix, k))
    rep = chain.analyze(G, args.eps)
    if args.json:
        _emit(args, formats.dumps(rep.to_json()))
    else:
        tv = " ".join(f"{e}:{t}" for e, t in rep.tv_mixing.items())
        _emit(args, (
            f"vertices {rep.n}\nslem {rep.slem:.9f}\nmixing_time {rep.mixing_time:.6f} ({rep.definition_used})\n"
            f"relaxation_time {rep.relaxation_time:.6f}\ntv_mixing {tv}\n"
        ))
    return EXIT_OK


def cmd_ak(args) -> int:
    if args.action != "boxes":
        raise UsageError("only 'ak boxes' is available")
    A = akfamily.build_Ak(args.k).matrix
    b = formats.parse_rhs(args.rhs, A.rows)
    d = akfamily.decompose_rhs(b)
    if d.empty:
        print(f"fiber F(A_{args.k}, {list(b)}) is empty", file=sys.stderr)
        return EXIT_EMPTY
    if args.json:
        boxes = [{"s": s, "size": d.box_size(s), "points": [list(p) for p in akfamily.box_vertices(s, d)]}
                 for s in d.range()]
        _emit(args, formats.dumps({"k": args.k, "rhs": list(b), "lower": d.lower, "upper": d.upper,
                                   "boxes": boxes}))
    else:
        _emit(args, akfamily.box_csv(args.k, b, _budget(args)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, matrix: bool = True):
    if matrix:
        p.add_argument("--matrix", help="matrix file (.json or whitespace text)")
        p.add_argument("--ak", type=int, metavar="K", help="use the matrix A_K")
        p.add_argument("--rhs", help='right-hand side: "3", "0,0,1" or "e3"')
        p.add_argument("--max-vertices", type=int, help="fiber size budget")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--out", help="write output to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fibergraphs", description="Fiber graphs, connectivity and mixing.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fiber", help="enumerate a fiber")
    _common(p)
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("connectivity", help="degree and connectivity of a fiber graph")
    _common(p)
    p.add_argument("--moves", required=True,
                   help="graver-ak | groebner-lex-ak | oracle[:B] | custom:PATH | json:PATH")
    p.add_argument("--dot", help="also write the graph in DOT format")
    p.add_argument("--edges", help="also write the edge list as CSV")
    p.set_defaults(func=cmd_connectivity)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=["conj1", "graver-theorem", "graver-basis", "universality"])
    p.add_argument("--k", default="2", help='k or a range "2..4"')
    p.add_argument("--samples", type=int, default=5, help="right-hand sides per k (graver-theorem)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=int, default=2, help="oracle box radius (graver-basis)")
    p.add_argument("--N", type=int, default=100, help="lower bound on lifted entries (universality)")
    _common(p, matrix=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("chain", help="Metropolis chain analysis, or 'chain experiment fig4|fig5'")
    p.add_argument("target", nargs="*", help="optional: experiment fig4|fig5")
    _common(p)
    p.add_argument("--moves")
    p.add_argument("--eps", type=float, nargs="+", default=[0.25], help="TV mixing thresholds")
    p.add_argument("--kmax", type=int, default=8)
    p.add_argument("--lmax", type=int, default=6)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["csv", "dat"], default="csv")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("ak", help="A_k helpers")
    p.add_argument("action", choices=["boxes"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--max-vertices", type=int)
    _common(p, matrix=False)
    p.set_defaults(func=cmd_ak)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FiberGraphError, ValueError, OSError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
