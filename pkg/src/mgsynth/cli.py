"""Command-line surface for the synthesis toolkit.

Exit codes: 0 success, 1 I/O, 2 domain error, 3 unknown/timeout,
4 unsatisfiable-as-answer (or failed verification verdict), 5 word search
exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import exact, spinrep
from .approx import approx_synthesize
from .circuits import Circuit
from .errors import (
    DomainError,
    MgsError,
    SearchExhaustedError,
    SolverParseError,
    SolverProcessError,
)
from .satenc import decode, encode, encode_maxsat, search_depth, solve
from .somat import TransferMatrix
from .targets import random_ring_target, random_haar_so, xx_target

EXIT_OK = 0
EXIT_IO = 1
EXIT_DOMAIN = 2
EXIT_UNKNOWN = 3
EXIT_UNSAT = 4
EXIT_EXHAUSTED = 5


def _dump_json(data: dict, path: str | None) -> None:
    text = json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _load_matrix(path: str):
    """Returns ("ring", TransferMatrix) or ("float", ndarray)."""
    data = _load_json(path)
    if "a" in data and "b" in data:
        return "ring", TransferMatrix.from_json_dict(data)
    if "entries" in data:
        arr = np.array(data["entries"], dtype=float)
        return "float", arr
    raise DomainError(f"{path} is neither a ring nor a float matrix file")


def _load_circuit(path: str) -> Circuit:
    return Circuit.from_json_dict(_load_json(path))


def cmd_exact(args) -> int:
    kind, mat = _load_matrix(args.matrix)
    if kind != "ring":
        raise DomainError("exact synthesis needs a ring matrix file")
    report = exact.synthesize(mat)
    circ = report.circuit
    if circ.product() != mat:  # re-verify before writing anything
        raise DomainError("internal verification failed")
    _dump_json(circ.to_json_dict(), args.output)
    print(
        f"depth={circ.depth} t_count={circ.t_count} t_depth={circ.t_depth} "
        f"clifford_count={circ.clifford_count} k_max={report.k_max_in} "
        f"nt_bound={report.nt_bound} nc_bound={report.nc_bound} "
        f"t_depth_lb={report.t_depth_lb} verified=true"
    )
    return EXIT_OK


def cmd_sat(args) -> int:
    kind, mat = _load_matrix(args.matrix)
    if kind != "ring":
        raise DomainError("SAT synthesis needs a ring matrix file")
    solver = args.solver or None
    parallel = not args.no_parallel
    if args.search is not None:
        out = search_depth(
            mat, args.search, solver=solver, parallel=parallel, timeout=args.timeout
        )
        for d in sorted(out["verdicts"]):
            print(f"depth {d}: {out['verdicts'][d]}")
        if out["optimal_d"] is None:
            print(f"bracket: lower={out.get('lower')} upper={out.get('upper')}")
            return EXIT_UNKNOWN
        circ = out["circuit"]
        _dump_json(circ.to_json_dict(), args.output)
        print(
            f"optimal_d={out['optimal_d']} proven={out['proven_optimal']} "
            f"t_count={circ.t_count}"
        )
        return EXIT_OK
    if args.maxsat:
        inst = encode_maxsat(mat, args.depth, parallel=parallel)
        res = solve(inst, solver=args.maxsat_solver or None, timeout=args.timeout)
    else:
        inst = encode(mat, args.depth, parallel=parallel)
        res = solve(inst, solver=solver, timeout=args.timeout)
    print(f"depth {args.depth}: {res.status}" + (f" cost={res.cost}" if res.cost is not None else ""))
    if res.status == "unknown":
        return EXIT_UNKNOWN
    if res.is_unsat:
        return EXIT_UNSAT
    circ = decode(res.model or [], inst.varmap)
    _dump_json(circ.to_json_dict(), args.output)
    print(f"t_count={circ.t_count} t_depth={circ.t_depth} verified=true")
    return EXIT_OK


def cmd_approx(args) -> int:
    if args.random is not None:
        qf = random_haar_so(args.random, args.seed)
        n = args.random
    else:
        kind, mat = _load_matrix(args.matrix)
        qf = mat.to_float_array() if kind == "ring" else mat
        n = qf.shape[0] // 2
    result = approx_synthesize(qf, args.eps)
    circ = result.circuit
    q_circ = circ.product().to_float_array()
    so_err = float(np.linalg.norm(q_circ - qf, 2))
    if so_err > result.ledger["eps_loc"] + 1e-9:  # re-verify before exit 0
        raise DomainError("compiled product drifted beyond the local error budget")
    _dump_json(circ.to_json_dict(), args.output)
    led = result.ledger
    if args.ledger:
        with open(args.ledger, "w") as fh:
            fh.write("n,m,eps_budget,eps_loc,eps_glob,rel_gap\n")
            fh.write(
                f"{led['n']},{led['m']},{led['eps_budget']},{led['eps_loc']},"
                f"{led['eps_glob']},{led['rel_gap']}\n"
            )
    glob = "n/a" if led["eps_glob"] is None else f"{led['eps_glob']:.3e}"
    print(
        f"n={n} rotations={led['m']} eps_loc={led['eps_loc']:.3e} "
        f"eps_glob={glob} so_err={so_err:.3e} gates={len(circ.gates())}"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    circ = _load_circuit(args.circuit)
    kind, mat = _load_matrix(args.matrix)
    product = circ.product()
    if kind == "ring":
        ok = product == mat
    elif mat.shape != (2 * circ.n, 2 * circ.n):
        ok = False
    else:
        ok = np.linalg.norm(product.to_float_array() - mat, 2) <= 1e-9
    print("verified" if ok else "mismatch")
    return EXIT_OK if ok else EXIT_UNSAT


def cmd_analyze(args) -> int:
    data = _load_json(args.input)
    out: dict = {}
    if "layers" in data:
        circ = Circuit.from_json_dict(data)
        product = circ.product()
        out = {
            "type": "circuit",
            "n": circ.n,
            "depth": circ.depth,
            "t_count": circ.t_count,
            "t_depth": circ.t_depth,
            "clifford_count": circ.clifford_count,
            "k_max": product.k_max(),
        }
        if circ.n <= spinrep.QUBIT_CAP:
            u = spinrep.circuit_unitary(circ.n, circ)
            out["stabilizer_entropy"] = spinrep.stabilizer_entropy(u[:, 0])
            if circ.n == 2:
                out["operator_entanglement"] = spinrep.operator_entanglement(u)
    else:
        kind, mat = _load_matrix(args.input)
        if kind == "ring":
            bounds = exact.gate_count_bounds(mat.n, mat.k_max())
            out = {
                "type": "matrix",
                "n": mat.n,
                "k_max": mat.k_max(),
                "special_orthogonal": mat.is_special_orthogonal(),
                "t_depth_lb": exact.t_depth_lower_bound(mat),
                **bounds,
            }
        else:
            dim = mat.shape[0]
            out = {
                "type": "float-matrix",
                "n": dim // 2,
                "orthogonality_defect": float(np.linalg.norm(mat.T @ mat - np.eye(dim))),
                "det": float(np.linalg.det(mat)),
            }
    _dump_json(out, args.output)
    return EXIT_OK


def cmd_target(args) -> int:
    if args.which == "xx":
        t = xx_target(args.n)
        _dump_json(t.q_dis.to_json_dict(), args.output)
        print(f"n={args.n} k_max={t.q_dis.k_max()} in_ring=true")
    elif args.which == "random":
        q = random_ring_target(args.n, args.t_budget, args.seed)
        _dump_json(q.to_json_dict(), args.output)
        print(f"n={args.n} k_max={q.k_max()} t_budget={args.t_budget} seed={args.seed}")
    else:  # haar
        q = random_haar_so(args.n, args.seed)
        _dump_json({"n": args.n, "entries": q.tolist()}, args.output)
        print(f"n={args.n} seed={args.seed}")
    return EXIT_OK


def cmd_report(args) -> int:
    from . import report as report_mod

    if args.which == "theorem2":
        info = report_mod.theorem2_report(
            args.out, sizes=tuple(args.sizes), samples=args.samples, seed=args.seed
        )
    elif args.which == "ledger":
        info = report_mod.ledger_report(
            args.out,
            sizes=tuple(args.sizes),
            samples=args.samples,
            eps_per_rotation=args.eps,
            seed=args.seed,
        )
    elif args.which == "entanglement":
        info = report_mod.entanglement_report(
            args.out, eps_targets=tuple(args.eps_list), angles=args.angles
        )
    else:  # magic
        info = report_mod.magic_report(
            args.out, sizes=tuple(args.sizes), samples=args.samples, seed=args.seed
        )
    print(f"wrote {info['csv']} and {info['png']} ({info['rows']} rows)")
    if info["violations"]:
        print(f"bound violations: {info['violations']}")
        return EXIT_DOMAIN
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mgsynth",
        description="Synthesis toolkit for matchgate circuits over the "
        "discrete matchgate-Clifford+T gate set.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact synthesis of an in-ring matrix")
    p.add_argument("matrix")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("sat", help="depth-bounded SAT synthesis")
    p.add_argument("matrix")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--depth", type=int)
    group.add_argument("--search", type=int, metavar="D_MAX")
    p.add_argument("--maxsat", action="store_true", help="minimize T count at --depth")
    p.add_argument("--solver", default=os.environ.get("MGS_SAT_SOLVER", ""))
    p.add_argument("--maxsat-solver", default=os.environ.get("MGS_MAXSAT_SOLVER", ""))
    p.add_argument("--no-parallel", action="store_true", help="one gate per layer")
    p.add_argument("--timeout", type=float, default=None,
                   help="wall-clock limit per external solver call (seconds)")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("approx", help="approximate synthesis of a rotation matrix")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("matrix", nargs="?")
    group.add_argument("--random", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--ledger", default=None, help="CSV path for the error ledger")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("verify", help="check a circuit against a matrix")
    p.add_argument("circuit")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="metrics for a circuit or matrix file")
    p.add_argument("input")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("target", help="generate benchmark targets")
    tsub = p.add_subparsers(dest="which", required=True)
    t = tsub.add_parser("xx")
    t.add_argument("n", type=int)
    t.add_argument("-o", "--output", default="-")
    t = tsub.add_parser("random")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--t-budget", type=int, default=4)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("-o", "--output", default="-")
    t = tsub.add_parser("haar")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_target)

    p = sub.add_parser("report", help="benchmark drivers: CSV plus figures")
    rsub = p.add_subparsers(dest="which", required=True)
    r = rsub.add_parser("theorem2")
    r.add_argument("--out", required=True)
    r.add_argument("--sizes", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    r.add_argument("--samples", type=int, default=200)
    r.add_argument("--seed", type=int, default=0)
    r = rsub.add_parser("ledger")
    r.add_argument("--out", required=True)
    r.add_argument("--sizes", type=int, nargs="+", default=[2, 3, 4, 5])
    r.add_argument("--samples", type=int, default=8)
    r.add_argument("--eps", type=float, default=0.05)
    r.add_argument("--seed", type=int, default=0)
    r = rsub.add_parser("entanglement")
    r.add_argument("--out", required=True)
    r.add_argument("--eps-list", type=float, nargs="+", default=[1e-1, 3e-2, 1e-2])
    r.add_argument("--angles", type=int, default=64)
    r = rsub.add_parser("magic")
    r.add_argument("--out", required=True)
    r.add_argument("--sizes", type=int, nargs="+", default=[2, 3, 4])
    r.add_argument("--samples", type=int, default=50)
    r.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON: {exc}", file=sys.stderr)
        return EXIT_IO
    except SearchExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (SolverProcessError, SolverParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except MgsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
