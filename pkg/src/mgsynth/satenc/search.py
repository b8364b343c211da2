"""Depth search driver over SAT probes."""

from __future__ import annotations

from typing import Optional

from ..circuits import Circuit
from ..errors import RangeError
from ..somat import TransferMatrix
from .decode import decode
from .encode import encode
from .solvers import SolveResult, solve


def search_depth(
    q: TransferMatrix,
    d_max: int,
    solver: Optional[str] = None,
    parallel: bool = True,
    timeout: Optional[float] = None,
    conflict_budget: Optional[int] = None,
) -> dict:
    """Locate the minimal circuit depth for ``q`` within ``[0, d_max]``.

    Depths below k_max(q) are unsatisfiable by the scale bound and are
    recorded without solving.  A binary search brackets the frontier and the
    result is confirmed downward, since satisfiability is only guaranteed
    monotone in steps of two (a gate plus its inverse pads any circuit).
    Optimality is claimed only when the SAT depth has an UNSAT (or scale
    bound) witness directly below it.

    Probes run sequentially here; callers wanting concurrent probes should
    launch separate solver processes per depth and cancel the survivors
    once the bracket closes.
    """
    verdicts: dict[int, str] = {}
    circuits: dict[int, Circuit] = {}

    if d_max < q.k_max():
        raise RangeError(f"d_max={d_max} below the scale lower bound {q.k_max()}")

    def probe(d: int) -> str:
        if d in verdicts:
            return verdicts[d]
        inst = encode(q, d, parallel=parallel)
        res: SolveResult = solve(
            inst, solver=solver, timeout=timeout, conflict_budget=conflict_budget
        )
        verdicts[d] = res.status
        if res.is_sat:
            circuits[d] = decode(res.model or [], inst.varmap)
        return res.status

    identity = q == TransferMatrix.identity(q.n)
    if identity:
        verdicts[0] = "sat"
        circuits[0] = Circuit.empty(q.n, provenance="sat-decode")
        return {
            "optimal_d": 0,
            "circuit": circuits[0],
            "verdicts": verdicts,
            "proven_optimal": True,
        }
    for d in range(0, q.k_max()):
        verdicts[d] = "unsat"  # scale infeasibility, no solver call
    if q.k_max() == 0:
        verdicts[0] = "unsat"  # non-identity target, empty circuit ruled out

    lo = max(q.k_max(), 1)
    hi = d_max
    best: Optional[int] = None
    while lo <= hi:
        mid = (lo + hi) // 2
        status = probe(mid)
        if status == "unknown":
            return _bracket(verdicts, circuits)
        if status == "sat":
            best = mid
            hi = mid - 1
        else:
            lo = mid + 1
    if best is None:
        return _bracket(verdicts, circuits)
    # satisfiability is not monotone depth-by-depth; confirm downward
    while best - 1 >= 0 and verdicts.get(best - 1) != "unsat":
        status = probe(best - 1)
        if status == "unknown":
            return _bracket(verdicts, circuits)
        if status == "sat":
            best -= 1
        else:
            break
    proven = best == 0 or verdicts.get(best - 1) == "unsat"
    return {
        "optimal_d": best,
        "circuit": circuits[best],
        "verdicts": verdicts,
        "proven_optimal": proven,
    }


def _bracket(verdicts: dict[int, str], circuits: dict[int, Circuit]) -> dict:
    sat_depths = [d for d, s in verdicts.items() if s == "sat"]
    upper = min(sat_depths) if sat_depths else None
    unsat_run = 0
    while verdicts.get(unsat_run) == "unsat":
        unsat_run += 1
    return {
        "optimal_d": None,
        "lower": unsat_run,
        "upper": upper,
        "circuit": circuits.get(upper) if upper is not None else None,
        "verdicts": verdicts,
        "proven_optimal": False,
    }
