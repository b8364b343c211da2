"""Solver backends: external subprocess adapters and a hermetic CDCL.

The builtin solver is a correctness fallback for desk-scale instances (two
watched literals, first-UIP learning, activity-ordered decisions with phase
saving, geometric restarts).  External solvers speak the usual line
protocol: "s SATISFIABLE" / "s UNSATISFIABLE" verdicts, "v" model lines,
and for MAX-SAT "o <cost>" plus "s OPTIMUM FOUND".
"""

from __future__ import annotations

import heapq
import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from typing import Optional, Sequence

from ..errors import SolverParseError, SolverProcessError
from .cnf import CnfInstance, WcnfInstance, emit_dimacs, emit_wcnf

SAT_SOLVER_ENV = "MGS_SAT_SOLVER"
MAXSAT_SOLVER_ENV = "MGS_MAXSAT_SOLVER"

DEFAULT_CONFLICT_BUDGET = 2_000_000


@dataclass
class SolveResult:
    status: str  # "sat" | "unsat" | "unknown"
    model: Optional[list[int]] = None  # positive/negative literals, 1..num_vars
    cost: Optional[int] = None  # MAX-SAT objective, when applicable

    @property
    def is_sat(self) -> bool:
        return self.status == "sat"

    @property
    def is_unsat(self) -> bool:
        return self.status == "unsat"


class CdclSolver:
    """Small conflict-driven solver; intended for <= ~1e5 clauses."""

    def __init__(
        self,
        num_vars: int,
        clauses: Sequence[Sequence[int]],
        prefer: Sequence[int] = (),
    ):
        self.nv = num_vars
        self.clauses: list[list[int]] = []
        self.watches: list[list[int]] = [[] for _ in range(2 * num_vars + 2)]
        self.value = [0] * (num_vars + 1)  # 0 unset, 1 true, -1 false
        self.level = [0] * (num_vars + 1)
        self.reason = [-1] * (num_vars + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.activity = [0.0] * (num_vars + 1)
        self.phase = [False] * (num_vars + 1)
        self.var_inc = 1.0
        self.ok = True
        self._units: list[int] = []
        for rank, v in enumerate(prefer):
            self.activity[v] += 1e6 - rank  # branch on selectors first
        for cl in clauses:
            self._add_clause(list(cl))
        self.order = [(-self.activity[v], v) for v in range(1, num_vars + 1)]
        heapq.heapify(self.order)

    @staticmethod
    def _widx(lit: int) -> int:
        return 2 * abs(lit) + (0 if lit > 0 else 1)

    def _add_clause(self, lits: list[int]) -> None:
        seen = set()
        out = []
        for l in lits:
            if -l in seen:
                return  # tautology
            if l not in seen:
                seen.add(l)
                out.append(l)
        if not out:
            self.ok = False
            return
        if len(out) == 1:
            self._units.append(out[0])
            return
        ci = len(self.clauses)
        self.clauses.append(out)
        self.watches[self._widx(out[0])].append(ci)
        self.watches[self._widx(out[1])].append(ci)

    def _lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _enqueue(self, lit: int, reason: int) -> bool:
        cur = self._lit_value(lit)
        if cur == 1:
            return True
        if cur == -1:
            return False
        var = abs(lit)
        self.value[var] = 1 if lit > 0 else -1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.phase[var] = lit > 0
        self.trail.append(lit)
        return True

    def _propagate(self) -> int:
        """Returns a conflicting clause index or -1."""
        head = getattr(self, "_qhead", 0)
        while head < len(self.trail):
            lit = self.trail[head]
            head += 1
            false_lit = -lit
            wl = self.watches[self._widx(false_lit)]
            i = 0
            while i < len(wl):
                ci = wl[i]
                cl = self.clauses[ci]
                if cl[0] == false_lit:
                    cl[0], cl[1] = cl[1], cl[0]
                # cl[1] == false_lit now
                if self._lit_value(cl[0]) == 1:
                    i += 1
                    continue
                moved = False
                for k in range(2, len(cl)):
                    if self._lit_value(cl[k]) != -1:
                        cl[1], cl[k] = cl[k], cl[1]
                        self.watches[self._widx(cl[1])].append(ci)
                        wl[i] = wl[-1]
                        wl.pop()
                        moved = True
                        break
                if moved:
                    continue
                if not self._enqueue(cl[0], ci):
                    self._qhead = head
                    return ci
                i += 1
        self._qhead = head
        return -1

    def _bump(self, var: int) -> None:
        self.activity[var] += self.var_inc
        if self.activity[var] > 1e100:
            for v in range(1, self.nv + 1):
                self.activity[v] *= 1e-100
            self.var_inc *= 1e-100
            self.order = [(-self.activity[v], v) for v in range(1, self.nv + 1) if self.value[v] == 0]
            heapq.heapify(self.order)
        elif self.value[var] == 0:
            heapq.heappush(self.order, (-self.activity[var], var))

    def _analyze(self, conflict: int) -> tuple[list[int], int]:
        learnt = [0]
        seen = [False] * (self.nv + 1)
        counter = 0
        p = 0  # literal whose reason is being expanded; 0 for the conflict
        idx = len(self.trail) - 1
        cur_level = len(self.trail_lim)
        reason = conflict
        while True:
            for q in self.clauses[reason]:
                if q == p:
                    continue
                var = abs(q)
                if not seen[var] and self.level[var] > 0:
                    seen[var] = True
                    self._bump(var)
                    if self.level[var] == cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[idx])]:
                idx -= 1
            p = self.trail[idx]
            var = abs(p)
            seen[var] = False
            counter -= 1
            idx -= 1
            if counter == 0:
                break
            reason = self.reason[var]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        # watch a deepest literal besides the asserting one
        wpos = max(range(1, len(learnt)), key=lambda i: self.level[abs(learnt[i])])
        learnt[1], learnt[wpos] = learnt[wpos], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _backjump(self, level: int) -> None:
        if level >= len(self.trail_lim):
            return
        bound = self.trail_lim[level]
        for lit in self.trail[bound:]:
            var = abs(lit)
            self.value[var] = 0
            heapq.heappush(self.order, (-self.activity[var], var))
        del self.trail[bound:]
        del self.trail_lim[level:]
        self._qhead = len(self.trail)

    def _decide(self) -> int:
        while self.order:
            _, v = heapq.heappop(self.order)
            if self.value[v] == 0:
                return v if self.phase[v] else -v
        for v in range(1, self.nv + 1):  # stale-heap fallback
            if self.value[v] == 0:
                return v if self.phase[v] else -v
        return 0

    def solve(self, conflict_budget: Optional[int] = None) -> SolveResult:
        if not self.ok:
            return SolveResult("unsat")
        budget = DEFAULT_CONFLICT_BUDGET if conflict_budget is None else conflict_budget
        self._qhead = 0
        for u in self._units:
            if not self._enqueue(u, -1):
                return SolveResult("unsat")
        if self._propagate() != -1:
            return SolveResult("unsat")
        root = len(self.trail)
        conflicts = 0
        restart_limit = 128
        since_restart = 0
        while True:
            conflict = self._propagate()
            if conflict != -1:
                conflicts += 1
                since_restart += 1
                if len(self.trail_lim) == 0:
                    return SolveResult("unsat")
                if conflicts > budget:
                    return SolveResult("unknown")
                learnt, back = self._analyze(conflict)
                self._backjump(back)
                if len(learnt) == 1:
                    if not self._enqueue(learnt[0], -1):
                        return SolveResult("unsat")
                else:
                    ci = len(self.clauses)
                    self.clauses.append(learnt)
                    self.watches[self._widx(learnt[0])].append(ci)
                    self.watches[self._widx(learnt[1])].append(ci)
                    self._enqueue(learnt[0], ci)
                self.var_inc /= 0.95
                if since_restart >= restart_limit:
                    since_restart = 0
                    restart_limit = int(restart_limit * 1.5)
                    self._backjump(0)
            else:
                lit = self._decide()
                if lit == 0:
                    model = [v if self.value[v] == 1 else -v for v in range(1, self.nv + 1)]
                    return SolveResult("sat", model=model)
                self.trail_lim.append(len(self.trail))
                self._enqueue(lit, -1)


def _sequential_counter_at_most(
    base_vars: int, xs: Sequence[int], k: int
) -> tuple[int, list[tuple[int, ...]]]:
    """Sinz encoding of sum(xs) <= k; returns (new num_vars, clauses)."""
    m = len(xs)
    clauses: list[tuple[int, ...]] = []
    if k == 0:
        clauses.extend((-x,) for x in xs)
        return base_vars, clauses
    if m <= k:
        return base_vars, []
    nv = base_vars
    s = [[0] * (k + 1) for _ in range(m + 1)]  # 1-based (i, j)
    for i in range(1, m + 1):
        for j in range(1, k + 1):
            nv += 1
            s[i][j] = nv
    for i in range(1, m + 1):
        x = xs[i - 1]
        clauses.append((-x, s[i][1]))
        if i > 1:
            clauses.append((-s[i - 1][1], s[i][1]))
            for j in range(2, k + 1):
                clauses.append((-x, -s[i - 1][j - 1], s[i][j]))
                clauses.append((-s[i - 1][j], s[i][j]))
            clauses.append((-x, -s[i - 1][k]))
    return nv, clauses


def solve_maxsat_builtin(
    inst: WcnfInstance, conflict_budget: Optional[int] = None
) -> SolveResult:
    """Ascending-cost search: first satisfiable soft-violation bound is optimal."""
    soft_vars = [cl[0] * -1 for _, cl in inst.soft]  # (-x) soft => penalize x true
    prefer = sorted(inst.varmap.selectors.values())
    base = CdclSolver(inst.num_vars, inst.hard, prefer=prefer)
    first = base.solve(conflict_budget)
    if not first.is_sat:
        return first
    best_cost = sum(1 for v in soft_vars if first.model[v - 1] > 0)
    best_model = first.model
    for k in range(best_cost):
        nv, card = _sequential_counter_at_most(inst.num_vars, soft_vars, k)
        solver = CdclSolver(nv, list(inst.hard) + card, prefer=prefer)
        res = solver.solve(conflict_budget)
        if res.status == "unknown":
            return SolveResult("unknown")
        if res.is_sat:
            best_cost = k
            best_model = res.model[: inst.num_vars]
            break
    return SolveResult("sat", model=best_model, cost=best_cost)


# -- external adapters ---------------------------------------------------


def _run_solver(cmd: str, path: str, timeout: Optional[float]) -> str:
    argv = shlex.split(cmd) + [path]
    try:
        proc = subprocess.run(
            argv,
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            timeout=timeout,
            text=True,
        )
    except FileNotFoundError as exc:
        raise SolverProcessError(f"solver executable not found: {argv[0]}") from exc
    except subprocess.TimeoutExpired:
        return ""
    return proc.stdout or ""


def _parse_model_lines(lines: list[str], num_vars: int) -> list[int]:
    tokens: list[str] = []
    for line in lines:
        tokens.extend(line[1:].split())
    if len(tokens) == 1 and set(tokens[0]) <= {"0", "1"} and len(tokens[0]) >= num_vars:
        bits = tokens[0]
        return [v if bits[v - 1] == "1" else -v for v in range(1, num_vars + 1)]
    model: dict[int, int] = {}
    for tok in tokens:
        try:
            lit = int(tok)
        except ValueError as exc:
            raise SolverParseError(f"bad model token {tok!r}") from exc
        if lit == 0:
            continue
        model[abs(lit)] = lit
    return [model.get(v, -v) for v in range(1, num_vars + 1)]


def solve_sat_external(
    inst: CnfInstance, cmd: str, timeout: Optional[float] = None
) -> SolveResult:
    with tempfile.NamedTemporaryFile(suffix=".cnf", delete=False) as fh:
        fh.write(emit_dimacs(inst))
        path = fh.name
    try:
        out = _run_solver(cmd, path, timeout)
    finally:
        os.unlink(path)
    if not out:
        return SolveResult("unknown")
    status = None
    vlines = []
    for line in out.splitlines():
        if line.startswith("s "):
            verdict = line[2:].strip().upper()
            if verdict == "SATISFIABLE":
                status = "sat"
            elif verdict == "UNSATISFIABLE":
                status = "unsat"
            else:
                status = "unknown"
        elif line.startswith("v"):
            vlines.append(line)
    if status is None:
        raise SolverProcessError("external solver produced no verdict line")
    if status != "sat":
        return SolveResult(status)
    return SolveResult("sat", model=_parse_model_lines(vlines, inst.num_vars))


def solve_maxsat_external(
    inst: WcnfInstance, cmd: str, timeout: Optional[float] = None
) -> SolveResult:
    with tempfile.NamedTemporaryFile(suffix=".wcnf", delete=False) as fh:
        fh.write(emit_wcnf(inst))
        path = fh.name
    try:
        out = _run_solver(cmd, path, timeout)
    finally:
        os.unlink(path)
    if not out:
        return SolveResult("unknown")
    status = None
    cost = None
    vlines = []
    for line in out.splitlines():
        if line.startswith("s "):
            verdict = line[2:].strip().upper()
            if verdict in ("OPTIMUM FOUND", "SATISFIABLE"):
                status = "sat"
            elif verdict == "UNSATISFIABLE":
                status = "unsat"
            else:
                status = "unknown"
        elif line.startswith("o "):
            try:
                cost = int(line[2:].strip())
            except ValueError as exc:
                raise SolverParseError(f"bad objective line {line!r}") from exc
        elif line.startswith("v"):
            vlines.append(line)
    if status is None:
        raise SolverProcessError("external MAX-SAT solver produced no verdict line")
    if status != "sat":
        return SolveResult(status)
    return SolveResult("sat", model=_parse_model_lines(vlines, inst.num_vars), cost=cost)


def solve(
    inst: CnfInstance | WcnfInstance,
    solver: Optional[str] = None,
    timeout: Optional[float] = None,
    conflict_budget: Optional[int] = None,
) -> SolveResult:
    """Solve an instance with an external command or the builtin fallback.

    ``solver`` may be an executable command string or ``None``; with ``None``
    the MGS_SAT_SOLVER / MGS_MAXSAT_SOLVER environment variables are
    consulted before falling back to the builtin solver.
    """
    is_wcnf = isinstance(inst, WcnfInstance)
    if solver is None:
        solver = os.environ.get(MAXSAT_SOLVER_ENV if is_wcnf else SAT_SOLVER_ENV)
    if solver:
        if is_wcnf:
            return solve_maxsat_external(inst, solver, timeout)
        return solve_sat_external(inst, solver, timeout)
    if is_wcnf:
        return solve_maxsat_builtin(inst, conflict_budget)
    prefer = sorted(inst.varmap.selectors.values())
    res = CdclSolver(inst.num_vars, inst.clauses, prefer=prefer).solve(conflict_budget)
    return res
