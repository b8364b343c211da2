"""CNF/WCNF instances with a variable map back to gate selectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..somat import GeneratorId, TransferMatrix


@dataclass
class VarMap:
    """Decoder metadata: selector layout plus the target being matched.

    ``selectors[(i, j)]`` is the variable asserting generator ``generators[j]``
    at layer ``i`` (layers are 1-based and ordered in circuit time).
    ``trivial`` marks degenerate instances: "sat-empty" (depth 0, target met
    by the empty circuit) or "unsat" (e.g. depth below the scale bound).
    """

    n: int
    depth: int
    parallel: bool
    generators: tuple[GeneratorId, ...] = ()
    selectors: dict = field(default_factory=dict)
    mode: str = "unitary"  # or "stateprep"
    target: Optional[TransferMatrix] = None
    gamma0: Optional[TransferMatrix] = None
    trivial: Optional[str] = None
    aux_ranges: dict = field(default_factory=dict)


@dataclass
class CnfInstance:
    num_vars: int
    clauses: list[tuple[int, ...]]
    varmap: VarMap

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def selector_vars(self) -> list[int]:
        return sorted(self.varmap.selectors.values())

    def t_selector_vars(self) -> list[int]:
        return sorted(
            v
            for (i, j), v in self.varmap.selectors.items()
            if self.varmap.generators[j].is_t_kind()
        )


@dataclass
class WcnfInstance:
    num_vars: int
    hard: list[tuple[int, ...]]
    soft: list[tuple[int, tuple[int, ...]]]  # (weight, clause)
    top: int
    varmap: VarMap

    @property
    def num_clauses(self) -> int:
        return len(self.hard) + len(self.soft)


def _format_clauses(clauses: Sequence[Sequence[int]], prefix: str = "") -> list[str]:
    lines = []
    for cl in clauses:
        if len(cl) == 0:
            raise ValueError("refusing to emit an empty clause")
        body = " ".join(str(l) for l in cl)
        lines.append(f"{prefix}{body} 0")
    return lines


def emit_dimacs(inst: CnfInstance) -> bytes:
    """Standard DIMACS CNF bytes with deterministic variable numbering."""
    lines = [f"p cnf {inst.num_vars} {inst.num_clauses}"]
    lines.extend(_format_clauses(inst.clauses))
    return ("\n".join(lines) + "\n").encode("ascii")


def emit_wcnf(inst: WcnfInstance) -> bytes:
    """Classic top-weight WCNF bytes (hard clauses carry the top weight)."""
    lines = [f"p wcnf {inst.num_vars} {inst.num_clauses} {inst.top}"]
    lines.extend(_format_clauses(inst.hard, prefix=f"{inst.top} "))
    for weight, cl in inst.soft:
        lines.extend(_format_clauses([cl], prefix=f"{weight} "))
    return ("\n".join(lines) + "\n").encode("ascii")
