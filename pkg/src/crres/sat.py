"""Small propositional core: CNF container, DPLL, DIMACS export.

Clauses are frozensets of nonzero integer literals; variable 0 is never
used.  The solver is plain DPLL with unit propagation and first-unassigned
branching, plenty for the ground problems this package produces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional


@dataclass
class Cnf:
    clauses: list[frozenset[int]] = field(default_factory=list)
    labels: dict[int, str] = field(default_factory=dict)

    def add(self, lits: Iterable[int]) -> None:
        self.clauses.append(frozenset(lits))

    def num_vars(self) -> int:
        return max((abs(l) for c in self.clauses for l in c), default=0)


def dpll(clauses: list[frozenset[int]]) -> Optional[dict[int, bool]]:
    """Model as {var: bool} when satisfiable, else None."""
    assignment: dict[int, bool] = {}

    def simplify(cls, lit):
        out = []
        for c in cls:
            if lit in c:
                continue
            if -lit in c:
                c = c - {-lit}
            out.append(c)
        return out

    def solve(cls) -> bool:
        while True:
            if not cls:
                return True
            if any(not c for c in cls):
                return False
            unit = next((c for c in cls if len(c) == 1), None)
            if unit is None:
                break
            lit = next(iter(unit))
            assignment[abs(lit)] = lit > 0
            cls = simplify(cls, lit)
        lit = min(abs(l) for c in cls for l in c)
        snapshot = dict(assignment)
        assignment[lit] = True
        if solve(simplify(cls, lit)):
            return True
        assignment.clear()
        assignment.update(snapshot)
        assignment[lit] = False
        return solve(simplify(cls, -lit))

    if solve(list(clauses)):
        return assignment
    return None


def to_dimacs(cnf: Cnf) -> str:
    lines = [f"c {var} {label}" for var, label in sorted(cnf.labels.items())]
    lines.append(f"p cnf {cnf.num_vars()} {len(cnf.clauses)}")
    for c in cnf.clauses:
        lines.append(" ".join(str(l) for l in sorted(c, key=abs)) + " 0")
    return "\n".join(lines)
