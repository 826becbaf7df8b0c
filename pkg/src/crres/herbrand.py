"""Herbrand system evaluation and the ground midsequent.

The instance-term tables walk carriage return lists.  ``w_phi`` collects
one nested-max term per carriage return step; ``w_psi`` collects witness
pairs over the same walk the refutation schema performs: emit the pair
for the current state, shift while the back is nonempty, and restart one
variable lower at the carriage-returned list.  The pair's first component
is the nested max ladder at the back length (which equals the focused
numeral on every canonical state; the focused numeral itself would
produce degenerate x < x pairs on restart states).  Lists carry
repetitions by design; deduplication happens when the sequent is built.

``herbrand_sequent`` instantiates the prenex matrices with those terms,
and ``verify_herbrand`` decides the ground sequent propositionally under
the two axiom families (function congruence on equal colors, and order
between distinct ladder terms).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .crlist import CRList, canonical, carriage_return, shift
from .sat import Cnf, dpll, to_dimacs
from .terms import (And, Atom, Exists, Forall, Formula, IterOr, Nat, OVar,
                    Term, Var, eq, eval_m, f, inum, lt, normalize_formula,
                    structural_key)


class TupleArityError(ValueError):
    pass


@dataclass(frozen=True)
class TermTupleList:
    """Ordered list of equal-arity term tuples."""

    tuples: tuple[tuple[Term, ...], ...]

    def __post_init__(self):
        arities = {len(t) for t in self.tuples}
        if len(arities) > 1:
            raise TupleArityError(f"mixed tuple arities {sorted(arities)}")

    def __len__(self) -> int:
        return len(self.tuples)

    def arity(self) -> Optional[int]:
        return len(self.tuples[0]) if self.tuples else None


def w_phi(c: CRList) -> TermTupleList:
    """One ladder term m(|C|) per carriage return step, down to the empty list."""
    out = [(eval_m(c.denoted_length()),)]
    while not c.is_empty():
        c = carriage_return(c)
        out.append((eval_m(c.denoted_length()),))
    return TermTupleList(tuple(out))


def w_psi(c: CRList) -> TermTupleList:
    """Witness pairs (m(|B|), m(|C|)) over the shift/carriage-return walk."""
    out: list[tuple[Term, Term]] = []

    def walk(cur: CRList) -> None:
        if cur.is_empty():
            return
        out.append((eval_m(len(cur.back)), eval_m(cur.denoted_length())))
        if cur.back:
            walk(shift(cur))
        walk(carriage_return(cur))

    walk(c)
    return TermTupleList(tuple(out))


@dataclass(frozen=True)
class HerbrandSequent:
    """Quantifier-free instantiated midsequent."""

    ante: tuple[Formula, ...]
    succ: tuple[Formula, ...]


def codomain_matrix(n: int, at: Term) -> Formula:
    return normalize_formula(
        IterOr(OVar("n"), "i", eq(f(at), Nat(OVar("i")))), {"n": n})


def witness_matrix(x: Term, y: Term) -> Formula:
    return And(lt(x, y), eq(f(x), f(y)))


def herbrand_sequent(n: int) -> HerbrandSequent:
    """The ground midsequent for parameter n.

    Antecedent: one codomain disjunction per w_phi term of the canonical
    list; succedent: one witness conjunction per distinct w_psi pair.
    """
    if n < 0:
        raise ValueError(f"parameter must be >= 0, got {n}")
    entry = canonical(n)
    ante = tuple(codomain_matrix(n, t) for (t,) in w_phi(entry).tuples)
    seen = []
    for pair in w_psi(entry).tuples:
        if pair not in seen:
            seen.append(pair)
    succ = tuple(witness_matrix(x, y) for x, y in seen)
    return HerbrandSequent(ante, succ)


# ---------------------------------------------------------------------------
# ground validity


@dataclass
class HerbrandVerdict:
    valid: bool
    countermodel: Optional[dict[str, bool]]


def ground_problem(n: int, order_axioms: bool = True) -> Cnf:
    """CNF whose unsatisfiability is the validity of the midsequent.

    Premises: the antecedent disjunctions, the congruence axioms
    f(u) = i, f(v) = i |- f(u) = f(v) over the occurring ladder terms, and
    (optionally) the order facts m(i) < m(j) for i < j; the negated
    succedent contributes one binary clause per witness conjunction.
    """
    seq = herbrand_sequent(n)
    terms = [eval_m(i) for i in range(n + 2)]
    cnf = Cnf()
    ids: dict[Formula, int] = {}

    def var(a: Formula) -> int:
        if a not in ids:
            ids[a] = len(ids) + 1
            from .textio import print_atom
            cnf.labels[ids[a]] = print_atom(a)
        return ids[a]

    from .terms import flatten_or
    for phi in seq.ante:
        cnf.add(var(a) for a in flatten_or(phi))
    for i, u in enumerate(terms):
        for j, v in enumerate(terms):
            if i == j:
                continue
            for color in range(n + 1):
                cnf.add((-var(eq(f(u), inum(color))),
                         -var(eq(f(v), inum(color))),
                         var(eq(f(u), f(v)))))
    if order_axioms:
        for i, u in enumerate(terms):
            for v in terms[i + 1:]:
                cnf.add((var(lt(u, v)),))
    for phi in seq.succ:
        assert isinstance(phi, And)
        cnf.add((-var(phi.left), -var(phi.right)))
    return cnf


def verify_herbrand(n: int, order_axioms: bool = True) -> HerbrandVerdict:
    """Valid iff the ground problem is unsatisfiable; else a countermodel."""
    cnf = ground_problem(n, order_axioms)
    model = dpll(cnf.clauses)
    if model is None:
        return HerbrandVerdict(True, None)
    named = {cnf.labels.get(v, f"#{v}"): val for v, val in sorted(model.items())}
    return HerbrandVerdict(False, named)


def herbrand_dimacs(n: int, order_axioms: bool = True) -> str:
    return to_dimacs(ground_problem(n, order_axioms))


# ---------------------------------------------------------------------------
# skolemized prenex sequent shape


@dataclass(frozen=True)
class SpsSchema:
    """Prefix blocks and matrices of a skolemized prenex sequent."""

    forall_blocks: tuple[tuple[tuple[str, ...], Formula], ...]
    exists_blocks: tuple[tuple[tuple[str, ...], Formula], ...]
    delta: tuple[Formula, ...]
    pi: tuple[Formula, ...]


def _quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Forall, Exists)):
        return False
    if isinstance(phi, Atom):
        return True
    if isinstance(phi, IterOr):
        return _quantifier_free(phi.body)
    if hasattr(phi, "left"):
        return _quantifier_free(phi.left) and _quantifier_free(phi.right)
    if hasattr(phi, "body"):
        return _quantifier_free(phi.body)
    raise TypeError(phi)


def _strip_prefix(phi: Formula, kind) -> tuple[tuple[str, ...], Formula]:
    names: list[str] = []
    while isinstance(phi, kind):
        names.append(phi.var)
        phi = phi.body
    return tuple(names), phi


def sps_parse(ante: Iterable[Formula], succ: Iterable[Formula]
              ) -> Optional[SpsSchema]:
    """Fit a sequent into the sps shape, or None if it does not fit.

    Antecedent formulas must be universal prefixes over quantifier-free
    matrices (an empty prefix lands the formula in the fixed side
    multiset), succedent formulas existential prefixes likewise.
    """
    foralls, delta, exists, pi = [], [], [], []
    for phi in ante:
        names, matrix = _strip_prefix(phi, Forall)
        if not _quantifier_free(matrix):
            return None
        if names:
            foralls.append((names, matrix))
        else:
            delta.append(matrix)
    for phi in succ:
        names, matrix = _strip_prefix(phi, Exists)
        if not _quantifier_free(matrix):
            return None
        if names:
            exists.append((names, matrix))
        else:
            pi.append(matrix)
    return SpsSchema(tuple(foralls), tuple(exists), tuple(delta), tuple(pi))


def sps_match(ante: Iterable[Formula], succ: Iterable[Formula]) -> bool:
    return sps_parse(ante, succ) is not None


def nia_sps_sequent() -> tuple[tuple[Formula, ...], tuple[Formula, ...]]:
    """forall x. bigor f(x) = i |- exists x. exists y. (x < y & f(x) = f(y))."""
    x, y = Var("x"), Var("y")
    ante = Forall("x", IterOr(OVar("n"), "i", eq(f(x), Nat(OVar("i")))))
    succ = Exists("x", Exists("y", And(lt(x, y), eq(f(x), f(y)))))
    return (ante,), (succ,)
