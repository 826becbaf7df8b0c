"""Clauses, clause-set terms with (+)/(x) evaluation, and the target clause set.

A clause is a pair of atom multisets ``antecedent |- succedent``, stored in
a canonical sorted order so equality is multiset equality.  Clause entries
may contain defined symbols (iterated disjunctions, m-terms) until
``normalize_clause`` eliminates them; an iterated disjunction in the
succedent flattens into several succedent atoms.

Clause-set terms are trees over clause-set leaves, ``plus`` (set union),
``times`` (pairwise clause merge), and indexed clause-set symbols that a
rewrite system resolves away (``normalize_symbols``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .terms import (Atom, Formula, FreshNamer, IterOr, OVar, OmegaTerm, Or,
                    Substitution, Term, Var, SVar, atom_vars, flatten_or,
                    match_atom, normalize_formula, omega_value, onum,
                    rename_atom, structural_key, subst_omega_formula,
                    normalize_omega)


class ClauseError(ValueError):
    pass


class UnresolvedSymbol(ValueError):
    pass


class MissingRule(KeyError):
    pass


class RewriteBudgetExceeded(RuntimeError):
    pass


def _sorted_atoms(atoms: Iterable[Formula]) -> tuple[Formula, ...]:
    return tuple(sorted(atoms, key=structural_key))


@dataclass(frozen=True)
class Clause:
    """Sequent of atoms: antecedent multiset |- succedent multiset."""

    ante: tuple[Formula, ...] = ()
    succ: tuple[Formula, ...] = ()

    @staticmethod
    def of(ante: Iterable[Formula] = (), succ: Iterable[Formula] = ()) -> "Clause":
        return Clause(_sorted_atoms(ante), _sorted_atoms(succ))

    def is_empty(self) -> bool:
        return not self.ante and not self.succ

    def is_tautology(self) -> bool:
        return bool(set(self.ante) & set(self.succ))

    def contract(self) -> "Clause":
        return Clause(_sorted_atoms(set(self.ante)), _sorted_atoms(set(self.succ)))

    def merge(self, other: "Clause") -> "Clause":
        """Clause merge C o D: multiset unions of both components."""
        return Clause.of(self.ante + other.ante, self.succ + other.succ)

    def variables(self) -> set[Term]:
        out: set[Term] = set()
        for a in self.ante + self.succ:
            out |= atom_vars(a)
        return out

    def rename(self, mapping: Mapping[Term, Term]) -> "Clause":
        return Clause.of((rename_atom(a, mapping) for a in self.ante),
                         (rename_atom(a, mapping) for a in self.succ))

    def apply_subst(self, subst: Substitution) -> "Clause":
        return Clause.of((subst.apply_atom(a) for a in self.ante),
                         (subst.apply_atom(a) for a in self.succ))

    def size(self) -> int:
        return len(self.ante) + len(self.succ)


from .terms import _attach_cached_hash

_attach_cached_hash(Clause, ("ante", "succ"))

EMPTY_CLAUSE = Clause()


def normalize_clause(c: Clause, gamma=None) -> Clause:
    """Eliminate defined symbols; flatten succedent disjunctions into atoms."""
    succ: list[Formula] = []
    for phi in c.succ:
        norm = normalize_formula(phi, gamma)
        for part in flatten_or(norm):
            if not isinstance(part, Atom):
                raise ClauseError(f"non-atomic succedent part {part!r}")
            succ.append(part)
    ante: list[Formula] = []
    for phi in c.ante:
        norm = normalize_formula(phi, gamma)
        if not isinstance(norm, Atom):
            raise ClauseError(f"non-atomic antecedent formula {norm!r}")
        ante.append(norm)
    return Clause.of(ante, succ)


def canonical_clause(c: Clause) -> Clause:
    """Least variable renaming of ``c``: clause equality modulo renaming.

    Clauses in this artifact carry at most a handful of distinct variables,
    so trying every bijection onto v0..vk is cheap and exact.
    """
    vs = sorted(c.variables(), key=structural_key)
    if not vs:
        return c
    best = None
    fresh = [Var(f"v{i}") for i in range(len(vs))]
    for perm in itertools.permutations(fresh):
        cand = c.rename(dict(zip(vs, perm)))
        key = (tuple(map(structural_key, cand.ante)),
               tuple(map(structural_key, cand.succ)))
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def canonical_set(clauses: Iterable[Clause]) -> frozenset[Clause]:
    return frozenset(canonical_clause(c) for c in clauses)


def sets_equal_mod_renaming(a: Iterable[Clause], b: Iterable[Clause]) -> bool:
    return canonical_set(a) == canonical_set(b)


# ---------------------------------------------------------------------------
# clause-set terms


class ClauseSetTerm:
    __slots__ = ()


@dataclass(frozen=True)
class CSLeaf(ClauseSetTerm):
    clauses: frozenset[Clause]

    @staticmethod
    def of(*clauses: Clause) -> "CSLeaf":
        return CSLeaf(frozenset(clauses))


@dataclass(frozen=True)
class CSPlus(ClauseSetTerm):
    left: ClauseSetTerm
    right: ClauseSetTerm


@dataclass(frozen=True)
class CSTimes(ClauseSetTerm):
    left: ClauseSetTerm
    right: ClauseSetTerm


@dataclass(frozen=True)
class CSSymbol(ClauseSetTerm):
    """Indexed clause-set symbol cl^{symbol,config}(index)."""

    symbol: str
    config: frozenset
    index: OmegaTerm


def evaluate(term: ClauseSetTerm) -> frozenset[Clause]:
    """|leaf| = its set, |plus| = union, |times| = pairwise clause merge."""
    if isinstance(term, CSLeaf):
        return term.clauses
    if isinstance(term, CSPlus):
        return evaluate(term.left) | evaluate(term.right)
    if isinstance(term, CSTimes):
        return frozenset(c.merge(d)
                         for c in evaluate(term.left)
                         for d in evaluate(term.right))
    if isinstance(term, CSSymbol):
        raise UnresolvedSymbol(
            f"unresolved clause-set symbol cl^{term.symbol},{sorted(term.config)}")
    raise TypeError(term)


def cs_symbols(term: ClauseSetTerm) -> list[CSSymbol]:
    if isinstance(term, CSSymbol):
        return [term]
    if isinstance(term, (CSPlus, CSTimes)):
        return cs_symbols(term.left) + cs_symbols(term.right)
    return []


def cs_leaves(term: ClauseSetTerm) -> list[frozenset[Clause]]:
    if isinstance(term, CSLeaf):
        return [term.clauses]
    if isinstance(term, (CSPlus, CSTimes)):
        return cs_leaves(term.left) + cs_leaves(term.right)
    return []


def _subst_omega_cs(term: ClauseSetTerm, var: str, val: OmegaTerm) -> ClauseSetTerm:
    if isinstance(term, CSLeaf):
        out = []
        for c in term.clauses:
            out.append(Clause.of(
                (subst_omega_formula(a, var, val) for a in c.ante),
                (subst_omega_formula(a, var, val) for a in c.succ)))
        return CSLeaf(frozenset(out))
    if isinstance(term, (CSPlus, CSTimes)):
        return type(term)(_subst_omega_cs(term.left, var, val),
                          _subst_omega_cs(term.right, var, val))
    if isinstance(term, CSSymbol):
        from .terms import _subst_o
        return CSSymbol(term.symbol, term.config, _subst_o(term.index, var, val))
    raise TypeError(term)


@dataclass(frozen=True)
class SymbolRule:
    """Rewrite pair for one (symbol, config): index 0 and index step_var+1."""

    symbol: str
    config: frozenset
    base: ClauseSetTerm
    step: Optional[ClauseSetTerm] = None
    step_var: str = "k"


def normalize_symbols(rules: Mapping[tuple[str, frozenset], SymbolRule],
                      term: ClauseSetTerm, gamma: int,
                      budget: int = 10_000) -> frozenset[Clause]:
    """Normal form of ``term`` at parameter value ``gamma``, evaluated.

    Clause-set symbols rewrite by their (symbol, config) rule at the
    symbol's ground index; defined symbols inside clauses are then
    normalized; each rule instantiation renames its individual variables
    apart with an instantiation counter.
    """
    namer = FreshNamer()

    def expand(t: ClauseSetTerm, budget_left: list[int]) -> ClauseSetTerm:
        if budget_left[0] <= 0:
            raise RewriteBudgetExceeded(
                f"clause-set rewriting exceeded its step budget at {t!r}")
        if isinstance(t, CSLeaf):
            return t
        if isinstance(t, (CSPlus, CSTimes)):
            return type(t)(expand(t.left, budget_left), expand(t.right, budget_left))
        assert isinstance(t, CSSymbol)
        budget_left[0] -= 1
        key = (t.symbol, t.config)
        if key not in rules:
            raise MissingRule(
                f"no rewrite rule for clause-set symbol {t.symbol} at config "
                f"{sorted(t.config)}")
        rule = rules[key]
        idx = omega_value(normalize_omega(t.index, {"n": gamma}))
        if idx == 0:
            body = rule.base
        elif rule.step is None:
            raise MissingRule(
                f"no step rule for clause-set symbol {t.symbol} at index {idx}")
        else:
            body = _subst_omega_cs(rule.step, rule.step_var, onum(idx - 1))
        body = _freshen_cs(body, namer)
        return expand(body, budget_left)

    start = _subst_omega_cs(term, "n", onum(gamma))
    expanded = expand(start, [budget])
    return frozenset(normalize_clause(c) for c in evaluate(expanded))


def _freshen_cs(term: ClauseSetTerm, namer: FreshNamer) -> ClauseSetTerm:
    variables: set[Term] = set()
    for clause_set in cs_leaves(term):
        for c in clause_set:
            for a in c.ante + c.succ:
                variables |= _formula_vars(a)
    # suffix starts with a letter so freshened names stay individual
    # variables under the text grammar (name_DIGITS is a schematic variable)
    mapping = {v: Var(f"{v.name}_i{namer.next_suffix()}")
               for v in variables if isinstance(v, Var)}

    def walk(t: ClauseSetTerm) -> ClauseSetTerm:
        if isinstance(t, CSLeaf):
            return CSLeaf(frozenset(
                Clause.of((_rename_formula(a, mapping) for a in c.ante),
                          (_rename_formula(a, mapping) for a in c.succ))
                for c in t.clauses))
        if isinstance(t, (CSPlus, CSTimes)):
            return type(t)(walk(t.left), walk(t.right))
        return t

    return walk(term)


def _formula_vars(phi: Formula) -> set[Term]:
    if isinstance(phi, Atom):
        return atom_vars(phi)
    if isinstance(phi, IterOr):
        return _formula_vars(phi.body)
    if isinstance(phi, Or):
        return _formula_vars(phi.left) | _formula_vars(phi.right)
    return set()


def _rename_formula(phi: Formula, mapping: Mapping[Term, Term]) -> Formula:
    if isinstance(phi, Atom):
        return rename_atom(phi, mapping)
    if isinstance(phi, IterOr):
        return IterOr(phi.bound, phi.var, _rename_formula(phi.body, mapping))
    if isinstance(phi, Or):
        return Or(_rename_formula(phi.left, mapping),
                  _rename_formula(phi.right, mapping))
    return phi


# ---------------------------------------------------------------------------
# tautology elimination and subsumption


def tautology_elim(clauses: Iterable[Clause]) -> frozenset[Clause]:
    return frozenset(c for c in clauses if not c.is_tautology())


def subsumes(c: Clause, d: Clause) -> bool:
    """True iff some substitution maps c's atoms injectively into d, per side."""
    return _match_multiset(list(c.ante), list(d.ante), {},
                           lambda sub: _match_multiset(list(c.succ), list(d.succ),
                                                       sub, lambda _: True))


def _match_multiset(patterns, targets, subst, cont) -> bool:
    if not patterns:
        return cont(subst)
    first, rest = patterns[0], patterns[1:]
    for i, t in enumerate(targets):
        attempt = dict(subst)
        if match_atom(first, t, attempt) is not None:
            if _match_multiset(rest, targets[:i] + targets[i + 1:], attempt, cont):
                return True
    return False


def subsumption_reduce(clauses: Iterable[Clause]) -> frozenset[Clause]:
    """Keep only clauses not subsumed by another kept clause.

    Mutually subsuming variants keep their first representative in
    canonical order, so the result is deterministic.
    """
    ordered = sorted(clauses, key=lambda c: structural_key_clause(c))
    kept: list[Clause] = []
    for d in ordered:
        redundant = False
        for c in kept:
            if subsumes(c, d):
                redundant = True
                break
        if not redundant:
            kept = [c for c in kept if not subsumes(d, c)]
            kept.append(d)
    return frozenset(kept)


def structural_key_clause(c: Clause) -> tuple:
    return (tuple(map(structural_key, c.ante)), tuple(map(structural_key, c.succ)))


# ---------------------------------------------------------------------------
# the non-injectivity assertion clause set C(n)


def nia_clause_set(n: int) -> frozenset[Clause]:
    """{C1, C2, C3} + {C4(k) : 0 <= k <= n} + {C5} over alpha, beta, gamma.

    C1:    |- alpha <= alpha
    C2:    max(alpha, beta) <= gamma |- alpha <= gamma
    C3:    max(alpha, beta) <= gamma |- beta <= gamma
    C4(k): f(beta) = k, f(alpha) = k, s(beta) <= alpha |-
    C5:    |- f(alpha) = 0, ..., f(alpha) = n
    """
    from .terms import Var, eq, f, inum, leq, mx, s
    if n < 0:
        raise ValueError(f"clause set parameter must be >= 0, got {n}")
    alpha, beta, gamma = Var("alpha"), Var("beta"), Var("gamma")
    out = [
        Clause.of((), (leq(alpha, alpha),)),
        Clause.of((leq(mx(alpha, beta), gamma),), (leq(alpha, gamma),)),
        Clause.of((leq(mx(alpha, beta), gamma),), (leq(beta, gamma),)),
    ]
    for k in range(n + 1):
        out.append(Clause.of(
            (eq(f(beta), inum(k)), eq(f(alpha), inum(k)), leq(s(beta), alpha)), ()))
    out.append(Clause.of((), tuple(eq(f(alpha), inum(i)) for i in range(n + 1))))
    return frozenset(out)
