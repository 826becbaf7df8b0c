"""Independent oracles: lemma-by-lemma derivations and ground saturation.

The derivation builders transcribe the constructive refutation: the
reflexivity-to-max-ladder lemma ``|- t <= m(k, x, t)``, its successor and
pairing corollaries, the interval clauses c_b / c'_b parameterized by a
bijection on the color range, the descending induction over index pairs,
and the final chaining against the codomain clause.  Every builder
returns a resolution tree whose leaves are instances of the target clause
set, so the generic checker re-verifies them end to end.

``less_dot`` is the verbatim pair ordering; the transitivity scan reports
counterexamples instead of assuming the claimed transitivity (they exist
from n = 3 on).

``saturate`` is the deliberately dumb cross-check: ground-instantiate the
clause set over the nested-max universe, drop pure literals, and run
exhaustive propositional resolution with subsumption, reconstructing a
checkable tree when the empty clause appears.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .clauses import Clause, nia_clause_set
from .resolution import (RLeaf, ResolutionTree, RNode, resolve_node, concl,
                         tree_leaves)
from .terms import (Atom, FreshNamer, Substitution, Term, Var, eq, eval_m,
                    eval_m_iter, f, inum, leq, mx, s, sv)


class OracleRangeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# clause instances used as leaves


def _c1_leaf(t: Term) -> RLeaf:
    return RLeaf(Clause.of((), (leq(t, t),)))


def _c2_leaf() -> RLeaf:
    alpha, beta, gamma = Var("alpha"), Var("beta"), Var("gamma")
    return RLeaf(Clause.of((leq(mx(alpha, beta), gamma),),
                           (leq(alpha, gamma),)))


def _c3_leaf() -> RLeaf:
    # projection to the second component, written over beta/delta/gamma
    beta, delta, gamma = Var("beta"), Var("delta"), Var("gamma")
    return RLeaf(Clause.of((leq(mx(beta, delta), gamma),),
                           (leq(delta, gamma),)))


def _c4_leaf(i: int) -> RLeaf:
    alpha, beta = Var("alpha"), Var("beta")
    return RLeaf(Clause.of(
        (eq(f(beta), inum(i)), eq(f(alpha), inum(i)), leq(s(beta), alpha)), ()))


def _c5_leaf(n: int, at: Term) -> RLeaf:
    return RLeaf(Clause.of((), tuple(eq(f(at), inum(c)) for c in range(n + 1))))


def _m(k: int, base: Term) -> Term:
    return eval_m_iter(k, "x", base)


# ---------------------------------------------------------------------------
# the lemma ladder


def derive_leq(k: int, t: Optional[Term] = None) -> ResolutionTree:
    """Tree concluding |- t <= m(k, x, t), by induction on k.

    The base case is a reflexivity instance; each step resolves the
    unfolded instance against the second max projection.  ``t`` must not
    use the variable names of the projection clauses (beta, gamma, delta).
    """
    if k < 0:
        raise OracleRangeError(f"ladder depth must be >= 0, got {k}")
    if t is None:
        t = Var("t")
    if k == 0:
        return _c1_leaf(t)
    grown = mx(s(sv("x", k)), t)
    inner = derive_leq(k - 1, grown)
    pivot = leq(grown, _m(k - 1, grown))
    return resolve_node(inner, _c3_leaf(), pivot)


def derive_succ_leq(k: int, t: Optional[Term] = None) -> ResolutionTree:
    """Tree concluding |- s(x_{k+1}) <= m(k, x, max(s(x_{k+1}), t))."""
    if k < 0:
        raise OracleRangeError(f"ladder depth must be >= 0, got {k}")
    if t is None:
        t = Var("t")
    grown = mx(s(sv("x", k + 1)), t)
    inner = derive_leq(k, grown)
    pivot = leq(grown, _m(k, grown))
    return resolve_node(inner, _c2_leaf(), pivot)


def derive_pair_max(k: int, i: int, n: int,
                    t: Optional[Term] = None) -> ResolutionTree:
    """Tree concluding f(x_{k+1}) = i, f(m(k, x, max(s(x_{k+1}), t))) = i |-."""
    if not 0 <= i <= n:
        raise OracleRangeError(f"color {i} outside 0..{n}")
    if t is None:
        t = Var("t")
    grown = mx(s(sv("x", k + 1)), t)
    inner = derive_succ_leq(k, t)
    pivot = leq(s(sv("x", k + 1)), _m(k, grown))
    return resolve_node(inner, _c4_leaf(i), pivot)


def derive_pair_succ(k: int, i: int, n: int) -> ResolutionTree:
    """Tree concluding f(x_{k+1}) = i, f(m(k, x_k, s(x_{k+1}))) = i |-."""
    if not 0 <= i <= n:
        raise OracleRangeError(f"color {i} outside 0..{n}")
    succ_term = s(sv("x", k + 1))
    inner = derive_leq(k, succ_term)
    pivot = leq(succ_term, _m(k, succ_term))
    return resolve_node(inner, _c4_leaf(i), pivot)


# ---------------------------------------------------------------------------
# bijections and the interval clauses


@dataclass(frozen=True)
class Bijection:
    """Permutation of the colors 0..n."""

    values: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.values) != list(range(len(self.values))):
            raise ValueError(f"not a permutation: {self.values}")

    def __call__(self, i: int) -> int:
        return self.values[i]

    @property
    def n(self) -> int:
        return len(self.values) - 1

    @staticmethod
    def identity(n: int) -> "Bijection":
        return Bijection(tuple(range(n + 1)))

    def swap(self, a: int, b: int) -> "Bijection":
        vals = list(self.values)
        vals[a], vals[b] = vals[b], vals[a]
        return Bijection(tuple(vals))


def derive_c(k: int, n: int, b: Bijection,
             z: Optional[Term] = None) -> ResolutionTree:
    """Tree concluding c_b(k, n, z):
    f(x_1) = b(0), ..., f(x_{k+1}) = b(k) |- f(M) = b(k+1), ..., f(M) = b(n)
    with M = m(k+1, x, z); at k = -1 this is the codomain clause itself.
    """
    if not -1 <= k <= n:
        raise OracleRangeError(f"index {k} outside -1..{n}")
    if b.n != n:
        raise OracleRangeError(f"bijection is on 0..{b.n}, expected 0..{n}")
    if z is None:
        z = Var("z")
    if k == -1:
        return _c5_leaf(n, z)
    carrier = Var(f"u{k}")
    inner = derive_c(k - 1, n, b, carrier)
    grown = mx(s(sv("x", k + 1)), z)
    pivot = eq(f(_m(k, grown)), inum(b(k)))
    return resolve_node(inner, derive_pair_max(k, b(k), n, t=z), pivot)


def derive_cprime(k: int, n: int, b: Bijection) -> ResolutionTree:
    """Tree concluding c'_b(k, n):
    f(x_1) = b(0), ..., f(x_{k+1}) = b(k) |- f(M') = b(k+1), ..., f(M') = b(n)
    with M' = m(k, x_k, s(x_{k+1})).
    """
    if not 0 <= k <= n:
        raise OracleRangeError(f"index {k} outside 0..{n}")
    carrier = Var(f"u{k}")
    inner = derive_c(k - 1, n, b, carrier)
    pivot = eq(f(_m(k, s(sv("x", k + 1)))), inum(b(k)))
    return resolve_node(inner, derive_pair_succ(k, b(k), n), pivot)


# ---------------------------------------------------------------------------
# the pair ordering and the descending induction


def pair_domain(n: int) -> list[tuple[int, int]]:
    """A_n: pairs (i, j) with 0 <= i <= j <= n."""
    return [(i, j) for i in range(n + 1) for j in range(i, n + 1)]


def less_dot(n: int, p: tuple[int, int], q: tuple[int, int]) -> bool:
    """(i, j) below (l, k): the verbatim condition list.

    i, k, l <= n; j < n; l <= i; k <= j; i = l iff j != k; j = k iff i != l.
    """
    i, j = p
    l, k = q
    if p not in set(pair_domain(n)) or q not in set(pair_domain(n)):
        raise OracleRangeError(f"pairs must lie in the domain for n={n}")
    return (i <= n and k <= n and l <= n and j < n and l <= i and k <= j
            and ((i == l) == (j != k)) and ((j == k) == (i != l)))


def transitivity_scan(n: int) -> list[tuple]:
    """Counterexamples to transitivity in the pair ordering, if any."""
    dom = pair_domain(n)
    rel = {(p, q) for p in dom for q in dom if less_dot(n, p, q)}
    out = []
    for p, q in rel:
        for r in dom:
            if (q, r) in rel and (p, r) not in rel:
                out.append((p, q, r))
    return sorted(out)


def derive_cprime_general(k: int, j: int, n: int, b: Bijection
                          ) -> ResolutionTree:
    """Tree concluding c'_b(k, j), by descending induction from j = n.

    Each step resolves c'_b(k, j+1) against the closed clause
    c'_{b'}(k+1, k+1) for the companion bijection with b'(k+1) = b(j+1);
    the duplicated antecedent contracts away.
    """
    if not 0 <= k <= j <= n:
        raise OracleRangeError(f"indices ({k}, {j}) outside 0 <= k <= j <= {n}")
    if j == n:
        return derive_cprime(k, n, b)
    left = derive_cprime_general(k, j + 1, n, b)
    companion = b.swap(k + 1, j + 1)
    right = derive_cprime_general(k + 1, k + 1, n, companion)
    pivot = eq(f(_m(k, s(sv("x", k + 1)))), inum(b(j + 1)))
    return resolve_node(left, right, pivot)


def refute_math(n: int) -> ResolutionTree:
    """Full refutation: close f(x) = i |- for every color, then the codomain."""
    if n < 0:
        raise OracleRangeError(f"parameter must be >= 0, got {n}")
    namer = FreshNamer()
    tree: ResolutionTree = _c5_leaf(n, Var("alpha"))
    for i in range(n + 1):
        b = Bijection.identity(n).swap(0, i)
        closed = derive_cprime_general(0, 0, n, b)
        mapping = _fresh_tree_mapping(closed, namer)
        closed = tree_rename(closed, mapping)
        pivot_var = mapping.get(sv("x", 1), sv("x", 1))
        tree = resolve_node(tree, closed, eq(f(pivot_var), inum(i)))
    return tree


def _fresh_tree_mapping(tree: ResolutionTree, namer: FreshNamer):
    variables = set()
    for clause in tree_leaves(tree):
        variables |= clause.variables()
    variables |= concl(tree).variables()
    return namer.rename_apart(sorted(variables, key=str))


def tree_rename(tree: ResolutionTree, mapping) -> ResolutionTree:
    """Rename variables throughout a tree; stays step-valid (bijective)."""
    from .terms import rename_atom, rename_term
    if isinstance(tree, RLeaf):
        return RLeaf(tree.clause.rename(mapping), contracted=tree.contracted)
    sigma = Substitution.of({
        rename_term(k, mapping): rename_term(v, mapping)
        for k, v in tree.sigma.mapping})
    return RNode(left=tree_rename(tree.left, mapping),
                 right=tree_rename(tree.right, mapping),
                 pivot=rename_atom(tree.pivot, mapping), sigma=sigma,
                 conclusion=tree.conclusion.rename(mapping),
                 contracted=tree.contracted, swapped=tree.swapped)


# ---------------------------------------------------------------------------
# ground saturation


@dataclass
class SaturationResult:
    tree: Optional[ResolutionTree]
    stats: dict


def saturate(n: int, depth: int, max_processed: int = 100_000,
             max_generated: int = 2_000_000) -> SaturationResult:
    """Exhaustive ground resolution over the nested-max universe.

    Instantiates the clause set for ``n`` over the terms m(0) .. m(depth)
    and their successors, removes clauses with pure literals (they cannot
    feed any refutation), and saturates smallest-clause-first with forward
    and backward subsumption.  Deterministic for fixed inputs; returns a
    reconstructed tree when the empty clause is derived, otherwise the
    diagnostics say whether the budget ran out or the space was exhausted.
    """
    if n < 0 or depth < 0:
        raise OracleRangeError("parameters must be >= 0")
    universe = [eval_m(j) for j in range(depth + 1)]
    domain = universe + [s(u) for u in universe]

    base = sorted(nia_clause_set(n), key=lambda c: (c.size(),))
    atom_ids: dict[Atom, int] = {}

    def intern(a: Atom) -> int:
        if a not in atom_ids:
            atom_ids[a] = len(atom_ids) + 1
        return atom_ids[a]

    instances: list[tuple[frozenset[int], Clause]] = []
    seen_lits: set[frozenset[int]] = set()
    for clause in base:
        vs = sorted(clause.variables(), key=str)
        for combo in itertools.product(domain, repeat=len(vs)):
            mapping = dict(zip(vs, combo))
            ground = clause.rename(mapping).contract()
            if ground.is_tautology():
                continue
            lits = frozenset({-intern(a) for a in ground.ante}
                             | {intern(a) for a in ground.succ})
            if lits not in seen_lits:
                seen_lits.add(lits)
                instances.append((lits, ground))

    stats = {"instances": len(instances)}
    instances = _pure_literal_elim(instances)
    stats["after_pure_elimination"] = len(instances)

    id_atom = {v: k for k, v in atom_ids.items()}
    parents: dict[frozenset[int], tuple] = {}
    for lits, ground in instances:
        parents[lits] = ("input", ground)

    counter = itertools.count()
    passive: list[tuple[int, int, frozenset[int]]] = []
    for lits, _ in instances:
        heapq.heappush(passive, (len(lits), next(counter), lits))
    active: list[frozenset[int]] = []
    by_maxlit: dict[int, list[frozenset[int]]] = {}
    generated = kept = subsumed = processed = 0
    empty: Optional[frozenset[int]] = None
    budget_exceeded = False

    def max_lit(lits: frozenset[int]) -> int:
        # total literal order by atom, negative below positive on ties;
        # ordered ground resolution on the maximal literal stays complete
        return max(lits, key=lambda l: (abs(l), l))

    def subsumed_by_active(lits: frozenset[int]) -> bool:
        return any(a <= lits for a in active)

    while passive and empty is None:
        if processed >= max_processed or generated >= max_generated:
            budget_exceeded = True
            break
        _, _, given = heapq.heappop(passive)
        if subsumed_by_active(given):
            subsumed += 1
            continue
        active[:] = [a for a in active if not given < a]
        processed += 1
        active.append(given)
        lit = max_lit(given)
        by_maxlit.setdefault(lit, []).append(given)
        for other in list(by_maxlit.get(-lit, ())):
            resolvent = (given - {lit}) | (other - {-lit})
            generated += 1
            if any(-x in resolvent for x in resolvent):
                continue
            if resolvent in parents:
                continue
            pos_parent, neg_parent = (given, other) if lit > 0 else (other, given)
            parents[resolvent] = ("res", pos_parent, neg_parent, abs(lit))
            if not resolvent:
                empty = resolvent
                break
            if subsumed_by_active(resolvent):
                subsumed += 1
                continue
            kept += 1
            heapq.heappush(passive, (len(resolvent), next(counter), resolvent))

    stats.update(generated=generated, kept=kept, subsumed=subsumed,
                 processed=processed, found=empty is not None,
                 budget_exceeded=budget_exceeded)
    if empty is None:
        return SaturationResult(None, stats)

    def rebuild(lits: frozenset[int]) -> ResolutionTree:
        entry = parents[lits]
        if entry[0] == "input":
            return RLeaf(entry[1])
        _, pos_parent, neg_parent, atom_id = entry
        return resolve_node(rebuild(pos_parent), rebuild(neg_parent),
                            id_atom[atom_id])

    return SaturationResult(rebuild(empty), stats)


def _pure_literal_elim(instances):
    """Iteratively drop clauses containing a literal with no complement."""
    current = list(instances)
    while True:
        occurring: set[int] = set()
        for lits, _ in current:
            occurring |= lits
        keep = [(lits, g) for lits, g in current
                if all(-lit in occurring for lit in lits)]
        if len(keep) == len(current):
            return keep
        current = keep
