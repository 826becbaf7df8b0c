import itertools

import pytest

from crres.clauses import (Clause, CSLeaf, CSPlus, CSSymbol, CSTimes,
                           MissingRule, RewriteBudgetExceeded, SymbolRule,
                           UnresolvedSymbol, canonical_clause, evaluate,
                           nia_clause_set, normalize_symbols,
                           sets_equal_mod_renaming, subsumes,
                           subsumption_reduce, tautology_elim)
from crres.proofs import nia_char_rules
from crres.terms import (Atom, Const, OSucc, OVar, Var, eq, f, inum, leq, mx,
                         onum, s)

ALPHA, BETA, GAMMA = Var("alpha"), Var("beta"), Var("gamma")


class TestEvaluate:
    def test_times_merges_componentwise(self):
        left = CSLeaf.of(Clause.of((leq(s(BETA), ALPHA),), ()))
        right = CSLeaf.of(Clause.of((eq(f(ALPHA), inum(0)),
                                     eq(f(BETA), inum(0))), ()))
        got = evaluate(CSTimes(left, right))
        assert got == frozenset({Clause.of(
            (leq(s(BETA), ALPHA), eq(f(ALPHA), inum(0)), eq(f(BETA), inum(0))),
            ())})

    def test_plus_union_identity(self):
        some = CSLeaf.of(Clause.of((), (leq(ALPHA, ALPHA),)))
        assert evaluate(CSPlus(some, CSLeaf(frozenset()))) == some.clauses

    def test_times_over_two_element_set(self):
        a = Clause.of((), (eq(f(ALPHA), inum(0)),))
        b = Clause.of((), (eq(f(ALPHA), inum(1)),))
        c = Clause.of((leq(ALPHA, BETA),), ())
        got = evaluate(CSTimes(CSPlus(CSLeaf.of(a), CSLeaf.of(b)), CSLeaf.of(c)))
        assert got == frozenset({a.merge(c), b.merge(c)})

    def test_symbol_error_names_the_symbol(self):
        term = CSSymbol("psi", frozenset({("ante", 0)}), onum(0))
        with pytest.raises(UnresolvedSymbol, match="psi"):
            evaluate(term)

    def test_distributivity(self, rng):
        from conftest import random_clause
        for _ in range(40):
            t1 = CSLeaf(frozenset(random_clause(rng) for _ in range(2)))
            t2 = CSLeaf(frozenset(random_clause(rng) for _ in range(2)))
            t3 = CSLeaf(frozenset(random_clause(rng) for _ in range(2)))
            assert evaluate(CSTimes(t1, CSPlus(t2, t3))) == \
                evaluate(CSTimes(t1, t2)) | evaluate(CSTimes(t1, t3))


class TestTautologyElim:
    def test_removes_shared_atom_clause(self):
        taut = Clause.of((eq(f(ALPHA), inum(0)),), (eq(f(ALPHA), inum(0)),))
        assert tautology_elim({taut}) == frozenset()

    def test_keeps_reference_set(self):
        assert tautology_elim(nia_clause_set(2)) == nia_clause_set(2)

    def test_mixed(self):
        a = Atom("=", f(ALPHA), inum(0))
        b = Atom("=", f(BETA), inum(1))
        kept = Clause.of((), (b,))
        assert tautology_elim({Clause.of((a,), (a,)), kept}) == frozenset({kept})

    def test_idempotent(self, rng):
        from conftest import random_clause
        sets = [frozenset(random_clause(rng) for _ in range(5))
                for _ in range(20)]
        for clause_set in sets:
            once = tautology_elim(clause_set)
            assert tautology_elim(once) == once


def _ground_satisfiable(clauses) -> bool:
    """Ground the set over three constants and enumerate truth assignments.

    Callers must keep the atom vocabulary tiny; this is a brute-force
    semantic oracle, not a solver.
    """
    consts = [Const("c1"), Const("c2")]
    ground = set()
    for clause in clauses:
        vs = sorted(clause.variables(), key=str)
        for combo in itertools.product(consts, repeat=len(vs)):
            ground.add(clause.rename(dict(zip(vs, combo))))
    atoms = sorted({a for c in ground for a in c.ante + c.succ}, key=str)
    assert len(atoms) <= 14, "atom vocabulary too large for enumeration"
    for bits in itertools.product((False, True), repeat=len(atoms)):
        val = dict(zip(atoms, bits))
        if all(any(not val[a] for a in c.ante) or any(val[a] for a in c.succ)
               for c in ground):
            return True
    return False


def _tiny_random_clause(rng) -> Clause:
    """Clauses over a deliberately small ground-atom vocabulary."""
    vs = [ALPHA, BETA]
    atoms = [leq(rng.choice(vs), rng.choice(vs)),
             eq(f(rng.choice(vs)), inum(rng.randrange(2)))]
    ante = [rng.choice(atoms) for _ in range(rng.randrange(3))]
    succ = [rng.choice(atoms) for _ in range(rng.randrange(3))]
    return Clause.of(ante, succ)


class TestSubsumption:
    def test_reflexivity_subsumes_instance(self):
        general = Clause.of((), (leq(ALPHA, ALPHA),))
        specific = Clause.of((), (leq(s(inum(0)), s(inum(0))),))
        assert subsumes(general, specific)

    def test_numerals_do_not_map(self):
        c4 = {k: Clause.of((eq(f(BETA), inum(k)), eq(f(ALPHA), inum(k)),
                            leq(s(BETA), ALPHA)), ())
              for k in (0, 1)}
        assert not subsumes(c4[0], c4[1])

    def test_reduce(self):
        general = Clause.of((), (leq(ALPHA, ALPHA),))
        specific = Clause.of((), (leq(s(inum(0)), s(inum(0))),))
        assert subsumption_reduce({general, specific}) == frozenset({general})

    def test_reduce_idempotent_and_sound(self, rng):
        for _ in range(25):
            clause_set = frozenset(_tiny_random_clause(rng) for _ in range(4))
            reduced = subsumption_reduce(tautology_elim(clause_set))
            assert subsumption_reduce(reduced) == reduced
            assert _ground_satisfiable(clause_set) == \
                _ground_satisfiable(reduced)

    def test_variant_clauses_keep_one_representative(self):
        a = Clause.of((), (leq(ALPHA, BETA),))
        b = Clause.of((), (leq(GAMMA, ALPHA),))
        assert len(subsumption_reduce({a, b})) == 1


class TestNiaClauseSet:
    def test_n0_members(self):
        got = nia_clause_set(0)
        assert got == frozenset({
            Clause.of((), (leq(ALPHA, ALPHA),)),
            Clause.of((leq(mx(ALPHA, BETA), GAMMA),), (leq(ALPHA, GAMMA),)),
            Clause.of((leq(mx(ALPHA, BETA), GAMMA),), (leq(BETA, GAMMA),)),
            Clause.of((eq(f(BETA), inum(0)), eq(f(ALPHA), inum(0)),
                       leq(s(BETA), ALPHA)), ()),
            Clause.of((), (eq(f(ALPHA), inum(0)),)),
        })

    def test_n2_count(self):
        assert len(nia_clause_set(2)) == 7

    @pytest.mark.parametrize("n", range(7))
    def test_size_formula(self, n):
        assert len(nia_clause_set(n)) == n + 5


class TestNormalizeSymbols:
    @pytest.mark.parametrize("n", range(6))
    def test_matches_direct_set_after_tautology_elim(self, n):
        rules = nia_char_rules()
        term = CSSymbol("omega", frozenset(), onum(n))
        got = tautology_elim(normalize_symbols(rules, term, n))
        assert sets_equal_mod_renaming(got, nia_clause_set(n))

    def test_missing_step_rule(self):
        cfg = frozenset()
        rules = {("cl", cfg): SymbolRule(
            "cl", cfg, base=CSLeaf.of(Clause.of((), (leq(ALPHA, ALPHA),))))}
        assert normalize_symbols(rules, CSSymbol("cl", cfg, onum(0)), 0)
        with pytest.raises(MissingRule):
            normalize_symbols(rules, CSSymbol("cl", cfg, onum(1)), 1)

    def test_missing_symbol_rule(self):
        with pytest.raises(MissingRule, match="other"):
            normalize_symbols({}, CSSymbol("other", frozenset(), onum(0)), 0)

    def test_nontermination_guard(self):
        cfg = frozenset()
        looping = SymbolRule(
            "cl", cfg, base=CSLeaf(frozenset()),
            step=CSSymbol("cl", cfg, OSucc(OVar("k"))))
        with pytest.raises(RewriteBudgetExceeded):
            normalize_symbols({("cl", cfg): looping},
                              CSSymbol("cl", cfg, onum(1)), 1, budget=50)


class TestCanonicalClause:
    def test_renaming_invariance(self):
        a = Clause.of((leq(mx(ALPHA, BETA), GAMMA),), (leq(ALPHA, GAMMA),))
        b = a.rename({ALPHA: Var("u"), BETA: Var("v"), GAMMA: Var("w")})
        assert canonical_clause(a) == canonical_clause(b)
        assert sets_equal_mod_renaming([a], [b])
