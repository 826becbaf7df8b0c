import pytest

from crres.clauses import (Clause, CSLeaf, CSPlus, CSSymbol, CSTimes,
                           nia_clause_set, normalize_symbols,
                           sets_equal_mod_renaming, tautology_elim)
from crres.clauses import cs_leaves, cs_symbols
from crres.proofs import (ANTE0, NIA_CONFIG, Occ, PAxiom, PBinary, PLink,
                          PUnary, ProofSchema, SchemaPair, ExtractionError,
                          char_term_schema, extract_clause_term, nia_char_rules,
                          nia_extracted_clause_set, nia_fixture, proof_from_json,
                          proof_to_json, schema_from_json, schema_to_json)
from crres.terms import (IterOr, Nat, OVar, Var, eq, f, inum, leq, mx, onum, s)

ALPHA, BETA, GAMMA = Var("alpha"), Var("beta"), Var("gamma")


def _flagged(formula):
    return Occ(formula, cut_anc=True)


class TestExtractCases:
    def test_axiom_collects_flagged_occurrences(self):
        ax = PAxiom(
            (Occ(eq(f(BETA), inum(0)), cut_anc=True),
             Occ(eq(f(ALPHA), inum(0)), cut_anc=True)),
            (Occ(eq(f(BETA), f(ALPHA))),))
        got = extract_clause_term(ax, frozenset())
        assert got == CSLeaf.of(
            Clause.of((eq(f(BETA), inum(0)), eq(f(ALPHA), inum(0))), ()))

    def test_binary_flagged_gives_plus(self):
        ax1 = PAxiom((), (_flagged(leq(ALPHA, ALPHA)),))
        ax2 = PAxiom((), (_flagged(eq(f(ALPHA), inum(0))),))
        node = PBinary("and:r", ax1, ax2, aux_flagged=True)
        got = extract_clause_term(node, frozenset())
        assert isinstance(got, CSPlus)

    def test_binary_unflagged_gives_times(self):
        ax1 = PAxiom((_flagged(leq(s(BETA), ALPHA)),), (Occ(leq(BETA, ALPHA)),))
        ax2 = PAxiom((_flagged(eq(f(BETA), inum(0))),), (Occ(eq(f(BETA), f(ALPHA))),))
        node = PBinary("and:r", ax1, ax2, aux_flagged=False)
        got = extract_clause_term(node, frozenset())
        assert isinstance(got, CSTimes)

    def test_unary_passes_through(self):
        ax = PAxiom((), (_flagged(leq(ALPHA, ALPHA)),))
        assert extract_clause_term(PUnary("eps", ax), frozenset()) == \
            extract_clause_term(ax, frozenset())

    def test_config_flags_axiom_occurrences(self):
        ax = PAxiom((Occ(leq(s(BETA), ALPHA), es_anc=frozenset({ANTE0})),),
                    (Occ(leq(BETA, ALPHA)),))
        empty = extract_clause_term(ax, frozenset())
        assert empty == CSLeaf.of(Clause.of((), ()))
        flagged = extract_clause_term(ax, frozenset({ANTE0}))
        assert flagged == CSLeaf.of(Clause.of((leq(s(BETA), ALPHA),), ()))


class TestFixtureTerms:
    def test_base_term_shape(self):
        schema, _ = nia_fixture()
        term = extract_clause_term(schema.pair("omega").base, frozenset())
        symbols = cs_symbols(term)
        assert [(sym.symbol, sym.config, sym.index) for sym in symbols] == \
            [("psi", NIA_CONFIG, onum(0))]
        leaves = [c for leaf in cs_leaves(term) for c in leaf]
        assert Clause.of((), (leq(ALPHA, ALPHA),)) in leaves
        assert Clause.of((), (eq(f(ALPHA), inum(0)),)) in leaves

    def test_step_term_contains_both_max_projections(self):
        schema, _ = nia_fixture()
        term = extract_clause_term(schema.pair("psi").step, NIA_CONFIG)
        leaves = [c for leaf in cs_leaves(term) for c in leaf]
        assert Clause.of((leq(mx(ALPHA, BETA), GAMMA),),
                         (leq(ALPHA, GAMMA),)) in leaves
        assert Clause.of((leq(mx(ALPHA, BETA), GAMMA),),
                         (leq(BETA, GAMMA),)) in leaves
        assert [sym.index for sym in cs_symbols(term)] == [OVar("k")]

    def test_psi_base_times_part(self):
        rules = nia_char_rules()
        base = rules[("psi", NIA_CONFIG)].base
        merged = [c for leaf in cs_leaves(base) for c in leaf]
        assert Clause.of((leq(s(BETA), ALPHA),), ()) in merged
        assert Clause.of((eq(f(ALPHA), inum(0)), eq(f(BETA), inum(0))), ()) \
            in merged

    def test_end_sequent_at_one(self):
        schema, _ = nia_fixture()
        ante, succ = schema.end_sequent("omega", onum(1))
        from crres.terms import Forall
        assert isinstance(ante[0], Forall)
        assert isinstance(ante[0].body, IterOr)
        assert ante[0].body.bound == onum(1)
        from crres.textio import print_formula
        assert print_formula(succ[0]) == \
            "exists p. exists q. (p < q & f(p) = f(q))"


class TestRules:
    def test_four_rules(self):
        rules = nia_char_rules()
        assert set(rules) == {("omega", frozenset()), ("psi", NIA_CONFIG)}
        for rule in rules.values():
            assert rule.step is not None

    def test_missing_config_is_reported(self):
        schema, configs = nia_fixture()
        with pytest.raises(ExtractionError, match="psi"):
            char_term_schema(schema, {**configs, "psi": ()})

    def test_step_without_links_is_symbol_free(self):
        ax = PAxiom((), (_flagged(leq(ALPHA, ALPHA)),))
        pair = SchemaPair("phi", ax, PUnary("w:l", ax), "k", (), ())
        rules = char_term_schema(ProofSchema((pair,)), {"phi": (frozenset(),)})
        assert cs_symbols(rules[("phi", frozenset())].step) == []


class TestFidelity:
    @pytest.mark.parametrize("n", range(4))
    def test_extraction_equals_direct_set(self, n):
        assert sets_equal_mod_renaming(nia_extracted_clause_set(n),
                                       nia_clause_set(n))

    @pytest.mark.parametrize("n", range(3))
    def test_inline_base_is_extraction_equivalent(self, n):
        assert sets_equal_mod_renaming(
            nia_extracted_clause_set(n, inline_base=True),
            nia_extracted_clause_set(n))


class TestSchemaValidation:
    def test_backward_link_rejected(self):
        ax = PAxiom((), (_flagged(leq(ALPHA, ALPHA)),))
        back_link = PLink("phi1", onum(0), (), ())
        p1 = SchemaPair("phi1", ax, ax, "k", (), ())
        p2 = SchemaPair("phi2", back_link, ax, "k", (), ())
        with pytest.raises(ExtractionError, match="later"):
            ProofSchema((p1, p2)).validate()

    def test_self_link_must_use_parameter(self):
        ax = PAxiom((), (_flagged(leq(ALPHA, ALPHA)),))
        bad_self = PLink("phi1", onum(3), (), ())
        p1 = SchemaPair("phi1", ax, bad_self, "k", (), ())
        with pytest.raises(ExtractionError, match="itself"):
            ProofSchema((p1,)).validate()

    def test_nia_fixture_validates(self):
        schema, _ = nia_fixture()
        schema.validate()


class TestSerialization:
    def test_proof_json_round_trip(self):
        schema, _ = nia_fixture()
        for pair in schema.pairs:
            for node in (pair.base, pair.step):
                assert proof_from_json(proof_to_json(node)) == node

    def test_schema_json_round_trip_extracts_identically(self, tmp_path):
        schema, configs = nia_fixture()
        text = schema_to_json(schema, configs)
        loaded_schema, loaded_configs = schema_from_json(text)
        assert loaded_schema == schema
        rules = char_term_schema(loaded_schema, loaded_configs)
        term = CSSymbol("omega", frozenset(), onum(2))
        got = tautology_elim(normalize_symbols(rules, term, 2))
        assert sets_equal_mod_renaming(got, nia_clause_set(2))
