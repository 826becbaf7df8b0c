"""Ancestor-annotated proof trees, clause-term extraction, and the fixture.

Proof trees are extraction carriers, not re-validated derivations: an
axiom stores its formula occurrences with ancestor annotations, a binary
rule stores whether its auxiliary occurrences are cut- or
configuration-ancestors, and a proof link stores the annotated sequent it
abbreviates.  Each occurrence knows (a) whether it is a cut ancestor and
(b) which end-sequent positions it is an ancestor of, so one proof can be
extracted under several configurations.

Extraction follows the four-case recursion: axioms contribute the clause
of their flagged occurrences, links contribute an indexed clause-set
symbol whose configuration is the set of flagged link positions, unary
rules pass through, and a binary rule joins its parts with ``plus`` when
its auxiliaries are flagged and ``times`` otherwise.

``nia_fixture`` encodes the non-injectivity assertion proof schema (two
proof symbols, ``omega`` and ``psi``).  Elided regions of the source
derivation are reconstructed with the fewest inferences whose ancestor
booleans reproduce the published characteristic clause term; every
reconstructed inference carries ``reconstructed=True``.  The iterated
disjunction region of the step proof collapses to a pair of tautological
axioms joined by a flagged binary rule: the region only ever contributes
tautologies, which later elimination removes, so any tautological
stand-in is extraction-equivalent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .clauses import (Clause, CSLeaf, CSPlus, CSSymbol, CSTimes, ClauseSetTerm,
                      SymbolRule)
from .terms import (And, Atom, Exists, Forall, Formula, IterOr, Nat, OSucc,
                    OVar, OmegaTerm, Var, eq, f, inum, leq, lt, mx, onum, s)

Pos = tuple[str, int]  # ("ante", i) or ("succ", i)


class ExtractionError(ValueError):
    pass


@dataclass(frozen=True)
class Occ:
    """A formula occurrence with its ancestor annotations."""

    formula: Formula
    cut_anc: bool = False
    es_anc: frozenset[Pos] = frozenset()

    def flagged(self, config: frozenset[Pos]) -> bool:
        return self.cut_anc or bool(self.es_anc & config)


class ProofNode:
    __slots__ = ()


@dataclass(frozen=True)
class PAxiom(ProofNode):
    ante: tuple[Occ, ...]
    succ: tuple[Occ, ...]
    reconstructed: bool = False


@dataclass(frozen=True)
class PUnary(ProofNode):
    """Unary inference; the epsilon rule is carried as rule name "eps"."""

    rule: str
    premise: ProofNode
    reconstructed: bool = False


@dataclass(frozen=True)
class PBinary(ProofNode):
    rule: str
    left: ProofNode
    right: ProofNode
    aux_flagged: bool
    reconstructed: bool = False


@dataclass(frozen=True)
class PLink(ProofNode):
    symbol: str
    index: OmegaTerm
    ante: tuple[Occ, ...]
    succ: tuple[Occ, ...]


Configuration = frozenset  # of Pos


def extract_clause_term(node: ProofNode, config: Configuration,
                        known_configs: Optional[Mapping[str, Iterable[Configuration]]] = None
                        ) -> ClauseSetTerm:
    """Clause-set term of ``node`` under the configuration ``config``.

    When ``known_configs`` is given, every link must induce a configuration
    registered for its target symbol; a mismatch is reported as an
    inconsistency at the link boundary.
    """
    if isinstance(node, PAxiom):
        ante = tuple(o.formula for o in node.ante if o.flagged(config))
        succ = tuple(o.formula for o in node.succ if o.flagged(config))
        return CSLeaf.of(Clause.of(ante, succ))
    if isinstance(node, PUnary):
        return extract_clause_term(node.premise, config, known_configs)
    if isinstance(node, PBinary):
        left = extract_clause_term(node.left, config, known_configs)
        right = extract_clause_term(node.right, config, known_configs)
        return CSPlus(left, right) if node.aux_flagged else CSTimes(left, right)
    if isinstance(node, PLink):
        induced = link_config(node, config)
        if known_configs is not None:
            registered = set(map(frozenset, known_configs.get(node.symbol, ())))
            if induced not in registered:
                raise ExtractionError(
                    f"inconsistent flags across the link to {node.symbol}: "
                    f"induced configuration {sorted(induced)} is not registered")
        return CSSymbol(node.symbol, induced, node.index)
    raise TypeError(node)


def link_config(link: PLink, config: Configuration) -> Configuration:
    out = set()
    for i, occ in enumerate(link.ante):
        if occ.flagged(config):
            out.add(("ante", i))
    for i, occ in enumerate(link.succ):
        if occ.flagged(config):
            out.add(("succ", i))
    return frozenset(out)


# ---------------------------------------------------------------------------
# proof schemata


@dataclass(frozen=True)
class SchemaPair:
    """Base proof (index 0) and step proof (index param+1) of one symbol."""

    symbol: str
    base: ProofNode
    step: ProofNode
    param: str
    end_ante: tuple[Formula, ...]
    end_succ: tuple[Formula, ...]


@dataclass(frozen=True)
class ProofSchema:
    pairs: tuple[SchemaPair, ...]

    def symbol_order(self, symbol: str) -> int:
        for i, p in enumerate(self.pairs):
            if p.symbol == symbol:
                return i
        raise KeyError(symbol)

    def pair(self, symbol: str) -> SchemaPair:
        return self.pairs[self.symbol_order(symbol)]

    def validate(self) -> None:
        """Base proofs may link forward only; step proofs also to self at k."""
        for i, pair in enumerate(self.pairs):
            for link in _links(pair.base):
                if self.symbol_order(link.symbol) <= i:
                    raise ExtractionError(
                        f"base proof of {pair.symbol} links to {link.symbol}, "
                        f"which is not a later symbol")
            for link in _links(pair.step):
                j = self.symbol_order(link.symbol)
                if j > i:
                    continue
                if j == i and link.index == OVar(pair.param):
                    continue
                raise ExtractionError(
                    f"step proof of {pair.symbol} may link to itself only at "
                    f"{pair.param}")

    def end_sequent(self, symbol: str, gamma: OmegaTerm
                    ) -> tuple[tuple[Formula, ...], tuple[Formula, ...]]:
        from .terms import subst_omega_formula
        pair = self.pair(symbol)
        ante = tuple(subst_omega_formula(phi, "n", gamma) for phi in pair.end_ante)
        succ = tuple(subst_omega_formula(phi, "n", gamma) for phi in pair.end_succ)
        return ante, succ


def _links(node: ProofNode) -> list[PLink]:
    if isinstance(node, PLink):
        return [node]
    if isinstance(node, PUnary):
        return _links(node.premise)
    if isinstance(node, PBinary):
        return _links(node.left) + _links(node.right)
    return []


def char_term_schema(schema: ProofSchema,
                     configs: Mapping[str, Iterable[Configuration]]
                     ) -> dict[tuple[str, Configuration], SymbolRule]:
    """Rewrite rules cl^{symbol,config}(0) and cl^{symbol,config}(k+1).

    Every configuration reachable through a link must be registered in
    ``configs`` for the link's target.
    """
    schema.validate()
    rules: dict[tuple[str, Configuration], SymbolRule] = {}
    for pair in schema.pairs:
        for config in configs.get(pair.symbol, ()):
            config = frozenset(config)
            base = extract_clause_term(pair.base, config, configs)
            step = extract_clause_term(pair.step, config, configs)
            rules[(pair.symbol, config)] = SymbolRule(
                symbol=pair.symbol, config=config, base=base, step=step,
                step_var=pair.param)
    return rules


# ---------------------------------------------------------------------------
# the non-injectivity assertion fixture

OMEGA_SYM = "omega"
PSI_SYM = "psi"
ANTE0: Pos = ("ante", 0)
SUCC0: Pos = ("succ", 0)
NIA_CONFIG: Configuration = frozenset({ANTE0})


def eq_f_formula() -> Formula:
    p, q = Var("p"), Var("q")
    return Exists("p", Exists("q", And(lt(p, q), eq(f(p), f(q)))))


def codomain_formula(bound: OmegaTerm, var: str = "x") -> Formula:
    """forall x. bigor(i, bound, f(x) = i)."""
    x = Var(var)
    return Forall(var, IterOr(bound, "i", eq(f(x), Nat(OVar("i")))))


def interval_formula(bound: OmegaTerm) -> Formula:
    """forall x. exists y. (x <= y & bigor(i, bound, f(y) = i))."""
    x, y = Var("x"), Var("y")
    return Forall("x", Exists("y", And(
        leq(x, y), IterOr(bound, "i", eq(f(y), Nat(OVar("i")))))))


def _omega_base() -> ProofNode:
    alpha = Var("alpha")
    ax_refl = PAxiom((), (Occ(leq(alpha, alpha), cut_anc=True),))
    ax_val = PAxiom(
        (Occ(eq(f(alpha), inum(0)), es_anc=frozenset({ANTE0})),),
        (Occ(eq(f(alpha), inum(0)), cut_anc=True),))
    witness = PBinary("and:r", ax_refl, ax_val, aux_flagged=True)
    chain = PUnary("forall:l", PUnary("exists:r", witness), reconstructed=True)
    chain = PUnary("forall:r", chain, reconstructed=True)
    link = PLink(PSI_SYM, onum(0),
                 ante=(Occ(interval_formula(onum(0)), cut_anc=True),),
                 succ=(Occ(eq_f_formula(), es_anc=frozenset({SUCC0})),))
    return PBinary("cut", chain, link, aux_flagged=True)


def _omega_step(param: str = "k") -> ProofNode:
    alpha = Var("alpha")
    bound = OSucc(OVar(param))
    big = IterOr(bound, "i", eq(f(alpha), Nat(OVar("i"))))
    ax_refl = PAxiom((), (Occ(leq(alpha, alpha), cut_anc=True),))
    ax_val = PAxiom((Occ(big, es_anc=frozenset({ANTE0})),),
                    (Occ(big, cut_anc=True),))
    witness = PBinary("and:r", ax_refl, ax_val, aux_flagged=True)
    chain = PUnary("forall:l", PUnary("exists:r", witness), reconstructed=True)
    chain = PUnary("forall:r", chain, reconstructed=True)
    link = PLink(PSI_SYM, bound,
                 ante=(Occ(interval_formula(bound), cut_anc=True),),
                 succ=(Occ(eq_f_formula(), es_anc=frozenset({SUCC0})),))
    return PBinary("cut", chain, link, aux_flagged=True)


def _equality_block(color, *, cut: bool) -> ProofNode:
    """The s(beta) <= alpha / equality-axiom block ending in the matrix join.

    With ``cut`` the interval-side atoms are cut ancestors (step proof);
    otherwise they are ancestors of the end-sequent antecedent (base proof
    under the configuration).
    """
    alpha, beta = Var("alpha"), Var("beta")
    mark = dict(cut_anc=True) if cut else dict(es_anc=frozenset({ANTE0}))
    ax_ord = PAxiom((Occ(leq(s(beta), alpha), **mark),),
                    (Occ(lt(beta, alpha), es_anc=frozenset({SUCC0})),))
    ax_eq = PAxiom(
        (Occ(eq(f(beta), color), **mark), Occ(eq(f(alpha), color), **mark)),
        (Occ(eq(f(beta), f(alpha)), es_anc=frozenset({SUCC0})),))
    joined = PBinary("and:r", ax_ord, ax_eq, aux_flagged=False)
    chain = PUnary("exists:r", PUnary("exists:r", joined), reconstructed=True)
    return PUnary("forall:l", chain, reconstructed=True)


def _pad_max_projections(block: ProofNode, *, cut: bool) -> ProofNode:
    """Join the two max-projection axioms onto ``block``.

    The published base clause term carries only the equality block, but
    the uniform clause-set display keeps both max projections at every
    index (the n=0 refutation needs them); the padded axioms mirror the
    step proof's annotations and are marked reconstructed.
    """
    alpha, beta, gamma = Var("alpha"), Var("beta"), Var("gamma")
    mark = dict(cut_anc=True) if cut else dict(es_anc=frozenset({ANTE0}))
    ax_max_a = PAxiom((Occ(leq(mx(alpha, beta), gamma), **mark),),
                      (Occ(leq(alpha, gamma), cut_anc=True),),
                      reconstructed=True)
    ax_max_b = PAxiom((Occ(leq(mx(alpha, beta), gamma), **mark),),
                      (Occ(leq(beta, gamma), cut_anc=True),),
                      reconstructed=True)
    padded = PBinary("join", block, ax_max_a, aux_flagged=True,
                     reconstructed=True)
    return PBinary("join", padded, ax_max_b, aux_flagged=True,
                   reconstructed=True)


def _psi_base() -> ProofNode:
    return _pad_max_projections(_equality_block(inum(0), cut=False), cut=False)


def _psi_step(param: str = "k") -> ProofNode:
    alpha, beta, gamma = Var("alpha"), Var("beta"), Var("gamma")
    top = OSucc(OVar(param))
    es = frozenset({ANTE0})

    ax_max_a = PAxiom((Occ(leq(mx(alpha, beta), gamma), es_anc=es),),
                      (Occ(leq(alpha, gamma), cut_anc=True),))
    ax_max_b = PAxiom((Occ(leq(mx(alpha, beta), gamma), es_anc=es),),
                      (Occ(leq(beta, gamma), cut_anc=True),))
    # stand-ins for the elided disjunction region: tautological ancestors
    ax_f_lo = PAxiom((Occ(eq(f(gamma), inum(0)), es_anc=es),),
                     (Occ(eq(f(gamma), inum(0)), cut_anc=True),))
    ax_f_hi = PAxiom((Occ(eq(f(gamma), Nat(top)), es_anc=es),),
                     (Occ(eq(f(gamma), Nat(top)), cut_anc=True),))
    or_region = PBinary("or:l", ax_f_lo, ax_f_hi, aux_flagged=True,
                        reconstructed=True)
    t1 = PBinary("and:r", ax_max_a, or_region, aux_flagged=True)
    t2 = PBinary("and:r", t1, ax_max_b, aux_flagged=True)
    t2 = PUnary("c:l", PUnary("forall:l", t2, reconstructed=True),
                reconstructed=True)

    link = PLink(PSI_SYM, OVar(param),
                 ante=(Occ(interval_formula(OVar(param)), cut_anc=True),),
                 succ=(Occ(eq_f_formula(), es_anc=frozenset({SUCC0})),))
    t3 = PBinary("cut", t2, link, aux_flagged=True)
    t4 = _equality_block(Nat(top), cut=True)
    t5 = PBinary("cut", t3, t4, aux_flagged=True)
    return PUnary("c:r", t5)


def nia_fixture(inline_base: bool = False
                ) -> tuple[ProofSchema, dict[str, tuple[Configuration, ...]]]:
    """The two-symbol proof schema of the non-injectivity assertion.

    With ``inline_base`` the base proof of ``omega`` inlines the base
    equality block instead of linking to ``psi`` (the shape the source
    figures print); extraction then yields a link-free term with the same
    evaluation.
    """
    if inline_base:
        alpha = Var("alpha")
        ax_refl = PAxiom((), (Occ(leq(alpha, alpha), cut_anc=True),))
        ax_val = PAxiom(
            (Occ(eq(f(alpha), inum(0)), es_anc=frozenset({ANTE0})),),
            (Occ(eq(f(alpha), inum(0)), cut_anc=True),))
        witness = PBinary("and:r", ax_refl, ax_val, aux_flagged=True)
        inlined = _pad_max_projections(_equality_block(inum(0), cut=True),
                                       cut=True)
        omega_base = PBinary("cut", witness, inlined, aux_flagged=True)
    else:
        omega_base = _omega_base()
    omega_pair = SchemaPair(
        symbol=OMEGA_SYM, base=omega_base, step=_omega_step(), param="k",
        end_ante=(codomain_formula(OVar("n")),), end_succ=(eq_f_formula(),))
    psi_pair = SchemaPair(
        symbol=PSI_SYM, base=_psi_base(), step=_psi_step(), param="k",
        end_ante=(interval_formula(OVar("n")),), end_succ=(eq_f_formula(),))
    schema = ProofSchema((omega_pair, psi_pair))
    configs = {OMEGA_SYM: (frozenset(),), PSI_SYM: (NIA_CONFIG,)}
    return schema, configs


def nia_char_rules(inline_base: bool = False
                   ) -> dict[tuple[str, Configuration], SymbolRule]:
    schema, configs = nia_fixture(inline_base)
    return char_term_schema(schema, configs)


def nia_extracted_clause_set(n: int, inline_base: bool = False) -> frozenset[Clause]:
    """Normalized, tautology-eliminated clause set extracted at parameter n."""
    from .clauses import normalize_symbols, tautology_elim
    rules = nia_char_rules(inline_base)
    term = CSSymbol(OMEGA_SYM, frozenset(), onum(n))
    return tautology_elim(normalize_symbols(rules, term, n))


# ---------------------------------------------------------------------------
# JSON serialization of proof trees


def proof_to_json(node: ProofNode) -> str:
    return json.dumps(_node_obj(node), indent=2)


def proof_from_json(text: str) -> ProofNode:
    return _node_from_obj(json.loads(text))


def _occ_obj(o: Occ) -> dict:
    from .textio import print_formula
    return {"formula": print_formula(o.formula), "cut": o.cut_anc,
            "es": sorted([side, i] for side, i in o.es_anc)}


def _occ_from_obj(obj: dict) -> Occ:
    from .textio import parse_formula
    return Occ(parse_formula(obj["formula"]), cut_anc=obj.get("cut", False),
               es_anc=frozenset((side, i) for side, i in obj.get("es", [])))


def _node_obj(node: ProofNode) -> dict:
    from .textio import print_omega
    if isinstance(node, PAxiom):
        return {"kind": "axiom",
                "ante": [_occ_obj(o) for o in node.ante],
                "succ": [_occ_obj(o) for o in node.succ],
                "reconstructed": node.reconstructed}
    if isinstance(node, PUnary):
        return {"kind": "unary", "rule": node.rule,
                "premise": _node_obj(node.premise),
                "reconstructed": node.reconstructed}
    if isinstance(node, PBinary):
        return {"kind": "binary", "rule": node.rule,
                "aux_flagged": node.aux_flagged,
                "left": _node_obj(node.left), "right": _node_obj(node.right),
                "reconstructed": node.reconstructed}
    assert isinstance(node, PLink)
    return {"kind": "link", "symbol": node.symbol,
            "index": print_omega(node.index),
            "ante": [_occ_obj(o) for o in node.ante],
            "succ": [_occ_obj(o) for o in node.succ]}


def _node_from_obj(obj: dict) -> ProofNode:
    kind = obj["kind"]
    if kind == "axiom":
        return PAxiom(tuple(_occ_from_obj(o) for o in obj["ante"]),
                      tuple(_occ_from_obj(o) for o in obj["succ"]),
                      reconstructed=obj.get("reconstructed", False))
    if kind == "unary":
        return PUnary(obj["rule"], _node_from_obj(obj["premise"]),
                      reconstructed=obj.get("reconstructed", False))
    if kind == "binary":
        return PBinary(obj["rule"], _node_from_obj(obj["left"]),
                       _node_from_obj(obj["right"]),
                       aux_flagged=obj["aux_flagged"],
                       reconstructed=obj.get("reconstructed", False))
    if kind == "link":
        return PLink(obj["symbol"], _parse_omega_text(obj["index"]),
                     tuple(_occ_from_obj(o) for o in obj["ante"]),
                     tuple(_occ_from_obj(o) for o in obj["succ"]))
    raise ValueError(f"unknown proof node kind {kind!r}")


def _parse_omega_text(text: str) -> OmegaTerm:
    from .textio import _Tokens, _parse_omega
    ts = _Tokens(text)
    t = _parse_omega(ts)
    if not ts.done():
        ts.fail("trailing input after omega term")
    return t


def schema_to_json(schema: ProofSchema,
                   configs: Mapping[str, Iterable[Configuration]]) -> str:
    from .textio import print_formula
    obj = {
        "symbols": [
            {"symbol": p.symbol, "param": p.param,
             "base": _node_obj(p.base), "step": _node_obj(p.step),
             "end_ante": [print_formula(phi) for phi in p.end_ante],
             "end_succ": [print_formula(phi) for phi in p.end_succ]}
            for p in schema.pairs],
        "configs": {sym: [sorted([side, i] for side, i in cfg)
                          for cfg in cfgs]
                    for sym, cfgs in configs.items()},
    }
    return json.dumps(obj, indent=2)


def schema_from_json(text: str
                     ) -> tuple[ProofSchema, dict[str, tuple[Configuration, ...]]]:
    from .textio import parse_formula
    obj = json.loads(text)
    pairs = []
    for entry in obj["symbols"]:
        pairs.append(SchemaPair(
            symbol=entry["symbol"], param=entry["param"],
            base=_node_from_obj(entry["base"]),
            step=_node_from_obj(entry["step"]),
            end_ante=tuple(parse_formula(t) for t in entry["end_ante"]),
            end_succ=tuple(parse_formula(t) for t in entry["end_succ"])))
    configs = {sym: tuple(frozenset((side, i) for side, i in cfg)
                          for cfg in cfgs)
               for sym, cfgs in obj["configs"].items()}
    return ProofSchema(tuple(pairs)), configs
