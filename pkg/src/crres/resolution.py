"""Resolution steps, resolution proof schemata, unfolding, and checking.

The resolution rule here removes, after unification, every occurrence of
the pivot from the succedent of the positive premise and the antecedent
of the negative premise; the side condition that no pivot occurrence
survives on those sides holds by construction.

A resolution proof schema is a rewrite system over defined symbols whose
right sides are resolution terms.  Two indexing modes exist:

* numeral mode: a pair of rules (index 0, index k+1), the step body may
  call strictly later symbols at any index plus the own symbol at k;
* carriage-return mode: a triple of rules keyed by list shape (fully
  empty, shifted ``<F|m|>``, general ``<F|m|B>``), where the general body
  may additionally call the own symbol at the shifted list and earlier
  symbols at the carriage-returned list.

``unfold`` rewrites an entry call to exhaustion, producing a ground
resolution tree whose node conclusions are recomputed bottom-up (with
contraction applied and flagged); ``check_tree`` re-verifies every node
and matches every leaf against a base clause set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .clauses import Clause, EMPTY_CLAUSE, structural_key_clause
from .crlist import CRList, EMPTY_CR, canonical, carriage_return, mid, shift
from .terms import (Atom, Fn, Formula, IDENTITY, SVar, Substitution,
                    SubstitutionSchema, Term, inum, normalize_term, omega_value,
                    onum, structural_key, unify, unify_all)


class ResolutionError(ValueError):
    pass


class SchemaIndexError(ValueError):
    """An index argument went outside its domain (non-canonical entry)."""


class SchemaRuleError(KeyError):
    pass


class NonTermination(RuntimeError):
    def __init__(self, chain: list[str]):
        tail = " -> ".join(chain[-12:])
        super().__init__(f"step budget exhausted; call chain ... {tail}")
        self.chain = chain


# ---------------------------------------------------------------------------
# the resolution step


def res_step(pos: Clause, neg: Clause, pivot: Atom) -> tuple[Clause, Substitution]:
    """Resolve ``pos`` (pivot in succedent) with ``neg`` (pivot in antecedent).

    All pivot-unifiable occurrences on the two resolved sides are removed
    simultaneously under one most general unifier.  Premises must already
    be variable-disjoint where that matters; no renaming happens here.
    """
    pos_hits = [a for a in pos.succ if isinstance(a, Atom) and unify(a, pivot)]
    neg_hits = [a for a in neg.ante if isinstance(a, Atom) and unify(a, pivot)]
    if not pos_hits:
        raise ResolutionError(
            f"no succedent atom of the positive premise unifies with the pivot")
    if not neg_hits:
        raise ResolutionError(
            f"no antecedent atom of the negative premise unifies with the pivot")
    sigma = unify_all([(a, pivot) for a in pos_hits]
                      + [(b, pivot) for b in neg_hits])
    if sigma is None:
        raise ResolutionError("designated atoms admit no simultaneous unifier")
    keep_succ = [a for a in pos.succ if a not in set(pos_hits)]
    keep_ante = [b for b in neg.ante if b not in set(neg_hits)]
    conclusion = Clause.of(
        [sigma.apply_atom(a) for a in pos.ante]
        + [sigma.apply_atom(b) for b in keep_ante],
        [sigma.apply_atom(a) for a in keep_succ]
        + [sigma.apply_atom(b) for b in neg.succ])
    return conclusion, sigma


# ---------------------------------------------------------------------------
# ground resolution trees


class ResolutionTree:
    __slots__ = ()


@dataclass(frozen=True)
class RLeaf(ResolutionTree):
    clause: Clause
    contracted: bool = False


@dataclass(frozen=True)
class RNode(ResolutionTree):
    left: ResolutionTree
    right: ResolutionTree
    pivot: Atom
    sigma: Substitution
    conclusion: Clause
    contracted: bool
    swapped: bool  # premises resolved in (right, left) orientation


def concl(tree: ResolutionTree) -> Clause:
    return tree.clause if isinstance(tree, RLeaf) else tree.conclusion


def tree_size(tree: ResolutionTree) -> int:
    if isinstance(tree, RLeaf):
        return 1
    return 1 + tree_size(tree.left) + tree_size(tree.right)


def tree_leaves(tree: ResolutionTree) -> list[Clause]:
    if isinstance(tree, RLeaf):
        return [tree.clause]
    return tree_leaves(tree.left) + tree_leaves(tree.right)


def tree_conclusions(tree: ResolutionTree) -> list[Clause]:
    if isinstance(tree, RLeaf):
        return [tree.clause]
    return (tree_conclusions(tree.left) + tree_conclusions(tree.right)
            + [tree.conclusion])


def resolve_node(left: ResolutionTree, right: ResolutionTree,
                 pivot: Atom) -> RNode:
    """Build a checked node, trying both premise orientations; contracts."""
    try:
        raw, sigma = res_step(concl(left), concl(right), pivot)
        swapped = False
    except ResolutionError:
        raw, sigma = res_step(concl(right), concl(left), pivot)
        swapped = True
    contracted = raw.contract()
    return RNode(left=left, right=right, pivot=pivot, sigma=sigma,
                 conclusion=contracted, contracted=contracted != raw,
                 swapped=swapped)


# ---------------------------------------------------------------------------
# index and list expressions inside schema rules


class IndexExpr:
    __slots__ = ()


@dataclass(frozen=True)
class ILit(IndexExpr):
    value: int


@dataclass(frozen=True)
class IVar(IndexExpr):
    name: str


@dataclass(frozen=True)
class IAdd(IndexExpr):
    base: IndexExpr
    delta: int


@dataclass(frozen=True)
class ILen(IndexExpr):
    lst: "ListExpr"


@dataclass(frozen=True)
class IMid(IndexExpr):
    lst: "ListExpr"


class ListExpr:
    __slots__ = ()


@dataclass(frozen=True)
class LMatched(ListExpr):
    """The carriage return list the rule matched."""


@dataclass(frozen=True)
class LCanon(ListExpr):
    """canonical(j); j = -1 denotes the fully empty list."""

    idx: IndexExpr


@dataclass(frozen=True)
class LShift(ListExpr):
    base: ListExpr


@dataclass(frozen=True)
class LCR(ListExpr):
    base: ListExpr


@dataclass(frozen=True)
class LEmpty(ListExpr):
    pass


@dataclass(frozen=True)
class LParam(ListExpr):
    """A list-valued rule parameter threaded through calls."""

    name: str


@dataclass
class _Env:
    omega: dict[str, int]
    clauses: dict[str, Clause]
    families: dict[str, str]
    lists: dict[str, CRList]
    current: Optional[CRList]
    vartheta: Optional[SubstitutionSchema]


def eval_index(e: IndexExpr, env: _Env) -> int:
    if isinstance(e, ILit):
        return e.value
    if isinstance(e, IVar):
        if e.name not in env.omega:
            raise SchemaIndexError(f"unbound omega parameter '{e.name}'")
        return env.omega[e.name]
    if isinstance(e, IAdd):
        return eval_index(e.base, env) + e.delta
    if isinstance(e, ILen):
        return eval_list(e.lst, env).denoted_length()
    if isinstance(e, IMid):
        return omega_value(mid(eval_list(e.lst, env)))
    raise TypeError(e)


def eval_list(e: ListExpr, env: _Env) -> CRList:
    if isinstance(e, LMatched):
        if env.current is None:
            raise SchemaIndexError("no matched list in a numeral-mode rule")
        return env.current
    if isinstance(e, LCanon):
        j = eval_index(e.idx, env)
        if j == -1:
            return EMPTY_CR
        if j < -1:
            raise SchemaIndexError(f"canonical list index {j} out of range")
        return canonical(j)
    if isinstance(e, LShift):
        return shift(eval_list(e.base, env))
    if isinstance(e, LCR):
        return carriage_return(eval_list(e.base, env))
    if isinstance(e, LEmpty):
        return EMPTY_CR
    if isinstance(e, LParam):
        if e.name not in env.lists:
            raise SchemaIndexError(f"unbound list parameter '{e.name}'")
        return env.lists[e.name]
    raise TypeError(e)


# ---------------------------------------------------------------------------
# schema-side atoms and clause expressions


class STerm:
    __slots__ = ()


@dataclass(frozen=True)
class SFam(STerm):
    """Schematic family applied at an index expression: y_p."""

    family: str
    idx: IndexExpr


@dataclass(frozen=True)
class SNum(STerm):
    """Individual numeral from an index expression (a color value)."""

    idx: IndexExpr


@dataclass(frozen=True)
class SFn(STerm):
    name: str
    args: tuple[STerm, ...]


@dataclass(frozen=True)
class SAtom:
    pred: str
    left: STerm
    right: STerm


def inst_sterm(st: STerm, env: _Env) -> Term:
    if isinstance(st, SFam):
        j = eval_index(st.idx, env)
        if j < 0:
            raise SchemaIndexError(
                f"schematic variable index {j} is negative (non-canonical entry)")
        return SVar(env.families.get(st.family, st.family), onum(j))
    if isinstance(st, SNum):
        j = eval_index(st.idx, env)
        if j < 0:
            raise SchemaIndexError(f"numeral argument {j} is negative")
        return inum(j)
    if isinstance(st, SFn):
        return Fn(st.name, tuple(inst_sterm(a, env) for a in st.args))
    raise TypeError(st)


def inst_satom(sa: SAtom, env: _Env) -> Atom:
    atom = Atom(sa.pred, inst_sterm(sa.left, env), inst_sterm(sa.right, env))
    if env.vartheta is not None:
        atom = env.vartheta.apply_atom(atom)
    return Atom(atom.pred, normalize_term(atom.left), normalize_term(atom.right))


@dataclass(frozen=True)
class SEqRange:
    """Range of succedent atoms f-term = 0, ..., f-term = upper."""

    left: STerm
    upper: IndexExpr


@dataclass(frozen=True)
class SClause:
    ante: tuple[SAtom, ...] = ()
    succ: tuple[SAtom, ...] = ()
    succ_ranges: tuple[SEqRange, ...] = ()


@dataclass(frozen=True)
class CEVar:
    name: str


@dataclass(frozen=True)
class CECompose:
    parts: tuple[Union[SClause, CEVar, "CECompose"], ...]


ClauseExpr = Union[SClause, CEVar, CECompose]


def inst_clause_expr(ce: ClauseExpr, env: _Env) -> Clause:
    if isinstance(ce, SClause):
        ante = [inst_satom(a, env) for a in ce.ante]
        succ = [inst_satom(a, env) for a in ce.succ]
        for rng in ce.succ_ranges:
            upper = eval_index(rng.upper, env)
            if upper < 0:
                raise SchemaIndexError(f"range upper bound {upper} is negative")
            left = inst_sterm(rng.left, env)
            if env.vartheta is not None:
                left = env.vartheta.apply_term(left)
            left = normalize_term(left)
            succ.extend(Atom("=", left, inum(j)) for j in range(upper + 1))
        return Clause.of(ante, succ)
    if isinstance(ce, CEVar):
        if ce.name not in env.clauses:
            raise SchemaRuleError(f"unbound clause variable '{ce.name}'")
        return env.clauses[ce.name]
    if isinstance(ce, CECompose):
        out = EMPTY_CLAUSE
        for part in ce.parts:
            out = out.merge(inst_clause_expr(part, env))
        return out
    raise TypeError(ce)


# ---------------------------------------------------------------------------
# resolution terms and schemata


class RTerm:
    __slots__ = ()


@dataclass(frozen=True)
class RTLeaf(RTerm):
    clause: ClauseExpr


@dataclass(frozen=True)
class RTRes(RTerm):
    left: RTerm
    right: RTerm
    pivot: SAtom


@dataclass(frozen=True)
class RTCall(RTerm):
    symbol: str
    index: Union[IndexExpr, ListExpr]
    omega_args: tuple[IndexExpr, ...] = ()
    families: tuple[str, ...] = ()
    clause_args: tuple[ClauseExpr, ...] = ()
    list_args: tuple[ListExpr, ...] = ()


@dataclass(frozen=True)
class RuleParams:
    omega: tuple[str, ...] = ()
    families: tuple[str, ...] = ()
    clause: tuple[str, ...] = ()
    lists: tuple[str, ...] = ()


@dataclass(frozen=True)
class NumeralRules:
    params: RuleParams
    base: RTerm
    step: RTerm
    step_var: str = "k"


@dataclass(frozen=True)
class CRRules:
    params: RuleParams
    empty: RTerm
    shifted: RTerm  # matches <F|m|>
    general: RTerm  # matches <F|m|B>, B nonempty


@dataclass
class ResolutionSchema:
    symbols: tuple[str, ...]
    rules: dict[str, Union[NumeralRules, CRRules]]

    def order(self, symbol: str) -> int:
        return self.symbols.index(symbol)

    def validate(self, strict: bool = True) -> list[str]:
        """Check the call-shape constraints of the two schema modes.

        Returns the list of violations; raises when strict and nonempty.
        """
        issues: list[str] = []
        for sym in self.symbols:
            rule = self.rules[sym]
            i = self.order(sym)
            if isinstance(rule, NumeralRules):
                for call in _calls(rule.base):
                    if self.order(call.symbol) <= i:
                        issues.append(
                            f"{sym}: base rule calls {call.symbol}, which is "
                            f"not a later symbol")
                for call in _calls(rule.step):
                    j = self.order(call.symbol)
                    if j > i:
                        continue
                    if j < i or call.index != IVar(rule.step_var):
                        issues.append(
                            f"{sym}: step rule may call itself only at "
                            f"{rule.step_var}")
            else:
                for call in _calls(rule.empty):
                    if self.order(call.symbol) <= i:
                        issues.append(
                            f"{sym}: empty-list rule calls {call.symbol}, "
                            f"which is not a later symbol")
                for label, body, allow_shift in (("shifted", rule.shifted, False),
                                                 ("general", rule.general, True)):
                    for call in _calls(body):
                        j = self.order(call.symbol)
                        if j > i:
                            continue
                        if allow_shift and j == i \
                                and call.index == LShift(LMatched()):
                            continue
                        if call.index == LCR(LMatched()):
                            continue
                        issues.append(
                            f"{sym}: {label} rule calls {call.symbol} at an "
                            f"index other than the carriage-returned"
                            f"{' or shifted' if allow_shift else ''} list")
        if strict and issues:
            raise SchemaRuleError("; ".join(issues))
        return issues


def _calls(rt: RTerm) -> list[RTCall]:
    if isinstance(rt, RTCall):
        return [rt]
    if isinstance(rt, RTRes):
        return _calls(rt.left) + _calls(rt.right)
    return []


def unfold(schema: ResolutionSchema, entry: str,
           index: Union[int, CRList],
           theta: Optional[Mapping[str, Clause]] = None,
           nu: Optional[Mapping[str, int]] = None,
           vartheta: Optional[SubstitutionSchema] = None,
           n: Optional[int] = None,
           budget: int = 1_000_000) -> ResolutionTree:
    """Rewrite the entry call to exhaustion and return the ground tree.

    ``theta`` grounds the entry rule's clause variables, ``nu`` its omega
    variables, ``vartheta`` the schematic variable families.  ``n`` is the
    free parameter (defaults to the entry index for numeral mode, and to
    the denoted length minus one for a carriage return list).
    """
    if entry not in schema.rules:
        raise SchemaRuleError(f"unknown schema symbol '{entry}'")
    if n is None:
        n = index if isinstance(index, int) else max(index.denoted_length() - 1, 0)
    rule = schema.rules[entry]
    omega_env = {name: 0 for name in rule.params.omega}
    omega_env.update(nu or {})
    clause_env = {name: EMPTY_CLAUSE for name in rule.params.clause}
    clause_env.update(theta or {})
    fam_env = {name: name for name in rule.params.families}
    list_env = {name: EMPTY_CR for name in rule.params.lists}
    budget_box = [budget]
    return _unfold_call(schema, entry, index, omega_env, clause_env, fam_env,
                        list_env, vartheta, n, budget_box, [])


def _unfold_call(schema, symbol, index, omega_env, clause_env, fam_env,
                 list_env, vartheta, n, budget_box, chain) -> ResolutionTree:
    budget_box[0] -= 1
    frame = f"{symbol}({_index_repr(index)})"
    chain = chain + [frame]
    if budget_box[0] < 0:
        raise NonTermination(chain)
    rule = schema.rules.get(symbol)
    if rule is None:
        raise SchemaRuleError(f"unknown schema symbol '{symbol}'")
    if isinstance(rule, CRRules):
        if not isinstance(index, CRList):
            raise SchemaRuleError(
                f"{symbol} is list-indexed but was called at {index!r}")
        if index.is_empty():
            body = rule.empty
        elif not index.back:
            body = rule.shifted
        else:
            body = rule.general
        current = index
    else:
        if not isinstance(index, int):
            raise SchemaRuleError(
                f"{symbol} is numeral-indexed but was called at {index!r}")
        if index == 0:
            body = rule.base
        else:
            body = rule.step
            omega_env = dict(omega_env)
            omega_env[rule.step_var] = index - 1
        current = None
    env = _Env(omega=dict(omega_env, n=n), clauses=dict(clause_env),
               families=dict(fam_env), lists=dict(list_env), current=current,
               vartheta=vartheta)
    return _instantiate(schema, body, env, rule, vartheta, n, budget_box, chain)


def _instantiate(schema, rt, env, rule, vartheta, n, budget_box,
                 chain) -> ResolutionTree:
    if isinstance(rt, RTLeaf):
        raw = inst_clause_expr(rt.clause, env)
        contracted = raw.contract()
        return RLeaf(contracted, contracted=contracted != raw)
    if isinstance(rt, RTRes):
        left = _instantiate(schema, rt.left, env, rule, vartheta, n,
                            budget_box, chain)
        right = _instantiate(schema, rt.right, env, rule, vartheta, n,
                             budget_box, chain)
        pivot = inst_satom(rt.pivot, env)
        try:
            return resolve_node(left, right, pivot)
        except ResolutionError as exc:
            raise ResolutionError(
                f"{exc} (while unfolding {' -> '.join(chain[-6:])})") from exc
    assert isinstance(rt, RTCall)
    callee = schema.rules.get(rt.symbol)
    if callee is None:
        raise SchemaRuleError(f"unknown schema symbol '{rt.symbol}'")
    if isinstance(rt.index, ListExpr):
        index: Union[int, CRList] = eval_list(rt.index, env)
    else:
        index = eval_index(rt.index, env)
        if index < 0:
            raise SchemaIndexError(
                f"negative recursion index in a call to {rt.symbol}")
    values = [eval_index(e, env) for e in rt.omega_args]
    for v in values:
        if v < 0:
            raise SchemaIndexError(
                f"negative omega argument {v} in a call to {rt.symbol} "
                f"(non-canonical entry index)")
    omega_env = dict(zip(callee.params.omega, values))
    ce_values = [inst_clause_expr(ce, env) for ce in rt.clause_args]
    clause_env = dict(zip(callee.params.clause, ce_values))
    fams = [env.families.get(f, f) for f in rt.families]
    fam_env = dict(zip(callee.params.families, fams))
    list_values = [eval_list(le, env) for le in rt.list_args]
    list_env = dict(zip(callee.params.lists, list_values))
    return _unfold_call(schema, rt.symbol, index, omega_env, clause_env,
                        fam_env, list_env, vartheta, n, budget_box, chain)


def _index_repr(index) -> str:
    if isinstance(index, CRList):
        from .textio import print_crlist
        return print_crlist(index)
    return str(index)


# ---------------------------------------------------------------------------
# tree verification


@dataclass
class LeafReport:
    path: tuple[int, ...]
    clause: Clause
    matched: Optional[Clause]
    mode: Optional[str]  # "instance", "contraction" or "weakening"


@dataclass
class CheckVerdict:
    ok: bool
    is_refutation: bool
    root: Clause
    leaf_reports: list[LeafReport]
    failures: list[tuple[tuple[int, ...], str]]

    def summary(self) -> str:
        status = "ok" if self.ok else f"FAILED ({len(self.failures)} problems)"
        from .textio import print_clause
        return (f"check: {status}; root: {print_clause(self.root)}; "
                f"refutation: {self.is_refutation}; "
                f"leaves: {len(self.leaf_reports)}")


def check_tree(tree: ResolutionTree, base: Iterable[Clause]) -> CheckVerdict:
    """Re-verify every node with res_step and match leaves against ``base``.

    A leaf may be an instance of a base clause, an instance up to
    contraction, or an instance weakened by extra atoms (clause-variable
    content merged into a leaf); anything else is a failure.  A node may
    carry its raw resolvent or its contraction.
    """
    base = sorted(base, key=structural_key_clause)
    leaf_reports: list[LeafReport] = []
    failures: list[tuple[tuple[int, ...], str]] = []

    def walk(node: ResolutionTree, path: tuple[int, ...]):
        if isinstance(node, RLeaf):
            matched, mode = _best_leaf_match(node.clause, base)
            leaf_reports.append(LeafReport(path, node.clause, matched, mode))
            if mode is None:
                from .textio import print_clause
                failures.append(
                    (path, f"leaf is not an instance of any base clause: "
                           f"{print_clause(node.clause)}"))
            return
        assert isinstance(node, RNode)
        walk(node.left, path + (0,))
        walk(node.right, path + (1,))
        expected = _expected_conclusions(node)
        if expected is None:
            failures.append((path, "premises do not resolve on the pivot"))
        elif node.conclusion not in expected:
            from .textio import print_clause
            failures.append(
                (path, f"conclusion {print_clause(node.conclusion)} does not "
                       f"match the resolvent of its premises"))

    walk(tree, ())
    root = concl(tree)
    ok = not failures
    return CheckVerdict(ok=ok, is_refutation=ok and root.is_empty(), root=root,
                        leaf_reports=leaf_reports, failures=failures)


def _expected_conclusions(node: RNode) -> Optional[set[Clause]]:
    out: set[Clause] = set()
    for pos, neg in ((node.left, node.right), (node.right, node.left)):
        try:
            raw, _ = res_step(concl(pos), concl(neg), node.pivot)
        except ResolutionError:
            continue
        out.add(raw)
        out.add(raw.contract())
    return out or None


_MODE_RANK = {"instance": 0, "contraction": 1, "weakening": 2}


def _best_leaf_match(leaf: Clause, base: list[Clause]
                     ) -> tuple[Optional[Clause], Optional[str]]:
    best: tuple[int, Optional[Clause], Optional[str]] = (99, None, None)
    for cand in base:
        mode = _instance_mode(cand, leaf)
        if mode is not None and _MODE_RANK[mode] < best[0]:
            best = (_MODE_RANK[mode], cand, mode)
            if best[0] == 0:
                break
    return best[1], best[2]


def _instance_mode(pattern: Clause, leaf: Clause) -> Optional[str]:
    """Best way leaf arises from pattern: substitution, + contraction, + weakening."""
    from .terms import match_atom

    modes: set[str] = set()

    def classify(sub) -> str:
        ante = [_apply_mapping(a, sub) for a in pattern.ante]
        succ = [_apply_mapping(a, sub) for a in pattern.succ]
        inst = Clause.of(ante, succ)
        if inst == leaf:
            return "instance"
        if set(inst.ante) == set(leaf.ante) and set(inst.succ) == set(leaf.succ):
            return "contraction"
        return "weakening"

    def assign(idx: int, atoms, targets, sub) -> None:
        if idx == len(atoms):
            if _covers(pattern, sub, leaf):
                modes.add(classify(sub))
            return
        for t in targets:
            attempt = dict(sub)
            if match_atom(atoms[idx], t, attempt) is not None:
                assign(idx + 1, atoms, targets, attempt)
                if "instance" in modes:
                    return

    def assign_both():
        all_ante = list(pattern.ante)

        def after_ante(sub):
            assign(0, list(pattern.succ), list(leaf.succ), sub)

        # chain: assign antecedent atoms, then succedent atoms
        def go(idx, sub):
            if idx == len(all_ante):
                after_ante(sub)
                return
            for t in leaf.ante:
                attempt = dict(sub)
                if match_atom(all_ante[idx], t, attempt) is not None:
                    go(idx + 1, attempt)
                    if "instance" in modes:
                        return

        go(0, {})

    assign_both()
    if not modes:
        return None
    return min(modes, key=lambda m: _MODE_RANK[m])


def _covers(pattern: Clause, sub, leaf: Clause) -> bool:
    ante = {_apply_mapping(a, sub) for a in pattern.ante}
    succ = {_apply_mapping(a, sub) for a in pattern.succ}
    return ante <= set(leaf.ante) and succ <= set(leaf.succ)


def _apply_mapping(atom, sub) -> Atom:
    from .terms import rename_atom
    return rename_atom(atom, sub)
