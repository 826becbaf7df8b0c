"""The concrete carriage-return-indexed refutation schema rho1..rho4.

The four defined symbols share the omega parameters (w, t, p, q), the
schematic family y, and the clause variables X, Y.  rho1 walks the top
list, producing one color-elimination subproof per focus value and
closing against an iterated codomain clause; rho2 descends p for a fixed
color, collecting the per-variable contradictions and restarting the walk
one variable lower; rho3 resolves an injectivity-violation clause against
the successor-bound lemma; rho4 builds that lemma as a ladder of max
projections ending in reflexivity.

Abbreviation clause shapes used below (the free parameter bounds the
color range of C5):

    C1(q)      |- y_q <= y_q
    C2(p, q)   max(s(y_p), y_p) <= y_q |- s(y_p) <= y_q
    C3(p, q)   max(s(y_p), y_p) <= y_q |- y_p <= y_q
    C4(p, q, w) f(y_p) = w, f(y_q) = w, s(y_p) <= y_q |-
    C5(j)      |- f(y_j) = 0, ..., f(y_j) = n

The published rule table is reproduced with four textual repairs, each
verified against the worked n=2 refutation fragment (see the repository
notes): the two rules whose resolvent lost its third argument get the
pivot f(y_|C|) = mid(C) respectively f(y_p) = w; the color atoms threaded
through rho2 use the descending index p (the printed |C| would name a
variable outside the instance); the restart call in rho2's shifted rule
targets the carriage-returned list of the *calling* rho1 state (whose
focus is the color being eliminated), threaded through rho2 as the extra
list parameter r - reading the printed C-cr against rho2's own counter
list would restart on the wrong entries; and the accumulator clause
variables reset at run boundaries (rho1's calls into rho2 pass an empty
Y, and the restart passes an empty X unless the pass-through switch is
chosen).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .clauses import Clause, EMPTY_CLAUSE, nia_clause_set
from .crlist import CRList, canonical
from .resolution import (CECompose, CEVar, CheckVerdict, CRRules, IAdd, ILen,
                         ILit, IMid, IVar, LCR, LCanon, LMatched, LParam,
                         LShift, ResolutionSchema, ResolutionTree, RTCall,
                         RTLeaf, RTRes, RuleParams, SAtom, SClause, SEqRange,
                         SFam, SFn, SNum, check_tree, tree_conclusions, unfold)
from .terms import (MLadder, OVar, SchemaBinding, SubstitutionSchema, Term,
                    eq, eval_m, f, inum)


class RefutationError(RuntimeError):
    pass


# index shorthand
_W, _T, _P, _Q, _N = IVar("w"), IVar("t"), IVar("p"), IVar("q"), IVar("n")
_LEN = ILen(LMatched())
_MID = IMid(LMatched())
_EMPTY = SClause()
_PARAMS = RuleParams(omega=("w", "t", "p", "q"), families=("y",),
                     clause=("X", "Y"))
# rho2 additionally threads the calling run's carriage-returned list: the
# restart of the walk one variable lower happens at exactly that list
_PARAMS_R = RuleParams(omega=("w", "t", "p", "q"), families=("y",),
                       clause=("X", "Y"), lists=("r",))


def _y(idx) -> SFam:
    return SFam("y", idx)


def _fy(idx) -> SFn:
    return SFn("f", (_y(idx),))


def _color_atom(var_idx, color_idx) -> SAtom:
    return SAtom("=", _fy(var_idx), SNum(color_idx))


def _c1(q) -> SClause:
    return SClause(succ=(SAtom("<=", _y(q), _y(q)),))


def _max_pivot(p, q) -> SAtom:
    return SAtom("<=", SFn("max", (SFn("s", (_y(p),)), _y(p))), _y(q))


def _c2(p, q) -> SClause:
    return SClause(ante=(_max_pivot(p, q),),
                   succ=(SAtom("<=", SFn("s", (_y(p),)), _y(q)),))


def _c3(p, q) -> SClause:
    return SClause(ante=(_max_pivot(p, q),),
                   succ=(SAtom("<=", _y(p), _y(q)),))


def _c4(p, q, w) -> SClause:
    return SClause(ante=(_color_atom(p, w), _color_atom(q, w),
                         SAtom("<=", SFn("s", (_y(p),)), _y(q))))


def _c5(j) -> SClause:
    return SClause(succ_ranges=(SEqRange(_fy(j), _N),))


def _compose(*parts) -> CECompose:
    return CECompose(tuple(parts))


def nia_schema(xprime_passthrough: bool = False) -> ResolutionSchema:
    """The rho1..rho4 rewrite system.

    ``xprime_passthrough`` selects the reading of the underdetermined
    clause variable in the restart call of rho2: pass the accumulated X
    unchanged instead of resetting it.  The reset reading is the default;
    it reproduces the worked n=2 fragment's labeled clauses exactly,
    while the pass-through reading still verifies but fattens restart
    leaves with carried atoms.
    """
    x, y = CEVar("X"), CEVar("Y")
    top_atom = _color_atom(_LEN, _MID)  # f(y_|C|) = mid(C)
    step_atom = _color_atom(_P, _W)     # f(y_p) = w

    rho2_entry = RTCall(
        "rho2", LShift(LCanon(_LEN)),
        omega_args=(_MID, ILit(1), ILen(LCR(LMatched())), _LEN),
        families=("y",),
        clause_args=(_compose(x, SClause(ante=(top_atom,))), _EMPTY),
        list_args=(LCR(LMatched()),))
    rho1 = CRRules(
        params=_PARAMS,
        empty=RTLeaf(_compose(_c5(ILit(0)), y)),
        shifted=RTRes(rho2_entry, RTLeaf(_compose(_c5(_LEN), y)), top_atom),
        general=RTRes(
            rho2_entry,
            RTCall("rho1", LShift(LMatched()),
                   omega_args=(ILit(0),) * 4, families=("y",),
                   clause_args=(x, _compose(y, SClause(succ=(top_atom,))))),
            top_atom))

    rho3_call = RTCall(
        "rho3", LCanon(_T), omega_args=(_W, _T, _P, _Q), families=("y",),
        clause_args=(_compose(x, SClause(ante=(step_atom,))), y))
    restart_x = x if xprime_passthrough else _EMPTY
    rho2 = CRRules(
        params=_PARAMS_R,
        empty=RTLeaf(_EMPTY),
        shifted=RTRes(
            rho3_call,
            RTCall("rho1", LParam("r"),
                   omega_args=(ILit(0),) * 4, families=("y",),
                   clause_args=(restart_x,
                                _compose(y, SClause(succ=(step_atom,))))),
            step_atom),
        general=RTRes(
            rho3_call,
            RTCall("rho2", LShift(LMatched()),
                   omega_args=(_W, IAdd(_T, 1), IAdd(_P, -1), _Q),
                   families=("y",),
                   clause_args=(x, _compose(y, SClause(succ=(step_atom,)))),
                   list_args=(LParam("r"),)),
            step_atom))

    def rho3_body(rho4_index) -> RTRes:
        ladder = RTRes(
            RTCall("rho4", rho4_index,
                   omega_args=(_W, _T, IAdd(_P, 1), _Q), families=("y",),
                   clause_args=(_EMPTY, y)),
            RTLeaf(_c2(_P, _Q)),
            _max_pivot(_P, _Q))
        return RTRes(RTLeaf(_compose(_c4(_P, _Q, _W), x)), ladder,
                     SAtom("<=", SFn("s", (_y(_P),)), _y(_Q)))

    rho3 = CRRules(
        params=_PARAMS,
        empty=RTLeaf(_EMPTY),
        shifted=rho3_body(LMatched()),
        general=rho3_body(LShift(LMatched())))

    rho4 = CRRules(
        params=_PARAMS,
        empty=RTLeaf(_EMPTY),
        shifted=RTLeaf(_c1(_Q)),
        general=RTRes(
            RTCall("rho4", LShift(LMatched()),
                   omega_args=(_W, _T, IAdd(_P, 1), _Q), families=("y",),
                   clause_args=(x, y)),
            RTLeaf(_c3(_P, _Q)),
            _max_pivot(_P, _Q)))

    return ResolutionSchema(
        symbols=("rho1", "rho2", "rho3", "rho4"),
        rules={"rho1": rho1, "rho2": rho2, "rho3": rho3, "rho4": rho4})


@dataclass(frozen=True)
class NiAScheduleBindings:
    """The entry substitutions: clause, omega, and schematic bindings."""

    theta: tuple[tuple[str, Clause], ...] = (("X", EMPTY_CLAUSE),
                                             ("Y", EMPTY_CLAUSE))
    nu: tuple[tuple[str, int], ...] = (("w", 0), ("t", 0), ("p", 0), ("q", 0))
    vartheta: SubstitutionSchema = SubstitutionSchema(
        (SchemaBinding("y", "k", MLadder(OVar("k"))),))

    def theta_map(self) -> dict[str, Clause]:
        return dict(self.theta)

    def nu_map(self) -> dict[str, int]:
        return dict(self.nu)


def ground_bindings(n: int) -> dict[int, Term]:
    """Ground values of y_0 .. y_{n+1}: the nested max ladder."""
    return {j: eval_m(j) for j in range(n + 2)}


def refute(n: int, xprime_passthrough: bool = False,
           budget: int = 1_000_000) -> ResolutionTree:
    """Unfold rho1 at the canonical list for n and verify the result."""
    tree, verdict = refute_with_verdict(n, xprime_passthrough, budget)
    if not verdict.ok or not verdict.is_refutation:
        raise RefutationError(verdict.summary())
    return tree


def refute_with_verdict(n: int, xprime_passthrough: bool = False,
                        budget: int = 1_000_000
                        ) -> tuple[ResolutionTree, CheckVerdict]:
    if n < 0:
        raise ValueError(f"refutation parameter must be >= 0, got {n}")
    schema = nia_schema(xprime_passthrough)
    bind = NiAScheduleBindings()
    tree = unfold(schema, "rho1", canonical(n), theta=bind.theta_map(),
                  nu=bind.nu_map(), vartheta=bind.vartheta, n=n, budget=budget)
    verdict = check_tree(tree, nia_clause_set(n))
    return tree, verdict


def appendix_checkpoints() -> list[tuple[int, Clause]]:
    """The sixteen labeled clauses of the worked n=2 fragment.

    Two source glitches are resolved by the coherent reading: the label 12
    is printed twice, so its second occurrence (the color-1 clause on
    y_2, y_1) is listed as the never-printed label 14, and label 6 follows
    its use in the color-1 chain rather than its misprinted restatement of
    label 10.
    """
    y = ground_bindings(2)

    def pair(hi: int, lo: int, color: int) -> Clause:
        return Clause.of((eq(f(y[hi]), inum(color)), eq(f(y[lo]), inum(color))),
                         ())

    def pos(var: int, colors: list[int]) -> Clause:
        return Clause.of((), tuple(eq(f(y[var]), inum(c)) for c in colors))

    return [
        (0, pair(3, 2, 2)),
        (1, pair(3, 1, 2)),
        (2, pair(3, 0, 2)),
        (3, pos(3, [2])),
        (4, pair(3, 2, 1)),
        (5, pair(3, 1, 1)),
        (6, pair(3, 0, 1)),
        (7, pos(3, [2, 1])),
        (8, pair(3, 2, 0)),
        (9, pair(3, 1, 0)),
        (10, pair(3, 0, 0)),
        (11, pos(2, [2]).merge(pos(1, [2])).merge(pos(0, [2]))),
        (12, pair(1, 0, 0)),
        (13, pair(2, 0, 1)),
        (14, pair(2, 1, 1)),
        (15, pos(1, [1, 2]).merge(pos(0, [1, 2]))),
    ]


def checkpoint_hits(tree: ResolutionTree) -> dict[int, bool]:
    """Which checkpoint clauses occur among the node conclusions of ``tree``."""
    conclusions = set(tree_conclusions(tree))
    return {label: clause in conclusions
            for label, clause in appendix_checkpoints()}
