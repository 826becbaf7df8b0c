"""Two-sorted schematic term language: numerals, individual terms, formulas.

The omega sort holds numerals built from ``0`` and ``s``, plus omega
variables used as recursion indices.  The individual sort is a first-order
term language with constant function symbols (``s``, ``max``, ``f``),
schematic variables applied to one omega argument (``y(k)``, written
``y_3`` once the index is a numeral), and two families of defined symbols
that unfold by primitive recursion:

* ``MIter(k, x, t)`` -- the iterated max term
  ``m(k+1, x, t) => m(k, x, max(s(x_{k+1}), t))``, ``m(0, x, t) => t``;
* ``MLadder(k)`` -- the nested ladder
  ``m(k) = max(s(m(k-1)), m(k-1))``, ``m(0) = 0``.

Formulas are atoms over ``<=``, ``<``, ``=`` plus the usual connectives,
quantifiers, and the defined iterated disjunction ``IterOr`` which unfolds
as ``V_{i=0}^{s(y)} P(i) => V_{i=0}^{y} P(i) \\/ P(s(y))`` and
``V_{i=0}^{0} P(i) => P(0)``.

Everything here is immutable and hashable; operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union


class SortError(TypeError):
    """A term or substitution mixes the omega and individual sorts."""


class UnboundOmegaVariable(ValueError):
    """Normalization met an omega variable with no assigned numeral."""


class NormalizationError(ValueError):
    """A defined symbol could not be eliminated."""


# ---------------------------------------------------------------------------
# omega sort


class OmegaTerm:
    __slots__ = ()


@dataclass(frozen=True)
class OZero(OmegaTerm):
    __slots__ = ()


@dataclass(frozen=True)
class OSucc(OmegaTerm):
    prev: OmegaTerm


@dataclass(frozen=True)
class OVar(OmegaTerm):
    name: str


OMEGA_ZERO = OZero()


def onum(k: int) -> OmegaTerm:
    """Unary numeral ``s^k(0)``."""
    if k < 0:
        raise ValueError(f"negative numeral {k}")
    t: OmegaTerm = OMEGA_ZERO
    for _ in range(k):
        t = OSucc(t)
    return t


def omega_value(t: OmegaTerm) -> int:
    """Integer value of a ground numeral; raises on omega variables."""
    k = 0
    while isinstance(t, OSucc):
        k += 1
        t = t.prev
    if isinstance(t, OVar):
        raise UnboundOmegaVariable(f"omega variable '{t.name}' is not bound")
    if not isinstance(t, OZero):
        raise SortError(f"not an omega term: {t!r}")
    return k


def normalize_omega(t: OmegaTerm, gamma: Optional[Mapping[str, int]] = None) -> OmegaTerm:
    if isinstance(t, OVar):
        if gamma is not None and t.name in gamma:
            return onum(gamma[t.name])
        raise UnboundOmegaVariable(f"omega variable '{t.name}' is not bound")
    if isinstance(t, OSucc):
        return OSucc(normalize_omega(t.prev, gamma))
    return t


def omega_vars(t: OmegaTerm) -> set[str]:
    out: set[str] = set()
    while isinstance(t, OSucc):
        t = t.prev
    if isinstance(t, OVar):
        out.add(t.name)
    return out


# ---------------------------------------------------------------------------
# individual sort


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class Var(Term):
    """Free individual variable (alpha, beta, ..., t, z)."""

    name: str


@dataclass(frozen=True)
class SVar(Term):
    """Schematic variable applied to its single omega argument: y(k), x_i."""

    family: str
    index: OmegaTerm


@dataclass(frozen=True)
class Fn(Term):
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class MIter(Term):
    """Iterated max term m(count, family, base)."""

    count: OmegaTerm
    family: str
    base: Term


@dataclass(frozen=True)
class MLadder(Term):
    """Nested max ladder m(count)."""

    count: OmegaTerm


@dataclass(frozen=True)
class Nat(Term):
    """Injection of an omega numeral into the individual sort."""

    value: OmegaTerm


ZERO = Const("0")


def s(t: Term) -> Term:
    return Fn("s", (t,))


def mx(a: Term, b: Term) -> Term:
    return Fn("max", (a, b))


def f(t: Term) -> Term:
    return Fn("f", (t,))


def inum(k: int) -> Term:
    """Individual-sort numeral ``s^k(0)``."""
    if k < 0:
        raise ValueError(f"negative numeral {k}")
    t: Term = ZERO
    for _ in range(k):
        t = s(t)
    return t


def as_inum(t: Term) -> Optional[int]:
    """Integer value if ``t`` is an individual numeral, else ``None``."""
    k = 0
    while isinstance(t, Fn) and t.name == "s" and len(t.args) == 1:
        k += 1
        t = t.args[0]
    return k if t == ZERO else None


def sv(family: str, k: int) -> Term:
    return SVar(family, onum(k))


# ---------------------------------------------------------------------------
# formulas


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    pred: str  # "<=", "<" or "="
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class IterOr(Formula):
    """Iterated disjunction of ``body`` for ``var`` from 0 to ``bound``."""

    bound: OmegaTerm
    var: str
    body: Formula


def leq(a: Term, b: Term) -> Atom:
    return Atom("<=", a, b)


def lt(a: Term, b: Term) -> Atom:
    return Atom("<", a, b)


def eq(a: Term, b: Term) -> Atom:
    return Atom("=", a, b)


def _attach_cached_hash(cls, fields: tuple[str, ...]) -> None:
    """Replace the dataclass hash with a lazily cached one.

    Values are immutable, so caching is safe; deep terms recur in clause
    sets and substitution tables often enough that repeated full-tree
    hashing dominates otherwise.
    """

    def cached(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(tuple(getattr(self, f) for f in fields))
            object.__setattr__(self, "_hash", h)
        return h

    cls.__hash__ = cached


_attach_cached_hash(Fn, ("name", "args"))
_attach_cached_hash(SVar, ("family", "index"))
_attach_cached_hash(Atom, ("pred", "left", "right"))


# ---------------------------------------------------------------------------
# structural ordering (used for canonical multiset order in clauses)

_TAGS = {
    OZero: 0, OSucc: 1, OVar: 2,
    Const: 10, Var: 11, SVar: 12, Fn: 13, MIter: 14, MLadder: 15, Nat: 16,
    Atom: 20, Not: 21, And: 22, Or: 23, Implies: 24, Forall: 25, Exists: 26,
    IterOr: 27,
}


# id-keyed memo with strong references: immutable values, bounded runs
_KEY_MEMO: dict[int, tuple[object, tuple]] = {}


def structural_key(x) -> tuple:
    """Deterministic total order key over terms and formulas (memoized)."""
    hit = _KEY_MEMO.get(id(x))
    if hit is not None and hit[0] is x:
        return hit[1]
    key = _structural_key(x)
    _KEY_MEMO[id(x)] = (x, key)
    return key


def _structural_key(x) -> tuple:
    tag = _TAGS[type(x)]
    if isinstance(x, (OZero,)):
        return (tag,)
    if isinstance(x, OSucc):
        return (tag, structural_key(x.prev))
    if isinstance(x, OVar):
        return (tag, x.name)
    if isinstance(x, Const):
        return (tag, x.name)
    if isinstance(x, Var):
        return (tag, x.name)
    if isinstance(x, SVar):
        return (tag, x.family, structural_key(x.index))
    if isinstance(x, Fn):
        return (tag, x.name, tuple(structural_key(a) for a in x.args))
    if isinstance(x, MIter):
        return (tag, structural_key(x.count), x.family, structural_key(x.base))
    if isinstance(x, MLadder):
        return (tag, structural_key(x.count))
    if isinstance(x, Nat):
        return (tag, structural_key(x.value))
    if isinstance(x, Atom):
        return (tag, x.pred, structural_key(x.left), structural_key(x.right))
    if isinstance(x, Not):
        return (tag, structural_key(x.body))
    if isinstance(x, (And, Or, Implies)):
        return (tag, structural_key(x.left), structural_key(x.right))
    if isinstance(x, (Forall, Exists)):
        return (tag, x.var, structural_key(x.body))
    if isinstance(x, IterOr):
        return (tag, structural_key(x.bound), x.var, structural_key(x.body))
    raise TypeError(f"unorderable value {x!r}")


# ---------------------------------------------------------------------------
# omega substitution into terms/formulas (rule templates, IterOr bodies)


def subst_omega_term(t: Term, var: str, val: OmegaTerm) -> Term:
    if isinstance(t, (Const, Var)):
        return t
    if isinstance(t, SVar):
        return SVar(t.family, _subst_o(t.index, var, val))
    if isinstance(t, Fn):
        return Fn(t.name, tuple(subst_omega_term(a, var, val) for a in t.args))
    if isinstance(t, MIter):
        return MIter(_subst_o(t.count, var, val), t.family,
                     subst_omega_term(t.base, var, val))
    if isinstance(t, MLadder):
        return MLadder(_subst_o(t.count, var, val))
    if isinstance(t, Nat):
        return Nat(_subst_o(t.value, var, val))
    raise TypeError(t)


def _subst_o(t: OmegaTerm, var: str, val: OmegaTerm) -> OmegaTerm:
    if isinstance(t, OVar):
        return val if t.name == var else t
    if isinstance(t, OSucc):
        return OSucc(_subst_o(t.prev, var, val))
    return t


def subst_omega_formula(phi: Formula, var: str, val: OmegaTerm) -> Formula:
    if isinstance(phi, Atom):
        return Atom(phi.pred, subst_omega_term(phi.left, var, val),
                    subst_omega_term(phi.right, var, val))
    if isinstance(phi, Not):
        return Not(subst_omega_formula(phi.body, var, val))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(subst_omega_formula(phi.left, var, val),
                         subst_omega_formula(phi.right, var, val))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, subst_omega_formula(phi.body, var, val))
    if isinstance(phi, IterOr):
        if phi.var == var:  # bound variable shadows
            return IterOr(_subst_o(phi.bound, var, val), phi.var, phi.body)
        return IterOr(_subst_o(phi.bound, var, val), phi.var,
                      subst_omega_formula(phi.body, var, val))
    raise TypeError(phi)


# ---------------------------------------------------------------------------
# normalization: eliminate defined symbols, unfold iterated disjunctions

Gamma = Optional[Mapping[str, int]]


def normalize_term(t: Term, gamma: Gamma = None) -> Term:
    if isinstance(t, (Const, Var)):
        return t
    if isinstance(t, SVar):
        return SVar(t.family, normalize_omega(t.index, gamma))
    if isinstance(t, Fn):
        return Fn(t.name, tuple(normalize_term(a, gamma) for a in t.args))
    if isinstance(t, Nat):
        return inum(omega_value(normalize_omega(t.value, gamma)))
    if isinstance(t, MIter):
        k = omega_value(normalize_omega(t.count, gamma))
        return eval_m_iter(k, t.family, normalize_term(t.base, gamma))
    if isinstance(t, MLadder):
        k = omega_value(normalize_omega(t.count, gamma))
        return eval_m(k)
    raise TypeError(t)


def eval_m_iter(k: int, family: str, base: Term) -> Term:
    """Unfold m(k, x, t): m(k+1, x, t) = m(k, x, max(s(x_{k+1}), t)); m(0, x, t) = t.

    The base case drops the variable family, so the arity-3 reading is
    m(0, x, t) = t.
    """
    acc = base
    while k > 0:
        acc = mx(s(sv(family, k)), acc)
        k -= 1
    return acc


def eval_m(k: int) -> Term:
    """Unfold m(k): m(0) = 0, m(k) = max(s(m(k-1)), m(k-1))."""
    acc: Term = ZERO
    for _ in range(k):
        acc = mx(s(acc), acc)
    return acc


def normalize_formula(phi: Formula, gamma: Gamma = None) -> Formula:
    if isinstance(phi, Atom):
        return Atom(phi.pred, normalize_term(phi.left, gamma),
                    normalize_term(phi.right, gamma))
    if isinstance(phi, Not):
        return Not(normalize_formula(phi.body, gamma))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(normalize_formula(phi.left, gamma),
                         normalize_formula(phi.right, gamma))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, normalize_formula(phi.body, gamma))
    if isinstance(phi, IterOr):
        bound = omega_value(normalize_omega(phi.bound, gamma))
        disj = None
        for i in range(bound + 1):
            inst = subst_omega_formula(phi.body, phi.var, onum(i))
            inst = normalize_formula(inst, gamma)
            disj = inst if disj is None else Or(disj, inst)
        assert disj is not None
        return disj
    raise TypeError(phi)


def normalize(x: Union[Term, Formula], gamma: Gamma = None) -> Union[Term, Formula]:
    """Eliminate all defined symbols; ``gamma`` assigns numerals to omega vars."""
    if isinstance(x, Term):
        return normalize_term(x, gamma)
    if isinstance(x, Formula):
        return normalize_formula(x, gamma)
    raise TypeError(x)


def flatten_or(phi: Formula) -> list[Formula]:
    """Disjuncts of a left-nested Or tree, in order."""
    if isinstance(phi, Or):
        return flatten_or(phi.left) + flatten_or(phi.right)
    return [phi]


# ---------------------------------------------------------------------------
# free variables, renaming


def term_vars(t: Term) -> set[Term]:
    """Bindable units occurring in t: Var nodes and SVar applications."""
    if isinstance(t, (Var, SVar)):
        return {t}
    if isinstance(t, Fn):
        out: set[Term] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    if isinstance(t, MIter):
        return term_vars(t.base)
    return set()


def atom_vars(a: Formula) -> set[Term]:
    if not isinstance(a, Atom):
        raise TypeError(f"expected an atom, got {a!r}")
    return term_vars(a.left) | term_vars(a.right)


def rename_term(t: Term, mapping: Mapping[Term, Term]) -> Term:
    if not mapping:
        return t
    if t in mapping:
        return mapping[t]
    if isinstance(t, Fn):
        args = tuple(rename_term(a, mapping) for a in t.args)
        return t if args == t.args else Fn(t.name, args)
    if isinstance(t, MIter):
        return MIter(t.count, t.family, rename_term(t.base, mapping))
    return t


def rename_atom(a: Atom, mapping: Mapping[Term, Term]) -> Atom:
    if not mapping:
        return a
    left = rename_term(a.left, mapping)
    right = rename_term(a.right, mapping)
    if left is a.left and right is a.right:
        return a
    return Atom(a.pred, left, right)


class FreshNamer:
    """Instantiation counter for renaming variables apart."""

    def __init__(self, start: int = 0):
        self._n = start

    def next_suffix(self) -> int:
        self._n += 1
        return self._n

    def rename_apart(self, variables: Iterable[Term]) -> dict[Term, Term]:
        """Fresh Var for every Var, fresh family for every SVar family."""
        k = self.next_suffix()
        mapping: dict[Term, Term] = {}
        for v in variables:
            if isinstance(v, Var):
                mapping[v] = Var(f"{v.name}_r{k}")
            elif isinstance(v, SVar):
                mapping[v] = SVar(f"{v.family}_r{k}", v.index)
        return mapping


# ---------------------------------------------------------------------------
# substitutions


def _is_binder(t: Term) -> bool:
    return isinstance(t, (Var, SVar))


@dataclass(frozen=True)
class Substitution:
    """Sort-preserving finite map from Var/SVar units to individual terms.

    Stored in applied (idempotent) form: ranges never mention domain
    variables, so applying twice equals applying once.
    """

    mapping: tuple[tuple[Term, Term], ...] = ()

    @staticmethod
    def of(pairs: Mapping[Term, Term]) -> "Substitution":
        items = sorted(pairs.items(), key=lambda kv: structural_key(kv[0]))
        for k, v in items:
            if not _is_binder(k):
                raise SortError(f"not a bindable variable: {k!r}")
            if not isinstance(v, Term):
                raise SortError(f"individual variable bound to non-term {v!r}")
        return Substitution(tuple(items))

    def as_dict(self) -> dict[Term, Term]:
        return dict(self.mapping)

    def is_identity(self) -> bool:
        return not self.mapping

    def apply_term(self, t: Term) -> Term:
        return rename_term(t, self.as_dict())

    def apply_atom(self, a: Atom) -> Atom:
        return rename_atom(a, self.as_dict())

    def compose(self, other: "Substitution") -> "Substitution":
        """self then other: apply(compose(s1, s2), x) == apply(s2, apply(s1, x))."""
        out: dict[Term, Term] = {}
        for k, v in self.mapping:
            out[k] = other.apply_term(v)
        for k, v in other.mapping:
            out.setdefault(k, v)
        return Substitution.of({k: v for k, v in out.items() if k != v})


IDENTITY = Substitution()


@dataclass(frozen=True)
class SchemaBinding:
    family: str
    param: str
    template: Term  # only omega variable allowed is ``param``


@dataclass(frozen=True)
class SubstitutionSchema:
    """Parameterized bindings u <- (k |-> t(k)) for schematic variable families."""

    bindings: tuple[SchemaBinding, ...]

    def lookup(self, family: str) -> Optional[SchemaBinding]:
        for b in self.bindings:
            if b.family == family:
                return b
        return None

    def apply_term(self, t: Term) -> Term:
        if isinstance(t, SVar):
            b = self.lookup(t.family)
            if b is not None:
                return subst_omega_term(b.template, b.param, t.index)
            return t
        if isinstance(t, Fn):
            return Fn(t.name, tuple(self.apply_term(a) for a in t.args))
        if isinstance(t, MIter):
            return MIter(t.count, t.family, self.apply_term(t.base))
        return t

    def apply_atom(self, a: Atom) -> Atom:
        return Atom(a.pred, self.apply_term(a.left), self.apply_term(a.right))

    def at(self, family: str, gamma: int) -> Term:
        """Ground binding of u(gamma), normalized."""
        b = self.lookup(family)
        if b is None:
            raise KeyError(family)
        return normalize_term(subst_omega_term(b.template, b.param, onum(gamma)))


# ---------------------------------------------------------------------------
# matching and unification


def match_term(pattern: Term, target: Term, subst: Optional[dict[Term, Term]] = None
               ) -> Optional[dict[Term, Term]]:
    """One-way matching: find sigma with pattern*sigma == target."""
    if subst is None:
        subst = {}
    if _is_binder(pattern):
        bound = subst.get(pattern)
        if bound is None:
            subst[pattern] = target
            return subst
        return subst if bound == target else None
    if isinstance(pattern, Const):
        return subst if pattern == target else None
    if isinstance(pattern, Fn) and isinstance(target, Fn):
        if pattern.name != target.name or len(pattern.args) != len(target.args):
            return None
        for p, t in zip(pattern.args, target.args):
            if match_term(p, t, subst) is None:
                return None
        return subst
    return None


def match_atom(pattern: Atom, target: Formula, subst: Optional[dict[Term, Term]] = None
               ) -> Optional[dict[Term, Term]]:
    if not isinstance(target, Atom) or pattern.pred != target.pred:
        return None
    if subst is None:
        subst = {}
    snapshot = dict(subst)
    if match_term(pattern.left, target.left, subst) is not None and \
            match_term(pattern.right, target.right, subst) is not None:
        return subst
    subst.clear()
    subst.update(snapshot)
    return None


def _occurs(v: Term, t: Term) -> bool:
    if t == v:
        return True
    if isinstance(t, Fn):
        return any(_occurs(v, a) for a in t.args)
    return False


def _unify_terms(a: Term, b: Term, sigma: dict[Term, Term]) -> bool:
    a = rename_term(a, sigma)
    b = rename_term(b, sigma)
    if a == b:
        return True
    if _is_binder(a):
        if _occurs(a, b):
            return False
        _extend(sigma, a, b)
        return True
    if _is_binder(b):
        if _occurs(b, a):
            return False
        _extend(sigma, b, a)
        return True
    if isinstance(a, Fn) and isinstance(b, Fn) and a.name == b.name \
            and len(a.args) == len(b.args):
        return all(_unify_terms(x, y, sigma) for x, y in zip(a.args, b.args))
    return False


def _extend(sigma: dict[Term, Term], v: Term, t: Term) -> None:
    for k in list(sigma):
        sigma[k] = rename_term(sigma[k], {v: t})
    sigma[v] = t


def unify(a: Atom, b: Atom) -> Optional[Substitution]:
    """Most general unifier of two defined-symbol-free atoms, or None.

    Syntactic first-order unification with occurs check; Var nodes and
    SVar applications are the bindable units.
    """
    if a.pred != b.pred:
        return None
    sigma: dict[Term, Term] = {}
    if _unify_terms(a.left, b.left, sigma) and _unify_terms(a.right, b.right, sigma):
        return Substitution.of(sigma)
    return None


def unify_all(pairs: Iterable[tuple[Atom, Atom]]) -> Optional[Substitution]:
    """Simultaneous mgu of several atom pairs."""
    sigma: dict[Term, Term] = {}
    for a, b in pairs:
        if a.pred != b.pred:
            return None
        if not (_unify_terms(a.left, b.left, sigma)
                and _unify_terms(a.right, b.right, sigma)):
            return None
    return Substitution.of(sigma)


def apply_subst(subst: Substitution, x):
    """Apply a substitution to a term, atom/formula, or clause-like object."""
    if isinstance(x, Term):
        return subst.apply_term(x)
    if isinstance(x, Atom):
        return subst.apply_atom(x)
    if isinstance(x, Formula):
        return _apply_formula(subst, x)
    if hasattr(x, "apply_subst"):
        return x.apply_subst(subst)
    raise TypeError(f"cannot apply substitution to {x!r}")


def _apply_formula(subst: Substitution, phi: Formula) -> Formula:
    if isinstance(phi, Atom):
        return subst.apply_atom(phi)
    if isinstance(phi, Not):
        return Not(_apply_formula(subst, phi.body))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(_apply_formula(subst, phi.left),
                         _apply_formula(subst, phi.right))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, _apply_formula(subst, phi.body))
    if isinstance(phi, IterOr):
        return IterOr(phi.bound, phi.var, _apply_formula(subst, phi.body))
    raise TypeError(phi)
