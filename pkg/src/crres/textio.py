"""Canonical text grammar and exchange formats.

Terms
    0, 2, alpha, y_3, s(t), max(t, u), f(t), m(3)
    Decimal literals are individual-sort numerals (2 == s(s(0))).
    A name whose final ``_``-separated piece is all digits is a schematic
    variable application (``y_3`` is the family ``y`` at index 3); any
    other name is an individual variable.  ``m(3)`` is input sugar for the
    nested max ladder and is printed expanded.

Atoms and clauses
    t <= u, t < u, t = u
    A1, A2 |- B1, B2        (either side may be empty; ``|-`` alone is
                             the empty clause)

Clause sets are one clause per line; ``#`` starts a comment.

Carriage return lists
    <4,3,2 | 1 | 0>, < | 4 | 3,2,1,0>, < | | >

Resolution trees (indented, two spaces per level)
    res [PIVOT] CONCLUSION
      LEFT-SUBTREE
      RIGHT-SUBTREE
    leaf CLAUSE

Printing is deterministic, and print -> parse -> print is a fixed point.
JSON, TPTP and DOT writers live here as well; the TPTP dialect encodes
``<=``, ``<``, ``=`` as the predicates ``leq``, ``lt``, ``eq``.
"""

from __future__ import annotations

import json
import re
from typing import Iterable, Optional, Union

from . import crlist as crl
from .clauses import Clause, structural_key_clause
from .terms import (And, Atom, Const, Exists, Fn, Forall, Formula, Implies,
                    IterOr, MLadder, Nat, Not, OSucc, OVar, OZero, OmegaTerm,
                    Or, SVar, Substitution, Term, Var, as_inum, eval_m,
                    omega_value, onum, structural_key)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# printing


def print_omega(t: OmegaTerm) -> str:
    k = 0
    while isinstance(t, OSucc):
        k += 1
        t = t.prev
    if isinstance(t, OZero):
        return str(k)
    assert isinstance(t, OVar)
    out = t.name
    for _ in range(k):
        out = f"s({out})"
    return out


def print_term(t: Term) -> str:
    n = as_inum(t)
    if n is not None:
        return str(n)
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Var):
        return t.name
    if isinstance(t, SVar):
        return f"{t.family}_{omega_value(t.index)}"
    if isinstance(t, Fn):
        return f"{t.name}({', '.join(print_term(a) for a in t.args)})"
    if isinstance(t, Nat):
        # explicit omega-injection marker so symbolic indices survive parsing
        return f"@({print_omega(t.value)})"
    if isinstance(t, MLadder):
        return f"m({print_omega(t.count)})"
    raise TypeError(f"unprintable term {t!r}")


def print_atom(a: Formula) -> str:
    if not isinstance(a, Atom):
        raise TypeError(f"expected an atom, got {a!r}")
    return f"{print_term(a.left)} {a.pred} {print_term(a.right)}"


def print_formula(phi: Formula) -> str:
    return _print_formula(phi, 0)


# precedence: -> (1)  |  (2)  &  (3)  ~ (4)
def _print_formula(phi: Formula, prec: int) -> str:
    if isinstance(phi, Atom):
        return print_atom(phi)
    if isinstance(phi, (Forall, Exists)):
        kw = "forall" if isinstance(phi, Forall) else "exists"
        body = _print_formula(phi.body, 0)
        text = f"{kw} {phi.var}. {body}"
        return f"({text})" if prec > 0 else text
    if isinstance(phi, Implies):
        text = f"{_print_formula(phi.left, 2)} -> {_print_formula(phi.right, 1)}"
        return f"({text})" if prec > 1 else text
    if isinstance(phi, Or):
        text = f"{_print_formula(phi.left, 2)} | {_print_formula(phi.right, 3)}"
        return f"({text})" if prec > 2 else text
    if isinstance(phi, And):
        text = f"{_print_formula(phi.left, 3)} & {_print_formula(phi.right, 4)}"
        return f"({text})" if prec > 3 else text
    if isinstance(phi, Not):
        return f"~{_print_formula(phi.body, 4)}"
    if isinstance(phi, IterOr):
        return (f"bigor({phi.var}, {print_omega(phi.bound)}, "
                f"{_print_formula(phi.body, 0)})")
    raise TypeError(phi)


def print_clause(c: Clause) -> str:
    left = ", ".join(print_atom(a) for a in c.ante)
    right = ", ".join(print_atom(a) for a in c.succ)
    if left and right:
        return f"{left} |- {right}"
    if left:
        return f"{left} |-"
    if right:
        return f"|- {right}"
    return "|-"


def print_clause_set(clauses: Iterable[Clause]) -> str:
    ordered = sorted(clauses, key=structural_key_clause)
    return "\n".join(print_clause(c) for c in ordered)


def print_crlist(c: crl.CRList) -> str:
    front = ",".join(print_omega(t) for t in c.front.items)
    back = ",".join(print_omega(t) for t in c.back.items)
    focus = print_omega(c.focus) if c.focus is not None else ""
    return f"<{front} | {focus} | {back}>"


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<num>\d+)"
    r"|(?P<op><=|\|-|->|[(),.<>=|~&@\[\]]))")

_SVAR_RE = re.compile(r"^(?P<fam>[A-Za-z][A-Za-z0-9_]*?)_(?P<idx>\d+)$")


class _Tokens:
    def __init__(self, text: str, line_offset: int = 1):
        self.tokens: list[tuple[str, str, int, int]] = []
        for ln, line in enumerate(text.splitlines() or [""], start=line_offset):
            body = line.split("#", 1)[0]
            pos = 0
            while pos < len(body):
                m = _TOKEN_RE.match(body, pos)
                if m is None:
                    if body[pos:].strip():
                        raise ParseError(f"unexpected character {body[pos]!r}",
                                         ln, pos + 1)
                    break
                kind = m.lastgroup
                assert kind is not None
                self.tokens.append((kind, m.group(kind), ln, m.start(kind) + 1))
                pos = m.end()
        self.i = 0

    def peek(self) -> Optional[tuple[str, str, int, int]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> tuple[str, str, int, int]:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else ("", "", 1, 1)
            raise ParseError("unexpected end of input", last[2], last[3])
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, text, ln, col = self.next()
        if text != value:
            raise ParseError(f"expected {value!r}, found {text!r}", ln, col)

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[1] == value

    def done(self) -> bool:
        return self.peek() is None

    def fail(self, msg: str):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else ("", "", 1, 1)
            raise ParseError(msg, last[2], last[3])
        raise ParseError(f"{msg}, found {tok[1]!r}", tok[2], tok[3])


# ---------------------------------------------------------------------------
# parsing: terms, atoms, clauses


def _name_to_term(name: str) -> Term:
    m = _SVAR_RE.match(name)
    if m is not None:
        return SVar(m.group("fam"), onum(int(m.group("idx"))))
    return Var(name)


def _parse_term(ts: _Tokens) -> Term:
    kind, text, ln, col = ts.next()
    if kind == "num":
        from .terms import inum
        return inum(int(text))
    if text == "@":
        ts.expect("(")
        inner = _parse_omega(ts)
        ts.expect(")")
        return Nat(inner)
    if kind != "name":
        raise ParseError(f"expected a term, found {text!r}", ln, col)
    if not ts.at("("):
        return _name_to_term(text)
    ts.expect("(")
    args = [_parse_term(ts)]
    while ts.at(","):
        ts.next()
        args.append(_parse_term(ts))
    ts.expect(")")
    if text == "m" and len(args) == 1:
        k = as_inum(args[0])
        if k is None:
            ts.fail("m(...) sugar needs a numeral argument")
        return eval_m(k)
    return Fn(text, tuple(args))


def _parse_atom(ts: _Tokens) -> Atom:
    left = _parse_term(ts)
    kind, text, ln, col = ts.next()
    if text not in ("<=", "<", "="):
        raise ParseError(f"expected <=, < or =, found {text!r}", ln, col)
    right = _parse_term(ts)
    return Atom(text, left, right)


def _parse_atom_list(ts: _Tokens, stop: tuple[str, ...]) -> list[Atom]:
    atoms: list[Atom] = []
    tok = ts.peek()
    if tok is None or tok[1] in stop:
        return atoms
    atoms.append(_parse_atom(ts))
    while ts.at(","):
        ts.next()
        atoms.append(_parse_atom(ts))
    return atoms


def _parse_clause(ts: _Tokens) -> Clause:
    ante = _parse_atom_list(ts, stop=("|-",))
    ts.expect("|-")
    succ = _parse_atom_list(ts, stop=())
    return Clause.of(ante, succ)


def parse_term(text: str) -> Term:
    ts = _Tokens(text)
    t = _parse_term(ts)
    if not ts.done():
        ts.fail("trailing input after term")
    return t


def parse_atom(text: str) -> Atom:
    ts = _Tokens(text)
    a = _parse_atom(ts)
    if not ts.done():
        ts.fail("trailing input after atom")
    return a


def parse_clause(text: str) -> Clause:
    ts = _Tokens(text)
    c = _parse_clause(ts)
    if not ts.done():
        ts.fail("trailing input after clause")
    return c


def parse_clause_set(text: str) -> frozenset[Clause]:
    out = []
    for ln, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        ts = _Tokens(body, line_offset=ln)
        c = _parse_clause(ts)
        if not ts.done():
            ts.fail("trailing input after clause")
        out.append(c)
    return frozenset(out)


# ---------------------------------------------------------------------------
# parsing: formulas (fixture serialization, Herbrand output)


def parse_formula(text: str) -> Formula:
    ts = _Tokens(text)
    phi = _parse_formula(ts)
    if not ts.done():
        ts.fail("trailing input after formula")
    return phi


def _parse_formula(ts: _Tokens) -> Formula:
    tok = ts.peek()
    if tok is not None and tok[1] in ("forall", "exists"):
        ts.next()
        kind, var, ln, col = ts.next()
        if kind != "name":
            raise ParseError("expected a variable name", ln, col)
        ts.expect(".")
        body = _parse_formula(ts)
        return Forall(var, body) if tok[1] == "forall" else Exists(var, body)
    return _parse_implies(ts)


def _parse_implies(ts: _Tokens) -> Formula:
    left = _parse_or(ts)
    if ts.at("->"):
        ts.next()
        return Implies(left, _parse_formula(ts))
    return left


def _parse_or(ts: _Tokens) -> Formula:
    phi = _parse_and(ts)
    while ts.at("|"):
        ts.next()
        phi = Or(phi, _parse_and(ts))
    return phi


def _parse_and(ts: _Tokens) -> Formula:
    phi = _parse_unary(ts)
    while ts.at("&"):
        ts.next()
        phi = And(phi, _parse_unary(ts))
    return phi


def _parse_omega(ts: _Tokens) -> OmegaTerm:
    kind, text, ln, col = ts.next()
    if kind == "num":
        return onum(int(text))
    if kind == "name":
        if text == "s" and ts.at("("):
            ts.expect("(")
            inner = _parse_omega(ts)
            ts.expect(")")
            return OSucc(inner)
        return OVar(text)
    raise ParseError(f"expected an omega term, found {text!r}", ln, col)


def _parse_unary(ts: _Tokens) -> Formula:
    if ts.at("~"):
        ts.next()
        return Not(_parse_unary(ts))
    tok = ts.peek()
    if tok is not None and tok[1] == "bigor":
        ts.next()
        ts.expect("(")
        kind, var, ln, col = ts.next()
        if kind != "name":
            raise ParseError("expected the bound variable name", ln, col)
        ts.expect(",")
        bound = _parse_omega(ts)
        ts.expect(",")
        body = _parse_formula(ts)
        ts.expect(")")
        return IterOr(bound, var, body)
    if ts.at("("):
        # backtrack between parenthesized formula and a term like max(a, b)
        mark = ts.i
        ts.next()
        try:
            phi = _parse_formula(ts)
            ts.expect(")")
            return phi
        except ParseError:
            ts.i = mark
    return _parse_atom(ts)


# ---------------------------------------------------------------------------
# parsing: carriage return lists


def parse_crlist(text: str) -> crl.CRList:
    ts = _Tokens(text)
    ts.expect("<")
    front = _parse_num_list(ts)
    ts.expect("|")
    focus: Optional[int] = None
    if not ts.at("|"):
        kind, val, ln, col = ts.next()
        if kind != "num":
            raise ParseError("expected the focused numeral", ln, col)
        focus = int(val)
    ts.expect("|")
    back = _parse_num_list(ts)
    ts.expect(">")
    if not ts.done():
        ts.fail("trailing input after carriage return list")
    if focus is None and (front or back):
        raise ParseError("a focus-free carriage return list must be fully empty",
                         1, 1)
    return crl.crlist(front, focus, back)


def _parse_num_list(ts: _Tokens) -> list[int]:
    out: list[int] = []
    tok = ts.peek()
    if tok is None or tok[0] != "num":
        return out
    out.append(int(ts.next()[1]))
    while ts.at(","):
        ts.next()
        out.append(int(ts.next()[1]))
    return out


# ---------------------------------------------------------------------------
# resolution trees: text, JSON, DOT


def print_tree(tree) -> str:
    from .resolution import RLeaf, RNode
    lines: list[str] = []

    def walk(node, depth: int):
        pad = "  " * depth
        if isinstance(node, RLeaf):
            lines.append(f"{pad}leaf {print_clause(node.clause)}")
        else:
            assert isinstance(node, RNode)
            lines.append(f"{pad}res [{print_atom(node.pivot)}] "
                         f"{print_clause(node.conclusion)}")
            walk(node.left, depth + 1)
            walk(node.right, depth + 1)

    walk(tree, 0)
    return "\n".join(lines)


def parse_tree(text: str):
    from .resolution import RLeaf, RNode, res_step
    entries: list[tuple[int, str, int]] = []  # (depth, body, line-number)
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        stripped = body.lstrip(" ")
        indent = len(body) - len(stripped)
        if indent % 2 != 0:
            raise ParseError("indentation must be a multiple of two spaces", ln, 1)
        entries.append((indent // 2, stripped.rstrip(), ln))

    pos = [0]

    def build(depth: int):
        if pos[0] >= len(entries):
            raise ParseError("unexpected end of tree", entries[-1][2], 1)
        d, body, ln = entries[pos[0]]
        if d != depth:
            raise ParseError(f"expected a node at depth {depth}", ln, 1)
        pos[0] += 1
        if body.startswith("leaf"):
            clause = parse_clause(body[len("leaf"):].strip())
            return RLeaf(clause)
        if not body.startswith("res"):
            raise ParseError("expected 'res' or 'leaf'", ln, 1)
        rest = body[len("res"):].strip()
        if not rest.startswith("["):
            raise ParseError("expected '[' after res", ln, 4)
        close = rest.index("]")
        pivot = parse_atom(rest[1:close])
        conclusion = parse_clause(rest[close + 1:].strip())
        left = build(depth + 1)
        right = build(depth + 1)
        return RNode(left=left, right=right, pivot=pivot,
                     sigma=Substitution(), conclusion=conclusion,
                     contracted=False, swapped=False)

    tree = build(0)
    if pos[0] != len(entries):
        raise ParseError("trailing input after tree", entries[pos[0]][2], 1)
    return tree


def clause_to_json(c: Clause) -> dict:
    return {"ante": [print_atom(a) for a in c.ante],
            "succ": [print_atom(a) for a in c.succ]}


def clause_from_json(obj: dict) -> Clause:
    return Clause.of([parse_atom(a) for a in obj["ante"]],
                     [parse_atom(a) for a in obj["succ"]])


def clause_set_to_json(clauses: Iterable[Clause]) -> str:
    ordered = sorted(clauses, key=structural_key_clause)
    return json.dumps([clause_to_json(c) for c in ordered], indent=2)


def tree_to_json(tree) -> str:
    return json.dumps(_tree_to_obj(tree), indent=2)


def _tree_to_obj(node) -> dict:
    from .resolution import RLeaf, RNode
    if isinstance(node, RLeaf):
        return {"kind": "leaf", "clause": clause_to_json(node.clause),
                "contracted": node.contracted}
    assert isinstance(node, RNode)
    sigma = {print_term(k): print_term(v) for k, v in node.sigma.mapping}
    return {"kind": "res", "pivot": print_atom(node.pivot), "sigma": sigma,
            "conclusion": clause_to_json(node.conclusion),
            "contracted": node.contracted,
            "left": _tree_to_obj(node.left), "right": _tree_to_obj(node.right)}


def tree_from_json(text: str):
    return _tree_from_obj(json.loads(text))


def _tree_from_obj(obj: dict):
    from .resolution import RLeaf, RNode
    if obj["kind"] == "leaf":
        return RLeaf(clause_from_json(obj["clause"]),
                     contracted=obj.get("contracted", False))
    sigma = Substitution.of({parse_term(k): parse_term(v)
                             for k, v in obj.get("sigma", {}).items()})
    return RNode(left=_tree_from_obj(obj["left"]),
                 right=_tree_from_obj(obj["right"]),
                 pivot=parse_atom(obj["pivot"]), sigma=sigma,
                 conclusion=clause_from_json(obj["conclusion"]),
                 contracted=obj.get("contracted", False), swapped=False)


def tree_to_dot(tree) -> str:
    from .resolution import RLeaf, RNode
    lines = ["digraph resolution {", "  node [shape=box, fontname=monospace];"]
    counter = [0]

    def walk(node) -> str:
        name = f"n{counter[0]}"
        counter[0] += 1
        if isinstance(node, RLeaf):
            label = print_clause(node.clause)
            lines.append(f'  {name} [label="{_dot_escape(label)}"];')
        else:
            assert isinstance(node, RNode)
            label = (f"{print_clause(node.conclusion)}\\n"
                     f"res on {print_atom(node.pivot)}")
            lines.append(f'  {name} [label="{_dot_escape(label)}"];')
            for child in (node.left, node.right):
                lines.append(f"  {walk(child)} -> {name};")
        return name

    walk(tree)
    lines.append("}")
    return "\n".join(lines)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def parse_resolution_input(text: str):
    """Parse either a clause set or a resolution tree from the text grammar."""
    for line in text.splitlines():
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith(("res", "leaf")):
            return parse_tree(text)
        return parse_clause_set(text)
    return frozenset()


# ---------------------------------------------------------------------------
# TPTP CNF

_TPTP_PRED = {"<=": "leq", "<": "lt", "=": "eq"}


def _tptp_term(t: Term) -> str:
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Var):
        return t.name.capitalize()
    if isinstance(t, SVar):
        return f"{t.family.capitalize()}_{omega_value(t.index)}"
    if isinstance(t, Fn):
        return f"{t.name}({','.join(_tptp_term(a) for a in t.args)})"
    raise TypeError(f"not exportable to TPTP: {t!r}")


def _tptp_literal(a: Atom, positive: bool) -> str:
    body = f"{_TPTP_PRED[a.pred]}({_tptp_term(a.left)},{_tptp_term(a.right)})"
    return body if positive else f"~{body}"


def clauses_to_tptp(clauses: Iterable[Clause], prefix: str = "cl") -> str:
    ordered = sorted(clauses, key=structural_key_clause)
    lines = []
    for i, c in enumerate(ordered):
        lits = [_tptp_literal(a, False) for a in c.ante]
        lits += [_tptp_literal(a, True) for a in c.succ]
        body = " | ".join(lits) if lits else "$false"
        lines.append(f"cnf({prefix}_{i}, axiom, ({body})).")
    return "\n".join(lines)
