"""Shared random generators for round-trip and property tests."""

import random

import pytest

from crres.clauses import Clause
from crres.crlist import CRList, crlist
from crres.resolution import RLeaf, RNode
from crres.terms import (Atom, Const, Fn, IDENTITY, SVar, Substitution, Var,
                         inum, onum)

PREDS = ("<=", "<", "=")
FN_NAMES = ("s", "f", "max", "g")
VAR_NAMES = ("alpha", "beta", "gamma", "delta", "t", "z")


def random_term(rng: random.Random, depth: int = 3):
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        kind = rng.randrange(3)
        if kind == 0:
            return Var(rng.choice(VAR_NAMES))
        if kind == 1:
            return inum(rng.randrange(4))
        return SVar(rng.choice(("x", "y")), onum(rng.randrange(5)))
    name = rng.choice(FN_NAMES)
    arity = 2 if name == "max" else 1
    return Fn(name, tuple(random_term(rng, depth - 1) for _ in range(arity)))


def random_atom(rng: random.Random, depth: int = 3) -> Atom:
    return Atom(rng.choice(PREDS), random_term(rng, depth),
                random_term(rng, depth))


def random_clause(rng: random.Random, max_side: int = 3) -> Clause:
    ante = [random_atom(rng, 2) for _ in range(rng.randrange(max_side + 1))]
    succ = [random_atom(rng, 2) for _ in range(rng.randrange(max_side + 1))]
    return Clause.of(ante, succ)


def random_crlist(rng: random.Random, max_len: int = 6) -> CRList:
    size = rng.randrange(max_len + 1)
    if size == 0:
        return crlist((), None, ())
    entries = [rng.randrange(8) for _ in range(size)]
    split = rng.randrange(size)
    return crlist(entries[:split], entries[split], entries[split + 1:])


def random_tree(rng: random.Random, depth: int = 3):
    if depth <= 0 or rng.random() < 0.4:
        return RLeaf(random_clause(rng))
    return RNode(left=random_tree(rng, depth - 1),
                 right=random_tree(rng, depth - 1),
                 pivot=random_atom(rng, 2), sigma=IDENTITY,
                 conclusion=random_clause(rng), contracted=False,
                 swapped=False)


@pytest.fixture
def rng():
    return random.Random(20240817)
