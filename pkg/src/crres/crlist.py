"""Omega lists and carriage return lists.

A carriage return list is an omega list with a focus position,
``<F | m | B>``, denoting ``F ++ (m : B)``.  Shift moves the focus one
step right without changing the denoted list; carriage return deletes
the focused element and puts the focus back on the first element.
``canonical(n)`` is ``< | n | n-1, ..., 0>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .terms import OmegaTerm, omega_value, onum


class EmptyFocusError(ValueError):
    """The fully empty carriage return list has no focused element."""


@dataclass(frozen=True)
class OmegaList:
    """Finite list of omega terms; empty or head plus tail."""

    items: tuple[OmegaTerm, ...] = ()

    @property
    def head(self) -> OmegaTerm:
        if not self.items:
            raise IndexError("empty omega list has no head")
        return self.items[0]

    @property
    def tail(self) -> "OmegaList":
        if not self.items:
            raise IndexError("empty omega list has no tail")
        return OmegaList(self.items[1:])

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)


EMPTY_OLIST = OmegaList()


def olist(values: Iterable[int]) -> OmegaList:
    return OmegaList(tuple(onum(v) for v in values))


def concat(left: OmegaList, right: OmegaList) -> OmegaList:
    """<> ++ H = H; (m:T) ++ H = m : (T ++ H)."""
    if not left:
        return right
    return OmegaList((left.head,) + concat(left.tail, right).items)


def length(lst: OmegaList) -> OmegaTerm:
    """|<>| = 0; |m:T| = 1 + |T|, as a numeral."""
    if not lst:
        return onum(0)
    from .terms import OSucc
    return OSucc(length(lst.tail))


@dataclass(frozen=True)
class CRList:
    """Carriage return list <front | focus | back>.

    The fully empty list is the unique value with ``focus is None``;
    an absent focus forces empty front and back.
    """

    front: OmegaList = EMPTY_OLIST
    focus: Optional[OmegaTerm] = None
    back: OmegaList = EMPTY_OLIST

    def __post_init__(self):
        if self.focus is None and (self.front or self.back):
            raise ValueError("a focus-free carriage return list must be fully empty")

    def is_empty(self) -> bool:
        return self.focus is None

    def denote(self) -> OmegaList:
        if self.focus is None:
            return EMPTY_OLIST
        return concat(self.front, OmegaList((self.focus,) + self.back.items))

    def denoted_length(self) -> int:
        return omega_value(length(self.denote()))

    def entries(self) -> tuple[int, ...]:
        return tuple(omega_value(t) for t in self.denote().items)


EMPTY_CR = CRList()


def crlist(front: Iterable[int], focus: Optional[int], back: Iterable[int]) -> CRList:
    if focus is None:
        return EMPTY_CR
    return CRList(olist(front), onum(focus), olist(back))


def canonical(n: int) -> CRList:
    """CR_n = < | n | n-1, ..., 0>."""
    if n < 0:
        raise ValueError(f"canonical carriage return list needs n >= 0, got {n}")
    return crlist((), n, range(n - 1, -1, -1))


def shift(c: CRList) -> CRList:
    """<F|m|B>> = <F++[m] | B.1 | B.2>; fixed point once the back is empty."""
    if c.is_empty() or not c.back:
        return c
    assert c.focus is not None
    return CRList(concat(c.front, OmegaList((c.focus,))), c.back.head, c.back.tail)


def carriage_return(c: CRList) -> CRList:
    """Delete the focused element and refocus on the first element."""
    if c.is_empty():
        return c
    if c.front:
        return CRList(EMPTY_OLIST, c.front.head, concat(c.front.tail, c.back))
    if c.back:
        return CRList(EMPTY_OLIST, c.back.head, c.back.tail)
    return EMPTY_CR


def mid(c: CRList) -> OmegaTerm:
    """The focused element; raises on the empty list."""
    if c.focus is None:
        raise EmptyFocusError("empty carriage return list has no focus")
    return c.focus


def derivable(c: CRList) -> frozenset[CRList]:
    """All lists reachable from ``c`` under shift and carriage return (BFS)."""
    seen = {c}
    frontier = [c]
    while frontier:
        cur = frontier.pop()
        for nxt in (shift(cur), carriage_return(cur)):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)
