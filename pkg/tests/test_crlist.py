import itertools

import pytest

from crres.crlist import (EMPTY_CR, EmptyFocusError, OmegaList, canonical,
                          carriage_return, concat, crlist, derivable, length,
                          mid, olist, shift)
from crres.terms import omega_value, onum


class TestOmegaList:
    def test_concat_base(self):
        assert concat(olist(()), olist((3, 2))) == olist((3, 2))

    def test_concat_step(self):
        assert concat(olist((4,)), olist((3, 2))) == olist((4, 3, 2))

    def test_concat_right_empty(self):
        assert concat(olist((4, 3)), olist(())) == olist((4, 3))

    def test_length(self):
        assert omega_value(length(olist(()))) == 0
        assert omega_value(length(olist((3, 2, 1, 0)))) == 4

    def test_concat_associative_with_empty_identity(self):
        entries = range(3)
        lists = [olist(c) for size in range(4)
                 for c in itertools.product(entries, repeat=size)]
        empty = olist(())
        for a in lists[:20]:
            assert concat(a, empty) == a
            assert concat(empty, a) == a
        for a, b, c in itertools.product(lists[:8], repeat=3):
            assert concat(concat(a, b), c) == concat(a, concat(b, c))


class TestOperators:
    def test_worked_example(self):
        # < |4| 3,2,1,0> shifted three times, then one carriage return
        c = canonical(4)
        c3 = shift(shift(shift(c)))
        assert c3 == crlist((4, 3, 2), 1, (0,))
        assert carriage_return(c3) == crlist((), 4, (3, 2, 0))

    def test_shift_fixed_point_when_back_empty(self):
        c = crlist((4, 3, 2, 1), 0, ())
        assert shift(c) == c

    def test_shift_empty(self):
        assert shift(EMPTY_CR) == EMPTY_CR

    def test_carriage_return_empty_front(self):
        assert carriage_return(crlist((), 2, (1, 0))) == crlist((), 1, (0,))

    def test_carriage_return_to_empty(self):
        assert carriage_return(crlist((), 0, ())) == EMPTY_CR
        assert carriage_return(EMPTY_CR) == EMPTY_CR

    def test_canonical(self):
        assert canonical(4) == crlist((), 4, (3, 2, 1, 0))
        assert canonical(0) == crlist((), 0, ())
        assert canonical(2).denoted_length() == 3
        with pytest.raises(ValueError):
            canonical(-1)

    def test_mid(self):
        assert omega_value(mid(crlist((4, 3, 2), 1, (0,)))) == 1
        assert omega_value(mid(canonical(7))) == 7
        with pytest.raises(EmptyFocusError):
            mid(EMPTY_CR)

    def test_denoted_length_of_canonical(self):
        assert canonical(4).denoted_length() == 5

    def test_invariant_focus_free_is_fully_empty(self):
        from crres.crlist import CRList
        with pytest.raises(ValueError):
            CRList(olist((1,)), None, olist(()))


class TestDenotationProperties:
    @pytest.mark.parametrize("n", range(5))
    def test_shift_preserves_denotation(self, n):
        for c in derivable(canonical(n)):
            assert shift(c).entries() == c.entries()

    @pytest.mark.parametrize("n", range(5))
    def test_carriage_return_deletes_exactly_the_focus(self, n):
        for c in derivable(canonical(n)):
            if c.is_empty():
                continue
            before = list(c.entries())
            removed = omega_value(mid(c))
            after = list(carriage_return(c).entries())
            before.remove(removed)
            assert sorted(after) == sorted(before)
            assert len(after) == len(c.entries()) - 1

    @pytest.mark.parametrize("n", range(5))
    def test_length_many_carriage_returns_empty_any_list(self, n):
        for c in derivable(canonical(n)):
            cur = c
            for _ in range(cur.denoted_length()):
                cur = carriage_return(cur)
            assert cur == EMPTY_CR

    @pytest.mark.parametrize("n", range(5))
    def test_fully_shifted_only_carriage_return_changes(self, n):
        c = canonical(n)
        for _ in range(len(c.back)):
            c = shift(c)
        assert shift(c) == c
        if not c.is_empty():
            assert carriage_return(c) != c

    @pytest.mark.parametrize("n", range(5))
    def test_derivable_entries_are_descending_subsequences(self, n):
        base = list(canonical(n).entries())
        for c in derivable(canonical(n)):
            entries = list(c.entries())
            # a subsequence of (n, n-1, ..., 0): deletions never reorder
            it = iter(base)
            assert all(e in it for e in entries)

    def test_derivable_is_finite_and_memoized(self):
        d = derivable(canonical(4))
        assert EMPTY_CR in d
        assert canonical(4) in d
        assert len(d) == len(set(d))
