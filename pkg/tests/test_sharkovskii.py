import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharktail.errors import EmptyInput
from sharktail.sharkovskii import (FiniteTail, SharkKey, is_finite_tail,
                                   shark_less, shark_predecessor,
                                   shark_sort_key, shark_successor, tail)


def display_order(bound):
    """Independent oracle: build the order by writing out the display rows."""
    odds = [q for q in range(3, bound + 1, 2)]
    rows = []
    power = 1
    while power <= bound:
        rows.extend(m for q in odds if (m := power * q) <= bound)
        power *= 2
    powers = []
    p = 1
    while p <= bound:
        powers.append(p)
        p *= 2
    rows.extend(reversed(powers))
    return rows


def test_matches_display_oracle():
    order = display_order(200)
    position = {m: i for i, m in enumerate(order)}
    assert len(position) == 200
    for a in range(1, 201):
        for b in range(1, 201):
            assert shark_less(a, b) == (position[a] < position[b])


def test_strict_total_order_on_1000():
    keys = [shark_sort_key(n) for n in range(1, 1001)]
    assert len(set(keys)) == 1000
    ordered = sorted(range(1, 1001), key=shark_sort_key)
    assert ordered[0] == 3
    assert ordered[-1] == 1


def test_spec_pairs():
    assert shark_less(3, 5)
    assert shark_less(4, 2) and shark_less(2, 1)
    assert shark_less(6, 12)
    assert not shark_less(12, 6)
    assert not shark_less(5, 5)


def test_row_structure():
    ordered = sorted(range(1, 1001), key=shark_sort_key)
    # first row: the odd numbers ascending
    odds = [n for n in range(3, 1001, 2)]
    assert ordered[:len(odds)] == odds
    # next: twice each odd number
    twice = [2 * n for n in range(3, 501, 2)]
    assert ordered[len(odds):len(odds) + len(twice)] == twice
    # last: the powers of two, descending to 1
    powers = sorted((n for n in range(1, 1001) if SharkKey.of(n).odd_part == 1),
                    reverse=True)
    assert ordered[-len(powers):] == powers


def test_key_roundtrip():
    for n in (1, 2, 3, 12, 40, 96, 1024):
        assert SharkKey.of(n).to_int() == n


def test_successor_predecessor():
    assert shark_successor(3) == 5
    assert shark_successor(6) == 10
    assert shark_successor(8) == 4
    assert shark_successor(2) == 1
    assert shark_successor(1) is None
    assert shark_predecessor(2) == 4
    assert shark_predecessor(1) == 2
    assert shark_predecessor(7) == 5
    assert shark_predecessor(3) is None
    assert shark_predecessor(6) is None  # previous display row has no last element


def test_tail_examples():
    assert tail(3, 10) == set(range(1, 11))
    assert tail(1, 10) == {1}
    assert tail(6, 12) == {1, 2, 4, 6, 8, 10, 12}


def test_tail_definition_crosscheck():
    for n in range(1, 65):
        for bound in (8, 33, 64):
            expected = {m for m in range(1, bound + 1)
                        if m == n or shark_less(n, m)}
            assert tail(n, bound) == expected


def test_is_finite_tail_examples():
    assert is_finite_tail({1, 2, 4}) == (True, 4)
    assert is_finite_tail({1}) == (True, 1)
    ok, head = is_finite_tail({1, 2, 6})
    assert not ok and head == 6
    assert is_finite_tail({3, 5, 7}) == (True, 3)
    assert is_finite_tail({6, 10}) == (True, 6)


def test_is_finite_tail_empty():
    with pytest.raises(EmptyInput):
        is_finite_tail(set())


@given(st.integers(1, 32), st.integers(1, 8))
@settings(max_examples=200)
def test_successor_chains_are_tails(head, length):
    chain = [head]
    for _ in range(length - 1):
        nxt = shark_successor(chain[-1])
        if nxt is None:
            break
        chain.append(nxt)
    ok, found_head = is_finite_tail(chain)
    assert ok and found_head == head
    if len(chain) >= 3:
        broken = set(chain) - {chain[1]}
        assert is_finite_tail(broken)[0] is False


def test_finite_tail_constructor():
    ft = FiniteTail.from_periods({1, 2, 4})
    assert ft.head == 4
    assert ft.ordered() == [4, 2, 1]
    with pytest.raises(ValueError):
        FiniteTail.from_periods({1, 2, 6})
