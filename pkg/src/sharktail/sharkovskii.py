"""The Sharkovskii order on the positive integers, tails, and finite tails.

The order lists the odd numbers ascending, then 2*odds, then 4*odds and
so on, and finally the pure powers of two with descending exponent:

    3 < 5 < 7 < ... < 2*3 < 2*5 < ... < 4*3 < 4*5 < ... < 8 < 4 < 2 < 1.

Writing n = 2**a * q with q odd, the position of n is determined by the
key (0, a, q) when q > 1 and (1, -a, 0) when q = 1; comparing keys is
the whole order.  The tail of n collects n together with everything
after it; a finite tail is a finite initial segment of some tail, which
forces every consecutive pair to be an immediate-successor pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyInput


@dataclass(frozen=True)
class SharkKey:
    """Decomposition n = 2**dyadic_exponent * odd_part with odd_part odd."""

    dyadic_exponent: int
    odd_part: int

    @staticmethod
    def of(n: int) -> "SharkKey":
        if n < 1:
            raise ValueError("periods are positive integers")
        a = 0
        while n % 2 == 0:
            n //= 2
            a += 1
        return SharkKey(a, n)

    def to_int(self) -> int:
        return (1 << self.dyadic_exponent) * self.odd_part

    def sort_key(self) -> tuple[int, int, int]:
        if self.odd_part > 1:
            return (0, self.dyadic_exponent, self.odd_part)
        return (1, -self.dyadic_exponent, 0)


def shark_sort_key(n: int) -> tuple[int, int, int]:
    """Total-order key: a comes before b iff shark_sort_key(a) < shark_sort_key(b)."""
    return SharkKey.of(n).sort_key()


def shark_less(a: int, b: int) -> bool:
    """True iff a strictly precedes b in the Sharkovskii order."""
    return shark_sort_key(a) < shark_sort_key(b)


def shark_successor(n: int) -> int | None:
    """The immediate order-successor of n, or None for the maximum (n = 1)."""
    k = SharkKey.of(n)
    if k.odd_part > 1:
        return (1 << k.dyadic_exponent) * (k.odd_part + 2)
    if k.dyadic_exponent == 0:
        return None
    return 1 << (k.dyadic_exponent - 1)


def shark_predecessor(n: int) -> int | None:
    """The immediate order-predecessor of n, when one exists.

    Powers of two other than 1 have predecessor 2n; an odd number q >= 5
    has predecessor q - 2 (same for 2**a * q).  The numbers 3*2**a and 1
    sit at the start of an infinite block, so nothing immediately
    precedes them (the previous block has no last element); for those
    the function returns None.
    """
    k = SharkKey.of(n)
    if k.odd_part == 1:
        return 1 << (k.dyadic_exponent + 1)
    if k.odd_part >= 5:
        return (1 << k.dyadic_exponent) * (k.odd_part - 2)
    return None


def tail(n: int, bound: int) -> set[int]:
    """All periods m <= bound with m = n or n before m in the order."""
    if bound < 1:
        raise ValueError("bound must be positive")
    key = shark_sort_key(n)
    out = {m for m in range(1, bound + 1) if shark_sort_key(m) > key}
    if n <= bound:
        out.add(n)
    return out


@dataclass(frozen=True)
class FiniteTail:
    """A finite initial segment of the tail generated by its head.

    The head is the order-least member; every other member follows it
    with no gaps, i.e. consecutive members (in order) are immediate
    successor pairs.
    """

    periods: frozenset[int]
    head: int

    @staticmethod
    def from_periods(periods) -> "FiniteTail":
        ok, head = is_finite_tail(periods)
        if not ok:
            raise ValueError(f"{sorted(periods)} is not a finite Sharkovskii tail")
        return FiniteTail(frozenset(periods), head)

    def ordered(self) -> list[int]:
        return sorted(self.periods, key=shark_sort_key)


def is_finite_tail(periods) -> tuple[bool, int]:
    """Decide whether a finite set is an initial tail segment; report its head.

    The head (the generator) is the order-least element.  Returns
    ``(True, head)`` when every later element is reached from the head
    through immediate successors, ``(False, head)`` otherwise.
    """
    members = set(int(p) for p in periods)
    if not members:
        raise EmptyInput("a finite tail has at least one period")
    if any(p < 1 for p in members):
        raise ValueError("periods are positive integers")
    chain = sorted(members, key=shark_sort_key)
    head = chain[0]
    for a, b in zip(chain, chain[1:]):
        if shark_successor(a) != b:
            return False, head
    return True, head
