"""Exact scalars, outward-rounded intervals, and piecewise map representations.

Two scalar backends live behind one interface.  Exact rationals
(``fractions.Fraction``) carry every certified statement about the tent
family, whose periodic points are rationals with denominators dividing
``2**k +- 1``.  Double precision with outward rounding (one ulp per
operation) carries the logistic family, whose periodic points are
algebraic irrationals.  An :class:`Interval` stores two endpoints of the
same kind; arithmetic on float-backed intervals pads every result
outward so that the result always encloses the exact one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .errors import DomainError, NotInvertible, RangeError

Scalar = Union[Fraction, float, int]


def rational_from_str(s: str) -> Fraction:
    """Parse a rational from a "p/q" (or bare "p") decimal string."""
    s = s.strip()
    if "/" in s:
        p, q = s.split("/")
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def rational_to_str(x: Fraction) -> str:
    """Format a rational as the canonical "p/q" string (q >= 1)."""
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _next_down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _next_up(x: float) -> float:
    return math.nextafter(x, math.inf)


def _is_exact(x) -> bool:
    return isinstance(x, (Fraction, int))


@dataclass(frozen=True)
class Interval:
    """A closed interval [lo, hi]; endpoints both exact or both float.

    Arithmetic produces enclosures: with exact endpoints results are
    exact, with float endpoints every bound is rounded outward by one
    ulp, so the true result set is always contained in the output.
    """

    lo: Scalar
    hi: Scalar

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    # -- constructors -------------------------------------------------

    @staticmethod
    def point(x: Scalar) -> "Interval":
        return Interval(x, x)

    @staticmethod
    def hull(values: Iterable[Scalar]) -> "Interval":
        vals = list(values)
        if not vals:
            raise ValueError("hull of no values")
        return Interval(min(vals), max(vals))

    # -- queries ------------------------------------------------------

    @property
    def exact(self) -> bool:
        return _is_exact(self.lo) and _is_exact(self.hi)

    def width(self) -> Scalar:
        return self.hi - self.lo

    def midpoint(self) -> Scalar:
        if self.exact:
            return (Fraction(self.lo) + Fraction(self.hi)) / 2
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: Scalar) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def interior_contains(self, x: Scalar) -> bool:
        return self.lo < x < self.hi

    def interior_contains_interval(self, other: "Interval") -> bool:
        return self.lo < other.lo and other.hi < self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other: "Interval") -> "Interval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def union_hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def distance_to(self, other: "Interval") -> Scalar:
        """Distance between the two closed sets (0 when they intersect)."""
        if self.intersects(other):
            return 0 * self.lo
        if self.hi < other.lo:
            return other.lo - self.hi
        return self.lo - other.hi

    def distance_to_point(self, x: Scalar) -> Scalar:
        if self.contains(x):
            return 0 * self.lo
        return self.lo - x if x < self.lo else x - self.hi

    # -- arithmetic ----------------------------------------------------

    def _wrap(self, lo, hi) -> "Interval":
        if _is_exact(lo) and _is_exact(hi):
            return Interval(lo, hi)
        return Interval(_next_down(float(lo)), _next_up(float(hi)))

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        if isinstance(other, Interval):
            return self._wrap(self.lo + other.lo, self.hi + other.hi)
        return self._wrap(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        if isinstance(other, Interval):
            return self._wrap(self.lo - other.hi, self.hi - other.lo)
        return self._wrap(self.lo - other, self.hi - other)

    def __mul__(self, other) -> "Interval":
        if isinstance(other, Interval):
            products = [self.lo * other.lo, self.lo * other.hi,
                        self.hi * other.lo, self.hi * other.hi]
            return self._wrap(min(products), max(products))
        vals = (self.lo * other, self.hi * other)
        return self._wrap(min(vals), max(vals))

    __rmul__ = __mul__

    def abs_bounds(self) -> "Interval":
        """Enclosure of |x| over the interval."""
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0 * self.lo, max(-self.lo, self.hi))

    def to_float(self) -> "Interval":
        """Outward-rounded float version of an exact interval."""
        if not self.exact:
            return self
        return Interval(_next_down(float(self.lo)), _next_up(float(self.hi)))

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


def merge_intervals(pieces: Sequence[Interval]) -> list[Interval]:
    """Merge overlapping or abutting closed intervals into a disjoint list."""
    if not pieces:
        return []
    parts = sorted(pieces, key=lambda J: (J.lo, J.hi))
    merged = [parts[0]]
    for J in parts[1:]:
        last = merged[-1]
        if J.lo <= last.hi:
            merged[-1] = Interval(last.lo, max(last.hi, J.hi))
        else:
            merged.append(J)
    return merged


@dataclass(frozen=True)
class AffineBranch:
    """One affine piece y = slope*x + intercept with exact coefficients."""

    slope: Fraction
    intercept: Fraction

    def __call__(self, x):
        return self.slope * x + self.intercept

    def invert(self, y: Fraction) -> Fraction:
        if self.slope == 0:
            raise NotInvertible("plateau branch has zero slope")
        return (Fraction(y) - self.intercept) / self.slope


@dataclass(frozen=True)
class PiecewiseAffineMap:
    """A continuous piecewise-affine self-map of a compact interval.

    ``breakpoints`` are the interior knots, in increasing order; segment
    ``i`` is the closed interval from knot ``i`` to knot ``i+1`` (with
    the domain endpoints as outer knots) and carries ``branches[i]``.
    Adjacent branches must agree at each breakpoint, and the image of
    the domain must stay inside the domain.  Evaluation at a breakpoint
    uses the left branch; continuity makes the choice unobservable.
    """

    domain: Interval
    breakpoints: tuple[Fraction, ...]
    branches: tuple[AffineBranch, ...]

    def __post_init__(self):
        if len(self.branches) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one branch per segment")
        knots = (self.domain.lo,) + self.breakpoints + (self.domain.hi,)
        for a, b in zip(knots, knots[1:]):
            if not a < b:
                raise ValueError("breakpoints must be strictly increasing inside the domain")
        for i, bp in enumerate(self.breakpoints):
            if self.branches[i](bp) != self.branches[i + 1](bp):
                raise ValueError(f"branches disagree at breakpoint {bp}")
        # Piecewise-affine extremes occur at knots, so this check is exact.
        values = [self.branches[0](knots[0])]
        values += [self.branches[i](self.breakpoints[i]) for i in range(len(self.breakpoints))]
        values.append(self.branches[-1](knots[-1]))
        if min(values) < self.domain.lo or max(values) > self.domain.hi:
            raise ValueError("map does not send its domain into itself")

    # -- structure queries --------------------------------------------

    @property
    def knots(self) -> tuple:
        return (self.domain.lo,) + self.breakpoints + (self.domain.hi,)

    def segment(self, i: int) -> Interval:
        knots = self.knots
        return Interval(knots[i], knots[i + 1])

    def branch_index_of(self, x) -> int:
        """Index of the segment whose closed span contains x (left branch at knots)."""
        if not self.domain.contains(x):
            raise DomainError(f"{x} outside domain {self.domain}")
        for i, bp in enumerate(self.breakpoints):
            if x <= bp:
                return i
        return len(self.branches) - 1

    def branch_containing(self, J: Interval) -> int:
        """Index of the single branch whose segment contains J; DomainError otherwise."""
        for i in range(len(self.branches)):
            if self.segment(i).contains_interval(J):
                return i
        raise DomainError(f"{J} is not contained in a single branch segment")

    # -- evaluation ----------------------------------------------------

    def eval_exact(self, x) -> Fraction:
        """Exact value at a rational point of the domain."""
        xf = Fraction(x)
        if not self.domain.contains(xf):
            raise DomainError(f"{x} outside domain {self.domain}")
        return self.branches[self.branch_index_of(xf)](xf)

    def eval_float(self, x: float) -> float:
        if not (float(self.domain.lo) <= x <= float(self.domain.hi)):
            raise DomainError(f"{x} outside domain {self.domain}")
        for i, bp in enumerate(self.breakpoints):
            if x <= bp:
                b = self.branches[i]
                return float(b.slope) * x + float(b.intercept)
        b = self.branches[-1]
        return float(b.slope) * x + float(b.intercept)

    def __call__(self, x):
        if isinstance(x, (Fraction, int)):
            return self.eval_exact(x)
        return self.eval_float(x)

    def eval_interval(self, J: Interval) -> Interval:
        """Exact image hull of J (values at J's endpoints and interior knots)."""
        if not self.domain.contains_interval(J):
            raise DomainError(f"{J} not contained in domain {self.domain}")
        lo, hi = Fraction(J.lo), Fraction(J.hi)
        values = [self.eval_exact(lo), self.eval_exact(hi)]
        for bp in self.breakpoints:
            if lo < bp < hi:
                values.append(self.eval_exact(bp))
        out = Interval.hull(values)
        return out if J.exact else out.to_float()

    def preimage(self, J: Interval) -> list[Interval]:
        """Exact preimage of J, as a disjoint list of closed intervals."""
        pieces = []
        for i, b in enumerate(self.branches):
            seg = self.segment(i)
            if b.slope == 0:
                if J.contains(b.intercept):
                    pieces.append(seg)
                continue
            xs = sorted((b.invert(Fraction(J.lo)), b.invert(Fraction(J.hi))))
            hit = Interval(xs[0], xs[1]).intersection(seg)
            if hit is not None:
                pieces.append(hit)
        return merge_intervals(pieces)

    def invert_branch(self, branch_index: int, y) -> Fraction:
        """The unique x on the given branch with map(x) = y."""
        b = self.branches[branch_index]
        if b.slope == 0:
            raise NotInvertible(f"branch {branch_index} is a plateau")
        x = b.invert(Fraction(y))
        if not self.segment(branch_index).contains(x):
            raise RangeError(f"{y} is outside the image of branch {branch_index}")
        return x

    # -- derivative queries ---------------------------------------------

    def slope_range(self, J: Interval) -> Interval:
        """Hull of branch slopes over all segments meeting J."""
        if not self.domain.contains_interval(J):
            raise DomainError(f"{J} not contained in domain {self.domain}")
        slopes = []
        for i, b in enumerate(self.branches):
            seg = self.segment(i)
            if seg.lo <= J.hi and J.lo <= seg.hi:
                slopes.append(b.slope)
        return Interval.hull(slopes)

    def is_breakpoint(self, x) -> bool:
        return any(Fraction(x) == bp for bp in self.breakpoints)

    def nearest_breakpoint_distance(self, x) -> Fraction | None:
        if not self.breakpoints:
            return None
        xf = Fraction(x)
        return min(abs(xf - bp) for bp in self.breakpoints)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "domain": [rational_to_str(Fraction(self.domain.lo)),
                       rational_to_str(Fraction(self.domain.hi))],
            "breakpoints": [rational_to_str(bp) for bp in self.breakpoints],
            "branches": [{"slope": rational_to_str(b.slope),
                          "intercept": rational_to_str(b.intercept)}
                         for b in self.branches],
        }

    @staticmethod
    def from_json(obj: dict) -> "PiecewiseAffineMap":
        if isinstance(obj, str):
            obj = json.loads(obj)
        domain = Interval(rational_from_str(obj["domain"][0]),
                          rational_from_str(obj["domain"][1]))
        bps = tuple(rational_from_str(s) for s in obj["breakpoints"])
        branches = tuple(AffineBranch(rational_from_str(b["slope"]),
                                      rational_from_str(b["intercept"]))
                         for b in obj["branches"])
        return PiecewiseAffineMap(domain, bps, branches)


@dataclass(frozen=True)
class DifferentiableMapHandle:
    """A C^1 self-map given by callables, for the non-affine families.

    ``deriv_range``, when supplied, returns a certified enclosure of the
    derivative over an interval (the logistic family admits an exact
    affine one).  Without it, enclosures fall back on the Lipschitz
    bound for |f'| on the whole domain.  Interval images use the
    mean-value form f(mid) + f'(J) * (J - mid).
    """

    eval: Callable[[float], float]
    deriv: Callable[[float], float]
    domain: Interval
    lipschitz_bound: float | None = None
    deriv_range: Callable[[Interval], Interval] | None = field(default=None)
    label: str = "handle"

    def __call__(self, x: float) -> float:
        if not (float(self.domain.lo) <= x <= float(self.domain.hi)):
            raise DomainError(f"{x} outside domain {self.domain}")
        return self.eval(x)

    def slope_range(self, J: Interval) -> Interval:
        if self.deriv_range is not None:
            return self.deriv_range(J)
        if self.lipschitz_bound is None:
            raise ValueError("need deriv_range or lipschitz_bound for enclosures")
        L = float(self.lipschitz_bound)
        return Interval(-L, L)

    def eval_interval(self, J: Interval) -> Interval:
        if not self.domain.contains_interval(J):
            raise DomainError(f"{J} not contained in domain {self.domain}")
        Jf = J.to_float()
        mid = Jf.midpoint()
        fmid = Interval(_next_down(self.eval(mid)), _next_up(self.eval(mid)))
        return fmid + self.slope_range(Jf) * (Jf - mid)

    def is_breakpoint(self, x) -> bool:
        return False

    def nearest_breakpoint_distance(self, x):
        return None


MapLike = Union[PiecewiseAffineMap, DifferentiableMapHandle]
