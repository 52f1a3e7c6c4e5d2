"""Exact periodic-orbit enumeration for the tent family.

Periodic points of the tent map T are found by itinerary words: a word
w over {L, R} of length k selects one affine branch per step (L: 2x,
R: 2-2x), the composition is an affine map with slope +-2**k, and its
unique fixed point is a candidate periodic point.  A candidate is kept
when its orbit actually realizes the word, which is decided exactly by
pulling the branch cells back through the composition with integer
arithmetic.  This yields every periodic point (2**k of them for period
k, minimality not required), with no rounding and no spurious roots.

Truncating the tent at height h keeps exactly the tent cycles living
strictly below h, always keeps the fixed points 0 and min(h, 2/3), and
keeps the orbit of h itself exactly when that orbit stays off the open
plateau (which happens at the critical heights, where it lands on a
plateau corner).  Orbits through the open plateau interior are
superattracting artifacts of the truncation (multiplier 0) and are
reported separately by :func:`plateau_orbit`, not by the enumeration.
The critical height of a period m is the smallest orbit maximum over
the tent m-cycles; heights order the periods exactly opposite to the
Sharkovskii order, which is what makes the truncated family sweep out
the tails.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import sqrt

import numpy as np

from .errors import NoCycle, SearchExhausted
from .maps import tent_map, truncated_tent
from .numbers import DifferentiableMapHandle, Interval, MapLike, PiecewiseAffineMap
from .sharkovskii import shark_less, shark_sort_key

MAX_WORD_LENGTH = 20
MAX_TRUNCATED_PERIOD = 16
DEFAULT_PERIOD_POOL = 20


class Hyperbolicity(enum.Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    NON_HYPERBOLIC = "non_hyperbolic"
    UNSMOOTH = "unsmooth"


@dataclass(frozen=True)
class Cycle:
    """A periodic orbit with exact bookkeeping.

    ``points`` starts at the least orbit point and follows the map, so
    applying the map advances the tuple cyclically.  ``multiplier`` is
    the derivative of the k-fold composition along the orbit (the
    product of branch slopes) and ``branch_signs`` its per-point signs.
    """

    points: tuple
    minimal_period: int
    itinerary: str
    multiplier: object
    branch_signs: tuple[int, ...]

    @property
    def least_point(self):
        return self.points[0]

    def max_point(self):
        return max(self.points)

    def __repr__(self):
        pts = ", ".join(str(p) for p in self.points)
        return f"Cycle(period={self.minimal_period}, points=({pts}))"


def _branch_symbols(n_branches: int) -> str:
    if n_branches == 2:
        return "LR"
    if n_branches == 3:
        return "LPR"
    return "".join(str(i) for i in range(n_branches))


def cycle_from_orbit(pw_map: PiecewiseAffineMap, start: Fraction, period: int) -> Cycle:
    """Build the Cycle record for an exact orbit of a piecewise-affine map."""
    orbit = [Fraction(start)]
    for _ in range(period - 1):
        orbit.append(pw_map.eval_exact(orbit[-1]))
    least = min(orbit)
    i0 = orbit.index(least)
    orbit = orbit[i0:] + orbit[:i0]
    symbols = _branch_symbols(len(pw_map.branches))
    itinerary = []
    signs = []
    multiplier = Fraction(1)
    for p in orbit:
        b = pw_map.branch_index_of(p)
        itinerary.append(symbols[b])
        slope = pw_map.branches[b].slope
        multiplier *= slope
        signs.append(0 if slope == 0 else (1 if slope > 0 else -1))
    return Cycle(tuple(orbit), period, "".join(itinerary), multiplier, tuple(signs))


def _tent_step_exact(x: Fraction) -> Fraction:
    return 2 * x if x <= Fraction(1, 2) else 2 - 2 * x


def _tent_word_solutions(k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fixed points of all 2**k itinerary-word compositions, as integers.

    Walks the words breadth-first, carrying for every word prefix the
    affine composition x_d = sign * 2^d * x0 + b (b stays an integer for
    the tent branches) and the pulled-back admissibility interval for
    x0, scaled by 2**(k+1) so everything is integer arithmetic.  A word
    is realized exactly when the fixed point b / (1 - sign*2^k) of its
    composition lies in the word's admissibility interval.

    Returns (numerators, denominators, valid_mask) over all words; the
    periodic point of word w is numerators[w]/denominators[w].
    """
    S = 1 << (k + 1)
    sign = np.array([1], dtype=np.int64)
    b = np.array([0], dtype=np.int64)
    lo = np.array([0], dtype=np.int64)
    hi = np.array([S], dtype=np.int64)
    for d in range(k):
        cell_mid = 1 << (k - d)        # (1/2) * S / 2^d
        cell_hi = 1 << (k + 1 - d)     # 1 * S / 2^d
        shift = b * cell_hi            # b * S / 2^d
        # left cell [0, 1/2]
        l_lo = np.where(sign > 0, -shift, shift - cell_mid)
        l_hi = np.where(sign > 0, cell_mid - shift, shift)
        # right cell [1/2, 1]
        r_lo = np.where(sign > 0, cell_mid - shift, shift - cell_hi)
        r_hi = np.where(sign > 0, cell_hi - shift, shift - cell_mid)
        lo = np.concatenate([np.maximum(lo, l_lo), np.maximum(lo, r_lo)])
        hi = np.concatenate([np.minimum(hi, l_hi), np.minimum(hi, r_hi)])
        sign = np.concatenate([sign, -sign])
        b = np.concatenate([2 * b, 2 - 2 * b])
    den = 1 - sign * (1 << k)
    bs = b * S
    valid = np.where(den > 0,
                     (lo * den <= bs) & (bs <= hi * den),
                     (hi * den <= bs) & (bs <= lo * den))
    valid &= lo <= hi
    num = np.where(den > 0, b, -b)
    return num, np.abs(den), valid


def _orbit_table(nums: np.ndarray, q: int, k: int) -> np.ndarray:
    """Stack the k-step integer tent orbits of the points nums/q, row j = step j."""
    rows = [nums]
    x = nums
    for _ in range(k - 1):
        x = np.where(2 * x <= q, 2 * x, 2 * (q - x))
        rows.append(x)
    return np.stack(rows)


def _minimal_representatives(nums: np.ndarray, q: int, k: int):
    """Among points nums/q, keep one least representative per minimal-k orbit.

    Yields (numerator, orbit_max_numerator) pairs.
    """
    if nums.size == 0:
        return
    orbit = _orbit_table(np.unique(nums), q, k)
    minimal = np.ones(orbit.shape[1], dtype=bool)
    for j in (d for d in range(1, k) if k % d == 0):
        minimal &= orbit[j] != orbit[0]
    is_least = orbit.min(axis=0) == orbit[0]
    keep = minimal & is_least
    for n, mx in zip(orbit[0][keep], orbit.max(axis=0)[keep]):
        yield int(n), int(mx)


def _tent_orbit_representatives(k: int) -> list[tuple[int, int, int]]:
    """(numerator, denominator, orbit_max_numerator) for each minimal-k orbit."""
    num, den, valid = _tent_word_solutions(k)
    reps = []
    for q in sorted({int(d) for d in den[valid]}):
        scaled = num[valid & (den == q)]
        for n, mx in _minimal_representatives(scaled, q, k):
            reps.append((n, q, mx))
    return reps


@lru_cache(maxsize=None)
def enumerate_tent_cycles(k: int) -> tuple[Cycle, ...]:
    """All tent-map cycles of minimal period exactly k, each reported once."""
    if not 1 <= k <= MAX_WORD_LENGTH:
        raise ValueError(f"period must lie in [1, {MAX_WORD_LENGTH}]")
    tent = tent_map()
    cycles = [cycle_from_orbit(tent, Fraction(n, q), k)
              for n, q, _ in _tent_orbit_representatives(k)]
    cycles.sort(key=lambda c: c.least_point)
    return tuple(cycles)


@lru_cache(maxsize=None)
def critical_height(m: int) -> Fraction:
    """Smallest orbit maximum over the tent m-cycles (0 for m = 1)."""
    if not 1 <= m <= MAX_WORD_LENGTH:
        raise ValueError(f"period must lie in [1, {MAX_WORD_LENGTH}]")
    reps = _tent_orbit_representatives(m)
    if not reps:
        raise NoCycle(f"tent map has no cycle of minimal period {m}")
    return min(Fraction(mx, q) for _, q, mx in reps)


def height_successor(m: int, pool: int = DEFAULT_PERIOD_POOL) -> int | None:
    """The period (among 1..pool) whose critical height is next above m's.

    Heights reverse the Sharkovskii order, so this is the order-latest
    period in the pool that still precedes m.  None when no pool period
    precedes m (m = 3: nothing precedes the order minimum).
    """
    candidates = [l for l in range(1, pool + 1) if shark_less(l, m)]
    if not candidates:
        return None
    return max(candidates, key=shark_sort_key)


def _first_return(pw_map: PiecewiseAffineMap, x: Fraction, bound: int) -> int | None:
    """Least j <= bound with map^j(x) = x, or None."""
    y = Fraction(x)
    for j in range(1, bound + 1):
        y = pw_map.eval_exact(y)
        if y == x:
            return j
    return None


def _orbit_of_height(h: Fraction, bound: int) -> list[Fraction] | None:
    """The truncated-map orbit of h when h is periodic within the bound."""
    tm = truncated_tent(h)
    orbit = [Fraction(h)]
    for _ in range(bound):
        nxt = tm.eval_exact(orbit[-1])
        if nxt == orbit[0]:
            return orbit
        orbit.append(nxt)
    return None


def plateau_orbit(h, bound: int) -> list[Fraction] | None:
    """The superattracting plateau cycle through h, when one exists.

    For many heights the orbit of h falls into the open plateau and
    comes straight back to h, producing a cycle with multiplier 0.  It
    is an artifact of the truncation rather than a tent cycle, so the
    enumeration reports it here and not in enumerate_truncated_cycles.
    In the whole height gap between periods 2 and 4, for example, the
    orbit h -> 2-2h -> 4-4h -> 8h-6 re-enters the plateau identically,
    so every such h carries this period-4 plateau cycle.
    """
    h = Fraction(h)
    orbit = _orbit_of_height(h, bound)
    if orbit is None or len(orbit) == 1:
        return None
    plateau = Interval(h / 2, 1 - h / 2)
    if plateau.interior_contains(orbit[-1]):
        return orbit
    return None


def _height_certified(h: Fraction, bound: int) -> bool:
    """Certify that every <= bound periodic orbit of the height-h map is smooth.

    Requires the two plateau corners h/2 and 1 - h/2 to be non-periodic
    up to the bound, and the orbit of h itself to either be non-periodic
    up to the bound or to re-enter through the open plateau interior (a
    superattracting smooth cycle).  Under these checks no periodic orbit
    passes through a corner, so orbits are either plateau-free with
    multiplier +-2^k or plateau-interior with multiplier 0.
    """
    tm = truncated_tent(h)
    if _first_return(tm, h / 2, bound) is not None:
        return False
    if _first_return(tm, 1 - h / 2, bound) is not None:
        return False
    orbit = _orbit_of_height(h, bound)
    if orbit is None:
        return True
    pre_return = orbit[-1]
    return h / 2 < pre_return < 1 - h / 2


def realization_height(m: int, periodic_test_bound: int = 20,
                       pool: int = DEFAULT_PERIOD_POOL,
                       max_attempts: int = 64) -> Fraction:
    """A rational height strictly inside the gap above the critical height of m.

    The returned value h sits in (critical_height(m), critical_height(m+))
    where m+ is the height-successor in the period pool (upper bound 1
    when none exists).  The plateau corners h/2 and 1 - h/2 are certified
    non-periodic up to the test bound, and the orbit of h is certified to
    be either non-periodic up to the bound or a plateau-interior
    (superattracting) return, so every short periodic orbit of the
    truncated map is smooth.  The search starts at the midpoint of the
    gap and perturbs by geometrically shrinking rational steps.
    """
    if m < 2:
        raise ValueError("realization heights are defined for periods m >= 2")
    if periodic_test_bound < m:
        raise ValueError("periodic test bound must be at least m")
    lo = critical_height(m)
    succ = height_successor(m, pool)
    hi = critical_height(succ) if succ is not None else Fraction(1)
    if not lo < hi:
        raise SearchExhausted(f"empty height gap for m={m}: [{lo}, {hi}]")
    gap = hi - lo
    mid = lo + gap / 2
    candidates = [mid]
    for j in range(1, max_attempts):
        step = gap / (1 << (j // 2 + 2))
        candidates.append(mid + step if j % 2 else mid - step)
    for h in candidates:
        if lo < h < hi and _height_certified(h, periodic_test_bound):
            return h
    raise SearchExhausted(
        f"no certifiable height found in ({lo}, {hi}) after {max_attempts} attempts")


def realization_details(m: int, periodic_test_bound: int = 20,
                        pool: int = DEFAULT_PERIOD_POOL) -> dict:
    """Certificate payload for a realization height: gap, bound, plateau data."""
    h = realization_height(m, periodic_test_bound, pool)
    succ = height_successor(m, pool)
    orb = plateau_orbit(h, periodic_test_bound)
    return {
        "period": m,
        "critical_height": critical_height(m),
        "height_successor": succ,
        "upper_height": critical_height(succ) if succ is not None else Fraction(1),
        "height": h,
        "periodic_test_bound": periodic_test_bound,
        "successor_pool": pool,
        "plateau_cycle": orb,
    }


def enumerate_truncated_cycles(h, K: int) -> list[Cycle]:
    """Smooth cycles of the height-h truncated tent with minimal period <= K.

    These are the tent cycles living strictly below h, the two fixed
    points 0 and min(h, 2/3), and the orbit of h itself when that orbit
    stays off the open plateau interior (at the critical heights it
    lands exactly on a plateau corner).  Orbits re-entering through the
    plateau interior are superattracting truncation artifacts; see
    :func:`plateau_orbit`.  Cycles of period > 1 returned here never
    meet the open plateau.
    """
    h = Fraction(h)
    if not 0 < h <= 1:
        raise ValueError("height must lie in (0, 1]")
    if not 1 <= K <= MAX_TRUNCATED_PERIOD:
        raise ValueError(f"period bound must lie in [1, {MAX_TRUNCATED_PERIOD}]")
    if h == 1:
        out = []
        for k in range(1, K + 1):
            out.extend(enumerate_tent_cycles(k))
        out.sort(key=lambda c: (c.minimal_period, c.least_point))
        return out
    tm = truncated_tent(h)
    out = [cycle_from_orbit(tm, Fraction(0), 1),
           cycle_from_orbit(tm, min(h, Fraction(2, 3)), 1)]
    for k in range(2, K + 1):
        for c in enumerate_tent_cycles(k):
            if c.max_point() < h:
                out.append(cycle_from_orbit(tm, c.least_point, k))
    orb = _orbit_of_height(h, K)
    if orb is not None and len(orb) > 1 and not (h / 2 < orb[-1] < 1 - h / 2):
        out.append(cycle_from_orbit(tm, min(orb), len(orb)))
    out.sort(key=lambda c: (c.minimal_period, c.least_point))
    return out


def minimal_periods(h, K: int) -> set[int]:
    """Set of minimal periods of the truncated tent at height h, up to K."""
    return {c.minimal_period for c in enumerate_truncated_cycles(h, K)}


def classify_hyperbolicity(mp: MapLike, cycle: Cycle) -> Hyperbolicity:
    """Hyperbolicity of a cycle under a map, from the orbit multiplier.

    A cycle through a breakpoint (plateau corner) is not C^1 there and
    is reported as UNSMOOTH; otherwise the multiplier decides between
    attracting (< 1 in modulus), repelling (> 1) and non-hyperbolic.
    """
    if isinstance(mp, PiecewiseAffineMap):
        if any(mp.is_breakpoint(p) for p in cycle.points):
            return Hyperbolicity.UNSMOOTH
        mult = Fraction(1)
        for p in cycle.points:
            mult *= mp.branches[mp.branch_index_of(Fraction(p))].slope
        size = abs(mult)
    else:
        size = 1.0
        for p in cycle.points:
            size *= abs(mp.deriv(float(p)))
    if size < 1:
        return Hyperbolicity.ATTRACTING
    if size > 1:
        return Hyperbolicity.REPELLING
    return Hyperbolicity.NON_HYPERBOLIC


def logistic_cycles(c: float, k: int) -> list[Cycle]:
    """Closed-form logistic cycles for k in {1, 2}.

    Period 1: the nonzero fixed point 1 - 1/c (and 0).  Period 2: the
    pair ((c+1) +- sqrt((c-3)(c+1))) / (2c), which exists for c > 3; its
    multiplier is 4 + 2c - c**2.
    """
    if k == 1:
        out = [Cycle((0.0,), 1, "f", c, (1,))]
        if c > 1:
            p = 1.0 - 1.0 / c
            out.append(Cycle((p,), 1, "f", c * (1.0 - 2.0 * p), (_sign(c * (1 - 2 * p)),)))
        return out
    if k == 2:
        if (c - 3.0) * (c + 1.0) <= 0:
            return []
        root = sqrt((c - 3.0) * (c + 1.0))
        p_lo = ((c + 1.0) - root) / (2.0 * c)
        p_hi = ((c + 1.0) + root) / (2.0 * c)
        mult = 4.0 + 2.0 * c - c * c
        signs = (_sign(c * (1 - 2 * p_lo)), _sign(c * (1 - 2 * p_hi)))
        return [Cycle((p_lo, p_hi), 2, "ff", mult, signs)]
    raise NoCycle("only periods 1 and 2 have closed forms for the logistic family")


def _sign(x) -> int:
    return 0 if x == 0 else (1 if x > 0 else -1)


@dataclass
class HeightTable:
    """Critical and realization heights for a pool of periods."""

    entries: dict[int, Fraction]
    realization: dict[int, Fraction]

    @staticmethod
    def build(periods, periodic_test_bound: int = 20,
              pool: int = DEFAULT_PERIOD_POOL) -> "HeightTable":
        periods = sorted(set(int(p) for p in periods))
        entries = {m: critical_height(m) for m in periods}
        realization = {m: realization_height(m, periodic_test_bound, pool)
                       for m in periods if m >= 2}
        return HeightTable(entries, realization)
