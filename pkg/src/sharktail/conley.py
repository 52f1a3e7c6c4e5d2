"""Certified isolating neighborhoods and closed-form Conley index data.

A hyperbolic k-cycle gets a union of k disjoint closed intervals, one
around each orbit point, certified by interval enclosures to satisfy:

* component forcing: the image of each component meets no component
  other than the next one along the orbit (for attracting cycles the
  image is moreover contained in the interior of the next component);
* a uniform derivative dichotomy for the k-step return map, with margin
  beta: |g'| >= 1 + 3*beta on every component (repelling) or
  |g'| <= 1 - 3*beta (attracting);
* positive separation margin eta quantifying how far the one-step
  images stay from the wrong components (attracting: how deep inside
  the right one).

Note the textbook forcing form f(N_i) inside int(N_{i+1}) cannot hold
cyclically for a repelling cycle: each image is wider than its target
by the slope factor, and the widths would have to grow around the loop
by the multiplier.  The component-forcing form above is what the
minimality, fibre-separation and pullback arguments actually consume,
and it is satisfiable on both sides of the dichotomy.

The index of a certified cycle is the signed cyclic permutation matrix
acting in degree 1 (repelling, signs = the branch derivative signs) or
the plain cyclic permutation in degree 0 (attracting); both are
invertible, hence nontrivial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cycles import Cycle, Hyperbolicity, classify_hyperbolicity
from .errors import (BoundaryCycle, BreakpointTooClose, BudgetError, EmptyTail,
                     NoConvergence, NotHyperbolic)
from .numbers import (DifferentiableMapHandle, Interval, MapLike,
                      PiecewiseAffineMap, merge_intervals)

DEFAULT_SHRINK_STEPS = 40
ATTRACT_WEIGHT_FLOOR = Fraction(1, 8)


@dataclass(frozen=True)
class IsolatingNeighborhood:
    """Certified component intervals around a hyperbolic cycle.

    ``components[i]`` contains the i-th orbit point; ``beta`` is the
    dichotomy margin for the k-step map, ``eta`` the one-step forcing
    margin, ``sup_slope`` the Lipschitz bound for the map over the
    union, and ``enclosure_slack`` the distance from every iterated
    image enclosure to the nearest breakpoint (infinite when the map
    has none); the slack limits how much noise can move intermediate
    iterates before the chain rule loses its footing.
    """

    components: tuple[Interval, ...]
    beta: object
    eta: object
    per_component_radius: tuple
    kind: Hyperbolicity
    cycle: Cycle
    sup_slope: object
    enclosure_slack: object | None

    @property
    def period(self) -> int:
        return len(self.components)

    def union(self) -> list[Interval]:
        return list(self.components)

    def max_diameter(self):
        return max(c.width() for c in self.components)

    def min_gap(self):
        gaps = [self.components[i].distance_to(self.components[j])
                for i in range(self.period) for j in range(i + 1, self.period)]
        return min(gaps) if gaps else None


@dataclass(frozen=True)
class ConleyIndexData:
    """Cohomology degree and the index matrix of a hyperbolic cycle."""

    degree: int
    matrix: tuple[tuple[int, ...], ...]
    cycle_kind: Hyperbolicity

    @property
    def size(self) -> int:
        return len(self.matrix)


@dataclass(frozen=True)
class RobustnessBudget:
    """Perturbation allowances under which every certificate survives."""

    epsilon: object
    chain_rule_constant: object
    delta: object
    per_cycle: dict = field(default_factory=dict)
    transcript: tuple = ()


def _slope_magnitude(mp: MapLike, p) -> object:
    if isinstance(mp, PiecewiseAffineMap):
        return abs(mp.branches[mp.branch_index_of(Fraction(p))].slope)
    return abs(mp.deriv(float(p)))


def _interior_distance(domain: Interval, p) -> object:
    return min(p - domain.lo, domain.hi - p)


def _component_weights(mp: MapLike, points, kind: Hyperbolicity):
    """Relative radii: attracting cycles scale each radius by the slope
    accumulated since the widest component, so one-step images nest."""
    k = len(points)
    if kind is Hyperbolicity.REPELLING or k == 1:
        return [Fraction(1)] * k
    weights = [Fraction(1)]
    for i in range(k - 1):
        s = _slope_magnitude(mp, points[i])
        if not isinstance(s, Fraction):
            s = Fraction(s).limit_denominator(10**6)
        weights.append(weights[-1] * max(s, ATTRACT_WEIGHT_FLOOR))
    top = max(weights)
    return [w / top for w in weights]


def _iterated_enclosures(mp: MapLike, components, start: int) -> list[Interval]:
    """Enclosures of the j-step images of components[start], j = 0..k-1."""
    out = [components[start]]
    for _ in range(len(components) - 1):
        out.append(mp.eval_interval(out[-1]))
    return out


def _breakpoint_distance(mp: MapLike, J: Interval):
    if not isinstance(mp, PiecewiseAffineMap) or not mp.breakpoints:
        return None
    return min(J.distance_to_point(bp) for bp in mp.breakpoints)


def build_neighborhood(mp: MapLike, cycle: Cycle,
                       start_radius=None, max_radius=None,
                       shrink_steps: int = DEFAULT_SHRINK_STEPS) -> IsolatingNeighborhood:
    """Certify component intervals around a hyperbolic cycle.

    Starts from a radius bounded by half the least gap between orbit
    points and the distance to the nearest breakpoint, then halves it
    until forcing, dichotomy and breakpoint-avoidance all certify.
    Raises NotHyperbolic, BreakpointTooClose (a cycle point sits on a
    breakpoint), BoundaryCycle (a point on the domain boundary) or
    NoConvergence (shrink schedule exhausted).
    """
    kind = classify_hyperbolicity(mp, cycle)
    if kind is Hyperbolicity.UNSMOOTH:
        raise BreakpointTooClose("cycle touches a breakpoint or plateau corner")
    if kind is not Hyperbolicity.ATTRACTING and kind is not Hyperbolicity.REPELLING:
        raise NotHyperbolic(f"cycle multiplier has modulus one: {cycle}")
    points = cycle.points
    k = len(points)
    domain = mp.domain
    boundary_dist = min(_interior_distance(domain, p) for p in points)
    if boundary_dist <= 0:
        raise BoundaryCycle(f"cycle point on the domain boundary: {cycle}")

    caps = [boundary_dist / 2]
    if k > 1:
        gaps = [abs(points[i] - points[j]) for i in range(k) for j in range(i + 1, k)]
        caps.append(min(gaps) / 4)
    bp_dists = [mp.nearest_breakpoint_distance(p) for p in points]
    bp_dists = [d for d in bp_dists if d is not None]
    if bp_dists:
        if min(bp_dists) == 0:
            raise BreakpointTooClose("cycle point equals a breakpoint")
        caps.append(min(bp_dists) / 2)
    radius = min(caps)
    if start_radius is not None:
        radius = min(radius, start_radius)
    if max_radius is not None:
        radius = min(radius, max_radius)

    weights = _component_weights(mp, points, kind)
    last_failure = "not attempted"
    for _ in range(shrink_steps):
        result = _certify_radius(mp, cycle, kind, radius, weights)
        if isinstance(result, IsolatingNeighborhood):
            return result
        last_failure = result
        radius = radius / 2
    raise NoConvergence(f"shrink schedule exhausted; last failure: {last_failure}")


def _certify_radius(mp, cycle, kind, radius, weights):
    """One certification attempt; returns a neighborhood or a failure reason."""
    points = cycle.points
    k = len(points)
    comps = [Interval(p - radius * w, p + radius * w)
             for p, w in zip(points, weights)]
    for i in range(k):
        for j in range(i + 1, k):
            if comps[i].intersects(comps[j]):
                return f"components {i} and {j} overlap"
    images = [mp.eval_interval(c) for c in comps]

    # Forcing: image of component i avoids every component but the next;
    # attracting cycles must land strictly inside the next component.
    margins = []
    for i in range(k):
        nxt = (i + 1) % k
        for j in range(k):
            if j == nxt:
                continue
            d = images[i].distance_to(comps[j])
            if d <= 0:
                return f"image of component {i} touches component {j}"
            margins.append(d)
        if kind is Hyperbolicity.ATTRACTING:
            if not comps[nxt].interior_contains_interval(images[i]):
                return f"image of component {i} not inside component {nxt}"
            margins.append(min(images[i].lo - comps[nxt].lo,
                               comps[nxt].hi - images[i].hi))
        else:
            # An expanding step must cover the target so boundary points
            # certifiably exit; a contracting step of a repelling cycle
            # must instead land strictly inside.  Straddling admits no
            # margin and fails the attempt.
            if (images[i].lo < comps[nxt].lo and comps[nxt].hi < images[i].hi):
                margins.append(min(comps[nxt].lo - images[i].lo,
                                   images[i].hi - comps[nxt].hi))
            elif comps[nxt].interior_contains_interval(images[i]):
                margins.append(min(images[i].lo - comps[nxt].lo,
                                   comps[nxt].hi - images[i].hi))
            else:
                return f"image of component {i} straddles component {nxt}"
    eta = min(margins)
    if eta <= 0:
        return "no positive forcing margin"

    # Derivative dichotomy for the k-step map via iterated enclosures.
    sup_slope = None
    slack = None
    lo_product_min, hi_product_max = None, None
    for i in range(k):
        enclosures = _iterated_enclosures(mp, comps, i)
        lo_prod, hi_prod = Fraction(1), Fraction(1)
        for J in enclosures:
            d = _breakpoint_distance(mp, J)
            if d is not None:
                if d <= 0:
                    return f"iterated enclosure from component {i} hits a breakpoint"
                slack = d if slack is None else min(slack, d)
            sr = mp.slope_range(J).abs_bounds()
            lo_prod *= sr.lo
            hi_prod *= sr.hi
            sup_slope = sr.hi if sup_slope is None else max(sup_slope, sr.hi)
        lo_product_min = lo_prod if lo_product_min is None else min(lo_product_min, lo_prod)
        hi_product_max = hi_prod if hi_product_max is None else max(hi_product_max, hi_prod)

    if kind is Hyperbolicity.REPELLING:
        if lo_product_min <= 1:
            return f"no expansion: inf |g'| = {lo_product_min}"
        beta = (lo_product_min - 1) / 3
    else:
        if hi_product_max >= 1:
            return f"no contraction: sup |g'| = {hi_product_max}"
        beta = (1 - hi_product_max) / 3

    return IsolatingNeighborhood(
        components=tuple(comps),
        beta=beta,
        eta=eta,
        per_component_radius=tuple(radius * w for w in weights),
        kind=kind,
        cycle=cycle,
        sup_slope=sup_slope,
        enclosure_slack=slack,
    )


def conley_index(mp: MapLike, cycle: Cycle,
                 nbhd: IsolatingNeighborhood) -> ConleyIndexData:
    """Closed-form index of a certified hyperbolic cycle.

    Attracting: degree 0 and the cyclic permutation matrix.  Repelling:
    degree 1 and the signed cyclic permutation whose sign at row i is
    the derivative sign at the i-th orbit point.
    """
    kind = nbhd.kind
    k = nbhd.period
    matrix = [[0] * k for _ in range(k)]
    if kind is Hyperbolicity.ATTRACTING:
        for i in range(k):
            matrix[i][(i + 1) % k] = 1
        return ConleyIndexData(0, tuple(tuple(r) for r in matrix), kind)
    signs = []
    for p in cycle.points:
        if isinstance(mp, PiecewiseAffineMap):
            s = mp.branches[mp.branch_index_of(Fraction(p))].slope
        else:
            s = mp.deriv(float(p))
        signs.append(1 if s > 0 else -1)
    for i in range(k):
        matrix[i][(i + 1) % k] = signs[i]
    return ConleyIndexData(1, tuple(tuple(r) for r in matrix), kind)


def mat_mul(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(n)) for j in range(n))
                 for i in range(n))


def mat_pow(A, e: int):
    n = len(A)
    out = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    base = A
    while e:
        if e & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        e >>= 1
    return out


def _determinant(matrix) -> Fraction:
    n = len(matrix)
    rows = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            factor = rows[r][col] * inv
            if factor == 0:
                continue
            for c in range(col, n):
                rows[r][c] -= factor * rows[col][c]
    return det


def index_nontrivial(idx: ConleyIndexData) -> bool:
    """True iff no power of the index matrix vanishes (invertibility)."""
    return _determinant(idx.matrix) != 0


class BlockStatus:
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class BlockVerdict:
    status: str
    witness: object = None

    def __bool__(self):
        return self.status == BlockStatus.TRUE


def _intersect_unions(A: list[Interval], B: list[Interval]) -> list[Interval]:
    out = []
    for a in A:
        for b in B:
            hit = a.intersection(b)
            if hit is not None:
                out.append(hit)
    return merge_intervals(out)


def verify_isolating_block(mp: MapLike, N) -> BlockVerdict:
    """Decide f(N) ∩ N ∩ f^{-1}(N) ⊆ int(N), three-valued.

    Exact for piecewise-affine maps (images and preimages are computed
    as rational interval unions).  For differentiable handles only the
    vacuous case (image enclosure disjoint from N) is certified; other
    configurations return UNKNOWN.
    """
    comps = [N] if isinstance(N, Interval) else list(N)
    comps = merge_intervals(comps)
    if isinstance(mp, DifferentiableMapHandle):
        images = merge_intervals([mp.eval_interval(c) for c in comps])
        if not _intersect_unions(images, comps):
            return BlockVerdict(BlockStatus.TRUE)
        return BlockVerdict(BlockStatus.UNKNOWN)
    exact_comps = [Interval(Fraction(c.lo), Fraction(c.hi)) for c in comps]
    images = merge_intervals([mp.eval_interval(c) for c in exact_comps])
    preimages = merge_intervals([piece for c in exact_comps for piece in mp.preimage(c)])
    triple = _intersect_unions(_intersect_unions(images, exact_comps), preimages)
    for piece in triple:
        for endpoint in (piece.lo, piece.hi):
            if not any(c.interior_contains(endpoint) for c in exact_comps):
                return BlockVerdict(BlockStatus.FALSE, witness=endpoint)
    return BlockVerdict(BlockStatus.TRUE)


def chain_rule_constant(L, k: int, noise_cap=Fraction(1)):
    """Explicit bound turning C^1 noise on N into k-step derivative drift."""
    return sum((L + noise_cap) ** j * L ** (k - 1 - j) for j in range(k))


def drift_amplification(L, k: int, noise_cap=Fraction(1)):
    """Bound on accumulated state drift of intermediate iterates per unit noise."""
    return sum((L + noise_cap) ** t for t in range(k - 1))


def certify_tail(mp: MapLike, tail_cycles: dict[int, Cycle],
                 noise_cap=Fraction(1), attempts: int = 20
                 ) -> tuple[dict[int, IsolatingNeighborhood], RobustnessBudget]:
    """Build harmonized neighborhoods for one cycle per period, plus the budget.

    Radii are capped by an eighth of the least distance between orbit
    points of different cycles, which makes the delta sandwich (max
    diameter below min component gap) hold across the whole union;
    the cap halves on the rare budget failure.
    """
    if not tail_cycles:
        raise EmptyTail("no cycles supplied")
    points = [p for c in tail_cycles.values() for p in c.points]
    gaps = [abs(Fraction(points[i]) - Fraction(points[j]))
            for i in range(len(points)) for j in range(i + 1, len(points))]
    gaps = [g for g in gaps if g > 0]
    cap = min(gaps) / 8 if gaps else None
    last = None
    for _ in range(attempts):
        nbhds = {k: build_neighborhood(mp, c, max_radius=cap)
                 for k, c in tail_cycles.items()}
        try:
            budget = epsilon_budget(mp, tail_cycles, nbhds, noise_cap)
            return nbhds, budget
        except BudgetError as exc:
            last = exc
            cap = (cap if cap is not None else Fraction(1, 8)) / 2
    raise BudgetError(f"could not harmonize radii: {last}")


def epsilon_budget(mp: MapLike, tail_cycles: dict[int, Cycle],
                   nbhds: dict[int, IsolatingNeighborhood],
                   noise_cap=Fraction(1)) -> RobustnessBudget:
    """Aggregate perturbation budget over one certified cycle per period.

    epsilon = min over cycles of min(eta, beta/C, slack/A) where C is
    the chain-rule constant, A the drift amplification and slack the
    breakpoint clearance of the iterated enclosures.  delta is chosen
    between the largest component diameter and the smallest distance
    between distinct components (across all cycles).
    """
    if not tail_cycles:
        raise EmptyTail("no cycles supplied")
    if set(tail_cycles) != set(nbhds):
        raise ValueError("tail_cycles and nbhds must cover the same periods")
    transcript = []
    per_cycle = {}
    epsilon = None
    c_max = None
    for k in sorted(tail_cycles):
        cycle, nbhd = tail_cycles[k], nbhds[k]
        for p in cycle.points:
            if _interior_distance(mp.domain, p) <= 0:
                raise BoundaryCycle(f"period-{k} cycle touches the domain boundary")
        L = nbhd.sup_slope
        C = chain_rule_constant(L, k, noise_cap)
        A = drift_amplification(L, k, noise_cap)
        bounds = [nbhd.eta, nbhd.beta / C]
        entries = [
            (f"epsilon <= eta [k={k}]", nbhd.eta),
            (f"C*epsilon <= beta [k={k}]", nbhd.beta / C),
        ]
        if nbhd.enclosure_slack is not None and A > 0:
            bounds.append(nbhd.enclosure_slack / A)
            entries.append((f"A*epsilon <= slack [k={k}]", nbhd.enclosure_slack / A))
        eps_k = min(bounds)
        per_cycle[k] = {"beta": nbhd.beta, "eta": nbhd.eta, "C": C, "A": A,
                        "slack": nbhd.enclosure_slack, "epsilon": eps_k}
        for expr, bound in entries:
            transcript.append({"expression": expr, "lhs": eps_k, "rhs": bound,
                               "verdict": eps_k <= bound})
        epsilon = eps_k if epsilon is None else min(epsilon, eps_k)
        c_max = C if c_max is None else max(c_max, C)

    all_comps = [c for nb in nbhds.values() for c in nb.components]
    diam_max = max(c.width() for c in all_comps)
    dists = [all_comps[i].distance_to(all_comps[j])
             for i in range(len(all_comps)) for j in range(i + 1, len(all_comps))]
    if dists:
        gap_min = min(dists)
        if not diam_max < gap_min:
            raise BudgetError(
                f"no delta fits: max diameter {diam_max} >= min gap {gap_min}")
        if gap_min <= 0:
            raise BudgetError("components of different cycles overlap")
        delta = (diam_max + gap_min) / 2
        transcript.append({"expression": "max diam(N_i) < delta",
                           "lhs": diam_max, "rhs": delta, "verdict": diam_max < delta})
        transcript.append({"expression": "delta < min dist(N_i, N_j)",
                           "lhs": delta, "rhs": gap_min, "verdict": delta < gap_min})
    else:
        delta = 2 * diam_max
        transcript.append({"expression": "max diam(N_i) < delta",
                           "lhs": diam_max, "rhs": delta, "verdict": diam_max < delta})
    return RobustnessBudget(epsilon=epsilon, chain_rule_constant=c_max, delta=delta,
                            per_cycle=per_cycle, transcript=tuple(transcript))
