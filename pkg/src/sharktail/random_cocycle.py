"""Noise models, cocycle iteration, and random periodic-orbit detection.

The driving noise is a two-sided i.i.d. parameter stream realized by a
counter-based generator (splitmix64 finalizer over seed + index), so
the base shift is literally an index offset and parameters at negative
times are available for pullback without storing sequences.  Tent-family
parameters are drawn from a symmetric dyadic grid strictly inside the
support interval, which keeps every sampled map exactly rational and
every trajectory exactly computable; the certified statements only use
the support bound, so the grid discretization is harmless.

The pullback construction follows the derivative dichotomy: attracting
cycles iterate the k-step maps forward from ever deeper past fibres,
repelling cycles invert the one-step branches along the certified
itinerary (forward in time), contracting at rate 1/(1+2*beta).  Since a
repelling cycle amplifies state error by the multiplier per period,
verification over a forward window of M steps needs a pullback depth of
at least M/k blocks; with exact rational arithmetic that is routine.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .conley import IsolatingNeighborhood
from .cycles import Hyperbolicity
from .errors import (ConditionFailed, DomainEscape, ItineraryBroken,
                     PreconditionFailed, RangeError)
from .maps import asymmetric_tent, logistic_handle, tent_map, truncated_tent
from .numbers import (DifferentiableMapHandle, Interval, MapLike,
                      PiecewiseAffineMap)

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
DEFAULT_GRID_BITS = 24
_LOGISTIC_DOMAIN_TOL = 1e-12


def _splitmix64(state: int) -> int:
    z = state & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _grid_draw(seed: int, index: int, bits: int) -> Fraction:
    """Symmetric grid point in (-1, 1): (2m + 1 - 2^bits)/2^bits."""
    state = (seed + index * _GOLDEN) & _MASK64
    m = _splitmix64(state) >> (64 - bits)
    return Fraction(2 * m + 1 - (1 << bits), 1 << bits)


@dataclass(frozen=True)
class NoiseModel:
    """A seeded family of interval maps indexed by time.

    kind "asymmetric_tent": peak-displaced (optionally truncated) tent
    maps with displacement gamma_n drawn from lam * (-xi, xi).  kind
    "logistic": logistic maps with parameter uniform on [c_lo, c_hi].
    kind "deterministic": the fixed base map at every step.  shift(s)
    advances the stream; negative shifts reach past fibres.
    """

    kind: str
    seed: int = 0
    xi: Fraction = Fraction(0)
    height: Fraction = Fraction(1)
    c_range: tuple[float, float] | None = None
    base: MapLike | None = None
    index_offset: int = 0
    grid_bits: int = DEFAULT_GRID_BITS
    lam: Fraction = Fraction(1)

    def shift(self, steps: int) -> "NoiseModel":
        return replace(self, index_offset=self.index_offset + steps)

    def support_halfwidth(self) -> Fraction:
        """Certified bound on |gamma_n| (closed, slightly above the open support)."""
        return self.xi * self.lam

    def gamma(self, index: int) -> Fraction:
        if self.kind != "asymmetric_tent" or self.xi == 0 or self.lam == 0:
            return Fraction(0)
        u = _grid_draw(self.seed, self.index_offset + index, self.grid_bits)
        return self.xi * self.lam * u

    def parameter(self, index: int) -> float:
        if self.c_range is None:
            raise ValueError("parameter stream only defined for logistic noise")
        lo, hi = self.c_range
        u = _grid_draw(self.seed, self.index_offset + index, 53)
        return lo + (hi - lo) * (float(u) + 1.0) / 2.0

    def sample_map(self, index: int) -> MapLike:
        if self.kind == "deterministic":
            return self.base
        if self.kind == "asymmetric_tent":
            return asymmetric_tent(self.gamma(index), self.height)
        if self.kind == "logistic":
            return logistic_handle(self.parameter(index))
        raise ValueError(f"unknown noise kind {self.kind!r}")

    def base_map(self) -> MapLike:
        if self.kind == "deterministic":
            return self.base
        if self.kind == "asymmetric_tent":
            return tent_map() if self.height == 1 else truncated_tent(self.height)
        lo, hi = self.c_range
        return logistic_handle((lo + hi) / 2.0)

    def describe(self) -> dict:
        out = {"kind": self.kind, "seed": self.seed,
               "index_offset": self.index_offset}
        if self.kind == "asymmetric_tent":
            out.update(xi=str(self.xi), height=str(self.height),
                       lam=str(self.lam), grid_bits=self.grid_bits)
        elif self.kind == "logistic":
            out.update(c_range=list(self.c_range))
        else:
            out.update(base=getattr(self.base, "label", "piecewise-affine"))
        return out


def asymmetric_tent_noise(xi, seed: int = 0, height=1, lam=1,
                          grid_bits: int = DEFAULT_GRID_BITS) -> NoiseModel:
    return NoiseModel(kind="asymmetric_tent", seed=seed, xi=Fraction(xi),
                      height=Fraction(height), grid_bits=grid_bits,
                      lam=Fraction(lam))


def logistic_noise(c_lo: float, c_hi: float, seed: int = 0) -> NoiseModel:
    if not 0 < c_lo <= c_hi <= 4:
        raise ValueError("logistic parameter range must sit inside (0, 4]")
    return NoiseModel(kind="logistic", seed=seed, c_range=(float(c_lo), float(c_hi)))


def deterministic_noise(base: MapLike) -> NoiseModel:
    return NoiseModel(kind="deterministic", base=base)


def sample_map(noise: NoiseModel, index: int) -> MapLike:
    """The map applied at step `index` of the cocycle."""
    return noise.sample_map(index)


@dataclass(frozen=True)
class TrajectoryRecord:
    base_index: int
    state: object
    fibre_label: int | None = None


def cocycle_iterate(noise: NoiseModel, x0, n: int, k: int = 1,
                    exact: bool = True) -> list[TrajectoryRecord]:
    """States x_0 .. x_n of the cocycle, x_{j+1} = sample_map(noise, j)(x_j).

    Exact rational states for the tent families (pass exact=False for
    long qualitative runs where denominator growth is unwelcome);
    floating point with a domain-escape guard for the logistic family.
    fibre_label tags each record with index mod k for fibre bookkeeping.
    """
    if n < 0:
        raise ValueError("step count must be nonnegative")
    exact = exact and noise.kind != "logistic"
    x = Fraction(x0) if exact else float(x0)
    records = [TrajectoryRecord(0, x, 0 if k else None)]
    for j in range(n):
        mp = noise.sample_map(j)
        x = mp(x) if exact or not isinstance(mp, PiecewiseAffineMap) else mp.eval_float(x)
        if not exact and not (-_LOGISTIC_DOMAIN_TOL <= x <= 1.0 + _LOGISTIC_DOMAIN_TOL):
            raise DomainEscape(f"iterate {j + 1} left [0,1]: {x}")
        records.append(TrajectoryRecord(j + 1, x, (j + 1) % k if k else None))
    return records


def cocycle_apply(noise: NoiseModel, x0, n: int):
    """The n-step cocycle map applied to x0 (last state only)."""
    return cocycle_iterate(noise, x0, n)[-1].state


# ---------------------------------------------------------------------------
# Membership in the admissible perturbation class
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class R1Certificate:
    epsilon: object
    transcript: tuple
    noise: dict

    @property
    def passed(self) -> bool:
        return all(line["verdict"] for line in self.transcript)


def _sup_abs_difference(f: PiecewiseAffineMap, g: PiecewiseAffineMap) -> tuple:
    """Exact sup of |f - g| over the common domain, with a witness knot."""
    knots = sorted(set(f.knots) | set(g.knots))
    best, where = Fraction(0), knots[0]
    for x in knots:
        d = abs(f.eval_exact(x) - g.eval_exact(x))
        if d > best:
            best, where = d, x
    return best, where


def check_R1_membership(noise: NoiseModel, base: MapLike,
                        nbhd_components, epsilon) -> R1Certificate:
    """Certify the three admissibility conditions of the noise family.

    1. breakpoints of every sampled map stay outside the neighborhood
       union; 2. uniform C^1 closeness to the base map on the union;
    3. uniform C^0 closeness on the whole interval.  For the tent
    family the three suprema are exact monotone expressions of the
    support halfwidth; for the logistic family they are the exact
    calculus bounds in the parameter spread.  Raises ConditionFailed
    with the violated clause and a witness.
    """
    comps = [nbhd_components] if isinstance(nbhd_components, Interval) else list(nbhd_components)
    transcript = []
    if noise.kind == "deterministic":
        transcript.append({"expression": "deterministic family: sup distances = 0",
                           "lhs": 0, "rhs": epsilon, "verdict": 0 < epsilon})
        return R1Certificate(epsilon, tuple(transcript), noise.describe())

    if noise.kind == "asymmetric_tent":
        xi = noise.support_halfwidth()
        h = noise.height
        # Condition 1: swept breakpoint ranges avoid every component.
        if h == 1:
            swept = [Interval((1 - 2 * xi) / 2, (1 + 2 * xi) / 2)]
        else:
            swept = [Interval(h * (1 - 2 * xi) / 2, h * (1 + 2 * xi) / 2),
                     Interval(1 - h * (1 + 2 * xi) / 2, 1 - h * (1 - 2 * xi) / 2)]
        for comp in comps:
            for rng in swept:
                if comp.intersects(rng):
                    raise ConditionFailed(1, witness=(comp.lo, comp.hi),
                                          detail="breakpoint range sweeps through the neighborhood")
        gap = min(comp.distance_to(rng) for comp in comps for rng in swept)
        transcript.append({"expression": "dist(N, swept breakpoints) > 0",
                           "lhs": gap, "rhs": 0, "verdict": gap > 0})

        # Condition 2: C^1 distance on N, branch by branch.
        denom = 1 - 2 * xi
        if denom <= 0:
            raise ConditionFailed(2, witness=xi, detail="support halfwidth >= 1/2")
        worst = Fraction(0)
        for comp in comps:
            lo, hi = Fraction(comp.lo), Fraction(comp.hi)
            if hi < swept[0].lo:                      # rising branch for all gamma
                bound = 4 * xi * (hi + 1) / denom
            elif lo > swept[-1].hi:                   # falling branch for all gamma
                bound = 4 * xi * ((1 - lo) + 1) / denom
            elif len(swept) == 2 and swept[0].hi < lo and hi < swept[1].lo:
                bound = Fraction(0)                   # plateau for all gamma: identical
            else:
                raise ConditionFailed(1, witness=(comp.lo, comp.hi),
                                      detail="component not on one branch for the whole family")
            worst = max(worst, bound)
        transcript.append({"expression": "sup_N (|phi - f| + |phi' - f'|) <= 4*xi*(x+1)/(1-2*xi)",
                           "lhs": worst, "rhs": epsilon, "verdict": worst < epsilon})
        if not worst < epsilon:
            raise ConditionFailed(2, witness=worst, detail="C1 distance bound reaches epsilon")

        # Condition 3: exact C^0 sup at the support extremes (monotone in |gamma|).
        sup3, witness3 = Fraction(0), None
        for gamma in (-xi, xi):
            if abs(gamma) >= Fraction(1, 2):
                raise ConditionFailed(3, witness=gamma, detail="support reaches 1/2")
            d, x = _sup_abs_difference(asymmetric_tent(gamma, h), base)
            if d > sup3:
                sup3, witness3 = d, x
        transcript.append({"expression": "sup_C |phi - f| (at support extremes)",
                           "lhs": sup3, "rhs": epsilon, "verdict": sup3 < epsilon})
        if not sup3 < epsilon:
            raise ConditionFailed(3, witness=witness3, detail="C0 distance reaches epsilon")
        return R1Certificate(epsilon, tuple(transcript), noise.describe())

    if noise.kind == "logistic":
        c_lo, c_hi = noise.c_range
        c0 = getattr(base, "param", None)
        if c0 is None:
            c0 = (c_lo + c_hi) / 2.0
        spread = max(abs(c_lo - c0), abs(c_hi - c0))
        transcript.append({"expression": "no breakpoints (smooth family)",
                           "lhs": 0, "rhs": 0, "verdict": True})
        # x(1-x) + |1-2x| is maximized at interval endpoints.
        def c1_weight(x): return x * (1 - x) + abs(1 - 2 * x)
        w = max(max(c1_weight(float(c.lo)), c1_weight(float(c.hi))) for c in comps)
        bound2 = spread * w
        transcript.append({"expression": "sup_N (|phi - f| + |phi' - f'|) <= spread*(x(1-x)+|1-2x|)",
                           "lhs": bound2, "rhs": epsilon, "verdict": bound2 < epsilon})
        if not bound2 < epsilon:
            raise ConditionFailed(2, witness=bound2, detail="C1 bound reaches epsilon")
        bound3 = spread / 4.0
        transcript.append({"expression": "sup_C |phi - f| <= spread/4",
                           "lhs": bound3, "rhs": epsilon, "verdict": bound3 < epsilon})
        if not bound3 < epsilon:
            raise ConditionFailed(3, witness=0.5, detail="C0 bound reaches epsilon")
        return R1Certificate(epsilon, tuple(transcript), noise.describe())

    raise ValueError(f"unknown noise kind {noise.kind!r}")


def max_admissible_halfwidth(base_height, nbhd_components, epsilon) -> Fraction:
    """Largest grid-friendly xi certifying R1 membership for the tent family.

    Inverts the three monotone bounds of check_R1_membership and rounds
    the result down onto a dyadic grid so certificates stay tidy.
    """
    eps = Fraction(epsilon)
    h = Fraction(base_height)
    comps = list(nbhd_components)
    # Condition 3 inverse: 2*xi < eps is sufficient (peak displacement bound).
    candidates = [eps / 4]
    # Condition 2 inverse: 4*xi*(x+1)/(1-2xi) < eps with x <= 1.
    candidates.append(eps / (8 + 2 * eps))
    # Condition 1 inverse: swept corner ranges must clear every component.
    corners = [h / 2, 1 - h / 2] if h != 1 else [Fraction(1, 2)]
    for comp in comps:
        for corner, slope in zip(corners, [h, h] if h != 1 else [Fraction(1)]):
            gap = comp.distance_to_point(corner)
            if gap <= 0:
                raise PreconditionFailed("neighborhood avoids plateau corners",
                                         f"component {comp} touches corner {corner}")
            candidates.append(gap / (2 * slope) / 2)
    xi = min(candidates)
    # Round down to a power-of-two denominator for readable certificates.
    scaled = Fraction(int(xi * (1 << 24)), 1 << 24)
    return scaled if scaled > 0 else xi


# ---------------------------------------------------------------------------
# The worked random isolating neighborhood of the perturbed tent fixed point
# ---------------------------------------------------------------------------

def verify_random_isolating_tent(xi, epsilon_nbhd) -> dict:
    """Certify [2/3 - e, 2/3 + e] as a random isolating neighborhood.

    For the peak-displaced tent family with displacement bound xi, both
    boundary points map outside the interval for every admissible
    displacement; the margin inequality |gamma|*(4/3 + 2e) < e makes the
    two boundary comparisons hold at the support extremes.  Requires
    xi <= e/4 and 1/2 + xi <= 2/3 - 2e (the maps are decreasing on the
    neighborhood).  Returns the full inequality transcript.
    """
    xi = Fraction(xi)
    eps = Fraction(epsilon_nbhd)
    two_thirds = Fraction(2, 3)
    if not (Fraction(1, 2) < two_thirds - 2 * eps and two_thirds + 2 * eps < 1):
        raise PreconditionFailed("[2/3 - 2e, 2/3 + 2e] inside (1/2, 1)",
                                 f"epsilon_nbhd = {eps}")
    if not xi <= eps / 4:
        raise PreconditionFailed("xi <= epsilon/4", f"xi = {xi}, epsilon = {eps}")
    if not Fraction(1, 2) + xi <= two_thirds - 2 * eps:
        raise PreconditionFailed("1/2 + xi <= 2/3 - 2*epsilon (maps decreasing on N)",
                                 f"xi = {xi}, epsilon = {eps}")
    margin = xi * (Fraction(4, 3) + 2 * eps)
    lower_image_min = (two_thirds + 2 * eps) / (1 + 2 * xi)
    upper_image_max = (two_thirds - 2 * eps) / (1 - 2 * xi)
    transcript = [
        {"expression": "|gamma|*(4/3 + 2*eps) < eps",
         "lhs": margin, "rhs": eps, "verdict": margin < eps},
        {"expression": "min_gamma T(gamma)(2/3 - eps) > 2/3 + eps",
         "lhs": lower_image_min, "rhs": two_thirds + eps,
         "verdict": lower_image_min > two_thirds + eps},
        {"expression": "max_gamma T(gamma)(2/3 + eps) < 2/3 - eps",
         "lhs": upper_image_max, "rhs": two_thirds - eps,
         "verdict": upper_image_max < two_thirds - eps},
    ]
    if not all(line["verdict"] for line in transcript):
        raise PreconditionFailed("boundary exit inequalities", str(transcript))
    return {
        "neighborhood": [two_thirds - eps, two_thirds + eps],
        "xi": xi,
        "epsilon_nbhd": eps,
        "margin": margin,
        "transcript": transcript,
        "passed": True,
    }


# ---------------------------------------------------------------------------
# Pullback construction of random periodic points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RandomPeriodicEstimate:
    """Pullback estimate of the random periodic point in one fibre."""

    value: object
    error_bound: object
    steps_used: int
    contraction_rate: object
    component: int = 0


def _effective_beta(noise: NoiseModel, nbhd: IsolatingNeighborhood):
    """Dichotomy margin surviving the noise: the certified beta for random
    families, and the sharper (3/2)*beta for deterministic noise (no
    perturbation slack spent), which makes the rate 1/inf|g'| exactly."""
    if noise.kind == "deterministic":
        return nbhd.beta * Fraction(3, 2)
    return nbhd.beta


def pullback_rate(noise: NoiseModel, nbhd: IsolatingNeighborhood):
    beta = _effective_beta(noise, nbhd)
    if nbhd.kind is Hyperbolicity.REPELLING:
        return 1 / (1 + 2 * beta)
    return 1 - 2 * beta


def pullback_periodic_point(noise: NoiseModel, k: int,
                            nbhd: IsolatingNeighborhood,
                            m_steps: int) -> RandomPeriodicEstimate:
    """Estimate the unique random periodic point in the first component.

    Repelling cycles: invert the one-step branches along the certified
    itinerary through m_steps blocks of k forward steps; the inverse of
    each block contracts at rate 1/(1+2*beta).  Attracting cycles:
    iterate the blocks forward from the fibre m_steps*k steps in the
    past.  Raises ItineraryBroken when an intermediate value leaves its
    prescribed component (noise beyond budget).
    """
    if k != nbhd.period:
        raise ValueError(f"neighborhood has period {nbhd.period}, not {k}")
    if m_steps < 1:
        raise ValueError("need at least one pullback block")
    comps = nbhd.components
    rate = pullback_rate(noise, nbhd)
    diam = comps[0].width()
    exact = noise.kind != "logistic"

    if nbhd.kind is Hyperbolicity.REPELLING:
        y = comps[0].midpoint()
        for block in range(m_steps - 1, -1, -1):
            for t in range(k - 1, -1, -1):
                step = block * k + t
                mp = noise.sample_map(step)
                if not isinstance(mp, PiecewiseAffineMap):
                    raise ValueError("branch pullback needs piecewise-affine maps")
                try:
                    branch = mp.branch_containing(comps[t])
                    y = mp.invert_branch(branch, y)
                except RangeError as exc:
                    raise ItineraryBroken(step, t, y) from exc
                if not comps[t].contains(y):
                    raise ItineraryBroken(step, t, y)
        bound = rate ** m_steps * diam
        return RandomPeriodicEstimate(y, bound, m_steps, rate)

    past = noise.shift(-m_steps * k)
    y = comps[0].midpoint() if exact else float(comps[0].midpoint())
    for step in range(m_steps * k):
        comp = comps[step % k]
        if not comp.contains(y):
            raise ItineraryBroken(step - m_steps * k, step % k, y)
        y = past.sample_map(step)(y)
    if not comps[0].contains(y):
        raise ItineraryBroken(0, 0, y)
    bound = rate ** m_steps * diam
    if not exact:
        bound = float(bound)
    return RandomPeriodicEstimate(y, bound, m_steps, rate)


def orbit_set(noise: NoiseModel, k: int, nbhd: IsolatingNeighborhood,
              m_steps: int) -> list[RandomPeriodicEstimate]:
    """The k points of the random periodic orbit, one per component.

    Point j is the pullback estimate in the fibre shifted j steps into
    the past, pushed forward j steps; the forced itinerary places it in
    component j, and pairwise disjointness of the components certifies
    that the orbit has exactly k points.
    """
    L = nbhd.sup_slope
    out = []
    for j in range(k):
        shifted = noise.shift(-j)
        est = pullback_periodic_point(shifted, k, nbhd, m_steps)
        y = est.value
        for t in range(j):
            y = shifted.sample_map(t)(y)
            if not nbhd.components[(t + 1) % k].contains(y):
                raise ItineraryBroken(t, (t + 1) % k, y)
        bound = est.error_bound * (L + 1) ** j
        out.append(RandomPeriodicEstimate(y, bound, m_steps,
                                          est.contraction_rate, component=j))
    return out


# ---------------------------------------------------------------------------
# Verdicts over finite verification windows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FibreStatistics:
    label: int
    count: int
    low: object
    high: object

    @property
    def diameter(self):
        return self.high - self.low


@dataclass(frozen=True)
class DeltaKVerdict:
    passed: bool
    delta: object
    max_diameter: object
    min_separation: object | None
    fibres: tuple[FibreStatistics, ...]
    violation: str | None = None


def detect_delta_k_orbit(noise: NoiseModel, x_estimate, k: int, delta,
                         window: int) -> DeltaKVerdict:
    """Check the two geometric fibre conditions over a finite window.

    Fibre l collects the states at steps l, l+k, l+2k, ... within the
    window; Pass means every fibre has diameter below delta and distinct
    fibres are separated by more than delta (fibre separation is the
    exact gap between fibre hulls, whose endpoints are fibre members).
    """
    if window < k:
        raise ValueError("window must cover at least one block")
    records = cocycle_iterate(noise, x_estimate, window, k=k)
    lows: dict[int, object] = {}
    highs: dict[int, object] = {}
    for rec in records:
        lab = rec.base_index % k
        if lab not in lows or rec.state < lows[lab]:
            lows[lab] = rec.state
        if lab not in highs or rec.state > highs[lab]:
            highs[lab] = rec.state
    counts = {lab: 0 for lab in lows}
    for rec in records:
        counts[rec.base_index % k] += 1
    fibres = tuple(FibreStatistics(lab, counts[lab], lows[lab], highs[lab])
                   for lab in sorted(lows))
    max_diam = max(f.diameter for f in fibres)
    min_sep = None
    violation = None
    for i in range(len(fibres)):
        for j in range(i + 1, len(fibres)):
            a, b = fibres[i], fibres[j]
            gap = max(b.low - a.high, a.low - b.high)
            if gap < 0:
                gap = 0 * gap
            if min_sep is None or gap < min_sep:
                min_sep = gap
    passed = max_diam < delta
    if not passed:
        violation = f"fibre diameter {max_diam} reaches delta"
    if min_sep is not None and not min_sep > delta:
        passed = False
        violation = f"fibre separation {min_sep} does not exceed delta"
    return DeltaKVerdict(passed, delta, max_diam, min_sep, fibres, violation)


@dataclass(frozen=True)
class PeriodVerdict:
    passed: bool
    checked: int
    witness: tuple[int, int] | None = None


def minimal_period_check(noise: NoiseModel, x_estimate, k: int,
                         nbhd: IsolatingNeighborhood, window: int) -> PeriodVerdict:
    """Certify minimal period k along the window via forced itinerary.

    For every sampled base point (states at multiples of k) and every
    l in 1..k-1, the l-step image must lie in component l, disjoint
    from component 0; vacuously Pass for k = 1.
    """
    records = cocycle_iterate(noise, x_estimate, window, k=k)
    comps = nbhd.components
    checked = 0
    for rec in records:
        lab = rec.base_index % k
        if lab == 0:
            continue
        checked += 1
        if not comps[lab].contains(rec.state):
            return PeriodVerdict(False, checked,
                                 witness=(rec.base_index // k, lab))
    return PeriodVerdict(True, checked)
