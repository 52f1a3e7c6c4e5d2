"""Constructors for the concrete map families on [0, 1].

The tent family is kept exact: every slope, intercept and breakpoint is
a rational, so cycle enumeration and neighborhood certificates can be
carried out without rounding.  The logistic family is handled through a
:class:`~sharktail.numbers.DifferentiableMapHandle` with an exact affine
derivative enclosure c*(1 - 2J).
"""

from __future__ import annotations

from fractions import Fraction

from .numbers import (AffineBranch, DifferentiableMapHandle, Interval,
                      PiecewiseAffineMap)

UNIT = Interval(Fraction(0), Fraction(1))


def tent_map() -> PiecewiseAffineMap:
    """The standard tent map: 2x on [0,1/2], 2-2x on [1/2,1]."""
    return PiecewiseAffineMap(
        UNIT,
        (Fraction(1, 2),),
        (AffineBranch(Fraction(2), Fraction(0)),
         AffineBranch(Fraction(-2), Fraction(2))),
    )


def truncated_tent(h) -> PiecewiseAffineMap:
    """Tent map capped at height h: min(2x, h, 2-2x).

    For h in (0,1) the graph rises with slope 2 up to h/2, stays flat at
    h across the plateau [h/2, 1-h/2], and falls with slope -2.  h = 1
    gives back the full tent map.
    """
    h = Fraction(h)
    if not 0 < h <= 1:
        raise ValueError("height must lie in (0, 1]")
    if h == 1:
        return tent_map()
    return PiecewiseAffineMap(
        UNIT,
        (h / 2, 1 - h / 2),
        (AffineBranch(Fraction(2), Fraction(0)),
         AffineBranch(Fraction(0), h),
         AffineBranch(Fraction(-2), Fraction(2))),
    )


def asymmetric_tent(gamma, height=1) -> PiecewiseAffineMap:
    """Tent map with peak displaced to 1/2 + gamma, optionally capped.

    The rising branch is 2x/(1+2g) and the falling branch 2(1-x)/(1-2g),
    meeting at value 1 over x = 1/2 + g; gamma = 0 recovers the standard
    tent map.  With ``height`` = h < 1 the graph is capped at h, giving
    the perturbed truncated family whose plateau corners sit at
    h(1+2g)/2 and 1 - h(1-2g)/2.
    """
    g = Fraction(gamma)
    if not abs(g) < Fraction(1, 2):
        raise ValueError("peak displacement must satisfy |gamma| < 1/2")
    h = Fraction(height)
    if not 0 < h <= 1:
        raise ValueError("height must lie in (0, 1]")
    up = AffineBranch(Fraction(2, 1) / (1 + 2 * g), Fraction(0))
    down = AffineBranch(Fraction(-2, 1) / (1 - 2 * g), Fraction(2, 1) / (1 - 2 * g))
    if h == 1:
        return PiecewiseAffineMap(UNIT, (Fraction(1, 2) + g,), (up, down))
    left_corner = h * (1 + 2 * g) / 2
    right_corner = 1 - h * (1 - 2 * g) / 2
    return PiecewiseAffineMap(
        UNIT,
        (left_corner, right_corner),
        (up, AffineBranch(Fraction(0), h), down),
    )


def logistic_handle(c: float) -> DifferentiableMapHandle:
    """The logistic map x -> c x (1-x) on [0,1] with exact derivative enclosure."""
    if not 0 < c <= 4:
        raise ValueError("logistic parameter must lie in (0, 4]")
    c = float(c)

    def f(x: float) -> float:
        return c * x * (1.0 - x)

    def df(x: float) -> float:
        return c * (1.0 - 2.0 * x)

    def df_range(J: Interval) -> Interval:
        # f' is affine and decreasing, so the enclosure is the endpoint hull.
        Jf = J.to_float()
        return Interval.hull([c * (1.0 - 2.0 * Jf.hi), c * (1.0 - 2.0 * Jf.lo)])

    return DifferentiableMapHandle(
        eval=f, deriv=df,
        domain=Interval(0.0, 1.0),
        lipschitz_bound=c,
        deriv_range=df_range,
        label=f"logistic(c={c})",
    )
