"""Shared oracles for the test suite.

The oracles here are deliberately independent of the library internals:
the float tent iteration is plain numpy arithmetic, and the root scan
finds periodic points of the k-fold tent map by dense sign-change
bisection rather than itinerary algebra.
"""

import numpy as np


def tent_float(x):
    return np.where(np.asarray(x) <= 0.5, 2.0 * np.asarray(x), 2.0 - 2.0 * np.asarray(x))


def tent_iterate_float(x, k):
    y = np.asarray(x, dtype=float)
    for _ in range(k):
        y = tent_float(y)
    return y


def float_root_scan(k, grid=100_000, refine=60):
    """All roots of tent^k(x) - x in [0,1] by sign-change bisection."""
    xs = np.linspace(0.0, 1.0, grid + 1)
    f = tent_iterate_float(xs, k) - xs
    roots = list(xs[f == 0.0])
    idx = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
    for i in idx:
        a, b = xs[i], xs[i + 1]
        fa = tent_iterate_float(a, k) - a
        for _ in range(refine):
            m = 0.5 * (a + b)
            fm = tent_iterate_float(m, k) - m
            if fm == 0.0:
                a = b = m
                break
            if np.sign(fm) == np.sign(fa):
                a, fa = m, fm
            else:
                b = m
        roots.append(0.5 * (a + b))
    return sorted(set(roots))
