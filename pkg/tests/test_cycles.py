from fractions import Fraction

import pytest
from conftest import float_root_scan

from sharktail.cycles import (Hyperbolicity, HeightTable, classify_hyperbolicity,
                              critical_height, cycle_from_orbit,
                              enumerate_tent_cycles, enumerate_truncated_cycles,
                              height_successor, logistic_cycles,
                              minimal_periods, plateau_orbit,
                              realization_details, realization_height)
from sharktail.errors import SearchExhausted
from sharktail.maps import logistic_handle, tent_map, truncated_tent
from sharktail.sharkovskii import shark_less, tail

F = Fraction


class TestTentEnumeration:
    def test_period_one(self):
        cycles = enumerate_tent_cycles(1)
        assert [c.points for c in cycles] == [(F(0),), (F(2, 3),)]

    def test_period_two(self):
        (c,) = enumerate_tent_cycles(2)
        assert c.points == (F(2, 5), F(4, 5))
        assert c.itinerary == "LR"
        assert c.multiplier == -4

    def test_period_three(self):
        cycles = enumerate_tent_cycles(3)
        assert {c.points for c in cycles} == {
            (F(2, 7), F(4, 7), F(6, 7)), (F(2, 9), F(4, 9), F(8, 9))}
        steffan = next(c for c in cycles if c.points[0] == F(2, 7))
        assert steffan.multiplier == 8
        assert steffan.branch_signs == (1, -1, -1)
        assert steffan.itinerary == "LRR"

    def test_orbit_advances_cyclically(self):
        T = tent_map()
        for k in range(1, 7):
            for c in enumerate_tent_cycles(k):
                for i, p in enumerate(c.points):
                    assert T.eval_exact(p) == c.points[(i + 1) % k]

    def test_point_count_identity(self):
        # tent^k has exactly 2^k fixed points, counted over divisor periods
        for k in range(1, 11):
            total = sum(d * len(enumerate_tent_cycles(d))
                        for d in range(1, k + 1) if k % d == 0)
            assert total == 2 ** k

    def test_multiplier_magnitude(self):
        for k in range(1, 9):
            for c in enumerate_tent_cycles(k):
                assert abs(c.multiplier) == 2 ** k

    @pytest.mark.parametrize("k", range(1, 7))
    def test_against_float_root_scan(self, k):
        roots = float_root_scan(k, grid=50_000)
        exact = sorted(float(p) for d in range(1, k + 1) if k % d == 0
                       for c in enumerate_tent_cycles(d) for p in c.points)
        assert len(roots) == len(exact) == 2 ** k
        for r, e in zip(roots, exact):
            assert abs(r - e) < 1e-9


class TestCriticalHeights:
    def test_pinned_values(self):
        assert critical_height(1) == 0
        assert critical_height(2) == F(4, 5)
        assert critical_height(3) == F(6, 7)
        assert critical_height(4) == F(14, 17)

    def test_height_reverses_order(self):
        # later periods in the Sharkovskii order appear earlier in the
        # truncation sweep, so heights sort opposite to the order
        for l in range(1, 7):
            for m in range(1, 7):
                if l == m:
                    continue
                assert (critical_height(l) < critical_height(m)) == shark_less(m, l)

    def test_height_successor(self):
        assert height_successor(2) == 4
        assert height_successor(4) == 8
        assert height_successor(6) == 19
        assert height_successor(3) is None

    def test_height_table(self):
        table = HeightTable.build([1, 2, 3, 4])
        assert table.entries[2] == F(4, 5)
        assert set(table.realization) == {2, 3, 4}
        for m, h in table.realization.items():
            assert table.entries[m] < h


class TestRealizationHeight:
    def test_m2_in_gap(self):
        h = realization_height(2)
        assert F(4, 5) < h < F(14, 17)

    def test_m3_upper_bound_is_one(self):
        h = realization_height(3)
        assert F(6, 7) < h < 1

    def test_m1_rejected(self):
        with pytest.raises(ValueError):
            realization_height(1)

    def test_corners_not_periodic(self):
        # independent re-check of the certificate by direct iteration
        h = realization_height(2)
        tm = truncated_tent(h)
        for probe in (h / 2, 1 - h / 2):
            y = probe
            for _ in range(20):
                y = tm.eval_exact(y)
                assert y != probe

    def test_plateau_return_is_interior(self):
        # every height in the gap between periods 2 and 4 returns to
        # itself through the open plateau after three steps
        for num in (645, 650, 655):
            h = F(num, 800)
            assert F(4, 5) < h < F(14, 17)
            orb = plateau_orbit(h, 10)
            assert orb is not None and len(orb) == 4
            assert h / 2 < orb[-1] < 1 - h / 2

    def test_details_payload(self):
        d = realization_details(2)
        assert d["critical_height"] == F(4, 5)
        assert d["height_successor"] == 4
        assert d["upper_height"] == F(14, 17)
        assert d["plateau_cycle"] is not None


class TestTruncatedEnumeration:
    def test_low_height_fixed_points(self):
        # besides 0, the plateau crosses the diagonal at x = h for h < 2/3
        cycles = enumerate_truncated_cycles(F(1, 2), 4)
        assert [c.points for c in cycles] == [(F(0),), (F(1, 2),)]

    def test_critical_height_orbit_included(self):
        cycles = enumerate_truncated_cycles(F(6, 7), 3)
        pts = {c.points for c in cycles}
        assert (F(2, 7), F(4, 7), F(6, 7)) in pts
        assert (F(2, 5), F(4, 5)) in pts

    def test_gap_height_periods(self):
        h = realization_height(2)
        assert minimal_periods(h, 8) == {1, 2}

    def test_full_tent_periods(self):
        assert minimal_periods(F(1), 3) == {1, 2, 3}

    def test_tail_match_m6(self):
        h = realization_height(6)
        assert minimal_periods(h, 12) == tail(6, 12)

    def test_open_plateau_avoided(self):
        for h in (realization_height(2), F(6, 7)):
            lo, hi = h / 2, 1 - h / 2
            for c in enumerate_truncated_cycles(h, 6):
                if c.minimal_period > 1:
                    assert all(not lo < p < hi for p in c.points)

    def test_cycles_are_genuine(self):
        h = realization_height(4)
        tm = truncated_tent(h)
        for c in enumerate_truncated_cycles(h, 8):
            k = c.minimal_period
            for i, p in enumerate(c.points):
                assert tm.eval_exact(p) == c.points[(i + 1) % k]
            assert len(set(c.points)) == k


class TestHyperbolicity:
    def test_tent_cycles_repelling(self):
        T = tent_map()
        for k in range(1, 6):
            for c in enumerate_tent_cycles(k):
                assert classify_hyperbolicity(T, c) is Hyperbolicity.REPELLING

    def test_logistic_two_cycle(self):
        f = logistic_handle(3.2)
        (c,) = logistic_cycles(3.2, 2)
        # closed-form multiplier 4 + 2c - c^2, and the points satisfy f(f(p)) = p
        assert c.multiplier == pytest.approx(4 + 2 * 3.2 - 3.2 ** 2)
        assert c.multiplier == pytest.approx(0.16)
        for p in c.points:
            assert f(f(p)) == pytest.approx(p, abs=1e-12)
        assert classify_hyperbolicity(f, c) is Hyperbolicity.ATTRACTING

    def test_logistic_fixed_point_repelling(self):
        f = logistic_handle(3.2)
        interior = [c for c in logistic_cycles(3.2, 1) if c.points[0] > 0][0]
        assert classify_hyperbolicity(f, interior) is Hyperbolicity.REPELLING

    def test_plateau_corner_unsmooth(self):
        tm = truncated_tent(F(4, 5))
        corner_cycle = cycle_from_orbit(tm, F(2, 5), 2)
        assert classify_hyperbolicity(tm, corner_cycle) is Hyperbolicity.UNSMOOTH

    def test_plateau_fixed_point_attracting(self):
        tm = truncated_tent(F(1, 2))
        fp = cycle_from_orbit(tm, F(1, 2), 1)
        assert fp.multiplier == 0
        assert classify_hyperbolicity(tm, fp) is Hyperbolicity.ATTRACTING
