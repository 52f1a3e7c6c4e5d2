import random
from fractions import Fraction

import pytest

from sharktail.conley import certify_tail
from sharktail.cycles import (enumerate_tent_cycles, enumerate_truncated_cycles,
                              realization_height)
from sharktail.errors import ConditionFailed, ItineraryBroken, PreconditionFailed
from sharktail.maps import asymmetric_tent, tent_map, truncated_tent
from sharktail.numbers import Interval
from sharktail.random_cocycle import (asymmetric_tent_noise, check_R1_membership,
                                      cocycle_apply, cocycle_iterate,
                                      detect_delta_k_orbit, deterministic_noise,
                                      logistic_noise, max_admissible_halfwidth,
                                      minimal_period_check, orbit_set,
                                      pullback_periodic_point, sample_map,
                                      verify_random_isolating_tent)

F = Fraction


def interior_cycle(k, height=None, bound=None):
    if height is None:
        pool = enumerate_tent_cycles(k)
    else:
        pool = [c for c in enumerate_truncated_cycles(height, bound or k)
                if c.minimal_period == k]
    return [c for c in pool if min(c.points) > 0][-1]


class TestSampleMap:
    def test_zero_displacement_is_tent(self):
        assert asymmetric_tent(F(0)) == tent_map()
        noise = asymmetric_tent_noise(F(0), seed=5)
        assert noise.sample_map(3) == tent_map()

    def test_displaced_peak_slopes(self):
        mp = asymmetric_tent(F(1, 10))
        assert mp.breakpoints == (F(3, 5),)
        assert mp.branches[0].slope == F(5, 3)
        assert mp.branches[1].slope == F(-5, 2)

    def test_logistic_derivative(self):
        noise = logistic_noise(3.15, 3.25, seed=1)
        f = sample_map(noise, 0)
        c = f.param if hasattr(f, "param") else None
        for x in (0.2, 0.5, 0.8):
            assert f.deriv(x) == pytest.approx(float(f.lipschitz_bound) * (1 - 2 * x))

    def test_deterministic_function_of_seed_and_index(self):
        a = asymmetric_tent_noise(F(1, 50), seed=9)
        b = asymmetric_tent_noise(F(1, 50), seed=9)
        assert [a.gamma(i) for i in range(-5, 5)] == [b.gamma(i) for i in range(-5, 5)]
        assert a.gamma(0) != asymmetric_tent_noise(F(1, 50), seed=10).gamma(0)

    def test_support_bound(self):
        noise = asymmetric_tent_noise(F(1, 80), seed=3)
        for i in range(-200, 200):
            assert abs(noise.gamma(i)) < F(1, 80)

    def test_shift_advances_stream(self):
        noise = asymmetric_tent_noise(F(1, 50), seed=4)
        assert noise.shift(3).gamma(0) == noise.gamma(3)
        assert noise.shift(-2).gamma(0) == noise.gamma(-2)


class TestCocycle:
    def test_three_cycle_exact(self):
        det = deterministic_noise(tent_map())
        states = [r.state for r in cocycle_iterate(det, F(2, 7), 3)]
        assert states == [F(2, 7), F(4, 7), F(6, 7), F(2, 7)]

    def test_zero_steps_identity(self):
        noise = asymmetric_tent_noise(F(1, 64), seed=2)
        assert cocycle_apply(noise, F(1, 3), 0) == F(1, 3)

    def test_unit_interval_invariant_long_run(self):
        noise = asymmetric_tent_noise(F(1, 80), seed=11)
        records = cocycle_iterate(noise, F(2, 3), 10_000, exact=False)
        assert all(0.0 <= r.state <= 1.0 for r in records)

    def test_cocycle_law_exact(self):
        rng = random.Random(99)
        for _ in range(200):
            seed = rng.randint(0, 2 ** 32)
            s, t = rng.randint(0, 8), rng.randint(0, 8)
            x0 = F(rng.randint(0, 128), 129)
            noise = asymmetric_tent_noise(F(1, 40), seed=seed)
            assert cocycle_apply(noise, x0, s + t) == \
                cocycle_apply(noise.shift(s), cocycle_apply(noise, x0, s), t)

    def test_determinism(self):
        n1 = asymmetric_tent_noise(F(1, 30), seed=77)
        n2 = asymmetric_tent_noise(F(1, 30), seed=77)
        t1 = [r.state for r in cocycle_iterate(n1, F(1, 3), 50)]
        t2 = [r.state for r in cocycle_iterate(n2, F(1, 3), 50)]
        assert t1 == t2

    def test_fibre_labels(self):
        det = deterministic_noise(tent_map())
        records = cocycle_iterate(det, F(2, 7), 7, k=3)
        assert [r.fibre_label for r in records] == [0, 1, 2, 0, 1, 2, 0, 1]


class TestR1Membership:
    def test_zero_noise_member_for_any_epsilon(self):
        comps = [Interval(F(3, 5), F(13, 20))]
        cert = check_R1_membership(deterministic_noise(tent_map()), tent_map(),
                                   comps, F(1, 10 ** 9))
        assert cert.passed

    def test_breakpoint_sweep_through_component(self):
        noise = asymmetric_tent_noise(F(1, 20), seed=0)
        comps = [Interval(F(49, 100), F(51, 100))]  # straddles the swept peak
        with pytest.raises(ConditionFailed) as err:
            check_R1_membership(noise, tent_map(), comps, F(1, 4))
        assert err.value.condition == 1

    def test_component_clearing_sweep_passes(self):
        noise = asymmetric_tent_noise(F(1, 100), seed=0)
        comps = [Interval(F(2, 3) - F(1, 50), F(2, 3) + F(1, 50))]
        cert = check_R1_membership(noise, tent_map(), comps, F(1, 5))
        assert cert.passed

    def test_large_noise_fails_c0(self):
        noise = asymmetric_tent_noise(F(1, 5), seed=0)
        comps = [Interval(F(19, 20), F(39, 40))]  # clear of the sweep
        with pytest.raises(ConditionFailed) as err:
            check_R1_membership(noise, tent_map(), comps, F(1, 10))
        assert err.value.condition == 3
        assert abs(F(err.value.witness) - F(1, 2)) <= F(1, 2)  # near the peak

    def test_logistic_membership(self):
        noise = logistic_noise(3.19, 3.21, seed=0)
        from sharktail.maps import logistic_handle
        base = logistic_handle(3.2)
        cert = check_R1_membership(noise, base, [Interval(0.5, 0.52)], 0.1)
        assert cert.passed

    def test_admissible_halfwidth_certifies(self):
        h = realization_height(2)
        base = truncated_tent(h)
        cycles = {1: interior_cycle(1, h, 2), 2: interior_cycle(2, h, 2)}
        nbhds, budget = certify_tail(base, cycles)
        comps = [c for nb in nbhds.values() for c in nb.components]
        xi = max_admissible_halfwidth(h, comps, budget.epsilon)
        assert xi > 0
        cert = check_R1_membership(asymmetric_tent_noise(xi, seed=0, height=h),
                                   base, comps, budget.epsilon)
        assert cert.passed


class TestRandomIsolatingTent:
    def test_reference_parameters(self):
        cert = verify_random_isolating_tent(F(1, 80), F(1, 20))
        assert cert["passed"]
        assert cert["margin"] == F(43, 2400)
        assert all(line["verdict"] for line in cert["transcript"])

    def test_halfwidth_too_large(self):
        with pytest.raises(PreconditionFailed, match="xi <= epsilon/4"):
            verify_random_isolating_tent(F(1, 10), F(1, 20))

    def test_monotonicity_hypothesis(self):
        # epsilon so large that 1/2 + xi > 2/3 - 2*epsilon
        with pytest.raises(PreconditionFailed):
            verify_random_isolating_tent(F(1, 100), F(2, 25))


class TestPullback:
    def test_deterministic_fixed_point(self):
        T = tent_map()
        fp = enumerate_tent_cycles(1)[1]
        nbhds, _ = certify_tail(T, {1: fp})
        det = deterministic_noise(T)
        est = pullback_periodic_point(det, 1, nbhds[1], 20)
        assert est.contraction_rate == F(1, 2)
        assert abs(est.value - F(2, 3)) <= est.error_bound
        assert est.error_bound == F(1, 2) ** 20 * nbhds[1].components[0].width()

    def test_deterministic_three_cycle(self):
        T = tent_map()
        c = enumerate_tent_cycles(3)[1]
        nbhds, _ = certify_tail(T, {3: c})
        det = deterministic_noise(T)
        est = pullback_periodic_point(det, 3, nbhds[3], 12)
        assert est.contraction_rate == F(1, 8)
        assert abs(est.value - F(2, 7)) <= est.error_bound

    def test_random_estimates_cauchy(self):
        h = realization_height(2)
        base = truncated_tent(h)
        cycles = {2: interior_cycle(2, h, 2)}
        nbhds, budget = certify_tail(base, cycles)
        comps = list(nbhds[2].components)
        xi = max_admissible_halfwidth(h, comps, budget.epsilon)
        noise = asymmetric_tent_noise(xi, seed=31, height=h)
        rate = None
        values = []
        for m in range(1, 9):
            est = pullback_periodic_point(noise, 2, nbhds[2], m)
            rate = est.contraction_rate
            values.append(est.value)
        diffs = [abs(b - a) for a, b in zip(values, values[1:])]
        for d_prev, d_next in zip(diffs, diffs[1:]):
            if d_prev > 0:
                assert d_next <= rate * d_prev

    def test_orbit_set_deterministic(self):
        T = tent_map()
        c = enumerate_tent_cycles(3)[1]
        nbhds, _ = certify_tail(T, {3: c})
        ests = orbit_set(deterministic_noise(T), 3, nbhds[3], 12)
        assert [e.value for e in ests] == [F(2, 7), F(4, 7), F(6, 7)]
        for e, comp in zip(ests, nbhds[3].components):
            assert comp.contains(e.value)

    def test_orbit_set_singleton(self):
        T = tent_map()
        fp = enumerate_tent_cycles(1)[1]
        nbhds, _ = certify_tail(T, {1: fp})
        det = deterministic_noise(T)
        ests = orbit_set(det, 1, nbhds[1], 10)
        assert len(ests) == 1
        assert ests[0].value == pullback_periodic_point(det, 1, nbhds[1], 10).value

    def test_orbit_set_random_two_cycle(self):
        h = realization_height(2)
        base = truncated_tent(h)
        cycles = {2: interior_cycle(2, h, 2)}
        nbhds, budget = certify_tail(base, cycles)
        xi = max_admissible_halfwidth(h, list(nbhds[2].components), budget.epsilon)
        noise = asymmetric_tent_noise(xi, seed=8, height=h)
        ests = orbit_set(noise, 2, nbhds[2], 60)
        assert len(ests) == 2
        for e, comp in zip(ests, nbhds[2].components):
            assert comp.contains(e.value)

    def test_oversized_noise_breaks_itinerary(self):
        h = realization_height(2)
        base = truncated_tent(h)
        cycles = {2: interior_cycle(2, h, 2)}
        nbhds, budget = certify_tail(base, cycles)
        xi = max_admissible_halfwidth(h, list(nbhds[2].components), budget.epsilon)
        broke = 0
        for seed in range(6):
            noise = asymmetric_tent_noise(xi * 200, seed=seed, height=h)
            try:
                est = pullback_periodic_point(noise, 2, nbhds[2], 80)
                if not minimal_period_check(noise, est.value, 2, nbhds[2], 160).passed:
                    broke += 1
            except ItineraryBroken:
                broke += 1
        assert broke > 0


class TestVerdicts:
    def test_delta_k_pass(self):
        det = deterministic_noise(tent_map())
        v = detect_delta_k_orbit(det, F(2, 7), 3, F(1, 10), 300)
        assert v.passed
        assert v.max_diameter == 0
        assert v.min_separation == F(2, 7)

    def test_delta_k_separation_fail(self):
        det = deterministic_noise(tent_map())
        v = detect_delta_k_orbit(det, F(2, 7), 3, F(3, 10), 300)
        assert not v.passed
        assert "separation" in v.violation

    def test_minimal_period_pass(self):
        T = tent_map()
        c = enumerate_tent_cycles(3)[1]
        nbhds, _ = certify_tail(T, {3: c})
        v = minimal_period_check(deterministic_noise(T), F(2, 7), 3, nbhds[3], 300)
        assert v.passed and v.checked == 200

    def test_minimal_period_vacuous_for_fixed_points(self):
        T = tent_map()
        fp = enumerate_tent_cycles(1)[1]
        nbhds, _ = certify_tail(T, {1: fp})
        v = minimal_period_check(deterministic_noise(T), F(2, 3), 1, nbhds[1], 50)
        assert v.passed and v.checked == 0

    def test_forced_itinerary_within_budget(self):
        h = realization_height(3)
        base = truncated_tent(h)
        cycles = {3: interior_cycle(3, h, 3)}
        nbhds, budget = certify_tail(base, cycles)
        xi = max_admissible_halfwidth(h, list(nbhds[3].components), budget.epsilon)
        for seed in range(10):
            noise = asymmetric_tent_noise(xi, seed=seed, height=h)
            est = pullback_periodic_point(noise, 3, nbhds[3], 120)
            assert minimal_period_check(noise, est.value, 3, nbhds[3], 300).passed
            assert detect_delta_k_orbit(noise, est.value, 3, budget.delta, 300).passed
