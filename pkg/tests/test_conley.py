from fractions import Fraction

import pytest

from sharktail.conley import (BlockStatus, ConleyIndexData, build_neighborhood,
                              certify_tail, chain_rule_constant, conley_index,
                              epsilon_budget, index_nontrivial, mat_mul,
                              mat_pow, verify_isolating_block)
from sharktail.cycles import (Cycle, Hyperbolicity, cycle_from_orbit,
                              enumerate_tent_cycles, logistic_cycles)
from sharktail.errors import (BoundaryCycle, BreakpointTooClose, EmptyTail,
                              NotHyperbolic)
from sharktail.maps import logistic_handle, tent_map, truncated_tent
from sharktail.numbers import AffineBranch, Interval, PiecewiseAffineMap

F = Fraction


def identity_matrix(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


class TestBuildNeighborhood:
    def test_tent_three_cycle(self):
        T = tent_map()
        c = enumerate_tent_cycles(3)[1]
        nb = build_neighborhood(T, c, start_radius=F(1, 50))
        assert nb.kind is Hyperbolicity.REPELLING
        assert nb.beta == F(7, 3)      # inf |g'| = 8 exactly on breakpoint-free radii
        assert nb.beta >= F(1, 2)
        assert nb.eta > 0
        for comp, p in zip(nb.components, c.points):
            assert comp.contains(p)

    def test_forcing_margins(self):
        # one-step images avoid every component except the next one
        T = tent_map()
        c = enumerate_tent_cycles(3)[1]
        nb = build_neighborhood(T, c)
        k = nb.period
        for i in range(k):
            img = T.eval_interval(nb.components[i])
            for j in range(k):
                if j != (i + 1) % k:
                    assert img.distance_to(nb.components[j]) >= nb.eta

    def test_attracting_containment(self):
        f = logistic_handle(3.2)
        (c,) = logistic_cycles(3.2, 2)
        nb = build_neighborhood(f, c)
        assert nb.kind is Hyperbolicity.ATTRACTING
        assert nb.beta > 0
        for i in range(2):
            img = f.eval_interval(nb.components[i])
            assert nb.components[(i + 1) % 2].interior_contains_interval(img)

    def test_attracting_dichotomy_against_sampling(self):
        # dense sampling of |(f^2)'| must respect the certified bound
        f = logistic_handle(3.2)
        (c,) = logistic_cycles(3.2, 2)
        nb = build_neighborhood(f, c)
        bound = 1 - 3 * nb.beta
        for comp in nb.components:
            lo, hi = float(comp.lo), float(comp.hi)
            for t in range(2001):
                x = lo + (hi - lo) * t / 2000
                g_prime = f.deriv(x) * f.deriv(f.eval(x))
                assert abs(g_prime) <= bound + 1e-12

    def test_multiplier_one_rejected(self):
        # identity on the left half: the fixed point 1/4 has multiplier 1
        mp = PiecewiseAffineMap(Interval(F(0), F(1)), (F(1, 2),),
                                (AffineBranch(F(1), F(0)),
                                 AffineBranch(F(-1), F(1))))
        flat = Cycle((F(1, 4),), 1, "L", F(1), (1,))
        with pytest.raises(NotHyperbolic):
            build_neighborhood(mp, flat)

    def test_corner_cycle_rejected(self):
        tm = truncated_tent(F(4, 5))
        corner = cycle_from_orbit(tm, F(2, 5), 2)
        with pytest.raises(BreakpointTooClose):
            build_neighborhood(tm, corner)

    def test_boundary_fixed_point_rejected(self):
        T = tent_map()
        zero = enumerate_tent_cycles(1)[0]
        with pytest.raises(BoundaryCycle):
            build_neighborhood(T, zero)


class TestConleyIndex:
    def test_tent_three_cycle_matrix(self):
        T = tent_map()
        c = enumerate_tent_cycles(3)[1]
        nb = build_neighborhood(T, c)
        idx = conley_index(T, c, nb)
        assert idx.degree == 1
        assert idx.matrix == ((0, 1, 0), (0, 0, -1), (-1, 0, 0))
        assert index_nontrivial(idx)

    def test_logistic_two_cycle_matrix(self):
        f = logistic_handle(3.2)
        (c,) = logistic_cycles(3.2, 2)
        nb = build_neighborhood(f, c)
        idx = conley_index(f, c, nb)
        assert idx.degree == 0
        assert idx.matrix == ((0, 1), (1, 0))

    def test_repelling_fixed_point_matrix(self):
        T = tent_map()
        fp = enumerate_tent_cycles(1)[1]
        nb = build_neighborhood(T, fp)
        idx = conley_index(T, fp, nb)
        assert idx.degree == 1
        assert idx.matrix == ((-1,),)

    def test_matrix_power_is_signed_identity(self):
        T = tent_map()
        for k in range(1, 7):
            for c in enumerate_tent_cycles(k):
                if min(c.points) == 0:
                    continue
                nb = build_neighborhood(T, c)
                idx = conley_index(T, c, nb)
                sign = 1
                for s in c.branch_signs:
                    sign *= s
                power = mat_pow(idx.matrix, k)
                expected = tuple(tuple(sign * e for e in row)
                                 for row in identity_matrix(k))
                assert power == expected
                assert index_nontrivial(idx)

    def test_zero_matrix_is_trivial(self):
        synthetic = ConleyIndexData(0, ((0,),), Hyperbolicity.ATTRACTING)
        assert not index_nontrivial(synthetic)

    def test_mat_mul(self):
        A = ((0, 1), (1, 0))
        assert mat_mul(A, A) == identity_matrix(2)


class TestIsolatingBlock:
    def test_block_around_repelling_fixed_point(self):
        N = Interval(F(2, 3) - F(1, 20), F(2, 3) + F(1, 20))
        assert verify_isolating_block(tent_map(), N).status == BlockStatus.TRUE

    def test_vacuous_block(self):
        # the triple intersection is empty, so containment holds vacuously
        N = Interval(F(1, 10), F(1, 5))
        assert verify_isolating_block(tent_map(), N).status == BlockStatus.TRUE

    def test_boundary_fixed_point_fails(self):
        verdict = verify_isolating_block(tent_map(), Interval(F(0), F(3, 5)))
        assert verdict.status == BlockStatus.FALSE
        assert verdict.witness == 0

    def test_certified_neighborhoods_are_blocks(self):
        T = tent_map()
        for k in (1, 2, 3):
            for c in enumerate_tent_cycles(k):
                if min(c.points) == 0:
                    continue
                nb = build_neighborhood(T, c)
                assert verify_isolating_block(T, list(nb.components)).status == BlockStatus.TRUE

    def test_handle_unknown(self):
        f = logistic_handle(3.2)
        verdict = verify_isolating_block(f, Interval(0.4, 0.9))
        assert verdict.status == BlockStatus.UNKNOWN


class TestBudget:
    def test_single_fixed_point(self):
        T = tent_map()
        fp = enumerate_tent_cycles(1)[1]
        nb = build_neighborhood(T, fp)
        budget = epsilon_budget(T, {1: fp}, {1: nb})
        assert budget.per_cycle[1]["C"] == 1
        assert chain_rule_constant(nb.sup_slope, 1) == 1
        assert budget.epsilon == min(nb.eta, nb.beta)

    def test_boundary_cycle_rejected(self):
        T = tent_map()
        zero = enumerate_tent_cycles(1)[0]
        fake_nb = build_neighborhood(T, enumerate_tent_cycles(1)[1])
        with pytest.raises(BoundaryCycle):
            epsilon_budget(T, {1: zero}, {1: fake_nb})

    def test_empty_tail(self):
        with pytest.raises(EmptyTail):
            epsilon_budget(tent_map(), {}, {})

    def test_tail_one_two(self):
        T = tent_map()
        cycles = {1: enumerate_tent_cycles(1)[1], 2: enumerate_tent_cycles(2)[0]}
        nbhds, budget = certify_tail(T, cycles)
        assert budget.epsilon > 0
        assert all(line["verdict"] for line in budget.transcript)
        # invariants re-checked independently
        for k, info in budget.per_cycle.items():
            assert info["C"] * budget.epsilon <= info["beta"]
            assert budget.epsilon <= info["eta"]
        comps = [c for nb in nbhds.values() for c in nb.components]
        diam = max(c.width() for c in comps)
        gap = min(comps[i].distance_to(comps[j])
                  for i in range(len(comps)) for j in range(i + 1, len(comps)))
        assert diam < budget.delta < gap

    def test_chain_rule_constant_formula(self):
        L = F(2)
        assert chain_rule_constant(L, 3) == sum((L + 1) ** j * L ** (2 - j)
                                                for j in range(3))
