import math

import numpy as np
import pytest

from lottery_ricker import (
    DomainError,
    LotteryRicker,
    NoInteriorOrbitError,
    boundary_equilibria,
    existence_conditions,
    find_2cycle_by_iteration,
    interior_2cycle,
    ricker_2cycle,
    step,
)


def bisect_ricker_cycle(r2, width=1e-13):
    """Independent oracle: bisection on y*e^(r2-y) - (2*r2 - y) over (0, r2)."""
    g = lambda y: y * math.exp(r2 - y) - (2.0 * r2 - y)
    lo, hi = 1e-12, r2 - 1e-12
    assert g(lo) < 0 < g(hi)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def match_points(points, expected, tol):
    """Set-wise match of two point pairs with per-coordinate tolerance."""
    a, b = points
    for e1, e2 in ((expected[0], expected[1]), (expected[1], expected[0])):
        if (abs(a[0] - e1[0]) <= tol and abs(a[1] - e1[1]) <= tol
                and abs(b[0] - e2[0]) <= tol and abs(b[1] - e2[1]) <= tol):
            return True
    return False


class TestBoundaryEquilibria:
    def test_running_example(self, running_example):
        xi, eta = boundary_equilibria(running_example)
        assert xi == (2.0, 0.0)
        assert eta == (0.0, 2.2)

    def test_unit_parameters(self):
        xi, eta = boundary_equilibria(LotteryRicker(1.0, 1.0))
        assert xi == (1.0, 0.0) and eta == (0.0, 1.0)

    @pytest.mark.parametrize("r1,r2,a", [(2.0, 2.2, 0.0), (3.0, 2.0, 0.0), (2.1, 2.5, 0.1)])
    def test_fixed_point_identity(self, r1, r2, a):
        f = LotteryRicker(r1, r2, a)
        xi, eta = boundary_equilibria(f)
        sx = step(f, xi)
        sy = step(f, eta)
        assert abs(sx.x - xi.x) <= 1e-14 and sx.y == 0.0
        assert abs(sy.y - eta.y) <= 1e-14 and sy.x == 0.0

    def test_shifted_x_equilibrium(self, shifted_example):
        xi, _ = boundary_equilibria(shifted_example)
        assert xi == (2.0, 0.0)  # r1 - a

    def test_rejects_shift_larger_than_r1(self):
        with pytest.raises(DomainError):
            boundary_equilibria(LotteryRicker(0.5, 2.0, a=1.0))


class TestRicker2Cycle:
    def test_matches_bisection_oracle(self):
        bc = ricker_2cycle(2.2)
        assert bc.y1 == pytest.approx(bisect_ricker_cycle(2.2), abs=1e-10)
        assert bc.y1 == pytest.approx(1.0935, abs=1e-4)
        assert bc.y2 == pytest.approx(3.3065, abs=1e-4)

    @pytest.mark.parametrize("r2", [2.05, 2.2, 2.4, 2.52, 3.0])
    def test_cycle_identities(self, r2):
        bc = ricker_2cycle(r2)
        assert bc.y1 + bc.y2 == pytest.approx(2 * r2, abs=1e-12)
        assert bc.y2 == pytest.approx(bc.y1 * math.exp(r2 - bc.y1), abs=1e-10)
        assert 0 < bc.y1 < r2 < bc.y2

    def test_newborn_cycle_near_fixed_point(self):
        bc = ricker_2cycle(2.0 + 1e-9)
        assert abs(bc.y1 - 2.0) < 1e-3
        assert abs(bc.y2 - 2.0) < 1e-3

    @pytest.mark.parametrize("r2", [1.5, 2.0])
    def test_below_threshold_errors(self, r2):
        with pytest.raises(DomainError):
            ricker_2cycle(r2)


class TestInterior2Cycle:
    def test_reproduces_published_orbit(self, running_orbit):
        expected = ((0.1536, 2.9629), (0.0986, 1.1849))
        assert match_points((running_orbit.p1, running_orbit.p2), expected, tol=5e-3)

    def test_ascending_sum_order(self, running_orbit):
        assert running_orbit.s1 < running_orbit.s2
        assert running_orbit.s1 == running_orbit.p1.x + running_orbit.p1.y

    def test_sum_identities(self, running_orbit):
        s1_formula = 2.2 - math.sqrt(2.2**2 - 2.0**2)
        assert running_orbit.s1 == pytest.approx(s1_formula, abs=1e-10)
        assert running_orbit.s1 + running_orbit.s2 == pytest.approx(4.4, abs=1e-12)
        assert running_orbit.s1 * running_orbit.s2 == pytest.approx(4.0, rel=1e-10)

    def test_residual_and_cycle_structure(self, running_example, running_orbit):
        o = running_orbit
        assert o.residual <= 1e-10
        q = step(running_example, o.p1)
        assert abs(q.x - o.p2.x) <= o.residual + 1e-15
        assert abs(q.y - o.p2.y) <= o.residual + 1e-15
        back = step(running_example, o.p2)
        assert abs(back.x - o.p1.x) <= o.residual + 1e-15

    def test_shifted_family_orbit(self, shifted_example):
        o = interior_2cycle(shifted_example)
        expected = ((0.17, 0.80), (0.33, 3.70))
        assert match_points((o.p1, o.p2), expected, tol=1e-2)
        assert o.labels_swapped
        assert o.s1 + o.s2 == pytest.approx(2 * 2.5, abs=1e-12)

    def test_newton_polish_stays_close_to_closed_form(self):
        # where the existence conditions hold the closed form is already a
        # 2-cycle; the polish must be a no-op beyond roundoff
        for r1, r2 in ((2.0, 2.2), (2.1, 2.4), (2.2, 2.45)):
            o = interior_2cycle(LotteryRicker(r1, r2))
            root = math.sqrt(r2**2 - r1**2)
            s1 = r2 - root
            e = math.exp(r2 - s1)
            den = r1 - s1 * e
            x1 = s1 * ((r2 + root) - s1 * e) / den
            y1 = s1 * (r1 * s1 - (r2 + root) * s1) / (s1 * den)
            assert abs(o.p1.x - x1) < 1e-6
            assert abs(o.p1.y - y1) < 1e-6

    @pytest.mark.parametrize("r1,r2", [(2.0, 2.0), (3.0, 2.0)])
    def test_degenerate_inputs(self, r1, r2):
        with pytest.raises(NoInteriorOrbitError):
            interior_2cycle(LotteryRicker(r1, r2))

    def test_closed_form_outside_quadrant(self):
        # r1=1, r2=3: sums exist but the closed-form x is negative
        with pytest.raises(NoInteriorOrbitError):
            interior_2cycle(LotteryRicker(1.0, 3.0))

    def test_shifted_preconditions(self):
        with pytest.raises(DomainError):
            interior_2cycle(LotteryRicker(0.5, 2.5, a=1.0))  # r1^2 < 2*a*r2

    def test_rejects_stocking(self, stocking_example):
        with pytest.raises(DomainError):
            interior_2cycle(stocking_example)


class TestFind2CycleByIteration:
    def test_stocking_cycle_from_axis_seed(self, stocking_example):
        xs = 1.5 - math.log(0.5)
        o = find_2cycle_by_iteration(stocking_example, (xs, 1e-3))
        assert o.residual <= 1e-9
        q = step(stocking_example, o.p1)
        assert abs(q.x - o.p2.x) < 1e-8 and abs(q.y - o.p2.y) < 1e-8
        assert o.s1 < o.s2

    def test_matches_closed_form_for_lottery(self, running_example, running_orbit):
        o = find_2cycle_by_iteration(running_example, (1.0, 0.5))
        assert match_points((o.p1, o.p2), (running_orbit.p1, running_orbit.p2), tol=1e-8)

    def test_fixed_point_rejected(self):
        f = LotteryRicker(3.0, 2.0)
        with pytest.raises(NoInteriorOrbitError):
            find_2cycle_by_iteration(f, (1.0, 0.5))


class TestExistenceConditions:
    def test_chain_example(self):
        ex = existence_conditions(LotteryRicker(2.1, 2.4))
        assert ex.cond4 and ex.cond3 and ex.cond2 and ex.cond1
        assert ex.implication_chain_ok

    def test_running_example_conditions(self, running_example):
        ex = existence_conditions(running_example)
        # direct evaluation: s1*e^(r2-s1) = 3.2095 > s2 = 3.1165
        s1 = 2.2 - math.sqrt(0.84)
        assert s1 * math.exp(2.2 - s1) > 2.2 + math.sqrt(0.84)
        assert ex.cond1 and ex.cond2
        assert not ex.cond4  # r1 = 2 < 2.085
        assert ex.implication_chain_ok

    def test_far_from_cascade(self):
        ex = existence_conditions(LotteryRicker(1.0, 3.0))
        assert not ex.cond4
        assert not ex.cond1
        assert ex.implication_chain_ok

    def test_rejects_wrong_order(self):
        with pytest.raises(DomainError):
            existence_conditions(LotteryRicker(2.4, 2.1))

    def test_implication_chain_on_grid(self):
        r1s = np.linspace(2.0, 2.5, 100)
        r2s = np.linspace(2.0, 2.5, 100)
        seen4 = 0
        for r1 in r1s:
            for r2 in r2s:
                if not r1 < r2:
                    continue
                ex = existence_conditions(LotteryRicker(float(r1), float(r2)))
                assert ex.implication_chain_ok, (r1, r2)
                seen4 += ex.cond4
        assert seen4 > 0
