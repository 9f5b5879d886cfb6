import math

import numpy as np
import pytest

from lottery_ricker import (
    BlowupError,
    DomainError,
    LotteryRicker,
    StockingRicker,
    invariant_region,
    iterate,
    jacobian,
    step,
    step_batch,
)


def fd_jacobian(f, s, h_scale=1e-6):
    """Central-difference Jacobian oracle."""
    x, y = s
    h = h_scale * (1.0 + math.hypot(x, y))
    out = np.empty((2, 2))
    for col, (dx, dy) in enumerate(((h, 0.0), (0.0, h))):
        hi = step(f, (x + dx, y + dy))
        lo = step(f, (x - dx, y - dy))
        out[0, col] = (hi.x - lo.x) / (2 * h)
        out[1, col] = (hi.y - lo.y) / (2 * h)
    return out


class TestParams:
    def test_valid(self):
        f = LotteryRicker(2.0, 2.2)
        assert f.a == 0.0

    @pytest.mark.parametrize("kw", [
        dict(r1=0.0, r2=2.0), dict(r1=-1.0, r2=2.0), dict(r1=2.0, r2=0.0),
        dict(r1=2.0, r2=2.0, a=-0.1), dict(r1=math.nan, r2=2.0),
        dict(r1=math.inf, r2=2.0),
    ])
    def test_invalid_lottery(self, kw):
        with pytest.raises(ValueError):
            LotteryRicker(**kw)

    @pytest.mark.parametrize("kw", [
        dict(s1=-0.1, q1=1.5, q2=2.2, p1=1.0, p2=1.0),
        dict(s1=0.5, q1=0.0, q2=2.2, p1=1.0, p2=1.0),
        dict(s1=0.5, q1=1.5, q2=2.2, p1=-1.0, p2=1.0),
    ])
    def test_invalid_stocking(self, kw):
        with pytest.raises(ValueError):
            StockingRicker(**kw)


class TestStep:
    def test_x_axis_collapses_to_r1(self, running_example):
        assert step(running_example, (5.0, 0.0)) == (2.0, 0.0)
        for x in (0.01, 1.0, 17.3):
            assert step(running_example, (x, 0.0)) == (2.0, 0.0)

    def test_y_axis_fixed_point(self, running_example):
        assert step(running_example, (0.0, 2.2)) == (0.0, 2.2)

    def test_interior_point_matches_formulas(self, running_example):
        s = step(running_example, (2.0, 0.001))
        assert s.x == pytest.approx(2.0 * 2.0 / 2.001, rel=1e-15)
        assert s.y == pytest.approx(0.001 * math.exp(0.199), rel=1e-15)

    def test_origin_is_singular_for_lottery(self, running_example):
        with pytest.raises(DomainError):
            step(running_example, (0.0, 0.0))

    def test_origin_is_fixed_for_stocking(self, stocking_example):
        assert step(stocking_example, (0.0, 0.0)) == (0.0, 0.0)

    def test_nonfinite_rejected(self, running_example):
        with pytest.raises(DomainError):
            step(running_example, (math.nan, 1.0))
        with pytest.raises(DomainError):
            step(running_example, (1.0, math.inf))

    def test_negative_rejected(self, running_example):
        with pytest.raises(DomainError):
            step(running_example, (-1.0, 1.0))

    def test_shifted_family_accepts_origin_neighborhood(self):
        f = LotteryRicker(2.0, 2.2, a=0.5)
        s = step(f, (0.0, 0.0))
        assert s == (0.0, 0.0)

    def test_axis_invariance_both_families(self, running_example, stocking_example):
        for f in (running_example, stocking_example):
            for v in (0.3, 1.7, 2.9):
                assert step(f, (v, 0.0)).y == 0.0
                assert step(f, (0.0, v)).x == 0.0

    def test_underflow_flushes_to_zero(self, running_example):
        s = step(running_example, (1e-310, 1.0))
        assert s.x == 0.0

    def test_stocking_overflow_guard(self):
        f = StockingRicker(s1=0.0, q1=800.0, q2=800.0, p1=1e-6, p2=1e-6)
        with pytest.raises(BlowupError):
            step(f, (1.0, 1.0))

    def test_determinism(self, running_example):
        a = step(running_example, (0.7, 1.3))
        b = step(running_example, (0.7, 1.3))
        assert a == b


class TestJacobian:
    def test_at_x_axis_equilibrium(self, running_example):
        j = jacobian(running_example, (2.0, 0.0))
        expected = np.array([[0.0, -1.0], [0.0, math.exp(0.2)]])
        assert np.allclose(j, expected, rtol=0, atol=1e-15)

    def test_at_y_axis_equilibrium(self, running_example):
        j = jacobian(running_example, (0.0, 2.2))
        expected = np.array([[2.0 / 2.2, 0.0], [-2.2, -1.2]])
        assert np.allclose(j, expected, rtol=1e-15, atol=1e-15)

    @pytest.mark.parametrize("family_fixture", ["running_example", "shifted_example", "stocking_example"])
    def test_matches_finite_differences(self, family_fixture, request):
        f = request.getfixturevalue(family_fixture)
        rng = np.random.default_rng(3)
        for _ in range(50):
            s = rng.uniform(0.05, 3.0, 2)
            j = jacobian(f, s)
            fd = fd_jacobian(f, s)
            err = np.max(np.abs(j - fd)) / np.max(np.abs(j))
            assert err < 1e-6

    def test_transverse_multipliers(self):
        # e^(r2-r1) along y at (r1, 0); r1/r2 along x at (0, r2)
        for r1, r2 in ((2.0, 2.2), (3.0, 2.0), (1.5, 2.6)):
            f = LotteryRicker(r1, r2)
            assert jacobian(f, (r1, 0.0))[1, 1] == pytest.approx(math.exp(r2 - r1), rel=1e-14)
            assert jacobian(f, (0.0, r2))[0, 0] == pytest.approx(r1 / r2, rel=1e-14)


class TestIterate:
    def test_trajectory_layout(self, running_example):
        t = iterate(running_example, (2.0, 0.001), 1)
        assert t.shape == (2, 2)
        assert tuple(t[0]) == (2.0, 0.001)
        assert tuple(t[1]) == tuple(step(running_example, (2.0, 0.001)))

    def test_rejects_negative_n(self, running_example):
        with pytest.raises(ValueError):
            iterate(running_example, (1.0, 1.0), -1)

    def test_eventually_enters_invariant_region(self, running_example):
        reg = invariant_region(running_example)
        rng = np.random.default_rng(11)
        for _ in range(20):
            s0 = rng.uniform(1e-3, 6.0, 2)
            t = iterate(running_example, s0, 10_000)
            sums = t.sum(axis=1)
            inside = (sums >= reg.eps - 1e-12) & (sums <= reg.upper + 1e-12)
            k = int(np.argmax(inside))
            assert inside[k:].all()

    def test_global_convergence_when_x_wins(self):
        f = LotteryRicker(3.0, 2.0)
        rng = np.random.default_rng(5)
        for _ in range(10):
            s0 = (rng.uniform(1e-3, 4.0), rng.uniform(0.0, 4.0))
            t = iterate(f, s0, 200)
            assert abs(t[-1, 0] - 3.0) < 1e-6
            assert t[-1, 1] < 1e-6

    def test_blowup_reports_step(self):
        # s1 = 10 makes the x-axis dynamics a 10x-per-step ramp
        f = StockingRicker(s1=10.0, q1=1.0, q2=1.0, p1=1.0, p2=1.0)
        with pytest.raises(BlowupError, match="step"):
            iterate(f, (1.0, 0.0), 400)


class TestStepBatch:
    def test_agrees_with_scalar_step(self, running_example):
        rng = np.random.default_rng(1)
        x = rng.uniform(0.01, 3.0, 100)
        y = rng.uniform(0.01, 3.0, 100)
        xn, yn = step_batch(running_example, x, y)
        for k in range(100):
            s = step(running_example, (x[k], y[k]))
            assert xn[k] == pytest.approx(s.x, rel=1e-15, abs=0)
            assert yn[k] == pytest.approx(s.y, rel=1e-15, abs=0)

    def test_axis_rows_stay_on_axis(self, stocking_example):
        x = np.array([0.0, 1.0, 2.0])
        y = np.array([1.5, 0.0, 0.0])
        xn, yn = step_batch(stocking_example, x, y)
        assert xn[0] == 0.0 and yn[1] == 0.0 and yn[2] == 0.0


class TestInvariantRegion:
    def test_running_example_values(self, running_example):
        reg = invariant_region(running_example)
        assert reg.upper == pytest.approx(math.exp(1.2), rel=1e-15)
        expected_rm = min(2.0, 2.2, math.exp(2 * 2.2 - 1 - math.exp(1.2)), 2 * math.exp(0.2))
        assert reg.r_m == pytest.approx(expected_rm, rel=1e-15)
        assert reg.r_m == pytest.approx(1.0832, abs=5e-5)
        assert reg.upper == pytest.approx(3.3201, abs=5e-5)
        assert reg.eps == reg.r_m

    def test_x_dominant_example(self):
        reg = invariant_region(LotteryRicker(3.0, 2.0))
        assert reg.upper == 3.0

    def test_rejects_equal_parameters(self):
        with pytest.raises(DomainError):
            invariant_region(LotteryRicker(2.0, 2.0))

    def test_rejects_bad_eps(self, running_example):
        with pytest.raises(DomainError):
            invariant_region(running_example, eps=2.0)

    def test_positive_invariance_sampled(self, running_example):
        reg = invariant_region(running_example)
        rng = np.random.default_rng(7)
        pts = []
        while len(pts) < 10_000:
            cand = rng.uniform(0.0, reg.upper, (4096, 2))
            sums = cand.sum(axis=1)
            keep = cand[(sums >= reg.eps) & (sums <= reg.upper)]
            pts.extend(map(tuple, keep))
        pts = np.array(pts[:10_000])
        xn, yn = step_batch(running_example, pts[:, 0], pts[:, 1])
        u = xn + yn
        assert (u >= reg.eps - 1e-12).all()
        assert (u <= reg.upper + 1e-12).all()
