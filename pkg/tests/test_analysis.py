import math

import numpy as np
import pytest

from desinc.analysis import (
    analyze,
    check_assumptions,
    convergence_factor_observed,
    mgs_bound,
    mgs_norm_exact,
)
from desinc.grid import build_grid
from desinc.problems import example1, example2
from desinc.solver import IterationTrace, IVProblem, solve
from desinc.special import Interval
from desinc.weights import TriangularSplit, build_weights, split


def neumann_oracle(tsplit, L):
    """Explicit Neumann-sum computation of the comparison-matrix norm."""
    m = len(tsplit.d)
    le = L * np.abs(tsplit.e)
    inv = np.zeros((m, m))
    power = np.eye(m)
    for _ in range(m):
        inv += power
        power = power @ le
    y = inv @ (L * (np.diag(np.abs(tsplit.d)) + np.abs(tsplit.f)))
    return float(np.max(np.sum(np.abs(y), axis=1)))


class TestMgsNormExact:
    def test_paper_configuration(self):
        g = build_grid(Interval(0.0, 0.5), 64)
        norm = mgs_norm_exact(split(build_weights(g)), L=1.0)
        assert 0.01 <= norm <= 0.03

    def test_no_lower_coupling(self):
        m = 4
        ts = TriangularSplit(d=np.ones(m), e=np.zeros((m, m)), f=np.zeros((m, m)))
        assert mgs_norm_exact(ts, L=0.3) == pytest.approx(0.3, rel=1e-15)

    def test_matches_neumann_oracle_small(self):
        g = build_grid(Interval(0.0, 1.0), 3)
        ts = split(build_weights(g))
        assert mgs_norm_exact(ts, L=0.7) == pytest.approx(neumann_oracle(ts, 0.7), abs=1e-13)

    @pytest.mark.parametrize("N", [2, 4, 8, 16])
    def test_neumann_equivalence_sweep(self, N):
        g = build_grid(Interval(0.0, 0.5), N)
        ts = split(build_weights(g))
        assert mgs_norm_exact(ts, L=1.0) == pytest.approx(neumann_oracle(ts, 1.0), abs=1e-12)

    def test_rejects_nonpositive_l(self):
        ts = TriangularSplit(d=np.ones(2), e=np.zeros((2, 2)), f=np.zeros((2, 2)))
        with pytest.raises(ValueError):
            mgs_norm_exact(ts, L=0.0)


class TestMgsBound:
    def test_paper_value(self):
        assert mgs_bound(1.0, Interval(0.0, 0.5), math.log(64) / 64, 64) == pytest.approx(
            0.06197, abs=5e-5
        )

    def test_vanishes_with_small_l(self):
        iv = Interval(0.0, 0.5)
        assert mgs_bound(1e-12, iv, 0.05, 16) < 1e-12

    def test_ratio_to_exact(self):
        g = build_grid(Interval(0.0, 0.5), 64)
        exact = mgs_norm_exact(split(build_weights(g)), L=1.0)
        bound = mgs_bound(1.0, g.iv, g.h, 64)
        assert 1.5 < bound / exact < 6.0

    def test_rejects_violated_hypothesis(self):
        with pytest.raises(ValueError):
            mgs_bound(2.0, Interval(0.0, 0.5), 0.05, 16)  # 1.1*L*(b-a) = 1.1

    @pytest.mark.parametrize("N", [4, 8, 16, 32, 64, 128, 256])
    def test_dominates_exact_norm(self, N):
        g = build_grid(Interval(0.0, 0.5), N)
        exact = mgs_norm_exact(split(build_weights(g)), L=1.0)
        assert exact <= mgs_bound(1.0, g.iv, g.h, N)

    def test_decreasing_in_n(self):
        vals = [mgs_bound(1.0, Interval(0.0, 0.5), math.log(N) / N, N)
                for N in (8, 16, 32, 64, 128, 256)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestCheckAssumptions:
    def test_example1_constants(self):
        tp = example1()
        wm = build_weights(build_grid(tp.problem.iv, 32))
        rep = check_assumptions(tp.problem, wm)
        assert rep.cond_iii_ok and rep.cond_lbound_ok
        assert rep.w == pytest.approx(0.5, abs=0.06)

    def test_example2_constants(self):
        tp = example2(11)
        wm = build_weights(build_grid(tp.problem.iv, 32))
        rep = check_assumptions(tp.problem, wm)
        assert rep.cond_iii_ok and rep.cond_lbound_ok

    def test_large_lipschitz_fails_flag(self):
        prob = IVProblem(n=1, rhs=lambda t, x: x, x_a=np.array([1.0]),
                         iv=Interval(0.0, 1.0), lip=10.0, bound_m=2.0, rho=1.0)
        wm = build_weights(build_grid(prob.iv, 8))
        rep = check_assumptions(prob, wm)
        assert rep.cond_lbound_ok is False

    def test_missing_constants_marked_incomplete(self):
        prob = IVProblem(n=1, rhs=lambda t, x: x, x_a=np.array([1.0]),
                         iv=Interval(0.0, 1.0))
        wm = build_weights(build_grid(prob.iv, 4))
        rep = check_assumptions(prob, wm)
        assert rep.cond_iii_ok is None and rep.cond_lbound_ok is None
        assert "incomplete" in rep.details


class TestConvergenceFactorObserved:
    def test_geometric_sequence_recovered(self):
        r = 0.07
        trace = IterationTrace(z_norms=[r**k for k in range(8)])
        assert convergence_factor_observed(trace) == pytest.approx(r, rel=1e-12)

    def test_example1_below_norm_bound(self):
        tp = example1()
        g = build_grid(tp.problem.iv, 64)
        wm = build_weights(g)
        _, trace = solve(tp.problem, g, tol=1e-15, wm=wm)
        factor = convergence_factor_observed(trace)
        assert factor <= mgs_norm_exact(split(wm), tp.problem.lip)
        assert 0.005 <= factor <= 0.05

    def test_roundoff_tail_is_skipped(self):
        trace = IterationTrace(z_norms=[1.0, 0.01, 1e-4, 1e-6, 3e-16, 2.9e-16, 3.1e-16])
        factor = convergence_factor_observed(trace)
        assert factor == pytest.approx(1e-2, rel=1e-6)

    def test_rejects_short_or_zero(self):
        with pytest.raises(ValueError):
            convergence_factor_observed(IterationTrace(z_norms=[1.0, 0.1]))
        with pytest.raises(ValueError):
            convergence_factor_observed(IterationTrace(z_norms=[1.0, 0.0, 0.1]))


class TestAnalyze:
    def test_row_fields_consistent(self):
        g = build_grid(Interval(0.0, 0.5), 16)
        wm = build_weights(g)
        res = analyze(wm, 1.0)
        assert res.contraction
        assert res.mgs_norm <= res.mgs_bound
        assert res.e_norm <= 1.1 * g.iv.length
        assert res.w <= res.e_norm + res.df_norm + 1e-15

    def test_bound_absent_when_hypothesis_fails(self):
        g = build_grid(Interval(0.0, 1.0), 8)
        res = analyze(build_weights(g), L=2.0)
        assert res.mgs_bound is None
