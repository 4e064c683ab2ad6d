"""Phase traces, zero location/counting, crossover, real-zero machinery."""

import math
import random

import numpy as np
import pytest

from eiszeros.options import EvalOptions
from eiszeros.eisenstein import FamilyParam, h_constant_term, h_truncation
from eiszeros.zero_finder import (
    XI_PHASE,
    ZETA_STAR_PHASE,
    a0_on_line,
    big_f,
    big_f_prime,
    count_zeros_rectangle,
    critical_line_zeros,
    f_logderiv,
    f_ratio,
    phase_trace,
    predicted_count,
    real_zeros,
    y_star,
    y_star_via_fprime,
    zero_trajectory,
)

from reference_tables import (
    TABLE1_T1,
    TABLE1_YSTAR,
    TABLE2_Y1,
    TABLE2_YSTAR,
    ZETA_ZEROS_BELOW_50,
    Y_STAR_REF,
)


class TestPhaseTrace:
    def test_anchored_at_zero(self):
        tr = phase_trace(XI_PHASE, 10.0)
        assert tr.theta[0] == 0.0
        assert tr.t_grid[0] == 0.0

    def test_construction_invariant_small_steps(self):
        tr = phase_trace(XI_PHASE, 60.0)
        raw = np.diff(tr.theta)
        assert np.max(np.abs(raw)) < math.pi / 2

    def test_count_consistency_at_fifty(self):
        # theta(50)/pi approximates N(xi(2s); 25)/2 = (# zeta zeros below 50)
        # up to the usual O(log) correction
        tr = phase_trace(XI_PHASE, 50.0)
        n_ref = len(ZETA_ZEROS_BELOW_50)
        assert abs(tr.theta_at(50.0) / math.pi - n_ref) < 3.0

    def test_zeta_star_base_offset(self):
        tr = phase_trace(ZETA_STAR_PHASE, 10.0)
        trx = phase_trace(XI_PHASE, 10.0)
        u = 4.0
        want = trx.theta_at(u) - math.atan(u) - math.pi / 2
        assert tr.theta_at(u) == pytest.approx(want, abs=1e-12)
        assert tr.theta[0] == pytest.approx(-math.pi / 2, abs=1e-15)

    def test_envelope_guard(self):
        with pytest.raises(ValueError):
            phase_trace(XI_PHASE, 250.0)


class TestCriticalLineZeros:
    @pytest.mark.parametrize(
        "family,table,t_max",
        [
            (FamilyParam.truncation(1.0), TABLE1_T1, 33.0),
            (FamilyParam.constant_term(1.0), TABLE2_Y1, 33.0),
        ],
        ids=["I_T1", "a0_y1"],
    )
    def test_published_tables(self, family, table, t_max):
        records = critical_line_zeros(family, t_max)
        assert len(records) == len(table)
        for rec, want in zip(records, table):
            assert rec.ordinate == pytest.approx(want, abs=1e-6)
            assert rec.residual <= 1e-8 * rec.scale
            assert rec.multiplicity_hint == 1

    def test_ystar_column_first_zero(self):
        records = critical_line_zeros(FamilyParam.truncation(y_star()), 2.0)
        assert records[0].ordinate == pytest.approx(1.570199673, abs=1e-6)

    def test_ordinates_strictly_increasing(self):
        records = critical_line_zeros(FamilyParam.truncation(2.0), 25.0)
        ords = [r.ordinate for r in records]
        assert all(a < b for a, b in zip(ords, ords[1:]))
        assert [r.index for r in records] == list(range(1, len(records) + 1))

    def test_weng_family_matches_t1(self):
        a = critical_line_zeros(FamilyParam.weng_rank2(), 15.0)
        b = critical_line_zeros(FamilyParam.truncation(1.0), 15.0)
        assert [r.ordinate for r in a] == pytest.approx([r.ordinate for r in b], abs=1e-9)

    def test_fourier_family_divisor_zeros(self):
        # a_2(1, 1/2+it) vanishes where 1 + 2^{-2it} does: t = pi (2k+1)/(4 log 2),
        # interleaved with K-Bessel zeros
        records = critical_line_zeros(FamilyParam.fourier(2, 1.0), 8.0)
        want = math.pi / (4 * math.log(2.0)) * 2  # first divisor zero
        assert any(abs(r.ordinate - 2.2661800709135966) < 1e-6 for r in records)
        assert all(r.residual <= 1e-7 * max(r.scale, 1e-250) for r in records)

    def test_envelope(self):
        with pytest.raises(ValueError):
            critical_line_zeros(FamilyParam.truncation(1.0), 150.0)


class TestRectangleCounts:
    def test_xi_of_2s_reference_count(self):
        rc = count_zeros_rectangle(FamilyParam.xi_of_2s(), -1, 2, -25, 25)
        assert rc.winding == 2 * len(ZETA_ZEROS_BELOW_50)

    def test_truncation_low_window(self):
        # one table zero below 8, plus conjugate, plus the manufactured s=1/2
        rc = count_zeros_rectangle(FamilyParam.truncation(1.0), -2, 3, -8, 8)
        assert rc.winding - 1 == 2

    def test_real_zero_sliver(self):
        rc = count_zeros_rectangle(FamilyParam.constant_term(8.0), 0.51, 0.99, -0.01, 0.01)
        assert rc.winding == 1

    def test_count_agreement_with_scan(self):
        for T, U in [(1.0, 10.0), (2.0, 20.0)]:
            scan = critical_line_zeros(FamilyParam.truncation(T), U)
            rc = count_zeros_rectangle(FamilyParam.truncation(T), -2, 3, -U, U)
            assert rc.winding == 2 * len(scan) + 1


class TestPredictedCount:
    def test_t1_u25(self):
        pred = predicted_count(1.0, 25.0)
        want = (2 / math.pi) * (25 * math.log(25) - (math.log(math.pi) + 1) * 25)
        assert pred == pytest.approx(want, rel=1e-12)
        rc = count_zeros_rectangle(FamilyParam.xi_of_2s(), -1, 2, -25, 25)
        assert abs(rc.winding - pred) <= 3 * math.log(25)

    def test_log_term_at_e_pi(self):
        T = math.exp(math.pi)
        for U in (5.0, 12.0, 40.0):
            assert predicted_count(T, U) - predicted_count(1.0, U) == pytest.approx(
                2 * U, rel=1e-12
            )

    def test_t1_reduces_to_xi_count(self):
        U = 17.0
        want = (2 / math.pi) * (U * math.log(U) - (math.log(math.pi) + 1) * U)
        assert predicted_count(1.0, U) == pytest.approx(want, rel=1e-12)


class TestRealZeros:
    def test_below_crossover_empty(self):
        assert real_zeros(5.0) == []

    def test_continuity_at_crossover(self):
        records = real_zeros(Y_STAR_REF * (1 + 1e-9))
        assert len(records) == 1
        assert 0.0 < records[0].ordinate - 0.5 < 1e-3

    def test_unique_zero_solves_f_equation(self):
        rec = real_zeros(8.0)[0]
        assert 0.5 < rec.ordinate < 1.0
        assert big_f(8.0, rec.ordinate) == pytest.approx(1.0, abs=1e-10)

    def test_mirror_symmetry(self):
        for y in (8.0, 20.0):
            rec = real_zeros(y)[0]
            assert abs(h_constant_term(y, complex(1.0 - rec.ordinate))) < 1e-9

    def test_abscissa_nondecreasing_toward_one(self):
        sigmas = [real_zeros(y)[0].ordinate for y in (8.0, 12.0, 20.0, 50.0, 200.0)]
        assert all(a < b for a, b in zip(sigmas, sigmas[1:]))
        gaps = [1 - s for s in sigmas]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))

    def test_domain_guard(self):
        with pytest.raises(ValueError):
            real_zeros(0.5)


class TestCrossover:
    def test_closed_form_value(self):
        assert y_star() == pytest.approx(7.055507, abs=1e-5)

    def test_log_identity(self):
        assert math.log(y_star()) == pytest.approx(
            math.log(4 * math.pi) - 0.5772156649015329, abs=1e-12
        )

    def test_fprime_route_agrees(self):
        assert abs(y_star() - y_star_via_fprime()) < 1e-8

    def test_fprime_vanishes_at_crossover(self):
        assert abs(big_f_prime(y_star(), 0.5)) < 1e-6


class TestFLogDeriv:
    def test_value_at_half(self):
        # 4 (1 + xi'(0)/xi(0))
        assert f_logderiv(0.5) == pytest.approx(3.90761716413516, abs=1e-6)

    def test_strictly_increasing(self):
        vals = [f_logderiv(s) for s in np.arange(0.55, 0.96, 0.05)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_divergence_near_one(self):
        assert f_logderiv(0.999) > 100.0

    def test_ratio_positive_on_interval(self):
        assert all(f_ratio(s) > 0 for s in np.arange(0.05, 0.99, 0.05))


class TestZeroTrajectory:
    def test_first_zero_between_table_columns(self):
        traj = zero_trajectory([1.0, Y_STAR_REF], 1)
        assert traj[0][1] == pytest.approx(TABLE1_T1[0], abs=1e-6)
        assert traj[1][1] == pytest.approx(TABLE1_YSTAR[0], abs=1e-6)

    def test_fifth_zero_between_table_columns(self):
        traj = zero_trajectory([1.0, Y_STAR_REF], 5)
        assert traj[0][1] == pytest.approx(TABLE1_T1[4], abs=1e-6)
        assert traj[1][1] == pytest.approx(TABLE1_YSTAR[4], abs=1e-6)

    def test_strictly_decreasing_chain(self):
        traj = zero_trajectory([1.0, 2.0, 4.0, 8.0], 1)
        ords = [o for _, o in traj]
        assert all(a > b for a, b in zip(ords, ords[1:]))


class TestLineRestrictions:
    def test_a0_on_line_matches_general_evaluator(self):
        from eiszeros.eisenstein import a0

        for y, t in [(1.0, 3.0), (7.0, 11.2)]:
            assert a0_on_line(y, t) == pytest.approx(
                a0(y, complex(0.5, t)).real, abs=1e-12
            )

    def test_monotone_phase_above_t_one(self):
        # d/dt [theta(2t) + t log T] > 0 for T = 2, sampled over (0, 50]
        tr = phase_trace(XI_PHASE, 101.0)
        rng = random.Random(53)
        for _ in range(1000):
            t = rng.uniform(5e-3, 50.0)
            dtheta = (tr.theta_at(2 * (t + 5e-4)) - tr.theta_at(2 * (t - 5e-4))) / 1e-3
            assert dtheta + math.log(2.0) > 0.0
