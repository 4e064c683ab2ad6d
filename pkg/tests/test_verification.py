"""Maass-Selberg two-sided checks and the truncated series evaluator."""

import math

import numpy as np
import pytest

from eiszeros.options import EvalOptions
from eiszeros.eisenstein import a0, a_n, eisenstein_series
from eiszeros.verification import (
    _lhs_integral,
    _rhs_closed_form,
    maass_selberg_check,
    truncated_eisenstein,
)
from eiszeros.zero_finder import real_zeros


class TestTruncatedEisenstein:
    def test_tail_bound_above_truncation(self):
        z, s, T = 0.25 + 2.5j, 0.6 + 2j, 1.0
        val = truncated_eisenstein(z, s, T, n_max=15)
        bound = 2 * sum(abs(a_n(n, z.imag, s)) for n in range(1, 16))
        assert abs(val) <= bound

    def test_pointwise_jump_across_truncation_height(self):
        s, T = 0.6 + 2j, 1.5
        eps = 1e-9
        below = truncated_eisenstein(0.1 + (T - eps) * 1j, s, T, n_max=12)
        above = truncated_eisenstein(0.1 + (T + eps) * 1j, s, T, n_max=12)
        assert abs(below - above) == pytest.approx(abs(a0(T, s)), rel=1e-5)

    def test_composition_of_oracled_parts(self):
        z, s = 0.2 + 3j, 0.6 + 2j
        whole = eisenstein_series(z, s, n_max=20).value
        assert truncated_eisenstein(z, s, 1.0, n_max=20) == pytest.approx(
            whole - a0(z.imag, s), abs=1e-12
        )

    def test_domain_guard(self):
        with pytest.raises(ValueError):
            truncated_eisenstein(0.2 + 0.3j, 0.6 + 2j, 1.0)


class TestMaassSelberg:
    @pytest.mark.parametrize(
        "s,T",
        [(0.6 + 2j, 1.5), (0.3 + 4j, 1.0), (0.75 + 1j, 2.0)],
        ids=["s06T15", "s03T1", "s075T2"],
    )
    def test_identity_holds(self, s, T):
        rep = maass_selberg_check(s, T, n_max=12, grid=64)
        scale = max(abs(rep.lhs), abs(rep.rhs), 1e-6)
        assert rep.abs_gap <= 1e-4 * scale
        assert rep.abs_gap <= 3 * rep.quadrature_estimate

    def test_critical_line_degenerate(self):
        rep = maass_selberg_check(0.5 + 3j, 2.0, grid=32)
        assert abs(rep.lhs) < 1e-8 and abs(rep.rhs) < 1e-8

    def test_real_s_degenerate(self):
        rep = maass_selberg_check(0.7 + 0j, 1.0, grid=32)
        assert abs(rep.lhs) < 1e-8 and abs(rep.rhs) < 1e-8

    def test_quadrature_convergence_order(self):
        opts = EvalOptions()
        s, T = 0.6 + 2j, 1.5
        l32 = _lhs_integral(s, T, 12, 32, opts)
        l64 = _lhs_integral(s, T, 12, 64, opts)
        l128 = _lhs_integral(s, T, 12, 128, opts)
        g1, g2 = abs(l32 - l64), abs(l64 - l128)
        floor = 1e-13 * abs(l64)
        assert g1 >= 4 * g2 or g1 <= floor

    def test_rhs_vanishes_at_constant_term_zero(self):
        # a0(T, sigma_T) = 0 at the real zero above the crossover; the
        # reflection pairing kills the closed-form side identically
        opts = EvalOptions()
        T = 8.0
        sigma = real_zeros(T)[0].ordinate
        rhs = _rhs_closed_form(complex(sigma), T, opts)
        assert abs(rhs) < 1e-10

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            maass_selberg_check(0.6 + 2j, 1.5, grid=16)
        with pytest.raises(ValueError):
            maass_selberg_check(0.6 + 2j, 0.5)
        with pytest.raises(ValueError):
            maass_selberg_check(1.6 + 2j, 1.5)
