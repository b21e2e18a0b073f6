"""Quadrature on the log-substituted line: truncation, refinement, guards."""

import math
from dataclasses import replace

import numpy as np
import pytest

from qsinc import (
    DomainError,
    InvalidParams,
    QParams,
    QuadratureSpec,
    SeriesParams,
    base_integral,
    fourier_integral,
    integrate_gaussian_decay,
    main_integral,
    main_series,
    multibasic_integral,
    MultibasicParams,
    multibasic_series,
    qpoch_inf,
    symmetric_integral,
    symmetric_series,
    theta_product,
    weighted_integral,
    weighted_series,
)
from qsinc.errors import InvalidDecay

from conftest import rel_err


def _sp(a, b, z, q, p):
    return SeriesParams(qp=QParams(p=p, q=q), a=a, b=b, z=z)


class TestGaussianDecay:
    def test_gaussian_integral(self, spec):
        res = integrate_gaussian_decay(lambda x: np.exp(-x * x), (1.0, 1.0),
                                       spec)
        assert rel_err(res.value, math.sqrt(math.pi)) < 1e-12
        assert res.error_estimate < 1e-10

    def test_decay_rate_must_be_positive(self, spec):
        with pytest.raises(InvalidDecay):
            integrate_gaussian_decay(lambda x: np.exp(-x * x), (0.0, 1.0),
                                     spec)

    def test_refinement_invariant(self, spec):
        # halving node spacing moves the value by < 4x the error estimate
        res = integrate_gaussian_decay(lambda x: np.exp(-x * x), (1.0, 1.0),
                                       spec)
        fine = replace(spec, nodes_per_unit=2 * spec.nodes_per_unit)
        res2 = integrate_gaussian_decay(lambda x: np.exp(-x * x), (1.0, 1.0),
                                        fine)
        assert abs(res.value - res2.value) <= 4 * max(res.error_estimate,
                                                      1e-15)

    def test_half_width_doubling_certificate(self, spec):
        f = lambda x: np.exp(-x * x)
        res = integrate_gaussian_decay(f, (1.0, 1.0), spec)
        wide = replace(spec, half_width=2 * res.half_width_used)
        res2 = integrate_gaussian_decay(f, (1.0, 1.0), wide)
        assert abs(res.value - res2.value) < spec.eps / 5

    def test_spec_validation(self):
        with pytest.raises(InvalidParams):
            QuadratureSpec(half_width=0.0)
        with pytest.raises(InvalidParams):
            QuadratureSpec(nodes_per_unit=4)


class TestBaseIntegral:
    @pytest.mark.parametrize("q", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_closed_form(self, q, spec, policy):
        res = base_integral(q, spec)
        expected = qpoch_inf(q, q, policy) * math.log(1.0 / q)
        assert rel_err(res.value, expected) < 1e-10

    def test_real_base_required_by_default(self, spec):
        with pytest.raises(InvalidParams):
            base_integral(0.5 + 0.1j, spec)
        base_integral(0.5 + 0.1j, spec, allow_complex=True)


class TestMainIntegral:
    @pytest.mark.parametrize("z", [1.0, 0.5 + 0.5j, 2.0])
    def test_matches_series(self, z, spec, policy):
        params = _sp(0.2, 0.3, z, 0.6, 0.3)
        res = main_integral(params, spec)
        ev = main_series(params, policy)
        assert rel_err(res.value, ev.value) < 1e-8

    def test_trivial_numerator_is_theta(self, spec, policy):
        res = main_integral(_sp(0.0, 0.0, 0.8, 0.5, 0.2), spec)
        assert rel_err(res.value, theta_product(0.8, 0.5, policy)) < 1e-10

    def test_left_half_plane_rejected(self, spec):
        with pytest.raises(DomainError):
            main_integral(_sp(0.2, 0.3, -1.0 + 0.2j, 0.6, 0.3), spec)
        main_integral(_sp(0.2, 0.3, -1.0 + 0.2j, 0.6, 0.3), spec,
                      continuation=True)


class TestSymmetricIntegral:
    @pytest.mark.parametrize("z", [1.0, 0.3 + 0.4j])
    def test_matches_series(self, z, spec, policy):
        params = _sp(0.1, 0.2, z, 0.5, 0.2)
        res = symmetric_integral(params, spec)
        ev = symmetric_series(params, policy)
        assert rel_err(res.value, ev.value) < 1e-9

    def test_negative_axis_rejected(self, spec):
        with pytest.raises(InvalidParams):
            symmetric_integral(_sp(0.1, 0.2, -0.7, 0.5, 0.2), spec)


class TestFourierIntegral:
    def test_y_zero_is_symmetric(self, spec):
        params = _sp(0.1, 0.2, 1.0, 0.5, 0.2)
        res = fourier_integral(params, 0.0, spec)
        ref = symmetric_integral(params, spec)
        assert rel_err(res.value, ref.value) < 1e-11

    def test_conjugate_symmetry(self, spec):
        params = _sp(0.1, 0.2, 1.0, 0.5, 0.2)
        plus = fourier_integral(params, 1.3, spec).value
        minus = fourier_integral(params, -1.3, spec).value
        assert abs(plus - minus.conjugate()) < 1e-12

    def test_requires_z_one(self, spec):
        with pytest.raises(InvalidParams):
            fourier_integral(_sp(0.1, 0.2, 0.9, 0.5, 0.2), 1.0, spec)


class TestWeightedIntegral:
    @pytest.mark.parametrize("m", [-2, 0, 2])
    def test_matches_series(self, m, spec, policy):
        params = _sp(0.1, 0.2, 1.0, 0.5, 0.2)
        res = weighted_integral(params, m, spec)
        ev = weighted_series(params, m, policy)
        assert rel_err(res.value, ev.value) < 1e-9


class TestMultibasicIntegral:
    def test_matches_series(self, spec, policy):
        params = MultibasicParams.from_alpha_sum(
            p1=0.2, p2=0.3, alpha_sum=0.8, a1=2, b1=1, a2=3, b2=1, z=1.0)
        res = multibasic_integral(params, spec)
        ev = multibasic_series(params, policy)
        assert rel_err(res.value, ev.value) < 1e-8

    def test_complex_z(self, spec, policy):
        params = MultibasicParams.from_alpha_sum(
            p1=0.2, p2=0.3, alpha_sum=0.5, a1=2, b1=1, a2=3, b2=1,
            z=0.6 + 0.2j)
        res = multibasic_integral(params, spec)
        ev = multibasic_series(params, policy)
        assert rel_err(res.value, ev.value) < 1e-8
