"""Verification harness: dispatch, report rules, sweeps."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsinc import (
    CATALOG,
    IdentityId,
    InvalidGrid,
    InvalidParams,
    make_report,
    sweep,
    verify,
    verify_bailey_binomial,
    verify_multibasic,
    verify_qbinomial_form,
)
from qsinc.identities import DEFAULT_TOL, expand_grid

_POINTS = {
    IdentityId.Main: {"a": 0.2, "b": 0.3, "z": 1.0, "q": 0.6, "p": 0.3},
    IdentityId.Symmetric: {"a": 0.1, "b": 0.2, "z": 1.0, "q": 0.5, "p": 0.2},
    IdentityId.QBinomialForm: {"a": 2.0, "b": 1.0, "alpha": 0.5, "p": 0.36,
                               "z": 1.0},
    IdentityId.Osler: {"a": 2.0, "alpha": 0.5, "theta": 0.0},
    IdentityId.ClassicalSumInt: {"a": 2.0, "alpha": 1.0, "l": 2},
    IdentityId.AppellLerch: {"a": 0.7, "q": 0.7},
    IdentityId.Invariance: {"a": 0.2, "b": 0.3, "z": 1.0, "q": 0.6, "p": 0.3,
                            "c": 1.3 + 0.4j},
    IdentityId.Fourier: {"a": 0.1, "b": 0.2, "q": 0.5, "p": 0.2, "y": 1.0},
    IdentityId.WeightedM: {"a": 0.1, "b": 0.2, "q": 0.5, "p": 0.2, "m": 2},
    IdentityId.Bailey: {"a1": 0.1, "a2": 0.2, "b1": 0.15, "b2": 0.25,
                        "z": 1.2, "q": 0.6, "p": 0.3},
    IdentityId.BaileyBinomial: {"p": 0.5, "alpha": 0.4, "a1": 2.0, "b1": 1.0,
                                "a2": 3.0, "b2": 1.0, "theta": 0.7},
    IdentityId.Multibasic: {"p1": 0.2, "p2": 0.3, "alpha_sum": 0.8,
                            "a1": 2.0, "b1": 1.0, "a2": 3.0, "b2": 1.0,
                            "z": 1.0},
    IdentityId.FunctionalEq1: {"a": 0.2, "b": 0.3, "z": 1.0, "q": 0.6,
                               "p": 0.3},
    IdentityId.FunctionalEq2: {"a": 0.2, "b": 0.3, "z": 1.0, "q": 0.6,
                               "p": 0.3},
    IdentityId.BaseIntegral: {"q": 0.5},
    IdentityId.TripleProduct: {"z": 0.8, "q": 0.5},
    IdentityId.PoissonVanishing: {"a": 0.1, "b": 0.2, "q": 0.5, "p": 0.2,
                                  "m": 1},
}


class TestCatalog:
    def test_every_identity_described(self):
        assert set(CATALOG) == set(IdentityId)
        assert all(CATALOG[i] for i in IdentityId)

    def test_every_identity_has_default_tol(self):
        assert set(DEFAULT_TOL) == set(IdentityId)


class TestVerify:
    @pytest.mark.parametrize("ident", list(IdentityId),
                             ids=lambda i: i.value)
    def test_each_identity_passes_at_reference_point(self, ident):
        report = verify(ident, _POINTS[ident])
        assert report.passed, (report.abs_err, report.rel_err)

    def test_base_ordering_guard(self):
        with pytest.raises(InvalidParams):
            verify(IdentityId.Main, {"a": 0.2, "b": 0.3, "z": 1.0, "q": 0.6,
                                     "p": 0.7})

    def test_qbinomial_alpha_guard(self):
        with pytest.raises(InvalidParams):
            verify_qbinomial_form(2.0, 1.0, 1.2, 0.36, 1.0)

    def test_multibasic_constraint_guard(self):
        with pytest.raises(InvalidParams):
            verify_multibasic({"p1": 0.5, "p2": 0.5, "q": 0.45, "a1": 2,
                               "b1": 1, "a2": 3, "b2": 1, "z": 1.0})

    def test_bailey_binomial_theta_zero_trivial(self):
        params = dict(_POINTS[IdentityId.BaileyBinomial], theta=0.0)
        report = verify_bailey_binomial(params)
        assert report.passed
        assert report.abs_err < 1e-13  # both sides are the same sum

    def test_tolerance_monotonicity(self):
        point = _POINTS[IdentityId.Main]
        tight = verify(IdentityId.Main, point, tol=1e-7)
        loose = verify(IdentityId.Main, point, tol=1e-4)
        assert tight.passed and loose.passed
        assert loose.tol > tight.tol

    def test_inconclusive_on_convergence_failure(self, monkeypatch):
        from qsinc.qcore import TruncationPolicy

        report = verify(IdentityId.Main, _POINTS[IdentityId.Main],
                        policy=TruncationPolicy(eps=1e-12, max_terms=10,
                                                min_terms=4))
        assert not report.passed
        assert report.lhs_diag["status"] == "inconclusive"

    def test_elapsed_recorded(self):
        report = verify(IdentityId.TripleProduct, {"z": 0.8, "q": 0.5})
        assert report.elapsed >= 0.0


class TestReportRule:
    @settings(max_examples=100, deadline=None)
    @given(st.floats(-10, 10), st.floats(-10, 10), st.floats(1e-12, 1e-2))
    def test_pass_rule(self, lhs, rhs, tol):
        report = make_report(IdentityId.Main, {}, lhs, rhs, tol)
        scale = max(abs(lhs), abs(rhs))
        expected = (report.abs_err <= tol
                    or (scale > tol and report.rel_err <= tol))
        assert report.passed == expected
        if scale > 0:
            assert report.rel_err == pytest.approx(report.abs_err / scale)

    def test_swap_symmetry(self):
        a = make_report(IdentityId.Main, {}, 1.0, 1.0 + 5e-9, 1e-8)
        b = make_report(IdentityId.Main, {}, 1.0 + 5e-9, 1.0, 1e-8)
        assert a.passed == b.passed
        assert a.abs_err == b.abs_err


class TestSweep:
    def test_grid_cardinality_and_order(self):
        grid = {"z": [0.5, 1.0, 1.5], "q": [0.4, 0.6], "p": [0.2],
                "a": [0.2], "b": [0.3]}
        reports, summary = sweep(IdentityId.Main, grid)
        assert summary["total"] == 6
        assert summary["passed"] == 6
        # deterministic ordering by sorted key, then product order
        zs = [r.params["z"] for r in reports]
        assert zs == [0.5, 1.0, 1.5, 0.5, 1.0, 1.5]

    def test_empty_grid_rejected(self):
        with pytest.raises(InvalidGrid):
            expand_grid({})
        with pytest.raises(InvalidGrid):
            sweep(IdentityId.Main, {"q": []})

    def test_invalid_point_isolated(self):
        grid = {"a": [0.2], "b": [0.3], "z": [1.0], "q": [0.6],
                "p": [0.3, 0.7]}  # p=0.7 violates |p| < |q|
        reports, summary = sweep(IdentityId.Main, grid)
        assert summary["total"] == 2
        assert summary["passed"] == 1
        bad = [r for r in reports if not r.passed]
        assert len(bad) == 1
        assert bad[0].lhs_diag["status"] == "invalid_params"

    def test_thread_count_does_not_change_reports(self):
        grid = {"z": [0.5, 1.0, 1.5], "q": [0.4, 0.6], "p": [0.2],
                "a": [0.2], "b": [0.3]}
        one, s1 = sweep(IdentityId.Main, grid, threads=1)
        four, s4 = sweep(IdentityId.Main, grid, threads=4)
        assert s1 == s4
        for r1, r4 in zip(one, four):
            assert r1.params == r4.params
            assert r1.lhs == r4.lhs
            assert r1.rhs == r4.rhs
