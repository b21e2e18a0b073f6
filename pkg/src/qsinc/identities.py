"""Identity catalog and verification harness.

Each identity pairs two independently computed sides (series vs series, or
series vs quadrature), applies the combined absolute/relative tolerance rule
and produces an IdentityReport.  The combined rule matters because several
identities have sides that legitimately approach zero, where relative error
is meaningless.
"""

from __future__ import annotations

import cmath
import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

from . import bilateral, classical, quadrature
from .bilateral import (
    BaileyParams,
    MultibasicParams,
    SeriesParams,
    _asymptotic_start,
    _sum_pairs,
    multibasic_binomial,
    multibasic_binomial_consts,
)
from .classical import OslerParams
from .errors import InvalidGrid, InvalidParams, QsincError
from .qcore import (
    QParams,
    TruncationPolicy,
    default_policy,
    qpoch_inf,
    theta_product,
)
from .quadrature import QuadratureSpec


class IdentityId(Enum):
    """Every verifiable identity in the catalog."""

    Main = "main"
    Symmetric = "symmetric"
    QBinomialForm = "qbinomial"
    Osler = "osler"
    ClassicalSumInt = "classical-sum-int"
    AppellLerch = "appell-lerch"
    Invariance = "invariance"
    Fourier = "fourier"
    WeightedM = "weighted"
    Bailey = "bailey"
    BaileyBinomial = "bailey-binomial"
    Multibasic = "multibasic"
    FunctionalEq1 = "functional-eq1"
    FunctionalEq2 = "functional-eq2"
    BaseIntegral = "base-integral"
    TripleProduct = "triple-product"
    PoissonVanishing = "poisson"


CATALOG: dict[IdentityId, str] = {
    IdentityId.Main: "bilateral product series equals its companion dt/t integral",
    IdentityId.Symmetric: "symmetric form: sum over Z equals integral over R",
    IdentityId.QBinomialForm: "q-binomial rewriting of the symmetric form",
    IdentityId.Osler: "generalized binomial sum on the unit circle vs closed form",
    IdentityId.ClassicalSumInt: "classical binomial-power sum equals integral",
    IdentityId.AppellLerch: "p=q^2 specialization equals the Appell-Lerch form",
    IdentityId.Invariance: "symmetric series depends only on b/z and a*z",
    IdentityId.Fourier: "Fourier transform equals the sinh-kernel series",
    IdentityId.WeightedM: "q^(mx)-weighted integral equals the weighted sum",
    IdentityId.Bailey: "four-product bilateral transformation, left vs right",
    IdentityId.BaileyBinomial: "q-binomial form of the four-product transformation",
    IdentityId.Multibasic: "two-base q-binomial sum equals integral",
    IdentityId.FunctionalEq1: "contiguous relation in b: f(a,b,z)=f(a,bp,z)-b f(a,bp,qz)",
    IdentityId.FunctionalEq2: "contiguous relation in a: f(a,b,z)=f(ap,b,z)-a f(ap,b,z/q)",
    IdentityId.BaseIntegral: "base dt/t integral equals (q;q)_inf ln(1/q)",
    IdentityId.TripleProduct: "triple product equals the bilateral theta sum",
    IdentityId.PoissonVanishing: "Fourier transform vanishes at y = 2 pi m",
}

# Default tolerances: each extra numerical layer costs about one digit.
_SERIES_TOL = 1e-8
_QUAD_TOL = 1e-7
_CLASSICAL_TOL = 1e-6

DEFAULT_TOL: dict[IdentityId, float] = {
    IdentityId.Main: _QUAD_TOL,
    IdentityId.Symmetric: _QUAD_TOL,
    IdentityId.QBinomialForm: _QUAD_TOL,
    IdentityId.Osler: _CLASSICAL_TOL,
    IdentityId.ClassicalSumInt: _CLASSICAL_TOL,
    IdentityId.AppellLerch: _SERIES_TOL,
    IdentityId.Invariance: 1e-9,
    IdentityId.Fourier: _CLASSICAL_TOL,
    IdentityId.WeightedM: _QUAD_TOL,
    IdentityId.Bailey: _SERIES_TOL,
    IdentityId.BaileyBinomial: _SERIES_TOL,
    IdentityId.Multibasic: _CLASSICAL_TOL,
    IdentityId.FunctionalEq1: 1e-9,
    IdentityId.FunctionalEq2: 1e-9,
    IdentityId.BaseIntegral: 1e-10,
    IdentityId.TripleProduct: 1e-10,
    IdentityId.PoissonVanishing: 1e-8,
}


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of checking one identity at one parameter point."""

    id: IdentityId
    params: dict[str, Any]
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    tol: float
    passed: bool
    lhs_diag: dict[str, Any] = field(default_factory=dict)
    rhs_diag: dict[str, Any] = field(default_factory=dict)
    elapsed: float = 0.0


def make_report(ident: IdentityId, params: Mapping[str, Any], lhs: complex,
                rhs: complex, tol: float, lhs_diag=None, rhs_diag=None,
                elapsed: float = 0.0) -> IdentityReport:
    lhs, rhs = complex(lhs), complex(rhs)
    abs_err = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_err = abs_err / scale if scale > 0.0 else 0.0
    passed = abs_err <= tol or (scale > tol and rel_err <= tol)
    return IdentityReport(id=ident, params=dict(params), lhs=lhs, rhs=rhs,
                          abs_err=abs_err, rel_err=rel_err, tol=tol,
                          passed=passed, lhs_diag=lhs_diag or {},
                          rhs_diag=rhs_diag or {}, elapsed=elapsed)


def _series_diag(ev: bilateral.SeriesEvaluation) -> dict[str, Any]:
    return {"terms": ev.terms_used, "tail_estimate": ev.tail_estimate,
            "converged": ev.converged}


def _quad_diag(res: quadrature.QuadratureResult) -> dict[str, Any]:
    return {"nodes": res.nodes_used, "error_estimate": res.error_estimate,
            "half_width": res.half_width_used,
            "refinements": res.refinements_used}


def _qparams(params: Mapping[str, Any]) -> QParams:
    return QParams(p=params["p"], q=params["q"],
                   allow_extreme=bool(params.get("allow_extreme", False)))


def _series_params(params: Mapping[str, Any],
                   z_default: complex | None = None) -> SeriesParams:
    z = params.get("z", z_default)
    if z is None:
        raise InvalidParams("missing parameter z")
    return SeriesParams(qp=_qparams(params), a=params.get("a", 0.0),
                        b=params.get("b", 0.0), z=z)


def verify(ident: IdentityId, params: Mapping[str, Any],
           tol: float | None = None, policy: TruncationPolicy | None = None,
           spec: QuadratureSpec | None = None) -> IdentityReport:
    """Evaluate both sides of one identity and report the comparison.

    InvalidParams (violated hypotheses) propagates to the caller; numerical
    failures (no convergence, quadrature failure) yield an inconclusive
    report with passed=False and the failure reason in the diagnostics.
    """
    if tol is None:
        tol = DEFAULT_TOL[ident]
    if policy is None:
        policy = default_policy(eps=min(tol / 100.0, 1e-10))
    if spec is None:
        spec = QuadratureSpec(eps=min(tol / 10.0, 1e-10))
    start = time.perf_counter()
    try:
        lhs, rhs, ld, rd = _DISPATCH[ident](params, policy, spec)
    except InvalidParams:
        raise
    except QsincError as exc:
        return IdentityReport(
            id=ident, params=dict(params), lhs=0.0, rhs=0.0,
            abs_err=math.inf, rel_err=math.inf, tol=tol, passed=False,
            lhs_diag={"status": "inconclusive",
                      "reason": f"{type(exc).__name__}: {exc}"},
            rhs_diag={}, elapsed=time.perf_counter() - start)
    return make_report(ident, params, lhs, rhs, tol, ld, rd,
                       elapsed=time.perf_counter() - start)


# --- dispatch arms ---------------------------------------------------------

def _arm_main(params, policy, spec):
    sp = _series_params(params)
    ev = bilateral.main_series(sp, policy)
    res = quadrature.main_integral(sp, spec)
    return ev.value, res.value, _series_diag(ev), _quad_diag(res)


def _arm_symmetric(params, policy, spec):
    sp = _series_params(params)
    ev = bilateral.symmetric_series(sp, policy)
    res = quadrature.symmetric_integral(sp, spec)
    return ev.value, res.value, _series_diag(ev), _quad_diag(res)


def _arm_qbinomial(params, policy, spec):
    a, b = params["a"], params["b"]
    alpha, p, z = params["alpha"], params["p"], params["z"]
    if not 0.0 < alpha < 1.0:
        raise InvalidParams(f"need 0 < alpha < 1, got {alpha}")
    if not 0.0 < p < 1.0:
        raise InvalidParams(f"need 0 < p < 1, got {p}")
    q = p ** alpha
    # [a; b+alpha x]_p = (p^(b+1) q^x, p^(a-b+1) q^-x; p)_inf / C,
    # so the identity is the symmetric form at mapped arguments.
    sp = SeriesParams(qp=QParams(p=p, q=q), a=p ** (a - b + 1.0),
                      b=p ** (b + 1.0), z=z)
    c = qpoch_inf(p, p, policy) * qpoch_inf(p ** (a + 1.0), p, policy)
    ev = bilateral.symmetric_series(sp, policy)
    res = quadrature.symmetric_integral(sp, spec)
    return ev.value / c, res.value / c, _series_diag(ev), _quad_diag(res)


def _arm_osler(params, policy, spec):
    op = OslerParams(a=params["a"], b=params.get("b", 0.0),
                     alpha=params["alpha"], theta=params.get("theta", 0.0))
    lhs = classical.osler_sum(op, policy)
    v = cmath.exp(1j * op.theta)
    rhs = (1.0 / op.alpha) * (1.0 + v) ** op.a
    return lhs, rhs, {}, {}


def _arm_classical_sum_int(params, policy, spec):
    a, alpha, l = params["a"], params["alpha"], int(params["l"])
    if a <= 0.0:
        raise InvalidParams(f"need a > 0, got {a}")
    if l < 1:
        raise InvalidParams(f"need l >= 1, got {l}")
    if not 0.0 < alpha <= 2.0 / l:
        raise InvalidParams(f"need 0 < alpha <= 2/l = {2.0 / l}, got {alpha}")
    s, s_tail = classical.classical_sum(a, alpha, l, policy)
    i, i_err = classical.classical_integral(a, alpha, l, policy)
    return complex(s), complex(i), {"tail_estimate": s_tail}, \
        {"error_estimate": i_err}


def _arm_appell_lerch(params, policy, spec):
    a, q = complex(params["a"]), complex(params["q"])
    qp = QParams(p=q * q, q=q)
    sp = SeriesParams(qp=qp, a=q * q / a, b=a * q * q, z=1.0)
    ev = bilateral.main_series(sp, policy)
    rhs = bilateral.appell_lerch_rhs(a, q, policy)
    return ev.value, rhs.value, _series_diag(ev), _series_diag(rhs)


def _arm_invariance(params, policy, spec):
    sp = _series_params(params)
    c = complex(params.get("c", 1.3 + 0.4j))
    if c == 0:
        raise InvalidParams("move factor c must be nonzero")
    moved = SeriesParams(qp=sp.qp, a=sp.a / c, b=sp.b * c, z=sp.z * c)
    ev1 = bilateral.symmetric_series(sp, policy)
    ev2 = bilateral.symmetric_series(moved, policy)
    return ev1.value, ev2.value, _series_diag(ev1), _series_diag(ev2)


def _arm_fourier(params, policy, spec):
    y = float(params["y"])
    sp = _series_params(params, z_default=1.0)
    res = quadrature.fourier_integral(sp, y, spec)
    rhs = bilateral.fourier_series_side(sp, y, policy)
    return res.value, rhs, _quad_diag(res), {}


def _arm_weighted(params, policy, spec):
    m = int(params["m"])
    sp = _series_params(params, z_default=1.0)
    ev = bilateral.weighted_series(sp, m, policy)
    res = quadrature.weighted_integral(sp, m, spec)
    return ev.value, res.value, _series_diag(ev), _quad_diag(res)


def _arm_bailey(params, policy, spec):
    bp = BaileyParams(qp=_qparams(params), a1=params["a1"], a2=params["a2"],
                      b1=params["b1"], b2=params["b2"], z=params["z"])
    left = bilateral.bailey_series(bp, "left", policy)
    right = bilateral.bailey_series(bp, "right", policy)
    return left.value, right.value, _series_diag(left), _series_diag(right)


def _bailey_binomial_sum(p: float, alpha: float, a1: float, b1: float,
                         a2: float, b2: float, theta: float,
                         policy: TruncationPolicy) -> bilateral.SeriesEvaluation:
    """sum_n [a1; b1+alpha n]_p [a2; b2+alpha n]_p p^(alpha n(n-1) + theta n)."""
    c1 = multibasic_binomial_consts(a1, p, policy)
    c2 = multibasic_binomial_consts(a2, p, policy)
    gauss = alpha * math.log(1.0 / p)
    n_min = _asymptotic_start(p ** (-abs(theta) - alpha), gauss, policy.eps)

    def term(n: int) -> complex:
        w = p ** (alpha * n * (n - 1) + theta * n)
        if w == 0.0:
            return 0.0
        return (multibasic_binomial(a1, b1, alpha, p, n, policy, c1)
                * multibasic_binomial(a2, b2, alpha, p, n, policy, c2) * w)

    return _sum_pairs(term, policy, n_min)


def _arm_bailey_binomial(params, policy, spec):
    p, alpha = params["p"], params["alpha"]
    if not 0.0 < p < 1.0:
        raise InvalidParams(f"need 0 < p < 1, got {p}")
    if not 0.0 < alpha < 1.0:
        raise InvalidParams(f"need 0 < alpha < 1, got {alpha}")
    a1, b1 = params["a1"], params["b1"]
    a2, b2 = params["a2"], params["b2"]
    theta = params.get("theta", 0.0)
    left = _bailey_binomial_sum(p, alpha, a1, b1, a2, b2, theta, policy)
    shifted = _bailey_binomial_sum(p, alpha, a1, b1 - theta, a2, b2 - theta,
                                   -theta, policy)
    rhs = p ** theta * shifted.value
    return left.value, rhs, _series_diag(left), _series_diag(shifted)


def _multibasic_params(params: Mapping[str, Any]) -> MultibasicParams:
    if isinstance(params, MultibasicParams):
        return params
    kwargs = dict(p1=params["p1"], p2=params["p2"], a1=params["a1"],
                  b1=params["b1"], a2=params["a2"], b2=params["b2"],
                  z=params.get("z", 1.0))
    if "q" in params:
        return MultibasicParams(q=params["q"], **kwargs)
    return MultibasicParams.from_alpha_sum(alpha_sum=params["alpha_sum"],
                                           **kwargs)


def _arm_multibasic(params, policy, spec):
    mp = _multibasic_params(params)
    ev = bilateral.multibasic_series(mp, policy)
    res = quadrature.multibasic_integral(mp, spec)
    return ev.value, res.value, _series_diag(ev), _quad_diag(res)


def _arm_functional_eq1(params, policy, spec):
    sp = _series_params(params)
    p, q = sp.qp.p, sp.qp.q
    lhs = bilateral.main_series(sp, policy)
    t1 = bilateral.main_series(
        SeriesParams(qp=sp.qp, a=sp.a, b=sp.b * p, z=sp.z), policy)
    t2 = bilateral.main_series(
        SeriesParams(qp=sp.qp, a=sp.a, b=sp.b * p, z=sp.z * q), policy)
    return lhs.value, t1.value - sp.b * t2.value, _series_diag(lhs), {}


def _arm_functional_eq2(params, policy, spec):
    sp = _series_params(params)
    p, q = sp.qp.p, sp.qp.q
    lhs = bilateral.main_series(sp, policy)
    t1 = bilateral.main_series(
        SeriesParams(qp=sp.qp, a=sp.a * p, b=sp.b, z=sp.z), policy)
    t2 = bilateral.main_series(
        SeriesParams(qp=sp.qp, a=sp.a * p, b=sp.b, z=sp.z / q), policy)
    return lhs.value, t1.value - sp.a * t2.value, _series_diag(lhs), {}


def _arm_base_integral(params, policy, spec):
    q = params["q"]
    res = quadrature.base_integral(q, spec)
    rhs = qpoch_inf(q, q, policy) * math.log(1.0 / float(abs(q)))
    return res.value, rhs, _quad_diag(res), {}


def _arm_triple_product(params, policy, spec):
    z, q = complex(params["z"]), complex(params["q"])
    lhs = theta_product(z, q, policy)
    gauss = 0.5 * math.log(1.0 / abs(q))
    n_min = _asymptotic_start(max(abs(z), 1.0 / abs(z)), gauss, policy.eps)
    term = lambda n: z ** n * q ** (n * (n - 1) // 2)
    ev = _sum_pairs(term, policy, n_min)
    return lhs, ev.value, {}, _series_diag(ev)


def _arm_poisson(params, policy, spec):
    m = int(params.get("m", 1))
    if m == 0:
        raise InvalidParams("m must be a nonzero integer")
    sp = _series_params(params, z_default=1.0)
    res = quadrature.fourier_integral(sp, 2.0 * math.pi * m, spec)
    return res.value, 0.0, _quad_diag(res), {}


_DISPATCH = {
    IdentityId.Main: _arm_main,
    IdentityId.Symmetric: _arm_symmetric,
    IdentityId.QBinomialForm: _arm_qbinomial,
    IdentityId.Osler: _arm_osler,
    IdentityId.ClassicalSumInt: _arm_classical_sum_int,
    IdentityId.AppellLerch: _arm_appell_lerch,
    IdentityId.Invariance: _arm_invariance,
    IdentityId.Fourier: _arm_fourier,
    IdentityId.WeightedM: _arm_weighted,
    IdentityId.Bailey: _arm_bailey,
    IdentityId.BaileyBinomial: _arm_bailey_binomial,
    IdentityId.Multibasic: _arm_multibasic,
    IdentityId.FunctionalEq1: _arm_functional_eq1,
    IdentityId.FunctionalEq2: _arm_functional_eq2,
    IdentityId.BaseIntegral: _arm_base_integral,
    IdentityId.TripleProduct: _arm_triple_product,
    IdentityId.PoissonVanishing: _arm_poisson,
}


def verify_qbinomial_form(a: float, b: float, alpha: float, p: float,
                          z: complex, tol: float | None = None,
                          policy: TruncationPolicy | None = None,
                          spec: QuadratureSpec | None = None) -> IdentityReport:
    return verify(IdentityId.QBinomialForm,
                  {"a": a, "b": b, "alpha": alpha, "p": p, "z": z},
                  tol=tol, policy=policy, spec=spec)


def verify_bailey_binomial(params: Mapping[str, Any],
                           tol: float | None = None,
                           policy: TruncationPolicy | None = None,
                           spec: QuadratureSpec | None = None) -> IdentityReport:
    return verify(IdentityId.BaileyBinomial, params, tol=tol, policy=policy,
                  spec=spec)


def verify_multibasic(params: Mapping[str, Any] | MultibasicParams,
                      tol: float | None = None,
                      policy: TruncationPolicy | None = None,
                      spec: QuadratureSpec | None = None) -> IdentityReport:
    if isinstance(params, MultibasicParams):
        params = {"p1": params.p1, "p2": params.p2, "q": params.q,
                  "a1": params.a1, "b1": params.b1, "a2": params.a2,
                  "b2": params.b2, "z": params.z}
    return verify(IdentityId.Multibasic, params, tol=tol, policy=policy,
                  spec=spec)


def expand_grid(grid: Mapping[str, list]) -> list[dict[str, Any]]:
    """Cartesian product of a parameter grid, deterministic key order."""
    if not grid or any(len(v) == 0 for v in grid.values()):
        raise InvalidGrid("grid must be nonempty in every dimension")
    keys = sorted(grid)
    return [dict(zip(keys, combo))
            for combo in itertools.product(*(grid[k] for k in keys))]


def sweep(ident: IdentityId, grid: Mapping[str, list],
          tol: float | None = None, policy: TruncationPolicy | None = None,
          spec: QuadratureSpec | None = None,
          threads: int = 1) -> tuple[list[IdentityReport], dict[str, Any]]:
    """Run verify over every grid point; failures are recorded, not raised.

    Reports come back in grid order regardless of execution parallelism.
    """
    return sweep_points(ident, expand_grid(grid), tol=tol, policy=policy,
                        spec=spec, threads=threads)


def sweep_points(ident: IdentityId, points: list[dict[str, Any]],
                 tol: float | None = None,
                 policy: TruncationPolicy | None = None,
                 spec: QuadratureSpec | None = None,
                 threads: int = 1) -> tuple[list[IdentityReport], dict[str, Any]]:
    """sweep over an explicit point list instead of a cartesian grid."""
    if not points:
        raise InvalidGrid("point list must be nonempty")

    def run(point: dict[str, Any]) -> IdentityReport:
        try:
            return verify(ident, point, tol=tol, policy=policy, spec=spec)
        except InvalidParams as exc:
            return IdentityReport(
                id=ident, params=point, lhs=0.0, rhs=0.0,
                abs_err=math.inf, rel_err=math.inf,
                tol=tol if tol is not None else DEFAULT_TOL[ident],
                passed=False,
                lhs_diag={"status": "invalid_params", "reason": str(exc)},
                rhs_diag={})

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(run, points))
    else:
        reports = [run(point) for point in points]
    finite = [r.rel_err for r in reports if math.isfinite(r.rel_err)]
    summary = {
        "total": len(reports),
        "passed": sum(1 for r in reports if r.passed),
        "max_rel_err": max(finite) if finite else math.inf,
    }
    return reports, summary
