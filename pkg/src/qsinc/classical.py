"""Classical (q-free) special functions and sum-equals-integral checks.

Real-order binomial coefficients are band limited, so their bilateral sums
match the corresponding integrals; this module evaluates both sides of those
classical identities, which also serve as q -> 1 targets for the q modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln, gammasgn

from .errors import (
    IndeterminateRatio,
    InvalidParams,
    PoleAtNonpositiveInteger,
    QuadratureFailure,
    SlowConvergence,
)
from .qcore import TruncationPolicy
from .util import fsum_complex

_INT_TOL = 1e-9  # distance below which a value counts as an exact integer


@dataclass(frozen=True)
class OslerParams:
    """Parameters of the generalized binomial sum on the unit circle."""

    a: float
    b: float
    alpha: float
    theta: float

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise InvalidParams(f"need 0 < alpha <= 1, got {self.alpha}")
        if abs(self.theta) >= math.pi:
            raise InvalidParams(f"need |theta| < pi, got {self.theta}")


def _near_nonpositive_integer(x: float) -> bool:
    return x < 0.5 and abs(x - round(x)) < _INT_TOL


def gamma_classical(x: float) -> float:
    """Classical Gamma function (Lanczos-class implementation)."""
    if _near_nonpositive_integer(x):
        raise PoleAtNonpositiveInteger(f"Gamma pole at x={x}")
    return math.gamma(x)


def binomial_real(a: float, u: float) -> float:
    """Real-order binomial coefficient Gamma(a+1)/(Gamma(u+1)Gamma(a-u+1)).

    Evaluated through log-Gamma with explicit signs so large arguments never
    overflow; a pole in exactly one denominator Gamma gives 0.
    """
    num_pole = _near_nonpositive_integer(a + 1.0)
    den_pole = (_near_nonpositive_integer(u + 1.0)
                or _near_nonpositive_integer(a - u + 1.0))
    if num_pole and den_pole:
        raise IndeterminateRatio(
            f"coincident Gamma poles in binomial(a={a}, u={u})"
        )
    if num_pole:
        raise PoleAtNonpositiveInteger(f"Gamma(a+1) pole at a={a}")
    if den_pole:
        return 0.0
    return float(binomial_profile(a, np.asarray([u]))[0])


def binomial_profile(a: float, u: np.ndarray) -> np.ndarray:
    """Vectorized binomial_real; denominator poles map to zeros."""
    u = np.asarray(u, dtype=float)
    s = u + 1.0
    t = a - u + 1.0
    with np.errstate(over="ignore", invalid="ignore"):
        logs = gammaln(a + 1.0) - gammaln(s) - gammaln(t)
        signs = gammasgn(a + 1.0) * gammasgn(s) * gammasgn(t)
        out = signs * np.exp(logs)
    return np.where(np.isfinite(out), out, 0.0)


def binomial_bandlimit_integral(a: float, u: float,
                                nodes: int = 200) -> complex:
    """Band-limited integral form of the binomial coefficient.

    (1/2pi) int_{-pi}^{pi} (1+e^{it})^a e^{-iut} dt; requires a > -1 for
    integrability of the endpoint behavior.
    """
    if a <= -1.0:
        raise InvalidParams(f"need a > -1, got {a}")

    def integrand(t: float, part: str) -> float:
        v = (1.0 + np.exp(1j * t)) ** a * np.exp(-1j * u * t)
        return v.real if part == "re" else v.imag

    re, re_err = quad(integrand, -math.pi, math.pi, args=("re",),
                      limit=nodes, epsabs=1e-12, epsrel=1e-12)
    im, im_err = quad(integrand, -math.pi, math.pi, args=("im",),
                      limit=nodes, epsabs=1e-12, epsrel=1e-12)
    if re_err + im_err > 1e-8:
        raise QuadratureFailure(
            f"band-limit integral error estimate {re_err + im_err:.2e}"
        )
    return complex(re / (2.0 * math.pi), im / (2.0 * math.pi))


def _bilateral_doubling(block_sum, policy: TruncationPolicy,
                        start: int = 256) -> tuple[complex, float, int]:
    """Sum f over Z by doubling symmetric windows until the rings stabilize.

    block_sum(lo, hi) must return sum of f(n) for lo <= |n| <= hi (both
    signs), with block_sum(0, hi) including n = 0.  Returns (value,
    tail_estimate, terms_used).
    """
    n_hi = min(start, policy.max_terms)
    total = block_sum(0, n_hi)
    terms = 2 * n_hi + 1
    small_rings = 0
    tail = math.inf
    while True:
        if small_rings >= 2:
            return total, tail, terms
        if 2 * n_hi > policy.max_terms:
            raise SlowConvergence(
                f"no convergence within {policy.max_terms} terms"
            )
        ring = block_sum(n_hi + 1, 2 * n_hi)
        total += ring
        terms += 2 * n_hi
        n_hi *= 2
        tail = abs(ring)
        if tail <= policy.eps * max(1.0, abs(total)):
            small_rings += 1
        else:
            small_rings = 0


def osler_sum(params: OslerParams, policy: TruncationPolicy) -> complex:
    """Bilateral sum of binom(a, b+alpha n) v^(b+alpha n) with v=e^{i theta}.

    Terms decay like |n|^{-a-1}, so a > 0 is required; symmetric windows are
    doubled until two consecutive rings fall below the tolerance (the signed
    tails cancel far faster than the term envelope).
    """
    a, b, alpha, theta = params.a, params.b, params.alpha, params.theta
    if a <= 0.0:
        raise InvalidParams(f"series cutoff requires a > 0, got a={a}")
    if abs(theta) >= math.pi * alpha:
        raise InvalidParams(
            f"series form requires |theta| < pi*alpha = {math.pi * alpha}"
        )

    def block_sum(lo: int, hi: int) -> complex:
        if lo == 0:
            n = np.arange(-hi, hi + 1)
        else:
            n = np.concatenate([np.arange(-hi, -lo + 1), np.arange(lo, hi + 1)])
        u = b + alpha * n
        terms = binomial_profile(a, u) * np.exp(1j * theta * u)
        return fsum_complex(terms)

    value, _, _ = _bilateral_doubling(block_sum, policy)
    return value


def _gl_panels(f, lo: float, hi: float, nodes_per_unit: float) -> float:
    """Composite 8-point Gauss-Legendre quadrature with vectorized f."""
    gl_x, gl_w = np.polynomial.legendre.leggauss(8)
    npan = max(1, int(math.ceil((hi - lo) * nodes_per_unit / 8.0)))
    edges = np.linspace(lo, hi, npan + 1)
    half = 0.5 * (edges[1] - edges[0])
    mids = 0.5 * (edges[1:] + edges[:-1])
    xs = (mids[:, None] + half * gl_x[None, :]).ravel()
    ws = np.tile(half * gl_w, npan)
    return float(math.fsum(f(xs) * ws))


def classical_sum(a: float, alpha: float, l: int,
                  policy: TruncationPolicy) -> tuple[float, float]:
    """(sum over Z of binom(a, alpha n)^l, tail estimate)."""

    def block_sum(lo: int, hi: int) -> float:
        if lo == 0:
            n = np.arange(-hi, hi + 1)
        else:
            n = np.concatenate([np.arange(-hi, -lo + 1), np.arange(lo, hi + 1)])
        return math.fsum(binomial_profile(a, alpha * n) ** l)

    value, tail, _ = _bilateral_doubling(block_sum, policy)
    return float(value.real if isinstance(value, complex) else value), tail


def classical_integral(a: float, alpha: float, l: int,
                       policy: TruncationPolicy) -> tuple[float, float]:
    """(integral over R of binom(a, alpha x)^l, error estimate).

    The domain is grown in doubling rings until the measured algebraic tail
    contribution stabilizes; node density is then doubled once to confirm
    the panel rule has converged.
    """
    f = lambda x: binomial_profile(a, alpha * x) ** l
    density = 16.0 * max(1.0, alpha)
    x0 = 64.0
    total = _gl_panels(f, -x0, x0, density)
    small_rings = 0
    tail = math.inf
    while small_rings < 2:
        if x0 > 1e7:
            raise QuadratureFailure("integral tail failed to stabilize")
        ring = (_gl_panels(f, x0, 2.0 * x0, density)
                + _gl_panels(f, -2.0 * x0, -x0, density))
        total += ring
        x0 *= 2.0
        tail = abs(ring)
        if tail <= policy.eps * max(1.0, abs(total)):
            small_rings += 1
        else:
            small_rings = 0
    refined = _gl_panels(f, -x0, x0, 2.0 * density)
    err = abs(refined - total)
    if err > 100.0 * policy.eps * max(1.0, abs(refined)):
        raise QuadratureFailure(
            f"node-density refinement changed value by {err:.2e}"
        )
    return refined, max(err, tail)


def classical_sum_eq_integral(a: float, alpha: float, l: int,
                              policy: TruncationPolicy):
    """Verify sum over Z equals integral over R for binom(a, alpha .)^l.

    Valid for a > 0, l >= 1, 0 < alpha <= 2/l; returns an IdentityReport.
    """
    if a <= 0.0:
        raise InvalidParams(f"need a > 0, got {a}")
    if l < 1:
        raise InvalidParams(f"need l >= 1, got {l}")
    if not 0.0 < alpha <= 2.0 / l:
        raise InvalidParams(f"need 0 < alpha <= 2/l = {2.0 / l}, got {alpha}")
    from .identities import IdentityId, make_report

    s, s_tail = classical_sum(a, alpha, l, policy)
    i, i_err = classical_integral(a, alpha, l, policy)
    return make_report(
        IdentityId.ClassicalSumInt,
        {"a": a, "alpha": alpha, "l": l},
        lhs=complex(s), rhs=complex(i), tol=1e-6,
        lhs_diag={"tail_estimate": s_tail},
        rhs_diag={"error_estimate": i_err},
    )
