"""Hypergeometric coverage kernel, the inner-exponent function, and quadrature.

The kernel is C(b, z) = 2F1(1, 1/b; 1 + 1/b; -z) for real b != 0 and z >= 0.
It is evaluated without a general-purpose 2F1: a direct power series for
small z, a Pfaff-transformed series for moderate z, and analytic large-z
reductions (a stable downward recursion on the Euler integral for b > 0, an
incomplete power-tail expansion for b < 0).  Every regime is cross-checked
against independent quadrature representations in the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad, tanhsinh

from .errors import NoConvergence, SingularParameter

__all__ = [
    "QuadratureSpec",
    "DEFAULT_QUAD",
    "c_func",
    "rho",
    "integrate_adaptive",
    "integrate_tanhsinh",
]

_SERIES_TOL = 1e-15
_MAX_TERMS = 200_000
# z <= 0.5: raw series; z <= 4: Pfaff series; beyond: analytic reductions
_Z_DIRECT = 0.5
_Z_PFAFF = 4.0


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self) -> None:
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUAD = QuadratureSpec()


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUAD,
    points: "tuple[float, ...] | None" = None,
) -> float:
    """Adaptive quadrature of f over (a, b); b may be +inf.

    `points` forces initial breakpoints (finite intervals only); use it when
    the integrand has known kinks or multi-scale structure.  Deterministic:
    identical inputs give bit-identical outputs.  Raises NoConvergence when
    the subdivision budget is exhausted without meeting
    max(abs_tol, rel_tol * |result|).
    """
    out = quad(
        f,
        a,
        b,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=1,
        points=points,
    )
    value, abserr = out[0], out[1]
    if len(out) > 3:  # QUADPACK flagged trouble; accept only if error is small
        if abserr > 10.0 * max(spec.abs_tol, spec.rel_tol * abs(value)):
            raise NoConvergence(
                f"quadrature over ({a}, {b}) failed: {out[3].strip()} "
                f"(estimated error {abserr:.3e})"
            )
    return value


def integrate_tanhsinh(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUAD,
) -> float:
    """Double-exponential quadrature of a scalar f over a finite interval.

    Unlike Gauss-Kronrod, the tanh-sinh rule stays accurate through
    integrable algebraic endpoint singularities of unknown exponent, so it
    is the right tool for inner integrals whose behavior at the endpoints
    depends on run-time parameters.
    """

    def vec(x):
        out = np.empty_like(x, dtype=np.float64)
        for idx, xi in np.ndenumerate(x):
            out[idx] = f(float(xi))
        return out

    res = tanhsinh(vec, a, b, atol=spec.abs_tol, rtol=spec.rel_tol)
    value = float(res.integral)
    if not res.success and res.error > 10.0 * max(
        spec.abs_tol, spec.rel_tol * abs(value)
    ):
        raise NoConvergence(
            f"tanh-sinh quadrature over ({a}, {b}) failed "
            f"(estimated error {float(res.error):.3e})"
        )
    return value


def _series_direct_pos(a: float, z: float) -> float:
    # sum_n a/(a+n) (-z)^n, |z| < 1
    total = 1.0
    term = 1.0
    zn = 1.0
    for n in range(1, _MAX_TERMS):
        zn *= -z
        term = a / (a + n) * zn
        total += term
        if abs(term) < _SERIES_TOL * abs(total):
            return total
    raise NoConvergence(f"direct series for C({1.0 / a}, {z}) did not converge")


def _series_pfaff(c_param: float, z: float) -> float:
    # 2F1(1, 1; c; w) / (1 + z) with w = z/(1+z); term ratio (n+1)/(c+n)
    w = z / (1.0 + z)
    total = 1.0
    term = 1.0
    for n in range(_MAX_TERMS):
        term *= (n + 1.0) / (c_param + n) * w
        total += term
        if abs(term) < _SERIES_TOL * abs(total):
            return total / (1.0 + z)
    raise NoConvergence(f"Pfaff series (c={c_param}, z={z}) did not converge")


def _euler_tail_sum(f: float, z: float, k0: int) -> float:
    # sum_{k >= k0} (-1)^k z^(-k-1) / (k+1-f), geometric for z > 1
    total = 0.0
    zk = z ** (-(k0 + 1.0))
    for k in range(k0, _MAX_TERMS):
        term = zk / (k + 1.0 - f)
        total += term if k % 2 == 0 else -term
        if abs(term) < _SERIES_TOL * max(abs(total), 1e-300):
            return total
        zk /= z
    raise NoConvergence(f"large-z tail series (f={f}, z={z}) did not converge")


def _log_sinc_recip(x: float) -> float:
    # log(pi x / sin(pi x)) for x in (0, 1); series for small x where the
    # direct ratio rounds to exactly 1
    y = math.pi * x
    if y < 0.02:
        y2 = y * y
        return y2 / 6.0 + y2 * y2 / 180.0 + y2 * y2 * y2 / 2835.0
    return math.log(y / math.sin(y))


def _c_pos_large_z(a: float, z: float) -> float:
    """C(1/a, z) = a * I(a), I(a) = int_0^1 u^(a-1)/(1+z u) du, for z > 1.

    Built from the reflection value of I on (0, 1) plus the downward
    recursion I(a) = (1/(a-1) - I(a-1))/z.  The two cancellation-prone
    regimes (fractional part of a near 0 or near 1) are handled with
    expm1-stabilized combinations of the cancelling terms.
    """
    m = math.floor(a + 1e-12)
    f = a - m
    lnz = math.log(z)
    if f < 1e-12:  # integer a, bottom out at I(1) = log(1+z)/z
        val = math.log1p(z) / z
        j = 1.0
        steps = m - 1
    elif f >= 0.5 or m == 0:
        # I(f) = z^-f pi/sin(pi f) - sum_{k>=0}; fold the k = 0 term into the
        # reflection term: both blow up as f -> 1 but their difference is tame.
        eps = 1.0 - f
        lead = math.expm1(eps * lnz + _log_sinc_recip(eps)) / (z * eps)
        val = lead - _euler_tail_sum(f, z, 1)
        j = f
        steps = m
    else:
        # f < 0.5 with at least one recursion step: 1/f and the reflection
        # term cancel; combine them before dividing by z.
        head = -math.expm1(-f * lnz + _log_sinc_recip(f)) / f
        val = (head + _euler_tail_sum(f, z, 0)) / z
        j = f + 1.0
        steps = m - 1
    for _ in range(steps):
        j += 1.0
        val = (1.0 / (j - 1.0) - val) / z
    return a * val


def _c_neg_large_z(a: float, z: float) -> float:
    # C(-a, z) = 1 + z^(1/a) (pi/a)/sin(pi/a) - sum_k (-1)^k z^(-k)/(a k + 1),
    # valid for z > 1 and a > 1.
    total = 0.0
    zk = 1.0
    for k in range(_MAX_TERMS):
        term = zk / (a * k + 1.0)
        total += term if k % 2 == 0 else -term
        if abs(term) < _SERIES_TOL * max(abs(total), 1e-300):
            break
        zk /= z
    else:
        raise NoConvergence(f"large-z series for C(-{a}, {z}) did not converge")
    return 1.0 + z ** (1.0 / a) * (math.pi / a) / math.sin(math.pi / a) - total


def c_func(b: float, z: float) -> float:
    """Evaluate C(b, z) = 2F1(1, 1/b; 1 + 1/b; -z) for b != 0, z >= 0."""
    if b == 0.0:
        raise SingularParameter("C(b, z) is undefined at b = 0")
    if z < 0:
        raise ValueError(f"z must be nonnegative, got {z}")
    if not math.isfinite(z):
        if b > 0:
            return 0.0  # C(b, z) -> 0 as z -> inf for b > 0
        raise ValueError("z = inf is only meaningful for b > 0")
    if z == 0.0:
        return 1.0

    if b > 0:
        a = 1.0 / b
        if z <= _Z_DIRECT:
            return _series_direct_pos(a, z)
        if z <= _Z_PFAFF:
            return _series_pfaff(1.0 + a, z)
        return _c_pos_large_z(a, z)

    # b < 0: pole when 1/b is a nonpositive integer (excluded upstream by a1 > d)
    recip = 1.0 / b
    if abs(recip - round(recip)) < 1e-14 and round(recip) <= 0:
        raise SingularParameter(f"C({b}, z): parameter 1/b = {recip} is a pole")
    ap = -b
    if z <= _Z_DIRECT:
        # 1 + sum_{n>=1} (-1)^(n+1) z^n / (a' n - 1)
        total = 1.0
        zn = 1.0
        for n in range(1, _MAX_TERMS):
            zn *= z
            term = zn / (ap * n - 1.0)
            total += term if n % 2 == 1 else -term
            if abs(term) < _SERIES_TOL * abs(total):
                return total
        raise NoConvergence(f"direct series for C({b}, {z}) did not converge")
    if z <= _Z_PFAFF:
        return _series_pfaff(1.0 - 1.0 / ap, z)
    if ap <= 1.0:
        raise SingularParameter(f"C({b}, z) requires -b > 1 for large z, got {ap}")
    return _c_neg_large_z(ap, z)


def rho(b: float, a1_over_d: float, t: float, r: float) -> float:
    """Inner exponent of the dual-slope coverage closed form.

    rho(b, a1/d, T, r) = C(b, 1/(T r^b)) + C(-a1/d, T r^b) - r C(b, 1/T) + r - 1
    for b = alpha0/d > 0, a1_over_d = alpha1/d > 1, T > 0 and 0 < r <= 1.
    """
    if b <= 0:
        raise SingularParameter(f"rho requires b > 0, got {b}")
    if not 0.0 < r <= 1.0:
        raise ValueError(f"r must lie in (0, 1], got {r}")
    if t <= 0:
        raise ValueError(f"threshold must be positive, got {t}")
    trb = t * r**b
    return c_func(b, 1.0 / trb) + c_func(-a1_over_d, trb) - r * c_func(b, 1.0 / t) + r - 1.0
